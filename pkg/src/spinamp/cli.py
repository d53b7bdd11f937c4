"""Batch front end: single runs, the consolidated benchmark table, sweeps,
and the self-verification suite.

Subcommands
-----------
run
    Execute one model (both target preparations) and write trace CSVs,
    a summary JSON and optional SVG plots.
table1
    Execute the six stock benchmark models and write a consolidated table
    next to the reference values, with relative deviations.
verify
    Run the invariant/oracle suite; exit 0 iff every check passes.
sweep
    Repeat a run along one parameter axis.

Configuration is a flat key-value namespace: a preset supplies defaults, an
optional config file (``key = value`` lines) overrides the preset, and
repeatable ``--set key=value`` flags override both.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical-integrity error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigurationError, ConvergenceError, NumericalIntegrityError
from .models import ModelSpec
from .pipeline import RunResult, run_pair
from .presets import PRESETS, REFERENCE_VALUES, TABLE_PRESETS, preset_spec
from .verify import run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

EMIT_CHOICES = ("traces_csv", "summary_json", "plots_svg")
DEFAULT_EMIT = ("traces_csv", "summary_json")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration of one ``run`` invocation."""

    spec: ModelSpec
    output_dir: Path
    emit: tuple[str, ...] = DEFAULT_EMIT
    preset: str | None = None
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] = ()
    workers: int = 1

    def __post_init__(self):
        for item in self.emit:
            if item not in EMIT_CHOICES:
                raise ConfigurationError(
                    f"emit entry {item!r} not in {EMIT_CHOICES}"
                )
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.sweep_param is not None and not self.sweep_values:
            raise ConfigurationError("sweep_values must be nonempty when sweeping")


_MODEL_FIELDS = {f.name: f for f in fields(ModelSpec)}
_BOOL_FIELDS = {"m2_edge_without_rf", "ring_gate_literal", "ring_includes_hub"}


def _parse_scalar(text: str):
    text = text.strip()
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered in ("none", "null", ""):
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_value(key: str, text: str):
    """Parse one key=value assignment into a typed model/config value."""
    text = text.strip()
    if key in ("f_couplings", "g_couplings"):
        if "," in text:
            try:
                return tuple(float(part) for part in text.split(","))
            except ValueError as exc:
                raise ConfigurationError(
                    f"could not parse {key}={text!r} as a coupling vector"
                ) from exc
        return text
    if key == "sweep_values":
        try:
            return tuple(float(part) for part in text.split(","))
        except ValueError as exc:
            raise ConfigurationError(
                f"could not parse sweep_values={text!r} as numbers"
            ) from exc
    if key == "emit":
        return tuple(part.strip() for part in text.split(",") if part.strip())
    value = _parse_scalar(text)
    if key in _BOOL_FIELDS and not isinstance(value, bool):
        raise ConfigurationError(f"{key} expects true/false, got {text!r}")
    return value


def read_config_file(path: Path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{path}:{lineno}: expected 'key = value', got {raw!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        out[key] = parse_config_value(key, value)
    return out


def resolve_config(args) -> RunConfig:
    """Merge preset, config file and --set overrides (later wins)."""
    settings: dict = {}
    if args.preset:
        if args.preset not in PRESETS:
            known = ", ".join(sorted(PRESETS))
            raise ConfigurationError(
                f"unknown preset {args.preset!r}; known presets: {known}"
            )
        settings.update(PRESETS[args.preset])
    if args.config:
        settings.update(read_config_file(Path(args.config)))
    for assignment in args.set or []:
        if "=" not in assignment:
            raise ConfigurationError(
                f"--set expects key=value, got {assignment!r}"
            )
        key, _, value = assignment.partition("=")
        settings[key.strip()] = parse_config_value(key.strip(), value)

    emit = settings.pop("emit", None)
    if getattr(args, "emit", None):
        emit = tuple(part.strip() for part in args.emit.split(",") if part.strip())
    if emit is None:
        emit = DEFAULT_EMIT
    sweep_param = settings.pop("sweep_param", None)
    sweep_values = tuple(settings.pop("sweep_values", ()))
    output_dir = settings.pop("output_dir", None)
    if getattr(args, "out", None):
        output_dir = args.out
    if output_dir is None:
        raise ConfigurationError("no output directory: pass --out or set output_dir")

    unknown = set(settings) - set(_MODEL_FIELDS)
    if unknown:
        raise ConfigurationError(
            f"unknown configuration keys: {sorted(unknown)}; "
            f"model keys are {sorted(_MODEL_FIELDS)}"
        )
    if "geometry" not in settings or "interaction" not in settings:
        raise ConfigurationError(
            "geometry and interaction are required (directly or via --preset)"
        )
    try:
        spec = ModelSpec(**settings)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc
    return RunConfig(
        spec=spec,
        output_dir=Path(output_dir),
        emit=tuple(emit),
        preset=args.preset,
        sweep_param=sweep_param,
        sweep_values=sweep_values,
        workers=getattr(args, "workers", 1) or 1,
    )


def _artifact_params(result: RunResult, preset: str | None) -> dict:
    params = dict(result.summary.model)
    params["preset"] = preset or "custom"
    return params


def write_run_artifacts(result: RunResult, out_dir: Path, emit, preset=None) -> list[Path]:
    from . import io as io_mod

    written = []
    params = _artifact_params(result, preset)
    if "traces_csv" in emit:
        for s_state, trace in (("down", result.trace_down), ("up", result.trace_up)):
            path = out_dir / f"traces_s{s_state}.csv"
            io_mod.write_trace_csv(path, trace, {**params, "s_recorded": s_state})
            written.append(path)
    if "summary_json" in emit:
        path = out_dir / "summary.json"
        io_mod.write_summary_json(path, result.summary, extra={"preset": params["preset"]})
        written.append(path)
    if "plots_svg" in emit:
        title = params["preset"]
        for s_state, trace in (("down", result.trace_down), ("up", result.trace_up)):
            path = out_dir / f"traces_s{s_state}.svg"
            io_mod.write_trace_plot(path, trace, f"{title} (S {s_state})")
            written.append(path)
        path = out_dir / "delta_p.svg"
        io_mod.write_delta_p_plot(
            path,
            {"S down": result.trace_down, "S up": result.trace_up},
            f"{title}: total polarization change",
        )
        written.append(path)
    return written


def cmd_run(args) -> int:
    config = resolve_config(args)
    result = run_pair(config.spec)
    write_run_artifacts(result, config.output_dir, config.emit, config.preset)
    return EXIT_OK


def _table_row(name: str, result: RunResult) -> dict:
    s = result.summary
    ref = REFERENCE_VALUES[name]
    row = {
        "preset": name,
        "alpha": s.alpha,
        "exposure_t": s.exposure_t,
        "eta_table": s.eta_table,
        "eta_text": s.eta_text,
        "contrast": s.contrast,
        "ref_alpha": ref["alpha"],
        "ref_exposure_t": ref["exposure_t"],
        "ref_eta": ref["eta"],
        "ref_contrast": ref["contrast"],
        "dev_alpha": s.alpha / ref["alpha"] - 1.0,
        "dev_exposure_t": s.exposure_t / ref["exposure_t"] - 1.0,
        "dev_contrast": s.contrast / ref["contrast"] - 1.0,
    }
    return row


def run_table(out_dir: Path, emit=DEFAULT_EMIT, workers: int = 1,
              baseline: Path | None = None) -> list[dict]:
    """Execute the six stock models (both preparations each) and tabulate."""
    out_dir = Path(out_dir)
    specs = {name: preset_spec(name) for name in TABLE_PRESETS}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(
                zip(specs, pool.map(run_pair, specs.values()))
            )
    else:
        results = {name: run_pair(spec) for name, spec in specs.items()}

    rows = []
    for name in TABLE_PRESETS:
        write_run_artifacts(results[name], out_dir / name, emit, preset=name)
        rows.append(_table_row(name, results[name]))

    if baseline is not None:
        previous = {row["preset"]: row for row in json.loads(Path(baseline).read_text())}
        for row in rows:
            prev = previous.get(row["preset"])
            for key in ("alpha", "exposure_t", "contrast"):
                row[f"regress_{key}"] = (
                    row[key] - prev[key] if prev is not None else float("nan")
                )

    from . import io as io_mod

    io_mod.write_table_csv(out_dir / "table1.csv", rows)
    io_mod.write_table_json(out_dir / "table1.json", rows)
    if "plots_svg" in emit:
        io_mod.write_delta_p_plot(
            out_dir / "delta_p_overlay.svg",
            {name: results[name].trace_down for name in TABLE_PRESETS},
            "total polarization change, six stock models",
        )
    return rows


def cmd_table1(args) -> int:
    emit = DEFAULT_EMIT
    if args.emit:
        emit = tuple(part.strip() for part in args.emit.split(",") if part.strip())
    for item in emit:
        if item not in EMIT_CHOICES:
            raise ConfigurationError(f"emit entry {item!r} not in {EMIT_CHOICES}")
    baseline = Path(args.baseline) if args.baseline else None
    rows = run_table(Path(args.out), emit=emit, workers=args.workers or 1,
                     baseline=baseline)
    width = max(len(r["preset"]) for r in rows)
    print(f"{'preset':{width}}  {'alpha':>7} {'T':>7} {'eta':>7} {'C':>7}   "
          f"{'ref_a':>6} {'ref_T':>6} {'ref_C':>6}")
    for r in rows:
        print(
            f"{r['preset']:{width}}  {r['alpha']:7.3f} {r['exposure_t']:7.2f} "
            f"{r['eta_table']:7.3f} {r['contrast']:7.3f}   "
            f"{r['ref_alpha']:6.2f} {r['ref_exposure_t']:6.2f} {r['ref_contrast']:6.2f}"
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_checks(args.level)
    print(report.text())
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_sweep(args) -> int:
    config = resolve_config(args)
    if config.sweep_param is None:
        raise ConfigurationError(
            "sweep needs sweep_param and sweep_values (config keys or --set)"
        )
    if config.sweep_param not in _MODEL_FIELDS:
        raise ConfigurationError(
            f"sweep_param {config.sweep_param!r} is not a model field"
        )

    def one(value: float) -> tuple[float, RunResult]:
        spec = replace(config.spec, **{config.sweep_param: value})
        return value, run_pair(spec)

    values = list(config.sweep_values)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(one, values))
    else:
        outcomes = [one(v) for v in values]

    from . import io as io_mod

    rows = []
    for value, result in outcomes:
        subdir = config.output_dir / f"{config.sweep_param}={value:g}"
        write_run_artifacts(result, subdir, config.emit, config.preset)
        s = result.summary
        rows.append(
            {
                config.sweep_param: value,
                "alpha": s.alpha,
                "exposure_t": s.exposure_t,
                "eta_table": s.eta_table,
                "eta_text": s.eta_text,
                "contrast": s.contrast,
            }
        )
    io_mod.write_table_csv(config.output_dir / "sweep_summary.csv", rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinamp",
        description="Single-spin-state amplification simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_model=True):
        if with_model:
            p.add_argument("--preset", help=f"one of: {', '.join(sorted(PRESETS))}")
            p.add_argument("--config", help="flat key=value configuration file")
            p.add_argument(
                "--set", action="append", metavar="KEY=VALUE",
                help="override one configuration key (repeatable)",
            )
        p.add_argument("--out", help="output directory")
        p.add_argument("--workers", type=int, default=1, help="parallel workers")
        p.add_argument(
            "--emit",
            help=f"comma list from {','.join(EMIT_CHOICES)} (default "
                 f"{','.join(DEFAULT_EMIT)})",
        )

    p_run = sub.add_parser("run", help="execute one model")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_table = sub.add_parser("table1", help="run the six stock models and tabulate")
    add_common(p_table, with_model=False)
    p_table.add_argument(
        "--baseline", help="previous table1.json; adds regression columns"
    )
    p_table.set_defaults(func=cmd_table1)

    p_verify = sub.add_parser("verify", help="run the self-verification suite")
    p_verify.add_argument("--level", choices=("fast", "full"), default="fast")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="run a one-parameter sweep")
    add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) in ("run", "table1", "sweep") and not (
        getattr(args, "out", None) or getattr(args, "config", None)
    ):
        print("error: --out (or a config file with output_dir) is required",
              file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalIntegrityError, ConvergenceError) as exc:
        print(f"numerical-integrity error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
