"""Figures of merit extracted from polarization traces.

Conventions (fixed by the internal arithmetic of the reference table, whose
contrast column equals 2*alpha/3 for every row at N=7):

* ``alpha`` (amplification) and ``delta_p`` cover the measuring spins only.
* ``contrast`` compares the measuring-spin magnetization of the two target
  preparations and normalizes by the initial *total* magnetization of the
  triggering run (target spin included), mz0 = N/2 - 1/2.
* ``contrast_total_mz`` is the same ratio with the target spin included in
  the numerator as well (signed, evaluated at the largest separation).
* Both effectiveness readings are first-class: ``eta_table`` = alpha/T and
  ``eta_text`` = contrast/T.

All scalar extraction uses the discrete grid maximum with three-point
parabolic refinement; ties resolve to the earliest time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import PolarizationTrace
from .errors import NumericalIntegrityError
from .models import ModelSpec

FLAT_TRACE_THRESHOLD = 1e-6
NORMALIZER_FLOOR = 1e-9
CONTRAST_CEILING = 2.0


@dataclass
class MetricsSummary:
    """Scalar figures of merit of one (triggering, inert) run pair."""

    alpha: float
    exposure_t: float
    eta_table: float
    eta_text: float
    contrast: float
    contrast_total_mz: float
    mz0: float
    peak_time: float
    flags: tuple[str, ...] = ()
    model: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "exposure_t": self.exposure_t,
            "eta_table": self.eta_table,
            "eta_text": self.eta_text,
            "contrast": self.contrast,
            "contrast_total_mz": self.contrast_total_mz,
            "mz0": self.mz0,
            "peak_time": self.peak_time,
            "flags": list(self.flags),
            "model": self.model,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetricsSummary":
        data = dict(data)
        data["flags"] = tuple(data.get("flags", ()))
        return cls(**data)


def _refined_peak(times: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Grid argmax of |values| with 3-point parabolic refinement."""
    mags = np.abs(values)
    i = int(np.argmax(mags))
    if 0 < i < len(mags) - 1:
        y0, y1, y2 = mags[i - 1], mags[i], mags[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            shift = 0.5 * (y0 - y2) / denom
            dt = times[i + 1] - times[i]
            return float(times[i] + shift * dt), float(y1 - 0.25 * (y0 - y2) * shift)
    return float(times[i]), float(mags[i])


def amplification(trace_down: PolarizationTrace, refine: bool = True) -> tuple[float, float]:
    """(alpha, exposure) of a triggering-state run.

    alpha is half the peak |delta_p|; the exposure is the peak time in
    drive units (t * omega1).
    """
    dp = trace_down.delta_p
    if refine:
        t_peak, peak = _refined_peak(trace_down.times, dp)
    else:
        i = int(np.argmax(np.abs(dp)))
        t_peak, peak = float(trace_down.times[i]), float(abs(dp[i]))
    return peak / 2.0, t_peak * trace_down.omega1


def is_flat(trace: PolarizationTrace, threshold: float = FLAT_TRACE_THRESHOLD) -> bool:
    return float(np.max(np.abs(trace.delta_p))) < threshold


def contrast(
    trace_down: PolarizationTrace,
    trace_up: PolarizationTrace,
    include_target_in_numerator: bool = False,
) -> float:
    """Normalized magnetization separation of the two target preparations.

    The normalizer is the triggering run's initial total magnetization
    (target included).  The default numerator compares the measuring-spin
    magnetizations (peak |difference|); with ``include_target_in_numerator``
    the target spin enters the numerator too and the signed value at the
    peak separation is returned.
    """
    if trace_down.times.shape != trace_up.times.shape or np.any(
        trace_down.times != trace_up.times
    ):
        raise ValueError("traces must share the same time grid")
    mz0 = float(trace_down.total_z[0])
    if abs(mz0) < NORMALIZER_FLOOR:
        raise NumericalIntegrityError(
            f"initial total magnetization {mz0!r} too small to normalize by"
        )
    if include_target_in_numerator:
        diff = trace_down.total_z - trace_up.total_z
        i = int(np.argmax(np.abs(diff)))
        return float(diff[i]) / mz0
    diff = trace_down.total_i - trace_up.total_i
    return float(np.max(np.abs(diff))) / mz0


def effectiveness(summary: MetricsSummary) -> tuple[float, float]:
    """(eta_text, eta_table) = (contrast/T, alpha/T)."""
    if summary.exposure_t == 0:
        raise ZeroDivisionError("exposure time is zero")
    return summary.contrast / summary.exposure_t, summary.alpha / summary.exposure_t


def summarize(
    spec: ModelSpec,
    trace_down: PolarizationTrace,
    trace_up: PolarizationTrace,
    extra_metadata: dict | None = None,
) -> MetricsSummary:
    """Assemble the full summary of a triggering/inert run pair."""
    alpha, exposure_t = amplification(trace_down)
    flags = []
    if is_flat(trace_down):
        flags.append("degenerate_flat_trigger_trace")
    if is_flat(trace_down) and is_flat(trace_up):
        flags.append("degenerate_flat_pair")
    c = contrast(trace_down, trace_up)
    c_total = contrast(trace_down, trace_up, include_target_in_numerator=True)
    mz0 = float(trace_down.total_z[0])

    if not 0.0 <= c <= CONTRAST_CEILING:
        raise NumericalIntegrityError(
            f"contrast {c!r} outside [0, {CONTRAST_CEILING}]"
        )
    if not alpha >= 0:
        raise NumericalIntegrityError(f"alpha {alpha!r} negative")
    if not exposure_t >= 0:
        raise NumericalIntegrityError(f"exposure {exposure_t!r} negative")

    omega1 = trace_down.omega1
    peak_time = exposure_t / omega1 if omega1 > 0 else exposure_t
    model = spec.to_dict()
    model["conventions"] = {
        "delta_p_spans": "measuring spins only",
        "contrast_numerator": "measuring spins only; peak |difference|",
        "contrast_total_mz_numerator": "all spins; signed value at peak |difference|",
        "normalizer_mz0": mz0,
        "exposure_units": "1/omega1",
        "peak_refinement": "3-point parabolic",
    }
    if extra_metadata:
        model.update(extra_metadata)

    eta_table = alpha / exposure_t if exposure_t > 0 else math.inf
    eta_text = c / exposure_t if exposure_t > 0 else math.inf
    return MetricsSummary(
        alpha=alpha,
        exposure_t=exposure_t,
        eta_table=eta_table,
        eta_text=eta_text,
        contrast=c,
        contrast_total_mz=c_total,
        mz0=mz0,
        peak_time=peak_time,
        flags=tuple(flags),
        model=model,
    )
