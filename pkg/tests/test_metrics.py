import json

import numpy as np
import pytest

from spinamp.dynamics import PolarizationTrace
from spinamp.errors import NumericalIntegrityError
from spinamp.metrics import (
    MetricsSummary,
    amplification,
    contrast,
    effectiveness,
    is_flat,
    summarize,
)
from spinamp.models import ModelSpec
from spinamp.pipeline import run_pair
from spinamp.presets import preset_spec


def synthetic_trace(n_spins, times, per_spin, omega1=0.2):
    return PolarizationTrace(
        times=np.asarray(times, dtype=float),
        per_spin=np.asarray(per_spin, dtype=float),
        omega1=omega1,
    )


def flat_pair(n_spins=7):
    times = np.linspace(0.0, 10.0, 21)
    up_rows = np.vstack([np.full_like(times, 0.5)] * (n_spins + 1))
    down_rows = up_rows.copy()
    down_rows[0] = -0.5
    return (
        synthetic_trace(n_spins, times, down_rows),
        synthetic_trace(n_spins, times, up_rows),
    )


def test_amplification_on_smooth_peak():
    # delta_p dips to a smooth extremum between grid points; the refined
    # extremum must recover the analytic vertex
    times = np.linspace(0.0, 10.0, 100)  # t = 5 falls between grid points
    t_star, height = 5.0, 1.2
    dp = -height * np.sin(np.pi * times / 10.0) ** 2
    p1 = (0.5 + dp) / 4.0  # single measuring spin carrying the whole change
    rows = np.vstack([np.full_like(times, -0.125), p1])
    trace = synthetic_trace(1, times, rows, omega1=0.2)
    alpha, exposure = amplification(trace)
    assert exposure == pytest.approx(t_star * 0.2, abs=1e-3)
    assert alpha == pytest.approx(height / 4.0 / 2.0, abs=1e-4)


def test_amplification_tie_breaks_earliest():
    times = np.linspace(0.0, 4.0, 5)
    p1 = np.array([0.5, -0.5, 0.3, -0.5, 0.1]) / 2
    rows = np.vstack([np.zeros_like(times), p1])
    trace = synthetic_trace(1, times, rows, omega1=1.0)
    alpha, exposure = amplification(trace, refine=False)
    assert exposure == pytest.approx(1.0)  # first of the two equal minima


def test_flat_trace_alpha_zero():
    down, up = flat_pair()
    alpha, _ = amplification(down)
    assert alpha == 0.0
    assert is_flat(down)


def test_contrast_conventions_flat_pair():
    down, up = flat_pair(7)
    # measuring-spin numerator: identical measuring spins -> 0
    assert contrast(down, up) == pytest.approx(0.0)
    # total numerator: constant separation -1 normalized by mz0 = 3
    assert contrast(down, up, include_target_in_numerator=True) == pytest.approx(-1 / 3)


def test_contrast_requires_shared_grid():
    down, up = flat_pair()
    other = synthetic_trace(7, up.times * 2.0, up.per_spin)
    with pytest.raises(ValueError):
        contrast(down, other)


def test_contrast_normalizer_floor():
    # one measuring spin with S down: initial total magnetization is zero
    times = np.linspace(0.0, 1.0, 3)
    down = synthetic_trace(1, times, [[-0.5] * 3, [0.5] * 3])
    up = synthetic_trace(1, times, [[0.5] * 3, [0.5] * 3])
    with pytest.raises(NumericalIntegrityError):
        contrast(down, up)


def test_summarize_flags_degenerate_pair():
    spec = ModelSpec(geometry="chain_1d", interaction="zz_weak")
    down, up = flat_pair(7)
    summary = summarize(spec, down, up)
    assert "degenerate_flat_trigger_trace" in summary.flags
    assert "degenerate_flat_pair" in summary.flags
    assert summary.contrast == 0.0
    assert summary.contrast_total_mz == pytest.approx(-1 / 3)
    assert summary.mz0 == pytest.approx(3.0)


def test_effectiveness_definitional():
    down, up = flat_pair()
    summary = MetricsSummary(
        alpha=1.85, exposure_t=8.91, eta_table=0.0, eta_text=0.0,
        contrast=1.23, contrast_total_mz=0.0, mz0=3.0, peak_time=0.0,
    )
    eta_text, eta_table = effectiveness(summary)
    assert eta_table == pytest.approx(1.85 / 8.91)
    assert eta_text == pytest.approx(1.23 / 8.91)


def test_summary_roundtrip_through_json():
    result = run_pair(preset_spec("1d-full", n_time_points=80, t_max=120.0))
    blob = json.dumps(result.summary.to_dict(), sort_keys=True)
    restored = MetricsSummary.from_dict(json.loads(blob))
    assert restored.alpha == result.summary.alpha
    assert restored.exposure_t == result.summary.exposure_t
    assert restored.contrast == result.summary.contrast
    assert restored.model == result.summary.model


def test_rerun_is_bit_identical():
    spec = preset_spec("3d-zz", n_time_points=100, t_max=150.0)
    a = run_pair(spec)
    b = run_pair(spec)
    assert a.summary.to_dict() == b.summary.to_dict()
    assert np.array_equal(a.trace_down.per_spin, b.trace_down.per_spin)


def test_summary_eta_identities_on_real_run():
    result = run_pair(preset_spec("1d-full"))
    s = result.summary
    assert s.eta_table == pytest.approx(s.alpha / s.exposure_t, rel=1e-12)
    assert s.eta_text == pytest.approx(s.contrast / s.exposure_t, rel=1e-12)


@pytest.mark.parametrize("preset", ["1d-full", "3d-zz"])
def test_contrast_tracks_two_thirds_alpha_when_inert_run_static(preset):
    # identity C = 2*alpha/3 holds when the inert run stays static
    result = run_pair(preset_spec(preset))
    up_drift = float(np.max(np.abs(result.trace_up.total_i
                                   - result.trace_up.total_i[0])))
    assert up_drift < 0.05 * result.summary.mz0
    s = result.summary
    assert abs(s.contrast - 2 * s.alpha / 3) < 0.02 * s.contrast


def test_metrics_invariant_under_rescaling():
    lam = 2.0
    base = ModelSpec(geometry="chain_1d", interaction="zz_weak", n_spins=4,
                     m_range=1, t_max=200.0, n_time_points=150)
    scaled = ModelSpec(geometry="chain_1d", interaction="zz_weak", n_spins=4,
                       m_range=1, d1=lam, g1=lam, omega1=base.omega1 * lam,
                       t_max=base.t_max / lam, n_time_points=150)
    s1 = run_pair(base).summary
    s2 = run_pair(scaled).summary
    assert s1.alpha == pytest.approx(s2.alpha, abs=1e-10)
    assert s1.exposure_t == pytest.approx(s2.exposure_t, abs=1e-10)
    assert s1.contrast == pytest.approx(s2.contrast, abs=1e-10)


def test_contrast_ceiling_is_enforced():
    times = np.linspace(0.0, 1.0, 3)
    n = 7
    down_rows = np.vstack([[-0.5] * 3] + [[0.5, -0.5, -0.5]] * n) / 1.0
    up_rows = np.vstack([[0.5] * 3] + [[0.5, 0.5, 0.5]] * n)
    down = synthetic_trace(n, times, down_rows)
    up = synthetic_trace(n, times, up_rows)
    spec = ModelSpec(geometry="chain_1d", interaction="zz_weak")
    with pytest.raises(NumericalIntegrityError):
        summarize(spec, down, up)
