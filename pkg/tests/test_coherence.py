import os

import numpy as np
import pytest

from ddfilter import (
    CurveFailure,
    OhmicSharpCutoff,
    QuadratureConfig,
    WhiteBand,
    chi,
    coherence_curve,
    coherence_w,
    make_canonical,
    thread_count,
    white_fid_chi,
)

OHMIC = OhmicSharpCutoff(amplitude=0.1, omega_d=5.0)
WHITE = WhiteBand(level=0.02, omega_hi=100.0)


def test_frozen_reference_values():
    """Cross-implementation anchors computed from the covariance quadratic
    form of the toggling function (independent time-domain route)."""
    assert chi(make_canonical("fid"), OHMIC, 1.0) == pytest.approx(
        0.07565217993098248, rel=1e-9
    )
    assert chi(make_canonical("cpmg", 4), OHMIC, 1.0) == pytest.approx(
        0.0021362736767175792, rel=1e-9
    )
    assert chi(make_canonical("udd", 6), OHMIC, 1.0) == pytest.approx(
        2.2618616549018836e-06, rel=1e-8
    )
    assert chi(make_canonical("udd", 6), WHITE, 1.0) == pytest.approx(
        0.036649671045028025, rel=1e-9
    )


def test_white_fid_analytic_anchor():
    """FID under broadband white noise reaches chi = level * tau / 2."""
    for om_hi_tau in (200.0, 400.0):
        spec = WhiteBand(level=0.02, omega_hi=om_hi_tau)
        got = chi(make_canonical("fid"), spec, 1.0)
        want = white_fid_chi(0.02, 1.0)
        assert got == pytest.approx(want, rel=5e-3)
    assert white_fid_chi(0.3, 2.0) == 0.3


def test_chi_linear_in_amplitude():
    seq = make_canonical("cpmg", 2)
    a = chi(seq, OhmicSharpCutoff(amplitude=1.0, omega_d=5.0), 1.0)
    b = chi(seq, OhmicSharpCutoff(amplitude=2.5, omega_d=5.0), 1.0)
    assert b == pytest.approx(2.5 * a, rel=1e-10)


def test_zero_spectrum_gives_zero_chi():
    assert chi(make_canonical("cpmg", 4), WhiteBand(level=0.0, omega_hi=10.0), 1.0) == 0.0
    assert coherence_w(make_canonical("cpmg", 4), WhiteBand(level=0.0, omega_hi=10.0), 1.0) == 1.0


def test_chi_rejects_bad_tau():
    with pytest.raises(ValueError):
        chi(make_canonical("fid"), OHMIC, 0.0)


def test_full_output_diagnostics():
    val, diag = chi(make_canonical("cpmg", 4), OHMIC, 1.0, full_output=True)
    assert val == pytest.approx(0.0021362736767175792, rel=1e-9)
    assert diag["error_estimate"] <= 1e-8 * val
    assert diag["panels"] >= 1


def test_finite_width_raises_chi_for_stopband_bath():
    """Pulse width lifts the deep stop-band floor, so a bath living well
    below the passband edge decoheres a wide-pulse sequence much faster."""
    from ddfilter import make_custom

    seq = make_canonical("udd", 6)
    wide = make_custom(seq.deltas, width_ratio=1e-2)
    low_bath = OhmicSharpCutoff(amplitude=0.1, omega_d=1.0)
    assert chi(wide, low_bath, 1.0) > 10.0 * chi(seq, low_bath, 1.0)


def test_coherence_w_is_exp_minus_chi():
    seq = make_canonical("cpmg", 4)
    assert coherence_w(seq, OHMIC, 1.0) == pytest.approx(
        np.exp(-chi(seq, OHMIC, 1.0)), rel=1e-12
    )


def test_curve_monotone_decay_for_white_noise():
    taus = np.geomspace(0.2, 5.0, 12)
    curve = coherence_curve(make_canonical("cpmg", 4), WHITE, taus)
    assert np.all(np.diff(curve.w_values) < 0)
    assert np.all(np.diff(curve.chi_values) > 0)
    assert curve.labels[0] == "cpmg:4"
    assert curve.pulse_counts == (4,) * 12


def test_curve_accepts_callable_source():
    taus = np.array([1.0, 2.0, 4.0])

    def pick(tau):
        return make_canonical("cpmg", 2 if tau < 3 else 8)

    curve = coherence_curve(pick, WHITE, taus)
    assert curve.pulse_counts == (2, 2, 8)


def test_curve_failure_aggregates_indices():
    taus = np.array([1.0, 2.0])
    bad = WhiteBand(level=0.02, omega_hi=np.inf)  # support query fails
    with pytest.raises(CurveFailure) as ei:
        coherence_curve(make_canonical("cpmg", 2), bad, taus)
    assert len(ei.value.failures) == 2


def test_curve_rejects_bad_grid():
    with pytest.raises(ValueError):
        coherence_curve(make_canonical("fid"), WHITE, np.array([2.0, 1.0]))


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("DD_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("DD_THREADS", "0")
    assert thread_count() >= 1
    monkeypatch.delenv("DD_THREADS")
    assert thread_count() >= 1


def test_tight_quadrature_config_still_converges():
    cfg = QuadratureConfig(rel_tol=1e-11)
    assert chi(make_canonical("udd", 6), OHMIC, 1.0, cfg) == pytest.approx(
        2.2618616549018836e-06, rel=1e-8
    )
