"""Coherence prediction: chi(tau) by quadrature and W(tau) = exp(-chi).

chi = (2/pi) * integral_0^inf S(omega) F(omega*tau) / omega^2 domega,
truncated at the spectrum's effective support. All exponent conventions
are anchored to the analytic white-noise FID result chi = S0*tau/2,
which fixes the oracle calibration constants as well.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CurveFailure
from .filters import filter_value, filter_value_finite
from .quadrature import QuadratureConfig, build_edges, integrate
from .spectra import effective_support


def thread_count():
    """Worker cap from DD_THREADS (0 or unset = auto)."""
    raw = os.environ.get("DD_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k <= 0:
        return min(os.cpu_count() or 1, 8)
    return k


def chi(seq, spec, tau, cfg=None, full_output=False):
    """Decay exponent chi for a sequence against a noise spectrum at tau.

    tau is the total sequence duration (pulse intervals included when
    seq.width_ratio > 0; the filter is then the finite-width one).
    Panels are sized to resolve the filter's passband oscillation
    (period 2*pi in u = omega*tau). Raises ToleranceNotMet with the
    best value attached when refinement runs out.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    cfg = cfg or QuadratureConfig()
    lo, hi = effective_support(spec, min(cfg.rel_tol / 10.0, 0.1))
    if seq.width_ratio > 0:
        r = seq.width_ratio

        def integrand(om):
            u = om * tau
            return spec.evaluate(om) * filter_value_finite(seq, u, r) / om ** 2
    else:

        def integrand(om):
            u = om * tau
            return spec.evaluate(om) * filter_value(seq, u) / om ** 2

    max_panel = 2.0 * np.pi / (tau * cfg.oscillation_resolution)
    edges = build_edges(lo, hi, breakpoints=spec.breakpoints(), max_panel=max_panel)
    value, err, panels = integrate(integrand, edges, cfg)
    result = (2.0 / np.pi) * value
    if full_output:
        return result, {"error_estimate": (2.0 / np.pi) * err, "panels": panels,
                        "support": (lo, hi)}
    return result


def coherence_w(seq, spec, tau, cfg=None):
    """W = exp(-chi), in [0, 1]."""
    return float(np.exp(-chi(seq, spec, tau, cfg)))


def white_fid_chi(level, tau):
    """Analytic anchor: FID under band-limited white noise, wide-band limit."""
    return 0.5 * level * tau


@dataclass(frozen=True)
class CoherenceCurve:
    """Per-tau chi and W for a sequence source against one spectrum."""

    tau_grid: np.ndarray
    chi_values: np.ndarray
    w_values: np.ndarray
    labels: tuple            # per-tau "family:n" descriptor
    pulse_counts: tuple
    diagnostics: tuple = field(default=())   # per-tau quadrature info dicts


def coherence_curve(source, spec, tau_grid, cfg=None):
    """Evaluate chi and W over a tau grid.

    source is either a fixed PulseSequence or a callable tau -> sequence
    (family at fixed n, or an optimizer output per tau). Per-point
    failures are aggregated into a single CurveFailure carrying
    (index, exception) pairs.
    """
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0 or np.any(taus <= 0) or np.any(np.diff(taus) <= 0):
        raise ValueError("tau_grid must be strictly increasing and positive")
    pick = source if callable(source) else (lambda _t: source)

    def one(i):
        seq = pick(taus[i])
        c, diag = chi(seq, spec, taus[i], cfg, full_output=True)
        return c, float(np.exp(-c)), f"{seq.label}:{seq.n}", seq.n, diag

    results = [None] * taus.size
    failures = []
    workers = thread_count()
    if workers > 1 and taus.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = {i: pool.submit(one, i) for i in range(taus.size)}
        for i, fut in futs.items():
            try:
                results[i] = fut.result()
            except Exception as exc:  # aggregated below
                failures.append((i, exc))
    else:
        for i in range(taus.size):
            try:
                results[i] = one(i)
            except Exception as exc:
                failures.append((i, exc))
    if failures:
        idx = [i for i, _ in failures]
        raise CurveFailure(f"curve evaluation failed at indices {idx}", failures)
    chis = np.array([r[0] for r in results])
    ws = np.array([r[1] for r in results])
    return CoherenceCurve(
        tau_grid=taus,
        chi_values=chis,
        w_values=ws,
        labels=tuple(r[2] for r in results),
        pulse_counts=tuple(r[3] for r in results),
        diagnostics=tuple(r[4] for r in results),
    )
