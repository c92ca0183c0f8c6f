"""Independent time-domain cross-check of the frequency-domain predictions.

Two routes to the same decoherence integral, sharing no code path with
`coherence.chi` beyond the spectrum definitions:

* a Grammian quadratic form over a discretized toggling function and the
  noise autocovariance, and
* a Monte Carlo average over synthesized stationary Gaussian noise
  realizations.

The toggling function is stored as exact per-cell time averages: a cell
containing a sign flip (or a finite-width pulse window, where the
toggling value is zero) gets the integral of the piecewise-constant
function over the cell divided by the cell width. Cells away from flips
hold plain +-1. Averaging inside flip cells removes the grid-quantization
bias of nearest-cell flips, which otherwise dominates the comparison for
strongly clustered sequences.
"""

from typing import NamedTuple

import numpy as np

from .coherence import chi
from .errors import UnderResolved
from .quadrature import QuadratureConfig, build_edges, _nodes
from .sequences import PulseSequence, min_gap
from .spectra import eval_spectrum

KAPPA = 2.0          # chi = kappa * (quadratic form); phase variance = chi/2
MC_PHASE = 2.0 * np.sqrt(2.0)  # cos(MC_PHASE * phi) averages to e^(-chi)


class SamplingVector(NamedTuple):
    values: np.ndarray   # per-cell time-averaged toggling values, in [-1, 1]
    dt: float            # cell width (time units)
    amplitude: float     # 1/2 for free evolution (n = 0), 1 otherwise
    tau: float


class MCResult(NamedTuple):
    w: float
    stderr: float
    n_realizations: int
    seed: int


def sampling_vector(seq, tau, n_steps):
    """Discretize the toggling function on n_steps uniform cells of [0, tau].

    Raises UnderResolved when the cell width exceeds 1/8 of the smallest
    inter-pulse gap; flips would then alias across cells.
    """
    n_steps = int(n_steps)
    if n_steps < 8:
        raise UnderResolved("need at least 8 cells")
    dt = tau / n_steps
    if dt > min_gap(seq) * tau / 8.0:
        raise UnderResolved(
            f"dt = tau/{n_steps} exceeds an eighth of the smallest gap "
            f"({min_gap(seq):.3g} tau); increase n_steps")
    amp = 0.5 if seq.n == 0 else 1.0
    if seq.n == 0:
        return SamplingVector(np.ones(n_steps), dt, amp, tau)

    pulses = np.asarray(seq.deltas, dtype=float) * tau
    w = seq.width_ratio * tau
    starts = np.clip(pulses - 0.5 * w, 0.0, tau)
    ends = np.clip(pulses + 0.5 * w, 0.0, tau)

    def value_at(t):
        # sign after the windows ended before t; zero inside a window
        ended = np.searchsorted(ends, t, side="right")
        entered = np.searchsorted(starts, t, side="right")
        v = (-1.0) ** ended
        return np.where(entered > ended, 0.0, v)

    mids = (np.arange(n_steps) + 0.5) * dt
    y = value_at(mids)

    # exact time averages in every cell touched by a window edge
    edges = np.arange(n_steps + 1) * dt
    touched = sorted({min(int(p / dt), n_steps - 1)
                      for p in np.concatenate([starts, ends])})
    for k in touched:
        a, b = edges[k], edges[k + 1]
        inner = np.concatenate([starts[(starts > a) & (starts < b)],
                                ends[(ends > a) & (ends < b)]])
        cuts = np.concatenate([[a], np.sort(inner), [b]])
        seg_mid = 0.5 * (cuts[:-1] + cuts[1:])
        y[k] = float((value_at(seg_mid) * np.diff(cuts)).sum() / dt)
    return SamplingVector(y, dt, amp, tau)


def autocovariance(spec, lags, cfg=None):
    """C(lag) = (1/pi) * integral_0^inf S(omega) cos(omega * lag) domega.

    Vectorized over lags on shared Gauss-Legendre panels; panel width is
    capped so the fastest cosine (largest lag) stays resolved, and a
    lower-order rule on the same panels bounds the error.
    """
    cfg = cfg or QuadratureConfig()
    scalar = np.isscalar(lags)
    lags = np.atleast_1d(np.asarray(lags, dtype=float))
    lo, hi = spec.power_support(min(cfg.rel_tol / 10.0, 0.1))
    lag_max = float(np.abs(lags).max())
    cap = None
    if lag_max > 0:
        cap = 2.0 * np.pi / (lag_max * cfg.oscillation_resolution)
    edges = build_edges(lo, hi, breakpoints=spec.breakpoints(), max_panel=cap)

    def panel_sum(order):
        xg, wg = _nodes(order)
        a, b = edges[:-1], edges[1:]
        hw, mid = 0.5 * (b - a), 0.5 * (a + b)
        om = (mid[:, None] + hw[:, None] * xg[None, :]).ravel()
        wts = (np.broadcast_to(wg[None, :], (a.size, order)) * hw[:, None]).ravel()
        sw = eval_spectrum(spec, om) * wts
        out = np.empty(lags.size)
        blk = max(1, int(4e6) // max(om.size, 1))
        for i in range(0, lags.size, blk):
            out[i:i + blk] = sw @ np.cos(np.outer(om, lags[i:i + blk]))
        return out / np.pi

    for _ in range(cfg.max_subdivisions + 1):
        c21 = panel_sum(21)
        c10 = panel_sum(10)
        scale = max(float(np.abs(c21).max()), cfg.abs_tol)
        err = float(np.abs(c21 - c10).max())
        if err <= cfg.rel_tol * scale:
            break
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mids]))
    return float(c21[0]) if scalar else c21


def grammian_chi(seq, spec, tau, n_steps, cfg=None):
    """chi via the discrete quadratic form y^T C y (dt^2-weighted).

    Uses FFT autocorrelation of the sampling vector so the Toeplitz
    double sum costs O(N log N) + N autocovariance values.
    """
    sv = sampling_vector(seq, tau, n_steps)
    y = sv.values
    n = y.size
    spec_fft = np.fft.rfft(y, 2 * n)
    w = np.fft.irfft(spec_fft * np.conj(spec_fft), 2 * n)[:n]
    c = autocovariance(spec, np.arange(n) * sv.dt, cfg)
    quad = w[0] * c[0] + 2.0 * float(w[1:] @ c[1:])
    return KAPPA * sv.amplitude ** 2 * sv.dt ** 2 * quad


def monte_carlo_w(seq, spec, tau, n_realizations, n_steps, seed, n_modes=None):
    """W via synthesized Gaussian noise: mean of cos(2*sqrt(2)*phase).

    Noise is a sum of n_modes cosines with amplitudes sqrt(S(omega_k)
    d_omega / pi) and independent uniform phases; each realization uses
    its own jump-ahead substream of a PCG64 stream, so results for the
    first M realizations are independent of the total count.
    """
    sv = sampling_vector(seq, tau, n_steps)
    lo, hi = spec.power_support(1e-9)
    if hi <= lo:
        return MCResult(1.0, 0.0, int(n_realizations), int(seed))
    if n_modes is None:
        n_modes = max(1024, int(np.ceil(4.0 * (hi - lo) * tau / (2.0 * np.pi))))
    d_om = (hi - lo) / n_modes
    om = lo + (np.arange(n_modes) + 0.5) * d_om
    amps = np.sqrt(eval_spectrum(spec, om) * d_om / np.pi)
    if not np.any(amps > 0):
        return MCResult(1.0, 0.0, int(n_realizations), int(seed))

    t_mid = (np.arange(n_steps) + 0.5) * sv.dt
    phase_mat = np.exp(1j * np.outer(om, t_mid))
    y_hat = sv.amplitude * sv.dt * (phase_mat @ sv.values)
    re, im = amps * y_hat.real, amps * y_hat.imag

    root = np.random.PCG64(int(seed))
    cos_vals = np.empty(int(n_realizations))
    for i in range(int(n_realizations)):
        rng = np.random.Generator(root.jumped(i))
        theta = rng.uniform(0.0, 2.0 * np.pi, n_modes)
        phi = float(np.cos(theta) @ re - np.sin(theta) @ im)
        cos_vals[i] = np.cos(MC_PHASE * phi)
    w = float(cos_vals.mean())
    stderr = float(cos_vals.std(ddof=1) / np.sqrt(cos_vals.size))
    return MCResult(w, stderr, int(n_realizations), int(seed))


def oracle_report(seq, spec, tau, n_steps, n_realizations=0, seed=0, cfg=None):
    """Side-by-side frequency/time-domain comparison as a plain dict."""
    chi_freq = chi(seq, spec, tau, cfg)
    chi_gram = grammian_chi(seq, spec, tau, n_steps, cfg)
    denom = abs(chi_freq) if chi_freq != 0 else 1.0
    report = {
        "chi_freq": chi_freq,
        "chi_grammian": chi_gram,
        "rel_diff": abs(chi_gram - chi_freq) / denom,
        "N": int(n_steps),
    }
    if n_realizations:
        mc = monte_carlo_w(seq, spec, tau, n_realizations, n_steps, seed)
        report.update({"w_mc": mc.w, "stderr": mc.stderr,
                       "M": mc.n_realizations, "seed": mc.seed})
    return report
