"""Numerical sequence design.

LODD minimizes chi for a given spectrum and tau; OFDD minimizes the
filter-function area up to a dimensionless cutoff; BADD sweeps the pulse
count under a minimum-gap constraint and returns the best sequence.

All three share one engine: positions are parameterized by n+1 positive
gaps summing to 1 via an additive log-ratio transform (x in R^n maps
bijectively onto the open simplex interior), which removes the ordering
constraint; Nelder-Mead runs in x-space from canonical-family starts
plus seeded jitter. A minimum-gap constraint g_i >= gmin becomes an
affine squeeze of the simplex, and infeasible starting gaps are first
projected (Euclidean) onto the constrained set.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .coherence import chi
from .errors import DDError, Infeasible, NotConverged
from .quadrature import QuadratureConfig, build_edges, integrate
from .sequences import PulseSequence, canonical_deltas, make_custom, min_gap
from .spectra import PowerLaw, SupraOhmicExp, Tabulated
from .filters import filter_value


@dataclass(frozen=True)
class OptimizationConfig:
    restarts: int = 2              # jittered starts beyond the 3 canonical seeds
    max_iterations: int = None     # per-start Nelder-Mead cap (None = solver default)
    tol: float = 1e-10             # objective convergence tolerance (fatol)
    step_scale: float = 0.3        # initial simplex step in log-ratio space
    seed: int = 0
    min_gap_fraction: float = None  # optional constraint: every gap >= this

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")


@dataclass(frozen=True)
class OptimizationResult:
    sequence: PulseSequence
    objective_value: float
    baseline_values: dict          # objective at (projected) cpmg/pdd/udd, same n
    diagnostics: dict

    def to_dict(self):
        return {
            "sequence": self.sequence.to_dict(),
            "objective_value": self.objective_value,
            "baseline_values": dict(self.baseline_values),
            "diagnostics": dict(self.diagnostics),
        }


# ------------------------------------------------------- gap parameterization

def gaps_to_deltas(gaps):
    return np.cumsum(gaps)[:-1]


def deltas_to_gaps(deltas):
    d = np.concatenate([[0.0], np.asarray(deltas, dtype=float), [1.0]])
    return np.diff(d)


def alr_to_gaps(x):
    """R^n -> interior of the (n+1)-gap simplex, shift-invariant softmax."""
    z = np.concatenate([np.asarray(x, dtype=float), [0.0]])
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def gaps_to_alr(gaps):
    g = np.maximum(np.asarray(gaps, dtype=float), 1e-12)
    return np.log(g[:-1] / g[-1])


def project_gaps(gaps, gmin):
    """Euclidean projection onto {g_i >= gmin, sum g = 1}."""
    g = np.asarray(gaps, dtype=float)
    m = g.size
    budget = 1.0 - m * gmin
    if budget < 0:
        raise Infeasible(f"{m} gaps of at least {gmin:g} exceed the unit interval")
    if budget <= 1e-15:
        return np.full(m, 1.0 / m)  # constraint consumes the whole interval
    v = g - gmin
    # project v onto the simplex scaled to `budget` (sort-based algorithm)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - budget
    rho = np.nonzero(u - css / np.arange(1, m + 1) > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return gmin + np.maximum(v - theta, 0.0)


def _squeeze(raw_gaps, gmin):
    """Map the free simplex onto {g >= gmin, sum = 1} (smooth, bijective)."""
    m = raw_gaps.size
    return gmin + (1.0 - m * gmin) * raw_gaps


def _unsqueeze(gaps, gmin):
    m = gaps.size
    scale = 1.0 - m * gmin
    return (gaps - gmin) / scale


# ------------------------------------------------------------------ objectives

_OBJ_QUAD = QuadratureConfig(rel_tol=1e-7, max_subdivisions=8)


def _chi_objective(spec, tau):
    def f(deltas):
        return chi(make_custom(deltas), spec, tau, _OBJ_QUAD)
    return f


def _area_objective(u_max, resolution=8):
    edges = build_edges(0.0, float(u_max), max_panel=2.0 * np.pi / resolution)

    def f(deltas):
        seq = make_custom(deltas)
        value, _err, _np_ = integrate(
            lambda u: filter_value(seq, u), edges,
            QuadratureConfig(rel_tol=1e-9, max_subdivisions=6), raise_on_fail=False)
        return value
    return f


def filter_area(seq, u_max):
    """Area under F(u) from 0 to u_max (the OFDD objective)."""
    return _area_objective(u_max)(np.asarray(seq.deltas))


def _kernel_chi_objective(spec, tau, n_delta=40001, resolution=8):
    """Exact pairwise-kernel form of chi for spectra with finite S/omega^2 mass.

    chi(deltas) = c^T K c with c the phasor coefficients of ytilde and
    K(d) = (2/pi) integral S(omega) cos(omega tau d) / omega^2 domega,
    tabulated once on a fine d grid. Mathematically identical to the
    quadrature chi; used as the fast inner objective for BADD sweeps.
    """
    lo, hi = spec.effective_support(1e-10)
    edges = build_edges(lo, hi, breakpoints=spec.breakpoints(),
                        max_panel=2.0 * np.pi / (tau * resolution))
    from .quadrature import _nodes
    xg, wg = _nodes(21)
    a, b = edges[:-1], edges[1:]
    hw, mid = 0.5 * (b - a), 0.5 * (a + b)
    om = (mid[:, None] + hw[:, None] * xg[None, :]).ravel()
    wts = (np.broadcast_to(wg[None, :], (a.size, 21)) * hw[:, None]).ravel()
    s_w = spec.evaluate(om) / om ** 2 * wts
    dgrid = np.linspace(0.0, 1.0, n_delta)
    table = np.empty(n_delta)
    blk = 512
    for i in range(0, n_delta, blk):
        dd = dgrid[i:i + blk]
        table[i:i + blk] = s_w @ np.cos(np.outer(om * tau, dd))
    table *= 2.0 / np.pi

    def f(deltas):
        n = len(deltas)
        p = np.concatenate([[0.0], deltas, [1.0]])
        c = np.concatenate([[1.0], 2.0 * (-1.0) ** np.arange(1, n + 1),
                            [(-1.0) ** (n + 1)]])
        diffs = np.abs(p[:, None] - p[None, :])
        K = np.interp(diffs.ravel(), dgrid, table).reshape(diffs.shape)
        return float(c @ K @ c)
    return f


def _supports_kernel(spec):
    """True when S/omega^2 has finite total mass (kernel form applicable)."""
    if isinstance(spec, SupraOhmicExp):
        return True
    if isinstance(spec, PowerLaw):
        return spec.exponent > 1.0 or spec.omega_lo > 0.0
    if isinstance(spec, Tabulated):
        return True  # hard low cutoff at the first node
    return False


# ---------------------------------------------------------------- core engine

def _nm_start(objective_x, x0, cfg):
    n = x0.size
    simplex = np.vstack([x0] + [x0 + cfg.step_scale * np.eye(n)[i] for i in range(n)])
    options = {"xatol": 1e-8, "fatol": cfg.tol, "initial_simplex": simplex,
               "maxiter": cfg.max_iterations if cfg.max_iterations else 200 * n,
               "maxfev": 10 ** 9}
    return minimize(objective_x, x0, method="Nelder-Mead", options=options)


def _optimize_core(objective, n, cfg, gmin=0.0):
    """Shared LODD/OFDD/BADD engine over n pulse positions.

    objective maps a delta array to a scalar. Returns the merged best
    across canonical starts and jittered copies, ordered deterministically
    by (objective, n, start index).
    """
    if gmin > 0 and (n + 1) * gmin > 1.0:
        raise Infeasible(
            f"n={n} needs {n + 1} gaps of at least {gmin:g}; does not fit")
    if gmin > 0 and 1.0 - (n + 1) * gmin <= 1e-12:
        # constraint leaves a single feasible point: uniform gaps
        deltas = gaps_to_deltas(np.full(n + 1, 1.0 / (n + 1)))
        val = float(objective(deltas))
        best = {"objective": val, "n": n, "start_index": 0, "label": "uniform",
                "x": None, "iterations": 0, "function_evals": 1, "converged": True}
        return best, deltas, {"udd": val, "cpmg": val, "pdd": val}, [best]

    def to_deltas(x):
        raw = np.maximum(alr_to_gaps(x), 1e-15)
        raw = raw / raw.sum()
        return gaps_to_deltas(_squeeze(raw, gmin) if gmin > 0 else raw)

    def objective_x(x):
        try:
            return objective(to_deltas(x))
        except DDError:
            return np.inf

    starts = []
    baselines = {}
    for fam in ("udd", "cpmg", "pdd"):
        gaps = deltas_to_gaps(canonical_deltas(fam, n))
        if gmin > 0:
            gaps = project_gaps(gaps, gmin)
            raw = np.maximum(_unsqueeze(gaps, gmin), 1e-9)
            raw = raw / raw.sum()
        else:
            raw = gaps
        x0 = gaps_to_alr(raw)
        starts.append((fam, x0))
        baselines[fam] = float(objective(to_deltas(x0)))

    rng = np.random.default_rng(cfg.seed)
    for k in range(cfg.restarts):
        base = starts[k % 3][1]
        starts.append((f"jitter{k}", base + rng.normal(0.0, 1.0, n) * cfg.step_scale))

    if all(v == 0.0 for v in baselines.values()):
        # degenerate objective (zero spectrum): retain the UDD baseline
        seq = make_custom(canonical_deltas("udd", n), label="udd")
        return OptimizationResult(seq, 0.0, baselines, {
            "converged": True, "degenerate": True, "iterations": 0,
            "function_evals": 0, "restarts": cfg.restarts, "start_label": "udd",
        })

    candidates = []
    for idx, (lbl, x0) in enumerate(starts):
        res = _nm_start(objective_x, np.asarray(x0, dtype=float), cfg)
        candidates.append({
            "objective": float(res.fun), "n": n, "start_index": idx,
            "label": lbl, "x": res.x, "iterations": int(res.nit),
            "function_evals": int(res.nfev), "converged": bool(res.success),
        })
    candidates.sort(key=lambda c: (c["objective"], c["n"], c["start_index"]))
    best = candidates[0]
    if not np.isfinite(best["objective"]):
        raise NotConverged("no optimization start produced a finite objective")
    deltas = to_deltas(best["x"])
    return best, deltas, baselines, candidates


def _result_from_core(best, deltas, baselines, cfg, label, extra=None):
    seq = make_custom(deltas, label=label)
    diag = {
        "converged": best["converged"],
        "iterations": best["iterations"],
        "function_evals": best["function_evals"],
        "restarts": cfg.restarts,
        "start_label": best["label"],
        "constraint_slack": None,
    }
    if extra:
        diag.update(extra)
    return OptimizationResult(seq, best["objective"], baselines, diag)


def optimize_lodd(spec, n, tau, cfg=None):
    """Minimize chi over pulse positions for a fixed spectrum and tau."""
    cfg = cfg or OptimizationConfig()
    if n < 1:
        raise ValueError("LODD requires n >= 1")
    gmin = cfg.min_gap_fraction or 0.0
    objective = _chi_objective(spec, tau)
    out = _optimize_core(objective, n, cfg, gmin=gmin)
    if isinstance(out, OptimizationResult):
        return out
    best, deltas, baselines, _cands = out
    extra = {}
    if gmin > 0:
        extra["constraint_slack"] = float(min_gap(make_custom(deltas)) - gmin)
    return _result_from_core(best, deltas, baselines, cfg, "lodd", extra)


def optimize_ofdd(n, u_max, cfg=None):
    """Minimize the filter-function area on [0, u_max]; spectrum-free."""
    cfg = cfg or OptimizationConfig()
    if n < 1:
        raise ValueError("OFDD requires n >= 1")
    if u_max <= 0:
        raise ValueError("u_max must be positive")
    objective = _area_objective(u_max)
    out = _optimize_core(objective, n, cfg, gmin=cfg.min_gap_fraction or 0.0)
    if isinstance(out, OptimizationResult):
        return out
    best, deltas, baselines, _cands = out
    return _result_from_core(best, deltas, baselines, cfg, "ofdd")


def optimize_badd(spec, tau, tau_switch, n_max, cfg=None):
    """Minimum-gap-constrained optimization over pulse count and positions.

    For each n up to min(n_max, floor(tau/tau_switch) - 1), runs the
    constrained position optimization (inner objective: the pairwise
    kernel form when the spectrum admits it, else quadrature chi), then
    re-evaluates every per-n winner with quadrature chi and returns the
    overall best. Baselines are the projected (feasible) canonical
    sequences at the winning n.
    """
    cfg = cfg or OptimizationConfig()
    if not tau > tau_switch > 0:
        raise ValueError("require tau > tau_switch > 0")
    gmin = tau_switch / tau
    n_hi = min(int(n_max), int(np.floor(tau / tau_switch * (1.0 + 1e-12))) - 1)
    if n_hi < 1:
        raise Infeasible(
            f"tau_switch={tau_switch:g} leaves no room for one pulse in tau={tau:g}")

    fast = _supports_kernel(spec)
    inner = _kernel_chi_objective(spec, tau) if fast else _chi_objective(spec, tau)
    true_chi = _chi_objective(spec, tau)

    per_n = []
    entries = []
    for n in range(1, n_hi + 1):
        out = _optimize_core(inner, n, cfg, gmin=gmin)
        if isinstance(out, OptimizationResult):
            seq_d = np.asarray(out.sequence.deltas)
            best = {"objective": out.objective_value, "n": n, "start_index": 0,
                    "label": out.diagnostics["start_label"], "x": None,
                    "iterations": 0, "function_evals": 0, "converged": True}
            deltas = seq_d
        else:
            best, deltas, _bl, _cands = out
        value = float(true_chi(deltas))
        entries.append((value, n, best["start_index"], best, deltas))
        per_n.append({"n": n, "objective": value, "converged": best["converged"]})
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    value, n_best, _sidx, best, deltas = entries[0]

    baselines = {}
    for fam in ("udd", "cpmg", "pdd"):
        gaps = project_gaps(deltas_to_gaps(canonical_deltas(fam, n_best)), gmin)
        baselines[fam] = float(true_chi(gaps_to_deltas(gaps)))

    seq = make_custom(deltas, label="badd")
    slack = float(min_gap(seq) - gmin)
    diag = {
        "converged": best["converged"],
        "iterations": best["iterations"],
        "function_evals": best["function_evals"],
        "restarts": cfg.restarts,
        "start_label": best["label"],
        "constraint_slack": slack,
        "n_best": n_best,
        "n_limit": n_hi,
        "kernel_objective": fast,
        "per_n": per_n,
    }
    return OptimizationResult(seq, value, baselines, diag)
