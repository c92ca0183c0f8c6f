"""Dephasing-noise power spectral densities S(omega) and support queries.

All spectra are one-sided (omega >= 0). Units are any consistent pair:
omega in 1/time, tau in time; chi comes out dimensionless. Dimensions of
the parameters: ohmic amplitude is dimensionless, white level and
tabulated S are 1/time, supra-ohmic alpha is time^2, power-law amplitude
is time^(p-1).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainccinv

from .errors import BadConfig, NonIntegrableSpectrum


@dataclass(frozen=True)
class OhmicSharpCutoff:
    """S = A * omega for omega <= omega_d, 0 above (sharp cutoff)."""

    amplitude: float
    omega_d: float

    def __post_init__(self):
        if self.amplitude < 0 or self.omega_d <= 0:
            raise BadConfig("ohmic spectrum needs amplitude >= 0 and omega_d > 0")

    def evaluate(self, omega):
        omega = _check_omega(omega)
        return np.where(omega <= self.omega_d, self.amplitude * omega, 0.0)

    def effective_support(self, epsilon):
        return (0.0, self.omega_d)

    def power_support(self, epsilon):
        return (0.0, self.omega_d)

    def breakpoints(self):
        return ()

    def to_dict(self):
        return {"variant": "ohmic", "amplitude": self.amplitude, "omega_d": self.omega_d}


@dataclass(frozen=True)
class WhiteBand:
    """S = S0 up to omega_hi (band-limited white noise)."""

    level: float
    omega_hi: float

    def __post_init__(self):
        if self.level < 0 or self.omega_hi <= 0:
            raise BadConfig("white band needs level >= 0 and omega_hi > 0")

    def evaluate(self, omega):
        omega = _check_omega(omega)
        return np.where(omega <= self.omega_hi, self.level, 0.0)

    def effective_support(self, epsilon):
        if not math.isfinite(self.omega_hi):
            raise NonIntegrableSpectrum("unbounded white band has no finite support")
        return (0.0, self.omega_hi)

    def power_support(self, epsilon):
        if not math.isfinite(self.omega_hi):
            raise NonIntegrableSpectrum("unbounded white band has infinite total power")
        return (0.0, self.omega_hi)

    def breakpoints(self):
        return ()

    def to_dict(self):
        return {"variant": "white", "level": self.level, "omega_hi": self.omega_hi}


@dataclass(frozen=True)
class PowerLaw:
    """S = A * omega**exponent on [omega_lo, omega_hi], 0 outside.

    Integrability of S/omega^2 at the low end is a construction-time
    contract: exponent <= -1 requires an explicit omega_lo > 0.
    omega_hi may be inf only when exponent < -1 (finite tail mass).
    """

    amplitude: float
    exponent: float
    omega_lo: float
    omega_hi: float

    def __post_init__(self):
        if self.amplitude < 0:
            raise BadConfig("power law needs amplitude >= 0")
        if self.omega_lo < 0 or self.omega_hi <= self.omega_lo:
            raise BadConfig("power law needs 0 <= omega_lo < omega_hi")
        if self.exponent <= -1 and self.omega_lo <= 0:
            raise NonIntegrableSpectrum(
                "power law with exponent <= -1 requires omega_lo > 0"
            )
        if not math.isfinite(self.omega_hi) and self.exponent >= -1:
            raise NonIntegrableSpectrum(
                "unbounded power law requires exponent < -1"
            )

    def evaluate(self, omega):
        omega = _check_omega(omega)
        inside = (omega >= self.omega_lo) & (omega <= self.omega_hi)
        safe = np.where(omega > 0, omega, 1.0)
        vals = self.amplitude * safe ** self.exponent
        if self.exponent > 0:
            vals = np.where(omega > 0, vals, 0.0)
        return np.where(inside, vals, 0.0)

    def effective_support(self, epsilon):
        if math.isfinite(self.omega_hi):
            return (self.omega_lo, self.omega_hi)
        # tail of S/omega^2 above W: (W/omega_lo)**(exponent-1) of the total
        hi = self.omega_lo * epsilon ** (1.0 / (self.exponent - 1.0))
        return (self.omega_lo, hi)

    def power_support(self, epsilon):
        if math.isfinite(self.omega_hi):
            return (self.omega_lo, self.omega_hi)
        hi = self.omega_lo * epsilon ** (1.0 / (self.exponent + 1.0))
        return (self.omega_lo, hi)

    def breakpoints(self):
        return ()

    def to_dict(self):
        return {
            "variant": "powerlaw",
            "amplitude": self.amplitude,
            "exponent": self.exponent,
            "omega_lo": self.omega_lo,
            "omega_hi": self.omega_hi,
        }


@dataclass(frozen=True)
class SupraOhmicExp:
    """S = alpha * omega^3 * exp(-omega/omega_c)."""

    alpha: float
    omega_c: float

    def __post_init__(self):
        if self.alpha < 0 or self.omega_c <= 0:
            raise BadConfig("supra-ohmic spectrum needs alpha >= 0 and omega_c > 0")

    def evaluate(self, omega):
        omega = _check_omega(omega)
        return self.alpha * omega ** 3 * np.exp(-omega / self.omega_c)

    def effective_support(self, epsilon):
        # S/omega^2 = alpha*omega*exp(-omega/omega_c): tail fraction of the
        # a=2 incomplete gamma drops below epsilon at x = gammainccinv(2, eps)
        return (0.0, self.omega_c * float(gammainccinv(2, epsilon)))

    def power_support(self, epsilon):
        # total power integrand omega^3 exp(): a=4 gamma tail
        return (0.0, self.omega_c * float(gammainccinv(4, epsilon)))

    def breakpoints(self):
        return ()

    def to_dict(self):
        return {"variant": "supraohmic", "alpha": self.alpha, "omega_c": self.omega_c}


@dataclass(frozen=True)
class Tabulated:
    """Tabulated S(omega), log-log linear interpolation, 0 outside the table."""

    omegas: tuple
    values: tuple

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        sv = np.asarray(self.values, dtype=float)
        if om.size < 2 or om.size != sv.size:
            raise BadConfig("tabulated spectrum needs >= 2 (omega, S) pairs")
        if om[0] <= 0 or np.any(np.diff(om) <= 0):
            raise BadConfig("tabulated abscissae must be positive and strictly increasing")
        if np.any(sv < 0):
            raise BadConfig("tabulated S values must be non-negative")
        object.__setattr__(self, "omegas", tuple(float(x) for x in om))
        object.__setattr__(self, "values", tuple(float(x) for x in sv))

    def evaluate(self, omega):
        omega = _check_omega(omega)
        om = np.asarray(self.omegas)
        sv = np.maximum(np.asarray(self.values), 1e-300)  # keep log finite
        inside = (omega >= om[0]) & (omega <= om[-1])
        safe = np.where(omega > 0, omega, om[0])
        logs = np.interp(np.log(safe), np.log(om), np.log(sv))
        vals = np.exp(logs)
        vals = np.where(vals <= 1e-299, 0.0, vals)
        return np.where(inside, vals, 0.0)

    def effective_support(self, epsilon):
        return (self.omegas[0], self.omegas[-1])

    def power_support(self, epsilon):
        return (self.omegas[0], self.omegas[-1])

    def breakpoints(self):
        return tuple(self.omegas[1:-1])

    def to_dict(self):
        return {
            "variant": "tabulated",
            "omegas": list(self.omegas),
            "values": list(self.values),
        }


def eval_spectrum(spec, omega):
    """S(omega); scalar in, scalar out; arrays pass through elementwise."""
    scalar = np.isscalar(omega)
    out = spec.evaluate(np.atleast_1d(np.asarray(omega, dtype=float)))
    return float(out[0]) if scalar else out


def effective_support(spec, epsilon):
    """Interval holding all but epsilon of the S/omega^2 mass (chi weight)."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return spec.effective_support(epsilon)


def _check_omega(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be >= 0")
    return omega


def rescale_time(spec, factor):
    """Re-express a spectrum after scaling the time unit by `factor`.

    factor = (new units per old unit) for time; e.g. seconds to
    picoseconds uses factor 1e12. Frequencies scale by 1/factor and each
    parameter by its time dimension.
    """
    k = float(factor)
    if isinstance(spec, OhmicSharpCutoff):
        return OhmicSharpCutoff(spec.amplitude, spec.omega_d / k)
    if isinstance(spec, WhiteBand):
        return WhiteBand(spec.level / k, spec.omega_hi / k)
    if isinstance(spec, PowerLaw):
        return PowerLaw(
            spec.amplitude * k ** (spec.exponent - 1.0),
            spec.exponent,
            spec.omega_lo / k,
            spec.omega_hi / k,
        )
    if isinstance(spec, SupraOhmicExp):
        return SupraOhmicExp(spec.alpha * k ** 2, spec.omega_c / k)
    if isinstance(spec, Tabulated):
        return Tabulated(
            tuple(w / k for w in spec.omegas),
            tuple(s / k for s in spec.values),
        )
    raise BadConfig(f"unknown spectrum type: {type(spec).__name__}")


_VARIANTS = {
    "ohmic": OhmicSharpCutoff,
    "white": WhiteBand,
    "powerlaw": PowerLaw,
    "supraohmic": SupraOhmicExp,
    "tabulated": Tabulated,
}


def from_dict(d):
    """Build a spectrum from a config mapping {"variant": ..., params...}."""
    if not isinstance(d, dict) or "variant" not in d:
        raise BadConfig("spectrum config must be an object with a 'variant' key")
    name = str(d["variant"]).lower()
    if name not in _VARIANTS:
        raise BadConfig(f"unknown spectrum variant: {name!r}")
    params = {k: v for k, v in d.items() if k != "variant"}
    cls = _VARIANTS[name]
    try:
        if cls is Tabulated:
            return Tabulated(tuple(params["omegas"]), tuple(params["values"]))
        return cls(**params)
    except TypeError as exc:
        raise BadConfig(f"bad parameters for {name}: {exc}") from exc
