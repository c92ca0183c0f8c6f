"""Exception types shared across the toolkit.

Every domain error derives from DDError so callers (and the CLI) can
distinguish computation failures (exit 1) from usage/config mistakes
(exit 2, see BadConfig).
"""


class DDError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------- sequences

class NonMonotonic(DDError):
    """Pulse positions are not strictly increasing."""


class OutOfRange(DDError):
    """Pulse positions fall outside the open interval (0, 1)."""


class GapViolation(DDError):
    """An inter-pulse free gap is not strictly positive for the given width."""


class CollisionAfterRounding(DDError):
    """Two pulses landed on the same grid point after timing quantization."""


# ------------------------------------------------------------------- filter

class WidthOverflow(DDError):
    """Total pulse width r*n >= 1: pulses do not fit inside the sequence."""


# ------------------------------------------------------------------ spectra

class NonIntegrableSpectrum(DDError):
    """Spectrum lacks the integrability required by the requested operation."""


# ---------------------------------------------------------------- coherence

class ToleranceNotMet(DDError):
    """Quadrature could not reach the requested tolerance.

    Carries the best value and the achieved error estimate so callers can
    decide whether the result is still usable.
    """

    def __init__(self, message, value=None, achieved=None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


class CurveFailure(DDError):
    """One or more points of a coherence curve failed; indices attached."""

    def __init__(self, message, failures=None):
        super().__init__(message)
        # list of (grid index, underlying exception)
        self.failures = failures or []


# ------------------------------------------------------------------ metrics

class NoCrossing(DDError):
    """F never reaches 1 on the sampled grid."""


class WindowOutOfRange(DDError):
    """Requested fit window lies outside the sampled grid."""


class NumericFloor(DDError):
    """Requested fit window touches the floating-point floor of |sum|^2."""


class InsufficientSpan(DDError):
    """Sample grid does not cover the span required by the statistic."""


class NoPeak(DDError):
    """No band-pass structure found (and no plateau fallback applies)."""


# ----------------------------------------------------------------- optimize

class NotConverged(DDError):
    """No optimization start produced a usable result."""


class Infeasible(DDError):
    """The gap constraint cannot be met even at n=1."""


# ------------------------------------------------------------------- oracle

class UnderResolved(DDError):
    """Time grid too coarse for the sequence (dt > min_gap*tau/8)."""


# ---------------------------------------------------------------------- cli

class BadConfig(DDError):
    """Malformed config file or inconsistent CLI arguments (exit code 2)."""
