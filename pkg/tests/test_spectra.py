import numpy as np
import pytest
from scipy.special import gammainccinv

from ddfilter import (
    BadConfig,
    NonIntegrableSpectrum,
    OhmicSharpCutoff,
    PowerLaw,
    SupraOhmicExp,
    Tabulated,
    WhiteBand,
    chi,
    eval_spectrum,
    from_dict,
    make_canonical,
    rescale_time,
)


def test_ohmic_form():
    s = OhmicSharpCutoff(amplitude=2.0, omega_d=5.0)
    om = np.array([0.0, 1.0, 4.999, 5.0, 5.001, 50.0])
    vals = s.evaluate(om)
    assert vals[1] == pytest.approx(2.0)
    assert vals[2] == pytest.approx(2.0 * 4.999)
    assert vals[4] == 0.0 and vals[5] == 0.0
    assert s.effective_support(1e-9) == (0.0, 5.0)


def test_white_form_and_infinite_band():
    s = WhiteBand(level=0.3, omega_hi=10.0)
    assert np.allclose(s.evaluate(np.array([0.0, 9.9])), 0.3)
    assert s.evaluate(np.array([10.1]))[0] == 0.0
    unbounded = WhiteBand(level=0.3, omega_hi=np.inf)
    assert unbounded.evaluate(np.array([1e6]))[0] == 0.3
    with pytest.raises(NonIntegrableSpectrum):
        unbounded.effective_support(1e-9)


def test_powerlaw_form_and_validation():
    s = PowerLaw(amplitude=1.5, exponent=-2.0, omega_lo=0.1, omega_hi=10.0)
    om = np.array([0.05, 0.1, 1.0, 10.0, 11.0])
    vals = s.evaluate(om)
    assert vals[0] == 0.0 and vals[4] == 0.0
    assert vals[2] == pytest.approx(1.5)
    assert vals[1] == pytest.approx(1.5 * 0.1 ** -2.0)
    # divergent low end needs a positive lower cutoff
    with pytest.raises(NonIntegrableSpectrum):
        PowerLaw(amplitude=1.0, exponent=-1.5, omega_lo=0.0, omega_hi=10.0)
    # infinite band needs a decaying tail
    with pytest.raises(NonIntegrableSpectrum):
        PowerLaw(amplitude=1.0, exponent=-0.5, omega_lo=0.1, omega_hi=np.inf)
    PowerLaw(amplitude=1.0, exponent=-1.5, omega_lo=0.1, omega_hi=np.inf)


def test_supra_ohmic_form_and_supports():
    s = SupraOhmicExp(alpha=1.14e-2, omega_c=3.0)
    om = np.array([1.0, 3.0, 9.0])
    assert np.allclose(
        s.evaluate(om), 1.14e-2 * om ** 3 * np.exp(-om / 3.0)
    )
    # chi integrand S/omega^2 ~ omega e^(-omega/omega_c): a=2 gamma tail
    assert s.effective_support(1e-10)[1] == pytest.approx(
        3.0 * float(gammainccinv(2, 1e-10)), rel=1e-12
    )
    assert s.effective_support(1e-10)[1] == pytest.approx(3.0 * 26.333982, rel=1e-6)
    # raw power integrand omega^3 e^(-omega/omega_c): a=4 gamma tail
    assert s.power_support(1e-10)[1] == pytest.approx(
        3.0 * float(gammainccinv(4, 1e-10)), rel=1e-12
    )
    assert s.power_support(1e-10)[1] > s.effective_support(1e-10)[1]


def test_tabulated_loglog_interpolation():
    s = Tabulated(omegas=(1.0, 10.0, 100.0), values=(1.0, 0.1, 0.01))
    # exact slope -1 in log-log space
    assert s.evaluate(np.array([31.6227766]))[0] == pytest.approx(
        0.1 * 10.0 / 31.6227766, rel=1e-9
    )
    assert s.evaluate(np.array([0.5]))[0] == 0.0
    assert s.evaluate(np.array([200.0]))[0] == 0.0
    assert s.breakpoints() == (10.0,)
    assert s.effective_support(1e-9) == (1.0, 100.0)


def test_tabulated_validation():
    with pytest.raises(BadConfig):
        Tabulated(omegas=(1.0,), values=(1.0,))
    with pytest.raises(BadConfig):
        Tabulated(omegas=(2.0, 1.0), values=(1.0, 1.0))
    with pytest.raises(BadConfig):
        Tabulated(omegas=(1.0, 2.0), values=(1.0, -1.0))


def test_negative_frequency_rejected():
    s = WhiteBand(level=1.0, omega_hi=10.0)
    with pytest.raises(ValueError):
        s.evaluate(np.array([-1.0]))


def test_eval_spectrum_helper():
    s = OhmicSharpCutoff(amplitude=1.0, omega_d=2.0)
    assert eval_spectrum(s, np.array([1.0]))[0] == pytest.approx(1.0)


@pytest.mark.parametrize(
    "spec",
    [
        OhmicSharpCutoff(amplitude=0.7, omega_d=5.0),
        WhiteBand(level=0.02, omega_hi=40.0),
        PowerLaw(amplitude=0.1, exponent=-1.5, omega_lo=0.5, omega_hi=30.0),
        SupraOhmicExp(alpha=1.14e-2, omega_c=3.0),
        Tabulated(omegas=(0.5, 5.0, 50.0), values=(0.01, 0.1, 0.001)),
    ],
)
def test_rescale_time_preserves_chi(spec):
    """Changing the time unit must leave the physical decay invariant."""
    seq = make_canonical("cpmg", 4)
    k = 1000.0  # e.g. microseconds -> milliseconds-scale rescale
    base = chi(seq, spec, 2.0)
    scaled = chi(seq, rescale_time(spec, k), 2.0 * k)
    assert scaled == pytest.approx(base, rel=1e-7)


def test_rescale_round_trip():
    s = SupraOhmicExp(alpha=1.14e-2, omega_c=3.0)
    back = rescale_time(rescale_time(s, 12.5), 1 / 12.5)
    assert back.alpha == pytest.approx(s.alpha, rel=1e-12)
    assert back.omega_c == pytest.approx(s.omega_c, rel=1e-12)


def test_from_dict_round_trip_all_variants():
    specs = [
        OhmicSharpCutoff(amplitude=0.7, omega_d=5.0),
        WhiteBand(level=0.02, omega_hi=40.0),
        PowerLaw(amplitude=0.1, exponent=-1.5, omega_lo=0.5, omega_hi=30.0),
        SupraOhmicExp(alpha=1.14e-2, omega_c=3.0),
        Tabulated(omegas=(0.5, 5.0), values=(0.01, 0.1)),
    ]
    for s in specs:
        assert from_dict(s.to_dict()) == s


def test_from_dict_rejects_bad_config():
    with pytest.raises(BadConfig):
        from_dict({"amplitude": 1.0})
    with pytest.raises(BadConfig):
        from_dict({"variant": "nope"})
    with pytest.raises(BadConfig):
        from_dict({"variant": "ohmic", "bogus_field": 1.0})
