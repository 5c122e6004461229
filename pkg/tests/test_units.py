import numpy as np
import pytest

from sfwm import units


def test_roundtrip_wavelength_omega():
    lam = np.array([500.0, 1064.0, 1550.0, 2200.0])
    om = units.omega_from_wavelength(lam)
    back = units.wavelength_from_omega(om)
    assert np.allclose(back, lam, rtol=0, atol=1e-9)


def test_omega_value_1550():
    # 2*pi*c/lambda with c = 299.792458 nm/fs
    expected = 2.0 * np.pi * 299.792458 / 1550.0
    assert units.omega_from_wavelength(1550.0) == pytest.approx(expected, rel=1e-15)


def test_nonlinear_mismatch_units():
    # 1 W at 1/(W km): 1e-3 1/m = 1e-12 1/nm.
    assert units.nonlinear_mismatch(1.0, 1.0) == pytest.approx(1e-12, rel=1e-15)
    # 70/(W km) at 0.9496 W, the working point used in the examples.
    assert units.nonlinear_mismatch(70.0, 0.9496) == pytest.approx(6.6472e-11, rel=1e-4)


def test_pump_sigma_fwhm_convention():
    # sigma such that exp(-(domega/sigma)^2) falls to 1/2 at half the stated
    # FWHM, converted from a wavelength width at the carrier.
    sigma = units.pump_sigma_from_fwhm(6.29, 628.5)
    domega_half = 0.5 * 2.0 * np.pi * 299.792458 * 6.29 / 628.5**2
    assert np.exp(-((domega_half / sigma) ** 2)) == pytest.approx(0.5, rel=1e-12)
    assert sigma == pytest.approx(0.018013, rel=1e-4)


def test_pump_sigma_scales_inverse_square():
    s1 = units.pump_sigma_from_fwhm(5.0, 1000.0)
    s2 = units.pump_sigma_from_fwhm(5.0, 2000.0)
    assert s1 / s2 == pytest.approx(4.0, rel=1e-12)
