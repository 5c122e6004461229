"""Unit conventions shared by every module.

Fixed internal units:

* angular frequency  omega  -> rad/fs
* wavelength         lambda -> nm
* propagation const. k      -> rad/nm  (k^(1) fs/nm, k^(2) fs^2/nm, ...)
* fibre length       L      -> nm
* nonlinear coeff.   gamma  -> 1/(W km)  (the conventional lab unit)
* power              P      -> W

The only non-trivial conversion is the nonlinear phasemismatch term gamma*P,
which enters k-space expressions and therefore must come out in rad/nm.  It is
centralised here so no module re-derives the factor.
"""

import numpy as np

c = 299.792458
"""Speed of light in nm/fs."""

_PER_KM_TO_PER_NM = 1e-12


def omega_from_wavelength(lambda_nm):
    """Angular frequency (rad/fs) from vacuum wavelength (nm)."""
    return 2.0 * np.pi * c / np.asarray(lambda_nm, dtype=float)


def wavelength_from_omega(omega):
    """Vacuum wavelength (nm) from angular frequency (rad/fs)."""
    return 2.0 * np.pi * c / np.asarray(omega, dtype=float)


def nonlinear_mismatch(gamma_w_km, power_w):
    """Self/cross-phase term gamma*P converted to rad/nm.

    gamma is given in 1/(W km) and P in W, so gamma*P is in 1/km; one
    inverse kilometre is 1e-12 inverse nanometres.
    """
    return gamma_w_km * power_w * _PER_KM_TO_PER_NM


def pump_sigma_from_fwhm(fwhm_nm, lambda_p_nm):
    """Gaussian pump bandwidth sigma (rad/fs) from an FWHM in wavelength.

    The pump amplitude envelope is S(omega) = exp[-(omega-omega_p)^2/sigma^2];
    the quoted FWHM is the full width at half maximum of S itself, converted
    from wavelength to frequency at the pump:

        sigma = pi c fwhm / (lambda_p^2 sqrt(ln 2))
    """
    domega_fwhm = 2.0 * np.pi * c * fwhm_nm / lambda_p_nm**2
    return domega_fwhm / (2.0 * np.sqrt(np.log(2.0)))
