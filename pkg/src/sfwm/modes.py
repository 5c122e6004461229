"""Guided-mode solver for circular step-index fibres.

Solves the exact vector characteristic equation of the fundamental HE11 mode
(azimuthal order 1) of a two-layer step-index profile.  No weak-guidance
approximation is made, so high-contrast geometries (e.g. an air-clad
sub-micron glass rod) are handled correctly.

With core radius a, free-space wavenumber k = 2 pi / lambda and transverse
parameters u = k a sqrt(n_co^2 - n^2), w = k a sqrt(n^2 - n_cl^2), the
eigenvalue condition for azimuthal order 1 reads

    (A + B) (A + rho B) = R^2,
    A = J1'(u) / (u J1(u)),   B = K1'(w) / (w K1(w)),
    rho = (n_cl / n_co)^2,    R = (n / n_co) (1/u^2 + 1/w^2),

and the HE11 effective index is its largest root in (n_cl, n_co).  The
residual is evaluated in a pole-free form (multiplied through by (u J1)^2)
and the modified-Bessel ratio uses exponentially scaled functions, so the
solver stays well conditioned from near-cutoff to the heavily multimode
regime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv, kve

from .errors import ConfigError, ModeSolveError
from .materials import Material, refractive_index
from .units import c as c_nm_fs

_GRID_POINTS = 400
_EDGE_INSET = 1e-9


@dataclass(frozen=True)
class FiberSpec:
    """Step-index fibre geometry: core and cladding media plus core radius."""

    core: Material
    cladding: Material
    radius_um: float

    def __post_init__(self):
        if self.radius_um <= 0:
            raise ConfigError(f"core radius must be positive, got {self.radius_um}")

    @property
    def radius_nm(self) -> float:
        return self.radius_um * 1000.0


def v_number(fiber: FiberSpec, lambda_nm: float) -> float:
    """Normalised frequency V = k a sqrt(n_co^2 - n_cl^2)."""
    n_co = float(refractive_index(fiber.core, lambda_nm))
    n_cl = float(refractive_index(fiber.cladding, lambda_nm))
    if n_co <= n_cl:
        raise ConfigError(
            f"core index {n_co:.6f} does not exceed cladding index {n_cl:.6f} "
            f"at {lambda_nm} nm"
        )
    return (2.0 * np.pi / lambda_nm) * fiber.radius_nm * np.sqrt(n_co**2 - n_cl**2)


def _he11_residual(neff, n_co, n_cl, ka):
    """Pole-free residual of the order-1 vector eigenvalue equation.

    Zeros coincide with the true roots: multiplying through by (u J1)^2
    removes the poles at J1 zeros, where the residual becomes J1'^2 > 0.
    """
    neff = np.asarray(neff, dtype=float)
    u = ka * np.sqrt(n_co**2 - neff**2)
    w = ka * np.sqrt(neff**2 - n_cl**2)
    j0, j1, j2 = jv(0, u), jv(1, u), jv(2, u)
    j1p = 0.5 * (j0 - j2)
    # K1'(w)/(w K1 w) via scaled Bessels; the e^w factors cancel in the ratio.
    b = -(kve(0, w) + kve(2, w)) / (2.0 * w * kve(1, w))
    rho = (n_cl / n_co) ** 2
    r = (neff / n_co) * (1.0 / u**2 + 1.0 / w**2)
    uj1 = u * j1
    return (j1p + b * uj1) * (j1p + rho * b * uj1) - (r * uj1) ** 2


def _solve_he11(n_co: float, n_cl: float, ka: float) -> float:
    span = n_co - n_cl
    lo = n_cl + _EDGE_INSET * span
    hi = n_co - _EDGE_INSET * span
    grid = np.linspace(lo, hi, _GRID_POINTS)
    vals = _he11_residual(grid, n_co, n_cl, ka)
    if not np.all(np.isfinite(vals)):
        raise ModeSolveError("characteristic function not finite on search grid")
    sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if sign_flip.size == 0:
        raise ModeSolveError(
            "no root of the HE11 characteristic equation found; geometry may "
            "not guide at this wavelength"
        )
    # Fundamental mode: the root with the largest effective index.
    i = sign_flip[-1]
    return brentq(
        _he11_residual,
        grid[i],
        grid[i + 1],
        args=(n_co, n_cl, ka),
        xtol=1e-15,
        rtol=8.9e-16,
    )


def effective_index(fiber: FiberSpec, lambda_nm):
    """HE11 effective index at vacuum wavelength(s) in nm.

    Accepts a scalar or array; each wavelength is solved independently to
    machine precision.  Raises ModeSolveError if no guided root exists and
    ConfigError if the core index does not exceed the cladding index.
    """
    lam = np.asarray(lambda_nm, dtype=float)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    out = np.empty_like(lam)
    for idx, lam_i in enumerate(lam):
        n_co = float(refractive_index(fiber.core, lam_i))
        n_cl = float(refractive_index(fiber.cladding, lam_i))
        if n_co == n_cl:
            # Homogeneous medium: plane-wave propagation.
            out[idx] = n_co
            continue
        if n_co < n_cl:
            raise ConfigError(
                f"core index {n_co:.6f} below cladding index {n_cl:.6f} at "
                f"{lam_i} nm"
            )
        ka = (2.0 * np.pi / lam_i) * fiber.radius_nm
        out[idx] = _solve_he11(n_co, n_cl, ka)
    return out[0] if scalar else out


def propagation_constant(fiber: FiberSpec, lambda_nm):
    """HE11 propagation constant k = n_eff omega / c in rad/nm."""
    lam = np.asarray(lambda_nm, dtype=float)
    return effective_index(fiber, lambda_nm) * 2.0 * np.pi / lam


def propagation_constant_from_omega(fiber: FiberSpec, omega):
    """Same as propagation_constant but parametrised by omega in rad/fs."""
    om = np.asarray(omega, dtype=float)
    lam = 2.0 * np.pi * c_nm_fs / om
    return effective_index(fiber, lam) * om / c_nm_fs
