"""Dispersion proxies, zero-dispersion finding and group-velocity matching.

The mode solver gives k(omega) pointwise but root-finding on derivatives
needs a smooth, cheap representation.  A Chebyshev fit over the working
window serves as that proxy: for the smooth effective-index curves produced
by the solver the fit converges spectrally, so a moderate degree reproduces
k to within solver noise and its derivatives are exact derivatives of the
proxy.  All downstream quantities (zero-dispersion frequencies, matching
points, Taylor coefficients) are defined on the proxy.

Frequencies are rad/fs, propagation constants rad/nm, so k' is fs/nm and
k'' is fs^2/nm throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.optimize import brentq

from .errors import ConfigError, EvaluationError, RangeError
from .modes import FiberSpec, propagation_constant_from_omega
from .units import nonlinear_mismatch, omega_from_wavelength, wavelength_from_omega

_QUERY_INSET = 0.02
_ZDF_SCAN_POINTS = 4000
_FGVM_DEDUPE = 1e-6  # rad/fs


@dataclass(frozen=True)
class DispersionProfile:
    """Chebyshev proxy for k(omega) with analytic derivatives.

    `window` is the fitted frequency interval; queries are restricted to
    `query_window`, the fitted interval shrunk by 2% per edge, because a
    Chebyshev fit is least trustworthy right at its endpoints.  `residual`
    is the max abs misfit against the build samples in rad/nm.
    """

    fit: Chebyshev
    window: tuple[float, float]
    residual: float

    def __post_init__(self):
        derivs = (self.fit, self.fit.deriv(1), self.fit.deriv(2), self.fit.deriv(3))
        object.__setattr__(self, "_derivs", derivs)

    @classmethod
    def from_samples(cls, omega, k, degree: int = 16) -> "DispersionProfile":
        omega = np.asarray(omega, dtype=float)
        k = np.asarray(k, dtype=float)
        if omega.ndim != 1 or omega.size != k.size:
            raise ConfigError("omega and k samples must be 1-d and equally long")
        if omega.size < degree + 1:
            raise ConfigError(
                f"{omega.size} samples cannot support a degree-{degree} fit"
            )
        fit = Chebyshev.fit(omega, k, degree)
        residual = float(np.max(np.abs(fit(omega) - k)))
        return cls(fit=fit, window=(float(omega.min()), float(omega.max())), residual=residual)

    @property
    def query_window(self) -> tuple[float, float]:
        lo, hi = self.window
        inset = _QUERY_INSET * (hi - lo)
        return (lo + inset, hi - inset)

    def _check(self, omega):
        lo, hi = self.query_window
        slack = 1e-9 * (hi - lo)
        if np.any(omega < lo - slack) or np.any(omega > hi + slack):
            raise RangeError(
                f"frequency outside query window [{lo:.6f}, {hi:.6f}] rad/fs"
            )

    def k_derivative(self, omega, order: int = 0):
        """d^order k / d omega^order at omega (rad/fs), order 0..3."""
        if not 0 <= order <= 3:
            raise ConfigError(f"derivative order must be 0..3, got {order}")
        om = np.asarray(omega, dtype=float)
        self._check(om)
        val = self._derivs[order](om)
        return float(val) if om.ndim == 0 else val

    def k(self, omega):
        return self.k_derivative(omega, 0)


def build_profile(
    fiber: FiberSpec,
    window_nm: tuple[float, float],
    samples: int = 200,
    degree: int = 16,
) -> DispersionProfile:
    """Fit a dispersion proxy for `fiber` over a vacuum-wavelength window.

    Samples the exact mode solver at `samples` equally spaced frequencies
    spanning the window and fits a degree-`degree` Chebyshev.  The defaults
    put the fit residual at solver precision for any realistic glass window.
    """
    lo_nm, hi_nm = window_nm
    if not 0 < lo_nm < hi_nm:
        raise ConfigError(f"bad wavelength window {window_nm}")
    om_lo = omega_from_wavelength(hi_nm)
    om_hi = omega_from_wavelength(lo_nm)
    omega = np.linspace(om_lo, om_hi, samples)
    k = propagation_constant_from_omega(fiber, omega)
    return DispersionProfile.from_samples(omega, k, degree=degree)


def find_zdfs(profile: DispersionProfile) -> np.ndarray:
    """Zero-dispersion frequencies: roots of k''(omega) in the query window.

    Returns an ascending array of frequencies in rad/fs (possibly empty).
    """
    lo, hi = profile.query_window
    grid = np.linspace(lo, hi, _ZDF_SCAN_POINTS)
    k2 = profile.k_derivative(grid, 2)
    flips = np.nonzero(np.diff(np.sign(k2)) != 0)[0]
    roots = []
    for i in flips:
        root = brentq(
            lambda om: profile.k_derivative(om, 2),
            grid[i],
            grid[i + 1],
            xtol=1e-15,
            rtol=8.9e-16,
        )
        roots.append(root)
    return np.array(sorted(roots))


def zero_dispersion_wavelengths(profile: DispersionProfile) -> np.ndarray:
    """Zero-dispersion wavelengths in nm, ascending."""
    omegas = find_zdfs(profile)
    if omegas.size == 0:
        return omegas
    return np.sort(wavelength_from_omega(omegas))


@dataclass(frozen=True)
class FgvmPoint:
    """Pump frequency and half-separation of a full group-velocity match.

    At such a point the signal at omega_p + delta, the idler at
    omega_p - delta and the pump itself share one group velocity.  delta = 0
    marks the degenerate matches sitting at zero-dispersion frequencies;
    nondegenerate matches come in +/- delta pairs.
    """

    omega_p: float
    delta: float

    @property
    def degenerate(self) -> bool:
        return self.delta == 0.0

    @property
    def omega_s(self) -> float:
        return self.omega_p + self.delta

    @property
    def omega_i(self) -> float:
        return self.omega_p - self.delta


def _g1(profile, omega_p, delta):
    """Signal-idler group-velocity mismatch k'(p + d) - k'(p - d)."""
    return profile.k_derivative(omega_p + delta, 1) - profile.k_derivative(
        omega_p - delta, 1
    )


def _g2(profile, omega_p, delta):
    """Pump-pair group-velocity mismatch 2 k'(p) - k'(p + d) - k'(p - d)."""
    return (
        2.0 * profile.k_derivative(omega_p, 1)
        - profile.k_derivative(omega_p + delta, 1)
        - profile.k_derivative(omega_p - delta, 1)
    )


def _newton_polish(profile, op, d, lo, hi, d_floor, max_step):
    for _ in range(80):
        g = np.array([_g1(profile, op, d), _g2(profile, op, d)])
        if np.hypot(*g) < 1e-15:
            break
        k2s = profile.k_derivative(op + d, 2)
        k2i = profile.k_derivative(op - d, 2)
        k2p = profile.k_derivative(op, 2)
        jac = np.array(
            [
                [k2s - k2i, k2s + k2i],
                [2.0 * k2p - k2s - k2i, -k2s + k2i],
            ]
        )
        step, *_ = np.linalg.lstsq(jac, -g, rcond=None)
        step = np.clip(step, -max_step, max_step)
        op = op + step[0]
        d = abs(d + step[1])
        if not (lo < op - d and op + d < hi):
            return None
    if np.hypot(_g1(profile, op, d), _g2(profile, op, d)) > 1e-12 or d < d_floor:
        return None
    return (op, d)


def _find_nondegenerate(profile):
    """Locate nondegenerate matching points: g1 = g2 = 0 with delta > 0.

    The whole delta = 0 axis solves both residuals identically (and so,
    approximately, does its neighbourhood), so seeding minimises the
    residual norm divided by delta^2, which stays away from the axis and
    vanishes only at genuine nondegenerate solutions.  Damped Newton
    iterations polish each candidate; results that slide back to the axis
    are discarded.
    """
    lo, hi = profile.query_window
    span = hi - lo
    d_floor = 0.004 * span
    n_op, n_d = 241, 121
    ops = np.linspace(lo + d_floor, hi - d_floor, n_op)
    d_grid = np.linspace(d_floor, 0.499 * span, n_d)
    metric = np.full((n_d, n_op), np.inf)
    for i, d in enumerate(d_grid):
        ok = (ops - d >= lo) & (ops + d <= hi)
        if not np.any(ok):
            continue
        g1 = _g1(profile, ops[ok], d)
        g2 = _g2(profile, ops[ok], d)
        metric[i, ok] = (g1 * g1 + g2 * g2) / d**4

    finite = np.isfinite(metric)
    if not np.any(finite):
        return []
    order = np.argsort(metric, axis=None)
    max_step = 2.0 * max(ops[1] - ops[0], d_grid[1] - d_grid[0])
    solutions = []
    for flat in order[:12]:
        i, j = np.unravel_index(flat, metric.shape)
        if not np.isfinite(metric[i, j]):
            break
        sol = _newton_polish(
            profile, ops[j], d_grid[i], lo, hi, d_floor, max_step
        )
        if sol is not None and not any(
            abs(sol[0] - u[0]) < _FGVM_DEDUPE and abs(sol[1] - u[1]) < _FGVM_DEDUPE
            for u in solutions
        ):
            solutions.append(sol)
    return sorted(solutions)


def find_fgvm_points(profile: DispersionProfile) -> list[FgvmPoint]:
    """All full group-velocity matching points in the query window.

    Degenerate points (delta = 0) sit exactly at the zero-dispersion
    frequencies.  A nondegenerate match, if present, is located by a coarse
    scan plus damped Newton iteration on the pair of group-velocity
    residuals, and contributes entries at +delta and -delta.  Points closer
    than 1e-6 rad/fs are treated as duplicates.
    """
    zdfs = find_zdfs(profile)
    points = [FgvmPoint(omega_p=float(z), delta=0.0) for z in zdfs]
    for op, d in _find_nondegenerate(profile):
        dup = any(
            abs(p.omega_p - op) < _FGVM_DEDUPE and abs(p.delta - d) < _FGVM_DEDUPE
            for p in points
        )
        if not dup:
            points.append(FgvmPoint(omega_p=float(op), delta=float(d)))
            points.append(FgvmPoint(omega_p=float(op), delta=float(-d)))
    return sorted(points, key=lambda p: (p.omega_p, p.delta))


@dataclass(frozen=True)
class TauSet:
    """Second-order local description of phase matching at a working point.

    Taylor data of L k(omega) around pump omega_p and central signal/idler
    omega_s0, omega_i0:

        tau_s1 = L [k'(omega_p) - k'(omega_s0)]          (fs)
        tau_s2 = L [k''(omega_p) - k''(omega_s0)] / 2    (fs^2)
        tau_p2 = L k''(omega_p)                          (fs^2)

    (same for the idler) plus the constant mismatch

        delta_k0 = L [2 k(omega_p) - k(omega_s0) - k(omega_i0) - 2 gamma P]

    in radians.  Together these determine the low-order phase mismatch

        beta(nu_s, nu_i) = delta_k0 + tau_s1 nu_s + tau_i1 nu_i
                           + tau_s2 nu_s^2 + tau_i2 nu_i^2 + tau_p2 nu_s nu_i

    for detunings nu from the central frequencies.
    """

    omega_p: float
    omega_s0: float
    omega_i0: float
    length_nm: float
    delta_k0: float
    tau_s1: float
    tau_i1: float
    tau_s2: float
    tau_i2: float
    tau_p2: float

    def beta(self, nu_s, nu_i):
        """Quadratic phase mismatch at detunings nu_s, nu_i in rad/fs."""
        nu_s = np.asarray(nu_s, dtype=float)
        nu_i = np.asarray(nu_i, dtype=float)
        return (
            self.delta_k0
            + self.tau_s1 * nu_s
            + self.tau_i1 * nu_i
            + self.tau_s2 * nu_s**2
            + self.tau_i2 * nu_i**2
            + self.tau_p2 * nu_s * nu_i
        )


def tau_coefficients(
    profile: DispersionProfile,
    omega_p: float,
    omega_s0: float,
    omega_i0: float,
    length_nm: float,
    gamma: float = 0.0,
    power: float = 0.0,
) -> TauSet:
    """Taylor coefficients of the phase mismatch for a chosen working point.

    gamma is the nonlinear parameter in 1/(W km) and power the peak pump
    power in W; they only shift the constant term.
    """
    if length_nm <= 0:
        raise ConfigError(f"fibre length must be positive, got {length_nm}")
    k = profile.k_derivative
    dk0 = length_nm * (
        2.0 * k(omega_p)
        - k(omega_s0)
        - k(omega_i0)
        - 2.0 * nonlinear_mismatch(gamma, power)
    )
    return TauSet(
        omega_p=omega_p,
        omega_s0=omega_s0,
        omega_i0=omega_i0,
        length_nm=length_nm,
        delta_k0=float(dk0),
        tau_s1=float(length_nm * (k(omega_p, 1) - k(omega_s0, 1))),
        tau_i1=float(length_nm * (k(omega_p, 1) - k(omega_i0, 1))),
        tau_s2=float(length_nm * (k(omega_p, 2) - k(omega_s0, 2)) / 2.0),
        tau_i2=float(length_nm * (k(omega_p, 2) - k(omega_i0, 2)) / 2.0),
        tau_p2=float(length_nm * k(omega_p, 2)),
    )


def theta_pm(tau: TauSet) -> float:
    """Orientation of the phase-matching stripe in the (nu_s, nu_i) plane.

    Angle in degrees of the line tau_s1 nu_s + tau_i1 nu_i = const, measured
    from the nu_s axis and folded into (-90, 90].  Zero tau_s1 gives a stripe
    along the signal axis (0 deg), zero tau_i1 one along the idler axis
    (90 deg); group-velocity-matched points give -45 deg.
    """
    if tau.tau_s1 == 0.0 and tau.tau_i1 == 0.0:
        raise EvaluationError(
            "stripe orientation undefined: both first-order walk-offs vanish"
        )
    theta = np.degrees(np.arctan2(-tau.tau_s1, tau.tau_i1))
    if theta <= -90.0:
        theta += 180.0
    elif theta > 90.0:
        theta -= 180.0
    return float(theta)
