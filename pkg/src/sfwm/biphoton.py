"""Joint spectral amplitudes of photon pairs and their mode structure.

Three routes to the JSA of a degenerate-pump pair source:

* `jsa_numeric`: direct quadrature of the pump-envelope integral against the
  full dispersion proxy; the reference, no expansion involved.
* `jsa_analytic`: closed form for the quadratic (Taylor) phase mismatch of a
  `TauSet`, built on the pair-production profile function `phi_function`.
* `jsa_cw`: the monochromatic-pump limit along the energy-conservation line.

The closed form reduces the pump integral to

    Int dq e^{-q^2} (e^{i a (q^2 - x^2)} - 1) / (i a (q^2 - x^2))
        = pi * phi_function(a, x),

with a the pump-chirp-like parameter tau_p2 sigma^2 / 2 and x the scaled
distance from perfect matching; x is real or purely imaginary for real
quadratic mismatch.  phi_function evaluates this through the Faddeeva
function in a form that never forms the catastrophically cancelling
difference of exponentially large terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import wofz

from .dispersion import DispersionProfile, TauSet
from .errors import ConfigError, EvaluationError, RangeError
from .phasematching import delta_k_cw, sinc_phase
from .units import nonlinear_mismatch, omega_from_wavelength, pump_sigma_from_fwhm

_ERF_BOX = 30.0
_PHI_TAYLOR_CUT = 1e-4
_PHI_SERIES_CUT = 1e-4


def complex_erf(z):
    """Error function on the complex plane via the Faddeeva function.

    Arguments are restricted to the box |Re z| <= 30, |Im z| <= 30; inside
    it the result may still overflow double range (erf grows like
    e^{y^2} on the imaginary axis), in which case EvaluationError is raised
    rather than returning inf.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(np.abs(z.real) > _ERF_BOX) or np.any(np.abs(z.imag) > _ERF_BOX):
        raise RangeError(f"complex_erf argument outside |Re|,|Im| <= {_ERF_BOX} box")
    # Map to Re z >= 0 through oddness so the wofz identity is stable.
    flip = (z.real < 0) | ((z.real == 0) & (z.imag < 0))
    zz = np.where(flip, -z, z)
    with np.errstate(over="ignore", invalid="ignore"):
        out = 1.0 - np.exp(-zz * zz) * wofz(1j * zz)
    out = np.where(flip, -out, out)
    if not np.all(np.isfinite(out)):
        raise EvaluationError("complex_erf overflowed double precision")
    return out[0] if scalar else out


def phi_function(a: float, x):
    """Pair-production profile Phi(a; x), vectorised over x.

    Defined by Int dq e^{-q^2} g(a (q^2 - x^2)) = pi Phi(a; x) with
    g(y) = (e^{iy} - 1)/(iy).  Phi(0; x) = 1/sqrt(pi) for every x.  x may be
    real or purely imaginary (any complex x is accepted).

    Three regimes keep full accuracy: a Taylor expansion in a when
    |a| (1 + |x|^2) is tiny, a short series in x near x = 0 where the closed
    form divides 0 by 0, and otherwise a four-branch Faddeeva form in which
    the exponentially large pieces cancel analytically instead of
    numerically.
    """
    a = float(a)
    x = np.asarray(x, dtype=complex)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)

    taylor = np.abs(a) * (1.0 + np.abs(x) ** 2) < _PHI_TAYLOR_CUT
    if np.any(taylor):
        x2 = x[taylor] ** 2
        m2 = 0.5 - x2
        m4 = 0.75 - x2 + x2 * x2
        out[taylor] = (1.0 + 0.5j * a * m2 - a * a * m4 / 6.0) / np.sqrt(np.pi)

    rt = np.sqrt(1.0 - 1j * a)
    small = (~taylor) & (np.abs(x) < _PHI_SERIES_CUT)
    if np.any(small):
        def cn(n):
            return (rt ** (2 * n + 1) - 1.0) / (math.factorial(n) * (2 * n + 1))

        c0, c1, c2 = cn(0), cn(1), cn(2)
        xs = x[small]
        out[small] = (2j / (a * np.sqrt(np.pi))) * (
            c0 + xs**2 * (c1 - c0) + xs**4 * (c2 - c1 + 0.5 * c0)
        )

    rest = ~(taylor | small)
    if np.any(rest):
        xl = x[rest]
        ul = xl * rt
        ph = np.exp(-1j * a * xl * xl)
        upx = xl.imag >= 0
        upu = ul.imag >= 0
        diff = np.empty_like(xl)
        # Same half-plane: the e^{-x^2} constants cancel exactly in the
        # difference of scaled Faddeeva values.
        bb = upx & upu
        diff[bb] = ph[bb] * wofz(ul[bb]) - wofz(xl[bb])
        ll = ~upx & ~upu
        diff[ll] = wofz(-xl[ll]) - ph[ll] * wofz(-ul[ll])
        # Mixed half-planes only occur near the real axis, where the
        # remaining 2 e^{-x^2} term is bounded.
        m1 = upx & ~upu
        diff[m1] = 2.0 * np.exp(-xl[m1] ** 2) - ph[m1] * wofz(-ul[m1]) - wofz(xl[m1])
        m2_ = ~upx & upu
        diff[m2_] = ph[m2_] * wofz(ul[m2_]) + wofz(-xl[m2_]) - 2.0 * np.exp(-xl[m2_] ** 2)
        out[rest] = diff / (a * xl)

    if not np.all(np.isfinite(out)):
        raise EvaluationError("phi_function overflowed double precision")
    return out[0] if scalar else out


@dataclass(frozen=True)
class PumpSpec:
    """Degenerate Gaussian pump: carrier, amplitude width, peak power.

    sigma is the 1/e half-width of the *amplitude* envelope
    exp(-(omega - omega_p)^2 / sigma^2), in rad/fs.
    """

    omega_p: float
    sigma: float
    power: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ConfigError(f"pump sigma must be positive, got {self.sigma}")
        if self.power < 0:
            raise ConfigError(f"pump power must be nonnegative, got {self.power}")

    @classmethod
    def from_wavelength(cls, lambda_p_nm: float, fwhm_nm: float, power: float = 0.0):
        """Build from carrier wavelength and amplitude FWHM, both in nm."""
        return cls(
            omega_p=omega_from_wavelength(lambda_p_nm),
            sigma=pump_sigma_from_fwhm(fwhm_nm, lambda_p_nm),
            power=power,
        )

    def amplitude(self, omega):
        om = np.asarray(omega, dtype=float)
        return np.exp(-(((om - self.omega_p) / self.sigma) ** 2))


@dataclass(frozen=True)
class JsaGrid:
    """Joint spectral amplitude sampled on a rectangular frequency grid.

    amplitude[m, n] belongs to signal_axis[m], idler_axis[n] (rad/fs).  When
    normalized, sum |F|^2 d_signal d_idler = 1.
    """

    signal_axis: np.ndarray
    idler_axis: np.ndarray
    amplitude: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if self.amplitude.shape != (self.signal_axis.size, self.idler_axis.size):
            raise ConfigError(
                f"amplitude shape {self.amplitude.shape} does not match axes "
                f"({self.signal_axis.size}, {self.idler_axis.size})"
            )

    @property
    def d_signal(self) -> float:
        return float(np.mean(np.diff(self.signal_axis)))

    @property
    def d_idler(self) -> float:
        return float(np.mean(np.diff(self.idler_axis)))

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def normalize(self) -> "JsaGrid":
        norm = np.sqrt(np.sum(self.intensity()) * self.d_signal * self.d_idler)
        if norm == 0:
            raise EvaluationError("cannot normalize an identically zero amplitude")
        return JsaGrid(
            signal_axis=self.signal_axis,
            idler_axis=self.idler_axis,
            amplitude=self.amplitude / norm,
            normalized=True,
        )

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        """Singles spectra: intensity integrated over the other photon."""
        inten = self.intensity()
        return inten.sum(axis=1) * self.d_idler, inten.sum(axis=0) * self.d_signal


def _check_working_point(tau: TauSet, pump: PumpSpec):
    tol = 1e-9 * abs(tau.omega_p)
    if abs(tau.omega_s0 + tau.omega_i0 - 2.0 * tau.omega_p) > tol:
        raise ConfigError(
            "working point violates energy conservation: omega_s0 + omega_i0 "
            "must equal 2 omega_p"
        )
    if abs(pump.omega_p - tau.omega_p) > tol:
        raise ConfigError("pump carrier differs from the TauSet pump frequency")


def jsa_analytic(
    tau: TauSet,
    pump: PumpSpec,
    signal_axis,
    idler_axis,
    normalize: bool = True,
) -> JsaGrid:
    """Closed-form JSA of the quadratic mismatch model on a frequency grid.

    Valid wherever the TauSet's second-order expansion of the mismatch is;
    axes are absolute frequencies in rad/fs centred near the TauSet working
    point.
    """
    _check_working_point(tau, pump)
    signal_axis = np.asarray(signal_axis, dtype=float)
    idler_axis = np.asarray(idler_axis, dtype=float)
    nu_s = (signal_axis - tau.omega_s0)[:, np.newaxis]
    nu_i = (idler_axis - tau.omega_i0)[np.newaxis, :]
    nu = nu_s + nu_i
    beta = tau.beta(nu_s, nu_i)
    envelope = np.exp(-(nu**2) / (2.0 * pump.sigma**2))
    if tau.tau_p2 == 0.0:
        profile_factor = sinc_phase(beta) / np.sqrt(np.pi)
    else:
        a = 0.5 * tau.tau_p2 * pump.sigma**2
        radicand = (nu**2 - 4.0 * beta / tau.tau_p2).astype(complex)
        x = np.sqrt(radicand) / (np.sqrt(2.0) * pump.sigma)
        profile_factor = phi_function(a, x)
    grid = JsaGrid(
        signal_axis=signal_axis,
        idler_axis=idler_axis,
        amplitude=envelope * profile_factor,
    )
    return grid.normalize() if normalize else grid


def _pump_nodes(pump: PumpSpec, signal_axis, idler_axis, nodes: int):
    nu_lo = signal_axis.min() + idler_axis.min() - 2.0 * pump.omega_p
    nu_hi = signal_axis.max() + idler_axis.max() - 2.0 * pump.omega_p
    t_lo = 0.5 * nu_lo - 5.0 * pump.sigma
    t_hi = 0.5 * nu_hi + 5.0 * pump.sigma
    q, w = leggauss(nodes)
    t = 0.5 * (t_lo + t_hi) + 0.5 * (t_hi - t_lo) * q
    return pump.omega_p + t, 0.5 * (t_hi - t_lo) * w


def _jsa_numeric_raw(profile, pump, signal_axis, idler_axis, length_nm, gp, nodes):
    om_q, w_q = _pump_nodes(pump, signal_axis, idler_axis, nodes)
    k_q = profile.k(om_q)
    alpha_q = pump.amplitude(om_q)
    k_s = profile.k(signal_axis)
    k_i = profile.k(idler_axis)
    out = np.empty((signal_axis.size, idler_axis.size), dtype=complex)
    for m, om_s in enumerate(signal_axis):
        om_conj = (om_s + idler_axis)[:, np.newaxis] - om_q[np.newaxis, :]
        k_conj = profile.k(om_conj)
        alpha_conj = pump.amplitude(om_conj)
        dk = k_q[np.newaxis, :] + k_conj - k_s[m] - k_i[:, np.newaxis] - 2.0 * gp
        integrand = alpha_q[np.newaxis, :] * alpha_conj * sinc_phase(length_nm * dk)
        out[m, :] = integrand @ w_q
    return out


def jsa_numeric(
    profile: DispersionProfile,
    pump: PumpSpec,
    signal_axis,
    idler_axis,
    length_nm: float,
    gamma: float = 0.0,
    nodes: int = 201,
    check: bool = True,
    normalize: bool = True,
) -> JsaGrid:
    """JSA by direct quadrature of the pump integral against the full proxy.

    Gauss-Legendre nodes span the pump frequencies that contribute anywhere
    on the grid (all sum-frequency midpoints, padded by five pump widths).
    With check=True a coarse subgrid is re-evaluated at doubled node count
    and disagreement beyond 1e-6 of the peak raises EvaluationError.

    The pump peak power enters the mismatch through pump.power and gamma
    (1/(W km)).  Every frequency the integrand touches must lie inside the
    profile's query window.
    """
    if length_nm <= 0:
        raise ConfigError(f"fibre length must be positive, got {length_nm}")
    if nodes < 1:
        raise ConfigError(f"need at least one quadrature node, got {nodes}")
    signal_axis = np.asarray(signal_axis, dtype=float)
    idler_axis = np.asarray(idler_axis, dtype=float)
    gp = nonlinear_mismatch(gamma, pump.power)
    amp = _jsa_numeric_raw(profile, pump, signal_axis, idler_axis, length_nm, gp, nodes)
    if check and signal_axis.size >= 2 and idler_axis.size >= 2:
        step_s = max(1, signal_axis.size // 8)
        step_i = max(1, idler_axis.size // 8)
        sub_s = signal_axis[::step_s]
        sub_i = idler_axis[::step_i]
        coarse = amp[::step_s, ::step_i]
        fine = _jsa_numeric_raw(
            profile, pump, sub_s, sub_i, length_nm, gp, 2 * nodes + 1
        )
        err = np.max(np.abs(coarse - fine)) / np.max(np.abs(fine))
        if err > 1e-6:
            raise EvaluationError(
                f"pump integral not converged: subgrid drift {err:.2e} at "
                f"doubled node count; increase nodes"
            )
    grid = JsaGrid(signal_axis=signal_axis, idler_axis=idler_axis, amplitude=amp)
    return grid.normalize() if normalize else grid


def jsa_cw(
    profile: DispersionProfile,
    omega_p: float,
    omega_signal,
    length_nm: float,
    gamma: float = 0.0,
    power: float = 0.0,
):
    """Monochromatic-pump JSA along the energy-conservation line.

    Returns the complex amplitude sinc(L dk / 2) e^{i L dk / 2} at signal
    frequencies omega_signal with the idler pinned at 2 omega_p - omega_s;
    its squared magnitude is the CW singles spectrum.
    """
    if length_nm <= 0:
        raise ConfigError(f"fibre length must be positive, got {length_nm}")
    om_s = np.asarray(omega_signal, dtype=float)
    dk = delta_k_cw(profile, omega_p, om_s - omega_p, gamma=gamma, power=power)
    return sinc_phase(length_nm * dk)


@dataclass(frozen=True)
class SchmidtResult:
    """Schmidt decomposition summary of a JSA grid."""

    coefficients: np.ndarray
    purity: float
    schmidt_number: float


def schmidt_metrics(jsa: JsaGrid) -> SchmidtResult:
    """Schmidt coefficients, heralded-state purity and Schmidt number.

    Singular values of the amplitude grid, weighted by the cell area so the
    result is discretisation-consistent, give weights lambda_n; purity is
    sum lambda_n^2 and the Schmidt number its reciprocal.  Weights are
    renormalised to sum to one, so the input need not be normalized.
    """
    s = np.linalg.svd(jsa.amplitude, compute_uv=False)
    lam = s**2 * jsa.d_signal * jsa.d_idler
    total = lam.sum()
    if total == 0:
        raise EvaluationError("cannot decompose an identically zero amplitude")
    lam = lam / total
    purity = float(np.sum(lam**2))
    return SchmidtResult(
        coefficients=lam,
        purity=purity,
        schmidt_number=1.0 / purity,
    )
