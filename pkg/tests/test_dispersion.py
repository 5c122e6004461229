import numpy as np
import pytest

from sfwm.dispersion import (
    DispersionProfile,
    build_profile,
    find_fgvm_points,
    find_zdfs,
    tau_coefficients,
    theta_pm,
    zero_dispersion_wavelengths,
)
from sfwm.errors import ConfigError, EvaluationError, RangeError
from sfwm.materials import FUSED_SILICA
from sfwm.modes import FiberSpec
from sfwm.units import omega_from_wavelength, wavelength_from_omega

from oracles import bulk_silica_zdw_sympy
from synthetic import hermite_polynomial_profile, quadratic_profile


def test_fit_residual_tiny(profile_1652, profile_1644, profile_bismuth):
    for prof in (profile_1652, profile_1644, profile_bismuth):
        assert prof.residual < 1e-9


def test_profile_matches_quadratic_exactly():
    omega = np.linspace(1.0, 1.4, 60)
    k = 3e-3 + 4.9e-3 * (omega - 1.2) - 2e-5 * (omega - 1.2) ** 2
    prof = DispersionProfile.from_samples(omega, k, degree=4)
    assert prof.residual < 1e-17
    om = 1.17
    assert prof.k(om) == pytest.approx(
        3e-3 + 4.9e-3 * (om - 1.2) - 2e-5 * (om - 1.2) ** 2, rel=1e-12
    )
    assert prof.k_derivative(om, 1) == pytest.approx(
        4.9e-3 - 4e-5 * (om - 1.2), rel=1e-10
    )
    assert prof.k_derivative(om, 2) == pytest.approx(-4e-5, rel=1e-10)


def test_query_window_guard():
    omega = np.linspace(1.0, 1.4, 60)
    prof = DispersionProfile.from_samples(omega, 5e-3 + 1e-3 * omega, degree=4)
    lo, hi = prof.query_window
    assert lo == pytest.approx(1.0 + 0.02 * 0.4)
    assert hi == pytest.approx(1.4 - 0.02 * 0.4)
    prof.k(lo)
    prof.k(hi)
    with pytest.raises(RangeError):
        prof.k(1.0)
    with pytest.raises(RangeError):
        prof.k(1.5)
    with pytest.raises(ConfigError):
        prof.k_derivative(1.2, 4)


def test_from_samples_validation():
    with pytest.raises(ConfigError):
        DispersionProfile.from_samples(np.linspace(0, 1, 5), np.zeros(5), degree=16)
    with pytest.raises(ConfigError):
        DispersionProfile.from_samples(np.linspace(0, 1, 9), np.zeros(8), degree=4)


def test_bulk_silica_zero_dispersion(silica_core):
    # Homogeneous silica (no waveguide contribution): the classic material
    # zero-dispersion point, cross-checked against a symbolic solve.
    fiber = FiberSpec(core=FUSED_SILICA, cladding=FUSED_SILICA, radius_um=1.0)
    prof = build_profile(fiber, (1000.0, 1600.0))
    zdws = zero_dispersion_wavelengths(prof)
    assert zdws.size == 1
    oracle = bulk_silica_zdw_sympy()
    assert oracle == pytest.approx(1273.0, abs=5.0)
    assert zdws[0] == pytest.approx(oracle, abs=0.05)


def test_three_zdws_frozen(profile_1652):
    zdws = zero_dispersion_wavelengths(profile_1652)
    assert zdws.size == 3
    assert zdws[0] == pytest.approx(1434.0347, abs=0.05)
    assert zdws[1] == pytest.approx(1734.0387, abs=0.05)
    assert zdws[2] == pytest.approx(2224.0280, abs=0.05)


def test_two_zdws_frozen(profile_1644):
    zdws = zero_dispersion_wavelengths(profile_1644)
    assert zdws.size == 2
    assert zdws[0] == pytest.approx(1510.5770, abs=0.05)
    assert zdws[1] == pytest.approx(1596.5230, abs=0.05)


def test_fgvm_points_structure(profile_1644):
    pts = find_fgvm_points(profile_1644)
    deg = [p for p in pts if p.degenerate]
    pos = [p for p in pts if p.delta > 0]
    neg = [p for p in pts if p.delta < 0]
    assert len(deg) == 2 and len(pos) == 1 and len(neg) == 1
    zdfs = find_zdfs(profile_1644)
    for p, z in zip(deg, np.sort(zdfs)):
        assert p.omega_p == pytest.approx(z, abs=1e-12)
    p, n = pos[0], neg[0]
    assert p.omega_p == pytest.approx(n.omega_p, abs=1e-12)
    assert p.delta == pytest.approx(-n.delta, abs=1e-12)
    assert p.omega_s == pytest.approx(p.omega_p + p.delta)
    assert p.omega_i == pytest.approx(p.omega_p - p.delta)


def test_fgvm_frozen_values(profile_1644):
    pts = [p for p in find_fgvm_points(profile_1644) if p.delta > 0]
    p = pts[0]
    assert wavelength_from_omega(p.omega_p) == pytest.approx(1552.1032, abs=0.05)
    assert p.delta == pytest.approx(0.0581828, abs=1e-5)
    assert wavelength_from_omega(p.omega_s) == pytest.approx(1481.0967, abs=0.05)
    assert wavelength_from_omega(p.omega_i) == pytest.approx(1630.2609, abs=0.05)


def test_fgvm_group_velocities_equal(profile_1644):
    p = [q for q in find_fgvm_points(profile_1644) if q.delta > 0][0]
    k1 = profile_1644.k_derivative
    assert k1(p.omega_s, 1) == pytest.approx(k1(p.omega_p, 1), abs=1e-12)
    assert k1(p.omega_i, 1) == pytest.approx(k1(p.omega_p, 1), abs=1e-12)


def test_fgvm_bismuth_frozen(profile_bismuth):
    pts = [p for p in find_fgvm_points(profile_bismuth) if p.delta > 0]
    assert len(pts) == 1
    p = pts[0]
    assert wavelength_from_omega(p.omega_p) == pytest.approx(628.448, abs=0.05)
    assert wavelength_from_omega(p.omega_s) == pytest.approx(607.147, abs=0.05)
    assert wavelength_from_omega(p.omega_i) == pytest.approx(651.299, abs=0.05)


def test_no_nondegenerate_match_for_quadratic():
    # Constant curvature never equalises the three group velocities off axis.
    prof, _ = quadratic_profile(1.2, 0.06, 1e6, tau_p2=60.0)
    assert find_fgvm_points(prof) == []


def test_zdw_pair_merges_below_critical_radius(silica_core):
    # The close zero-dispersion pair of the 1.644 um strand coalesces and
    # vanishes when the core shrinks a little further.
    from sfwm.materials import FUSED_SILICA as clad

    def n_zdws(radius):
        fiber = FiberSpec(core=silica_core, cladding=clad, radius_um=radius)
        return find_zdfs(build_profile(fiber, (1300.0, 2000.0), samples=120)).size

    assert n_zdws(1.652) >= 2
    assert n_zdws(1.630) == 0
    lo, hi = 1.630, 1.652
    for _ in range(12):
        mid = 0.5 * (lo + hi)
        if n_zdws(mid) == 0:
            lo = mid
        else:
            hi = mid
    merge_radius = 0.5 * (lo + hi)
    assert merge_radius == pytest.approx(1.643, abs=0.005)


def test_tau_coefficients_against_construction():
    prof, exp = hermite_polynomial_profile(
        omega_p=1.2136,
        delta=0.0582,
        length_nm=5e8,
        tau_s1=130.0,
        tau_i1=-90.0,
        tau_s2=4.0e4,
        tau_i2=-2.5e4,
        tau_p2=6.0e4,
        d_value=2.0e-7,
    )
    tau = tau_coefficients(
        prof, exp["omega_p"], exp["omega_s0"], exp["omega_i0"], exp["length_nm"]
    )
    assert tau.tau_s1 == pytest.approx(exp["tau_s1"], rel=1e-8)
    assert tau.tau_i1 == pytest.approx(exp["tau_i1"], rel=1e-8)
    assert tau.tau_s2 == pytest.approx(exp["tau_s2"], rel=1e-8)
    assert tau.tau_i2 == pytest.approx(exp["tau_i2"], rel=1e-8)
    assert tau.tau_p2 == pytest.approx(exp["tau_p2"], rel=1e-8)
    assert tau.delta_k0 == pytest.approx(exp["delta_k0"], rel=1e-6)


def test_tau_nonlinear_term():
    prof, exp = quadratic_profile(1.2, 0.06, 1e6, tau_p2=60.0)
    base = tau_coefficients(prof, 1.2, 1.26, 1.14, 1e6)
    shifted = tau_coefficients(prof, 1.2, 1.26, 1.14, 1e6, gamma=70.0, power=1.0)
    # 2 gamma P L with gamma P = 70e-12 rad/nm over 1e6 nm.
    assert base.delta_k0 - shifted.delta_k0 == pytest.approx(2.0 * 70e-12 * 1e6, rel=1e-9)
    assert shifted.tau_s1 == base.tau_s1
    assert shifted.tau_p2 == base.tau_p2


def test_beta_quadratic_form():
    prof, exp = hermite_polynomial_profile(
        omega_p=1.2,
        delta=0.06,
        length_nm=1e8,
        tau_s1=50.0,
        tau_i1=80.0,
        tau_s2=1.0e4,
        tau_i2=2.0e4,
        tau_p2=-3.0e4,
    )
    tau = tau_coefficients(prof, 1.2, 1.26, 1.14, 1e8)
    nu_s, nu_i = 0.003, -0.002
    expected = (
        tau.delta_k0
        + tau.tau_s1 * nu_s
        + tau.tau_i1 * nu_i
        + tau.tau_s2 * nu_s**2
        + tau.tau_i2 * nu_i**2
        + tau.tau_p2 * nu_s * nu_i
    )
    assert tau.beta(nu_s, nu_i) == pytest.approx(expected, rel=1e-12)


def test_tau_length_validation():
    prof, _ = quadratic_profile(1.2, 0.06, 1e6, tau_p2=60.0)
    with pytest.raises(ConfigError):
        tau_coefficients(prof, 1.2, 1.26, 1.14, 0.0)


def _tau_with_walkoffs(tau_s1, tau_i1):
    prof, _ = hermite_polynomial_profile(
        omega_p=1.2,
        delta=0.06,
        length_nm=1e8,
        tau_s1=tau_s1,
        tau_i1=tau_i1,
        tau_s2=1e3,
        tau_i2=2e3,
        tau_p2=4e3,
    )
    return tau_coefficients(prof, 1.2, 1.26, 1.14, 1e8)


def test_theta_pm_cardinal_cases():
    assert theta_pm(_tau_with_walkoffs(0.0, 150.0)) == pytest.approx(0.0, abs=1e-4)
    assert abs(theta_pm(_tau_with_walkoffs(150.0, 0.0))) == pytest.approx(90.0, abs=1e-4)
    assert theta_pm(_tau_with_walkoffs(120.0, 120.0)) == pytest.approx(-45.0, abs=1e-4)
    th = theta_pm(_tau_with_walkoffs(-80.0, 45.0))
    assert -90.0 < th <= 90.0


def test_zdf_precision(profile_1644):
    zdfs = find_zdfs(profile_1644)
    for z in zdfs:
        assert abs(profile_1644.k_derivative(z, 2)) < 1e-16


def test_window_conversion():
    om = omega_from_wavelength(1552.1)
    assert wavelength_from_omega(om) == pytest.approx(1552.1, rel=1e-14)
