"""Command-line front end producing deterministic text outputs.

Every subcommand reads one run file (--config PATH or --preset NAME),
writes its results under --out and echoes the fully resolved configuration
as '#' comment lines at the top of each file.  Outputs carry no timestamps
and all floats are printed with %.9g, so repeated runs are byte-identical.

Exit codes: 0 success, 2 configuration errors, 3 numerical failures,
4 I/O errors.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .biphoton import PumpSpec, jsa_analytic, jsa_numeric, schmidt_metrics
from .config import RunConfig, ResolvedPump, load_config, load_preset, resolve_pump
from .dispersion import (
    build_profile,
    find_fgvm_points,
    tau_coefficients,
    theta_pm,
    zero_dispersion_wavelengths,
)
from .errors import ConfigError, EvaluationError, NumericsError
from .phasematching import (
    critical_power,
    delta_k_cw,
    fwhm,
    mi_sideband_detuning,
    pm_map,
    singles_spectrum,
    trace_contours,
)
from .units import wavelength_from_omega


def _f(x) -> str:
    return "%.9g" % float(x)


def _header(command: str, args, config: RunConfig, resolved=()) -> list[str]:
    lines = [f"# sfwm {command}", f"# version = {__version__}"]
    source = f"preset {args.preset}" if args.preset else f"config {args.config}"
    lines.append(f"# source = {source}")
    lines.append(f"# threads = {args.threads} (recorded; numerics run single-threaded)")
    lines.append(f"# seed = {args.seed} (recorded; no randomness is used)")
    for key, value in config.echo_items():
        lines.append(f"# {key} = {value}")
    for key, value in resolved:
        lines.append(f"# resolved.{key} = {value}")
    return lines


def _write_text(path: str, lines: list[str]):
    """Write atomically: a temporary file in place, then a rename."""
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def _out_path(args, config: RunConfig, name: str) -> str:
    out_dir = args.out if args.out is not None else config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _load(args) -> RunConfig:
    return load_preset(args.preset) if args.preset else load_config(args.config)


def _profile(config: RunConfig):
    return build_profile(
        config.fiber(), config.window_nm, samples=config.samples, degree=config.degree
    )


def _pump_resolution_echo(rp: ResolvedPump) -> list[tuple[str, str]]:
    out = [
        ("pump_wavelength_nm", _f(rp.lambda_nm)),
        ("pump_omega_rad_fs", _f(rp.omega_p)),
        ("pump_sigma_rad_fs", _f(rp.sigma)),
        ("pump_power_w", _f(rp.power)),
    ]
    if len(rp.powers) > 1:
        out.append(("pump_powers_w", " ".join(_f(p) for p in rp.powers)))
    if rp.p_star is not None:
        out.append(("critical_power_w", _f(rp.p_star)))
    if rp.gvm is not None:
        out.append(("gvm_pump_nm", _f(wavelength_from_omega(rp.gvm.omega_p))))
        out.append(("gvm_half_separation_rad_fs", _f(rp.gvm.delta)))
    return out


def _matched_delta(config: RunConfig, profile, rp: ResolvedPump) -> float:
    """Half-separation of the exactly matched pair at the resolved pump.

    At the critical power of an auto-gvm pump the loop has shrunk to the
    match itself, which a sign-change scan cannot see, so that case returns
    the match directly.  Otherwise the outermost root of the mismatch on
    (0, detuning_max] is used, preferring the root nearest the match when
    one is known.
    """
    if (
        rp.gvm is not None
        and config.pump_wavelength.auto
        and rp.p_star is not None
        and abs(rp.power - rp.p_star) <= 1e-9 * abs(rp.p_star)
    ):
        return rp.gvm.delta
    # The mismatch vanishes identically at delta = 0, so near the axis its
    # sign is fit noise; start the scan clear of that region.
    floor = max(1e-4, config.detuning_max / 4000.0)
    if floor >= config.detuning_max:
        raise ConfigError("grids.detuning_max_rad_fs is too small to scan")
    grid = np.linspace(floor, config.detuning_max, 4001)
    vals = delta_k_cw(profile, rp.omega_p, grid, gamma=config.gamma, power=rp.power)
    flips = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if flips.size == 0:
        raise EvaluationError(
            "no phase-matched signal/idler pair within grids.detuning_max_rad_fs "
            "at the resolved pump and power"
        )
    roots = [
        brentq(
            lambda d: float(
                delta_k_cw(profile, rp.omega_p, d, gamma=config.gamma, power=rp.power)
            ),
            grid[i],
            grid[i + 1],
        )
        for i in flips
    ]
    if rp.gvm is not None:
        return min(roots, key=lambda d: abs(d - rp.gvm.delta))
    return max(roots)


def _signal_axis(config: RunConfig, profile, omega_p: float) -> np.ndarray:
    """Signal frequencies whose energy-matched idler also stays in window."""
    lo, hi = profile.query_window
    s_lo = max(lo, 2.0 * omega_p - hi)
    s_hi = min(hi, 2.0 * omega_p - lo)
    if not s_lo < s_hi:
        raise EvaluationError("pump frequency leaves no signal range in the window")
    return np.linspace(s_lo, s_hi, config.spectrum_points)


def _cmd_dispersion(args) -> int:
    config = _load(args)
    profile = _profile(config)
    zdws = zero_dispersion_wavelengths(profile)
    points = find_fgvm_points(profile)

    lo, hi = profile.query_window
    omega = np.linspace(lo, hi, config.map_points)
    lines = _header("dispersion", args, config)
    lines.append(f"# fit_residual_rad_nm = {_f(profile.residual)}")
    lines.append(
        "omega_rad_fs,wavelength_nm,k_rad_nm,k1_fs_nm,k2_fs2_nm,k3_fs3_nm"
    )
    cols = [profile.k_derivative(omega, n) for n in range(4)]
    for j, om in enumerate(omega):
        lines.append(
            ",".join(
                [_f(om), _f(wavelength_from_omega(om))]
                + [_f(c[j]) for c in cols]
            )
        )
    _write_text(_out_path(args, config, "dispersion.csv"), lines)

    lines = _header("dispersion", args, config)
    lines.append(
        "omega_p_rad_fs,delta_rad_fs,pump_nm,signal_nm,idler_nm,degenerate"
    )
    for p in points:
        lines.append(
            ",".join(
                [
                    _f(p.omega_p),
                    _f(p.delta),
                    _f(wavelength_from_omega(p.omega_p)),
                    _f(wavelength_from_omega(p.omega_s)),
                    _f(wavelength_from_omega(p.omega_i)),
                    "1" if p.degenerate else "0",
                ]
            )
        )
    _write_text(_out_path(args, config, "fgvm_points.csv"), lines)

    print(f"zero-dispersion wavelengths (nm): {' '.join(_f(z) for z in zdws)}")
    for p in points:
        if p.degenerate or p.delta < 0:
            continue
        msg = (
            f"group-velocity match: pump {_f(wavelength_from_omega(p.omega_p))} nm, "
            f"signal {_f(wavelength_from_omega(p.omega_s))} nm, "
            f"idler {_f(wavelength_from_omega(p.omega_i))} nm"
        )
        if config.gamma > 0:
            pc = critical_power(profile, p.omega_p, p.delta, config.gamma)
            msg += f", critical power {_f(pc)} W"
        print(msg)
    return 0


def _cmd_contours(args) -> int:
    config = _load(args)
    profile = _profile(config)
    rp = resolve_pump(config, profile)
    lo, hi = profile.query_window
    dmax = config.detuning_max
    if hi - lo <= 2.0 * dmax:
        raise ConfigError(
            "grids.detuning_max_rad_fs leaves no pump range inside the window"
        )
    pump_axis = np.linspace(lo + dmax, hi - dmax, config.map_points)
    det_axis = np.linspace(-dmax, dmax, config.map_points)

    lines = _header("contours", args, config, _pump_resolution_echo(rp))
    lines.append("power_w,contour_index,closed,omega_p_rad_fs,delta_rad_fs")
    for power in rp.powers:
        pm = pm_map(profile, pump_axis, det_axis, gamma=config.gamma, power=power)
        contours = trace_contours(pm)
        closed = sum(1 for c in contours if c.closed)
        for idx, contour in enumerate(contours):
            for op, dd in contour.points:
                lines.append(
                    ",".join(
                        [_f(power), str(idx), "1" if contour.closed else "0",
                         _f(op), _f(dd)]
                    )
                )
        print(
            f"P = {_f(power)} W: {len(contours)} contour(s), {closed} closed"
        )
    _write_text(_out_path(args, config, "contours.csv"), lines)
    return 0


def _cmd_spectrum(args) -> int:
    config = _load(args)
    profile = _profile(config)
    rp = resolve_pump(config, profile)
    axis = _signal_axis(config, profile, rp.omega_p)
    spectrum = singles_spectrum(
        profile,
        rp.omega_p,
        axis,
        config.length_nm,
        gamma=config.gamma,
        power=rp.power,
    )
    resolved = _pump_resolution_echo(rp)
    width_note = None
    try:
        width = fwhm(axis, spectrum)
        lam = wavelength_from_omega(axis)
        width_nm = abs(fwhm(lam[::-1], spectrum[::-1]))
        resolved.append(("fwhm_rad_fs", _f(width)))
        resolved.append(("fwhm_nm", _f(width_nm)))
    except EvaluationError as exc:
        width_note = str(exc)
        resolved.append(("fwhm_rad_fs", "unresolved"))

    lines = _header("spectrum", args, config, resolved)
    lines.append("omega_s_rad_fs,wavelength_nm,intensity")
    for om, value in zip(axis, spectrum):
        lines.append(",".join([_f(om), _f(wavelength_from_omega(om)), _f(value)]))
    _write_text(_out_path(args, config, "spectrum.csv"), lines)

    if width_note is None:
        print(f"singles spectrum FWHM: {_f(width)} rad/fs ({_f(width_nm)} nm)")
    else:
        print(f"singles spectrum FWHM unresolved: {width_note}")
    return 0


def _jsa_grid(config: RunConfig, profile, rp: ResolvedPump, points: int):
    delta0 = _matched_delta(config, profile, rp)
    s_axis = np.linspace(
        rp.omega_p + delta0 - config.jsa_span,
        rp.omega_p + delta0 + config.jsa_span,
        points,
    )
    i_axis = np.linspace(
        rp.omega_p - delta0 - config.jsa_span,
        rp.omega_p - delta0 + config.jsa_span,
        points,
    )
    pump = PumpSpec(omega_p=rp.omega_p, sigma=rp.sigma, power=rp.power)
    jsa = jsa_numeric(
        profile,
        pump,
        s_axis,
        i_axis,
        config.length_nm,
        gamma=config.gamma,
        nodes=config.jsa_nodes,
    )
    return jsa, delta0


def _jsa_resolution_echo(rp: ResolvedPump, delta0: float) -> list[tuple[str, str]]:
    return _pump_resolution_echo(rp) + [
        ("matched_half_separation_rad_fs", _f(delta0)),
        ("signal_center_nm", _f(wavelength_from_omega(rp.omega_p + delta0))),
        ("idler_center_nm", _f(wavelength_from_omega(rp.omega_p - delta0))),
    ]


def _cmd_jsa(args) -> int:
    config = _load(args)
    profile = _profile(config)
    rp = resolve_pump(config, profile)
    jsa, delta0 = _jsa_grid(config, profile, rp, config.jsa_points)

    lines = _header("jsa", args, config, _jsa_resolution_echo(rp, delta0))
    lines.append("omega_s_rad_fs,omega_i_rad_fs,re_amplitude,im_amplitude")
    for m, om_s in enumerate(jsa.signal_axis):
        row = jsa.amplitude[m]
        for n, om_i in enumerate(jsa.idler_axis):
            lines.append(
                ",".join([_f(om_s), _f(om_i), _f(row[n].real), _f(row[n].imag)])
            )
    _write_text(_out_path(args, config, "jsa.csv"), lines)

    peak = np.unravel_index(np.argmax(jsa.intensity()), jsa.amplitude.shape)
    print(
        f"JSA grid {config.jsa_points}x{config.jsa_points}; intensity peak at "
        f"signal {_f(wavelength_from_omega(jsa.signal_axis[peak[0]]))} nm, "
        f"idler {_f(wavelength_from_omega(jsa.idler_axis[peak[1]]))} nm"
    )
    return 0


def _cmd_purity(args) -> int:
    config = _load(args)
    profile = _profile(config)
    rp = resolve_pump(config, profile)
    jsa, delta0 = _jsa_grid(config, profile, rp, config.purity_points)
    result = schmidt_metrics(jsa)

    lines = _header("purity", args, config, _jsa_resolution_echo(rp, delta0))
    lines.append(f"purity = {_f(result.purity)}")
    lines.append(f"schmidt_number = {_f(result.schmidt_number)}")
    lines.append(f"grid_points = {config.purity_points}")
    for n, lam in enumerate(result.coefficients[:16]):
        lines.append(f"coefficient_{n:02d} = {_f(lam)}")
    _write_text(_out_path(args, config, "purity.txt"), lines)

    print(
        f"heralded purity {_f(result.purity)} "
        f"(Schmidt number {_f(result.schmidt_number)})"
    )
    return 0


def _cmd_design_report(args) -> int:
    config = _load(args)
    profile = _profile(config)
    zdws = zero_dispersion_wavelengths(profile)
    rp = resolve_pump(config, profile)
    delta0 = _matched_delta(config, profile, rp)
    om_s0 = rp.omega_p + delta0
    om_i0 = rp.omega_p - delta0
    tau = tau_coefficients(
        profile,
        rp.omega_p,
        om_s0,
        om_i0,
        config.length_nm,
        gamma=config.gamma,
        power=rp.power,
    )

    body = []
    body.append("fibre")
    body.append(f"  core = {config.core}")
    body.append(f"  cladding = {config.cladding}")
    body.append(f"  radius_um = {_f(config.radius_um)}")
    body.append(f"  length_m = {_f(config.length_m)}")
    body.append(f"  gamma_w_km = {_f(config.gamma)}")
    body.append(f"  fit_residual_rad_nm = {_f(profile.residual)}")
    body.append("dispersion")
    body.append(
        "  zero_dispersion_nm = " + (" ".join(_f(z) for z in zdws) or "none")
    )
    if rp.gvm is not None:
        body.append(f"  gvm_pump_nm = {_f(wavelength_from_omega(rp.gvm.omega_p))}")
        body.append(
            f"  gvm_signal_nm = {_f(wavelength_from_omega(rp.gvm.omega_s))}"
        )
        body.append(
            f"  gvm_idler_nm = {_f(wavelength_from_omega(rp.gvm.omega_i))}"
        )
    body.append("pump")
    body.append(f"  wavelength_nm = {_f(rp.lambda_nm)}")
    body.append(f"  sigma_rad_fs = {_f(rp.sigma)}")
    body.append(f"  power_w = {_f(rp.power)}")
    if rp.p_star is not None:
        body.append(f"  critical_power_w = {_f(rp.p_star)}")
    try:
        mi = mi_sideband_detuning(profile, rp.omega_p, config.gamma, rp.power)
        body.append(f"  mi_sideband_rad_fs = {_f(mi)}")
    except (ConfigError, EvaluationError):
        body.append("  mi_sideband_rad_fs = none")
    body.append("working point")
    body.append(f"  signal_nm = {_f(wavelength_from_omega(om_s0))}")
    body.append(f"  idler_nm = {_f(wavelength_from_omega(om_i0))}")
    body.append(f"  delta_k0 = {_f(tau.delta_k0)}")
    body.append(f"  tau_s1_fs = {_f(tau.tau_s1)}")
    body.append(f"  tau_i1_fs = {_f(tau.tau_i1)}")
    body.append(f"  tau_s2_fs2 = {_f(tau.tau_s2)}")
    body.append(f"  tau_i2_fs2 = {_f(tau.tau_i2)}")
    body.append(f"  tau_p2_fs2 = {_f(tau.tau_p2)}")
    # Below a millifemtosecond the walk-offs are solver roundoff, not physics,
    # and the angle they imply is arbitrary.
    if max(abs(tau.tau_s1), abs(tau.tau_i1)) < 1e-3:
        body.append("  stripe_angle_deg = undefined (no first-order walk-off)")
    else:
        body.append(f"  stripe_angle_deg = {_f(theta_pm(tau))}")

    axis = _signal_axis(config, profile, rp.omega_p)
    spectrum = singles_spectrum(
        profile, rp.omega_p, axis, config.length_nm,
        gamma=config.gamma, power=rp.power,
    )
    body.append("singles spectrum")
    try:
        lam = wavelength_from_omega(axis)
        body.append(f"  fwhm_rad_fs = {_f(fwhm(axis, spectrum))}")
        body.append(f"  fwhm_nm = {_f(abs(fwhm(lam[::-1], spectrum[::-1])))}")
    except EvaluationError:
        body.append("  fwhm_rad_fs = unresolved within the window")

    pump = PumpSpec(omega_p=rp.omega_p, sigma=rp.sigma, power=rp.power)
    s_axis = np.linspace(
        om_s0 - config.jsa_span, om_s0 + config.jsa_span, config.jsa_points
    )
    i_axis = np.linspace(
        om_i0 - config.jsa_span, om_i0 + config.jsa_span, config.jsa_points
    )
    result = schmidt_metrics(jsa_analytic(tau, pump, s_axis, i_axis))
    body.append("biphoton (quadratic model)")
    body.append(f"  purity = {_f(result.purity)}")
    body.append(f"  schmidt_number = {_f(result.schmidt_number)}")

    lines = _header("design-report", args, config, _jsa_resolution_echo(rp, delta0))
    lines.extend(body)
    _write_text(_out_path(args, config, "design_report.txt"), lines)
    print("\n".join(body))
    return 0


_COMMANDS = {
    "dispersion": (
        _cmd_dispersion,
        "fit the dispersion proxy; write k(omega) samples, zero-dispersion "
        "wavelengths and group-velocity matches",
    ),
    "contours": (
        _cmd_contours,
        "trace phase-matching contours in the pump/half-separation plane at "
        "each configured power",
    ),
    "spectrum": (
        _cmd_spectrum,
        "monochromatic-pump singles spectrum over the window, with its FWHM",
    ),
    "jsa": (
        _cmd_jsa,
        "joint spectral amplitude on a grid around the matched pair, by "
        "pump-envelope quadrature",
    ),
    "purity": (
        _cmd_purity,
        "Schmidt decomposition of the numeric JSA: heralded purity and "
        "Schmidt number",
    ),
    "design-report": (
        _cmd_design_report,
        "one-file summary: dispersion, matches, critical power, local "
        "mismatch expansion, spectral widths and model purity",
    ),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfwm",
        description="Design studies of spontaneous four-wave mixing in "
        "step-index fibres.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in _COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument("--config", metavar="PATH", help="run file to read")
        group.add_argument(
            "--preset", metavar="NAME", help="packaged run file (see README)"
        )
        sp.add_argument(
            "--out", metavar="DIR", default=None,
            help="output directory (default: [outputs] directory, else '.')",
        )
        sp.add_argument(
            "--threads", type=int, default=1, metavar="N",
            help="recorded in output headers; numerics are single-threaded",
        )
        sp.add_argument(
            "--seed", type=int, default=0, metavar="N",
            help="recorded in output headers; nothing here is random",
        )
        sp.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
