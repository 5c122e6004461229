"""Run-file parsing, validation order, presets and pump resolution."""

import pytest

from sfwm.config import (
    PowerSetting,
    WavelengthSetting,
    available_presets,
    load_preset,
    parse_config,
    resolve_pump,
)
from sfwm.errors import ConfigError, EvaluationError
from sfwm.materials import ConstantIndex, ScaledIndex, SellmeierModel

MINIMAL = """
[fiber]
core = scaled:silica:0.0274
cladding = silica
radius_um = 1.644
length_m = 0.5
gamma_w_km = 70.0

[pump]
wavelength_nm = auto-gvm
fwhm_nm = 2.0
power_w = auto-critical

[grids]
window_nm = 1300 2000
"""


def test_minimal_round_trip():
    config = parse_config(MINIMAL)
    assert config.core == "scaled:silica:0.0274"
    assert config.radius_um == 1.644
    assert config.length_nm == 5e8
    assert config.gamma == 70.0
    assert config.pump_wavelength.auto
    assert config.pump_power.critical_fraction == 1.0
    assert config.pump_powers == (config.pump_power,)
    assert config.window_nm == (1300.0, 2000.0)


def test_defaults_applied():
    config = parse_config(MINIMAL)
    assert config.samples == 200
    assert config.degree == 16
    assert config.map_points == 256
    assert config.detuning_max == 0.1
    assert config.spectrum_points == 2001
    assert config.jsa_points == 256
    assert config.jsa_span == 0.03
    assert config.jsa_nodes == 201
    assert config.purity_points == 512
    assert config.out_dir == "."


def test_fiber_materials_resolve():
    fiber = parse_config(MINIMAL).fiber()
    assert isinstance(fiber.core, ScaledIndex)
    assert fiber.core.contrast == 0.0274
    assert fiber.cladding.name == "silica"


@pytest.mark.parametrize(
    "cut,first_missing",
    [
        ("", "fiber.core"),
        ("[fiber]\ncladding = silica\n", "fiber.core"),
        (MINIMAL.split("[pump]")[0], "pump.wavelength_nm"),
        (MINIMAL.split("[grids]")[0], "grids.window_nm"),
    ],
)
def test_first_missing_field_named(cut, first_missing):
    with pytest.raises(ConfigError, match=first_missing.replace(".", r"\.")):
        parse_config(cut)


def test_missing_core_reported_before_later_gaps():
    text = MINIMAL.replace("core = scaled:silica:0.0274\n", "").replace(
        "fwhm_nm = 2.0\n", ""
    )
    with pytest.raises(ConfigError, match=r"fiber\.core"):
        parse_config(text)


def test_empty_value_counts_as_missing():
    text = MINIMAL.replace("radius_um = 1.644", "radius_um =")
    with pytest.raises(ConfigError, match=r"fiber\.radius_um"):
        parse_config(text)


@pytest.mark.parametrize(
    "field,bad",
    [
        ("radius_um = 1.644", "radius_um = -1"),
        ("length_m = 0.5", "length_m = 0"),
        ("gamma_w_km = 70.0", "gamma_w_km = -3"),
        ("fwhm_nm = 2.0", "fwhm_nm = 0"),
        ("window_nm = 1300 2000", "window_nm = 2000 1300"),
        ("window_nm = 1300 2000", "window_nm = 1300"),
        ("radius_um = 1.644", "radius_um = wide"),
    ],
)
def test_bad_values_rejected(field, bad):
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace(field, bad))


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match="unknown config section"):
        parse_config(MINIMAL + "\n[typo]\nx = 1\n")


def test_power_setting_forms():
    assert PowerSetting(watts=0.5).resolved(None) == 0.5
    auto = parse_config(MINIMAL.replace("auto-critical", "auto-critical:0.4"))
    assert auto.pump_power.critical_fraction == 0.4
    assert auto.pump_power.resolved(2.0) == pytest.approx(0.8)
    fixed = parse_config(MINIMAL.replace("auto-critical", "1.25"))
    assert fixed.pump_power.watts == 1.25
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("auto-critical", "-0.1"))
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("auto-critical", "lots"))
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("auto-critical", "auto-critical:-2"))


def test_power_list_parsed():
    text = MINIMAL.replace(
        "power_w = auto-critical",
        "power_w = auto-critical\npowers_w = 0.1 auto-critical:0.9 2.5",
    )
    config = parse_config(text)
    assert len(config.pump_powers) == 3
    assert config.pump_powers[0].watts == 0.1
    assert config.pump_powers[1].critical_fraction == 0.9


def test_wavelength_setting_forms():
    assert WavelengthSetting(nm=1550.0).describe() == "1550"
    explicit = parse_config(MINIMAL.replace("auto-gvm", "1552.5"))
    assert explicit.pump_wavelength.nm == 1552.5
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("auto-gvm", "0"))
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("auto-gvm", "somewhere"))


CUSTOM_MATERIALS = """
[material glass2]
kind = sellmeier
b = 1.0
c = 0.01
range_nm = 400 2200

[material lowclad]
kind = constant
value = 1.40

[fiber]
core = glass2
cladding = lowclad
radius_um = 1.0
length_m = 0.5
gamma_w_km = 10.0

[pump]
wavelength_nm = 1000
fwhm_nm = 1.0
power_w = 0.0

[grids]
window_nm = 700 1500
"""


def test_custom_material_sections():
    config = parse_config(CUSTOM_MATERIALS)
    assert set(config.materials) == {"glass2", "lowclad"}
    assert isinstance(config.materials["glass2"], SellmeierModel)
    assert isinstance(config.materials["lowclad"], ConstantIndex)
    fiber = config.fiber()
    assert fiber.core.name == "glass2"
    index = float(fiber.core.index(1000.0))
    assert index == pytest.approx((1 + 1.0 / (1 - 0.01)) ** 0.5, rel=1e-12)


@pytest.mark.parametrize(
    "old,new",
    [
        ("kind = sellmeier", "kind = tabulated"),
        ("b = 1.0", "b = 1.0 2.0"),
        ("range_nm = 400 2200", "range_nm = 2200 400"),
        ("value = 1.40", "value = -1"),
        ("[material glass2]", "[material]"),
    ],
)
def test_bad_material_sections(old, new):
    with pytest.raises(ConfigError):
        parse_config(CUSTOM_MATERIALS.replace(old, new))


def test_unknown_core_material_fails_at_parse():
    with pytest.raises(ConfigError, match="unknown material"):
        parse_config(MINIMAL.replace("scaled:silica:0.0274", "unobtainium"))


def test_presets_all_load():
    names = available_presets()
    assert names == ["fig1", "fig2b", "fig3", "fig4"]
    for name in names:
        config = load_preset(name)
        config.fiber()
    with pytest.raises(ConfigError, match="unknown preset"):
        load_preset("fig9")


def test_fig2b_power_ladder():
    config = load_preset("fig2b")
    fractions = [p.critical_fraction for p in config.pump_powers]
    assert fractions == [0.10, 0.40, 0.70, 0.90, 0.95]


def test_echo_items_ordered_and_complete():
    items = parse_config(MINIMAL).echo_items()
    keys = [k for k, _ in items]
    assert keys[0] == "fiber.core"
    assert "pump.power_w" in keys
    assert "grids.jsa_nodes" in keys
    assert len(keys) == len(set(keys))


def test_resolve_pump_auto_gvm(profile_1644):
    config = parse_config(MINIMAL)
    rp = resolve_pump(config, profile_1644)
    assert rp.lambda_nm == pytest.approx(1552.1032, abs=0.01)
    assert rp.p_star == pytest.approx(0.949625, rel=1e-4)
    assert rp.power == pytest.approx(rp.p_star)
    assert rp.powers == (rp.power,)
    assert rp.gvm is not None and rp.gvm.delta > 0


def test_resolve_pump_fraction_and_fixed(profile_1644):
    config = parse_config(MINIMAL.replace("auto-critical", "auto-critical:0.4"))
    rp = resolve_pump(config, profile_1644)
    assert rp.power == pytest.approx(0.4 * rp.p_star)
    config = parse_config(
        MINIMAL.replace("auto-gvm", "1540").replace("auto-critical", "0.7")
    )
    rp = resolve_pump(config, profile_1644)
    assert rp.lambda_nm == pytest.approx(1540.0)
    assert rp.power == 0.7
    assert rp.p_star is None and rp.gvm is None


def test_resolve_pump_needs_gamma_for_critical(profile_1644):
    config = parse_config(MINIMAL.replace("gamma_w_km = 70.0", "gamma_w_km = 0"))
    with pytest.raises(ConfigError, match="gamma"):
        resolve_pump(config, profile_1644)


def test_resolve_pump_without_match_raises():
    narrow = MINIMAL.replace("window_nm = 1300 2000", "window_nm = 1500 1600")
    narrow = narrow.replace("radius_um = 1.644", "radius_um = 1.652")
    config = parse_config(narrow)
    from sfwm.dispersion import build_profile

    profile = build_profile(config.fiber(), (1500, 1600), samples=60, degree=10)
    with pytest.raises(EvaluationError, match="match"):
        resolve_pump(config, profile)
