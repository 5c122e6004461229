import pytest

from sfwm.materials import AIR, BISMUTH_BORATE, FUSED_SILICA, ScaledIndex
from sfwm.modes import FiberSpec
from sfwm.dispersion import build_profile

SILICA_CONTRAST = 0.0274


@pytest.fixture(scope="session")
def silica_core():
    return ScaledIndex(base=FUSED_SILICA, contrast=SILICA_CONTRAST)


@pytest.fixture(scope="session")
def fiber_1652(silica_core):
    return FiberSpec(core=silica_core, cladding=FUSED_SILICA, radius_um=1.652)


@pytest.fixture(scope="session")
def fiber_1644(silica_core):
    return FiberSpec(core=silica_core, cladding=FUSED_SILICA, radius_um=1.644)


@pytest.fixture(scope="session")
def fiber_bismuth():
    return FiberSpec(core=BISMUTH_BORATE, cladding=AIR, radius_um=0.205)


@pytest.fixture(scope="session")
def profile_1652(fiber_1652):
    return build_profile(fiber_1652, (1250.0, 2500.0))


@pytest.fixture(scope="session")
def profile_1644(fiber_1644):
    return build_profile(fiber_1644, (1300.0, 2000.0))


@pytest.fixture(scope="session")
def profile_bismuth(fiber_bismuth):
    return build_profile(fiber_bismuth, (450.0, 900.0))
