import pytest

from myller.altframe import extract_alternative
from myller.frenet import extract_frenet
from myller.presets import FIXTURE_NAMES, make_fixture

pytest_plugins = ()

ALL_FIXTURES = tuple(FIXTURE_NAMES)


@pytest.fixture(scope="session")
def fixtures():
    """The five reference fields at h = 1e-3, s in [0, 4]."""
    return {name: make_fixture(name) for name in ALL_FIXTURES}


@pytest.fixture(scope="session")
def extracted(fixtures):
    """Fully re-extracted (field, alt) pairs: the pipeline a curve file sees."""
    out = {}
    for name, fx in fixtures.items():
        field = extract_frenet(fx.curve)
        out[name] = (field, extract_alternative(field, field.tangent()))
    return out
