import os

import pytest
from hypothesis import HealthCheck, settings

from ssgraph import corpus
from ssgraph.io import build_system

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SYSTEMS = os.path.join(ROOT, "systems")


def systems_path(name):
    return os.path.join(SYSTEMS, name)


@pytest.fixture
def e22():
    return build_system(corpus.e22("full"))


@pytest.fixture
def e22_trivial():
    return build_system(corpus.e22("none"))


@pytest.fixture
def e22_fixed():
    return build_system(corpus.e22("vertices"))


@pytest.fixture
def torus():
    return build_system(corpus.torus())


@pytest.fixture
def c2xc3():
    return build_system(corpus.cycle_product(2, 3))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for n, m in list(sys.modules.items()) if n.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
