import pytest
from hypothesis import HealthCheck, settings

from strucdraw.frontend import fields_to_spec, parse_fields
from strucdraw.geometry import default_catalog
from strucdraw.ir import DrawingKind
from strucdraw.knowledge import load
from strucdraw.pipeline import ReplayProvider, load_templates

import golden

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def kb():
    return load()


@pytest.fixture(scope="session")
def templates():
    return load_templates()


@pytest.fixture(scope="session")
def replay():
    return ReplayProvider.bundled()


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def rc_spec():
    return fields_to_spec(parse_fields(golden.RC_FIELDS), DrawingKind.RC)


@pytest.fixture(scope="session")
def steel_spec():
    return fields_to_spec(parse_fields(golden.STEEL_FIELDS), DrawingKind.STEEL)


@pytest.fixture(scope="session")
def precast_spec():
    return fields_to_spec(parse_fields(golden.PRECAST_FIELDS), DrawingKind.PRECAST)


_SESSION_START = [0.0]


def pytest_sessionstart(session):
    import time

    _SESSION_START[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import sys
    import time

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
    elapsed = time.perf_counter() - _SESSION_START[0]
    verdict = "PASS" if elapsed < 60 else "FAIL"
    terminalreporter.write_line(f"{verdict} full test session in {elapsed:.1f} s (limit 60 s)")
