import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    """Keeps computed grids out of the package directory."""
    path = tmp_path_factory.mktemp("levelone-data")
    os.environ["LEVELONE_DATA_DIR"] = str(path)
    return path


@pytest.fixture(scope="session")
def tables(cache_dir):
    from levelone import pipeline
    return pipeline.build_tables(cache_dir=cache_dir)


_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance_log():
    """criterion number -> one PASS/FAIL line, repeated in the terminal summary."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
