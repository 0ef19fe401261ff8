import os

import pytest

from fusion_amalgam.amalgam import build_context
from fusion_amalgam.core import AmalgamParameters

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def _matrix_cache(tmp_path_factory):
    path = tmp_path_factory.mktemp("matrix-cache")
    old = os.environ.get("FUSION_AMALGAM_CACHE")
    os.environ["FUSION_AMALGAM_CACHE"] = str(path)
    yield path
    if old is None:
        os.environ.pop("FUSION_AMALGAM_CACHE", None)
    else:
        os.environ["FUSION_AMALGAM_CACHE"] = old


@pytest.fixture(scope="session")
def params35():
    return AmalgamParameters.from_primes(3, 5)


@pytest.fixture(scope="session")
def params37():
    return AmalgamParameters.from_primes(3, 7)


@pytest.fixture(scope="session")
def ctx35(params35):
    return build_context(params35, seed=42)


@pytest.fixture(scope="session")
def ctx37(params37):
    return build_context(params37, seed=42)


@pytest.fixture(scope="session")
def ctx53():
    return build_context(AmalgamParameters.from_primes(5, 3), seed=42)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
