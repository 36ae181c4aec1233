import random

import pytest

from cartan235.families import contact_family


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def family():
    # shared by the Pansu and induced-field tests; 60 maps, fixed seed
    return contact_family(60, seed=7)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
