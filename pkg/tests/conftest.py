import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ufswindle.complexes import make_line, make_regular_tree
from ufswindle.product import ProductComplex

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def tree3():
    return make_regular_tree(3)


@pytest.fixture(scope="session")
def line():
    return make_line()


@pytest.fixture(scope="session")
def p2(tree3):
    return ProductComplex([tree3, tree3])


@pytest.fixture(scope="session")
def p3(tree3):
    return ProductComplex([tree3, tree3, tree3])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
