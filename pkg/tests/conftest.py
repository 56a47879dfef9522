import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from steinerq.terms import Prod, Var  # noqa: E402


def term_strategy(num_vars: int = 3, max_leaves: int = 9):
    leaves = st.integers(1, num_vars).map(Var)
    return st.recursive(leaves, lambda kids: st.builds(Prod, kids, kids), max_leaves=max_leaves)


@pytest.fixture(scope="session")
def fano():
    from steinerq.models import builtin_model

    return builtin_model(7)


@pytest.fixture(scope="session")
def sts9():
    from steinerq.models import builtin_model

    return builtin_model(9)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
