from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=4))

ACCEPTANCE_LINES: list[str] = []


def trace_free_blocks(nonzero: bool = True):
    """Trace-free 2x2 rational blocks [[a, b], [c, -a]]."""
    blocks = st.tuples(rationals, rationals, rationals).map(lambda t: [[t[0], t[1]], [t[2], -t[0]]])
    if nonzero:
        blocks = blocks.filter(lambda m: any(x != 0 for row in m for x in row))
    return blocks


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def algebras():
    from segre_kit.parabolic import build_algebra

    cache = {}

    def get(n: int):
        if n not in cache:
            cache[n] = build_algebra(n)
        return cache[n]

    return get
