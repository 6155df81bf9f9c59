from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from wandering.constructor import RunConfig, construct
from wandering.puiseux import PuiseuxNumber
from wandering.residue import get_field

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F2():
    return get_field(2)


@pytest.fixture(scope="session")
def F3():
    return get_field(3)


@pytest.fixture(scope="session")
def desk_cert():
    """The p = 2 instance: a0 = T^-2, eps = S = 2^-8, two stages."""
    return construct(RunConfig(p=2, a0_val=Fraction(-2), eps_val=Fraction(8), stages=2))


exponents = st.fractions(min_value=-4, max_value=8, max_denominator=8)


@st.composite
def series(draw, p=2, min_terms=1, max_terms=6, exact=True):
    f = get_field(p)
    n = draw(st.integers(min_terms, max_terms))
    pairs = [(draw(exponents), draw(st.integers(1, p - 1))) for _ in range(n)]
    x = PuiseuxNumber.from_terms(f, pairs)
    if exact:
        return x
    return x.truncate(draw(st.fractions(min_value=9, max_value=20, max_denominator=4)))


@st.composite
def nonzero_series(draw, p=2, **kw):
    x = draw(series(p, **kw))
    while x.is_zero:
        x = draw(series(p, **kw))
    return x


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {note}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()
