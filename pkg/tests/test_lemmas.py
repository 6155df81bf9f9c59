import pytest

from wandering.lemmas import SUITES, run_all, run_suite


@pytest.mark.parametrize("p,a0_val", [(2, -2), (3, -1), (2, -3)])
def test_suites_pass(p, a0_val):
    for r in run_all(60, seed=1, p=p, a0_val=a0_val):
        assert r.passed, r.first_failure


def test_injection_is_caught():
    for name in SUITES:
        r = run_suite(name, 3, seed=2, inject=True)
        assert r.failures == 1 and r.first_failure.startswith("sample 0")


def test_zero_samples_warns():
    with pytest.warns(UserWarning):
        rs = run_all(0)
    assert all(r.passed and r.samples == 0 for r in rs)


def test_seeded_runs_repeat():
    a = run_suite("repulsion", 20, seed=9)
    b = run_suite("repulsion", 20, seed=9)
    assert a == b
