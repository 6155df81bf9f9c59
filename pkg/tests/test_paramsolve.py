from fractions import Fraction

import numpy as np
import pytest

from wandering.errors import ExtensionRequired, NewtonStalled, TargetOutsideImage
from wandering.family import EntryStart, orbit_point
from wandering.paramsolve import (NewtonPolygon, newton_iteration_cap, puiseux_roots,
                                  solve_parameter)
from wandering.puiseux import PuiseuxNumber, T, poly_eval, window
from wandering.residue import get_field

F2 = get_field(2)
ZERO = PuiseuxNumber.zero(F2)
ONE = PuiseuxNumber.one(F2)


def test_double_root_of_z2_plus_T():
    roots = puiseux_roots([T(F2), ZERO, ONE])
    assert len(roots) == 1
    r = roots[0]
    assert r.multiplicity == 2 and r.value == T(F2, Fraction(1, 2))


def test_z2_plus_z():
    roots = puiseux_roots([ZERO, ONE, ONE])
    assert len(roots) == 2
    assert any(r.value.is_exact_zero for r in roots)
    assert any(r.value == ONE for r in roots)


def test_extension_required():
    with pytest.raises(ExtensionRequired) as exc:
        puiseux_roots([ONE, ONE, ONE])
    assert exc.value.k == 2
    roots = puiseux_roots([PuiseuxNumber.one(get_field(2, 2))] * 3)
    assert len(roots) == 2


def test_backward_step_polygon():
    """``phi_a(z) = w``: p small roots of the predicted size and one unit root."""
    a = T(F2, -2)
    m, j = 7, 3
    w = T(F2, 2 * (1 - Fraction(1, 2 ** (m - j - 1))))
    coeffs = [-w, ZERO, a, 1 - a]
    segs = NewtonPolygon.of(coeffs).segments()
    assert sorted((v, n) for v, n, _ in segs) == [(0, 1), (2 * (1 - Fraction(1, 2 ** (m - j))), 2)]
    with window(24):
        roots = puiseux_roots(coeffs)
    assert sum(r.multiplicity for r in roots) == 3
    assert sorted(r.value.val() for r in roots) == [0, Fraction(15, 8)]


def test_polygon_root_counts():
    rng = np.random.default_rng(3)
    for _ in range(20):
        cs = [T(F2, Fraction(int(rng.integers(-8, 8)), 4)) for _ in range(4)]
        segs = NewtonPolygon.of(cs).segments()
        assert sum(n for _, n, _ in segs) == 3
        slopes = [v for v, _, _ in segs]
        assert slopes == sorted(slopes, reverse=True)


def test_roots_are_roots():
    a = T(F2, -2) + T(F2, 1)
    w = 1 + T(F2, 5)
    with window(32):
        roots = puiseux_roots([-w, ZERO, a, 1 - a], valuation=0)
        assert len(roots) == 1 and roots[0].separated
        res = poly_eval([-w, ZERO, a, 1 - a], roots[0].value)
        assert res.val_floor() >= 30


def test_iteration_cap():
    assert newton_iteration_cap(64) == 4 * 6 + 16
    assert newton_iteration_cap(128) == 44


def test_solve_exact_hit():
    start = EntryStart(T(F2, -2), 0)
    a = T(F2, -2) + T(F2, 3)
    target = orbit_point(a, start, 3).value
    rep = solve_parameter(start, 3, target, a)
    assert rep.iterations == 0 and rep.root == a and rep.converged


def test_solve_linear():
    # Phi(a) = a / T^-1 = a T with target T^3
    start = EntryStart(T(F2, -1), 0)
    rep = solve_parameter(start, 0, T(F2, 3), PuiseuxNumber.zero(F2) + T(F2, 2) + T(F2, 5),
                          radius_val=0, scale_val=1)
    assert rep.root == T(F2, 2)


def test_target_outside_image():
    start = EntryStart(T(F2, -2), 7)
    a0 = T(F2, -2)
    with pytest.raises(TargetOutsideImage):
        solve_parameter(start, 12, T(F2, -1), a0, radius_val=8, scale_val=-8)


def test_stage_one_solve_and_scaled_isometry():
    """Block map of the first stage: ``|Phi(b1) - Phi(b2)| = |a|^(M-1) |b1 - b2|``."""
    a0 = T(F2, -2)
    start = EntryStart(a0, 7)
    with window(64):
        rep = solve_parameter(start, 12, ZERO, a0, radius_val=8, scale_val=-8)
        b = rep.root
        assert (b - a0).val() == 8
        vals = [v for v in rep.residual_vals if v is not None]
        assert vals == sorted(vals) and len(set(vals)) == len(vals)
        fresh = orbit_point(b, start, 12, with_derivative=False).value
        assert fresh.val_floor() >= rep.residual_vals[-1]
        rng = np.random.default_rng(0)
        for _ in range(10):
            b1 = a0 + T(F2, 8 + Fraction(int(rng.integers(0, 16)), 8))
            b2 = b1 + T(F2, 8 + Fraction(int(rng.integers(0, 32)), 8))
            d = (orbit_point(b1, start, 12, False).value
                 - orbit_point(b2, start, 12, False).value).val()
            assert d == (b1 - b2).val() - 8


def test_stalled_newton():
    a0 = T(F2, -2)
    with pytest.raises(NewtonStalled):
        solve_parameter(EntryStart(a0, 7), 12, ZERO, a0, max_iter=1)
