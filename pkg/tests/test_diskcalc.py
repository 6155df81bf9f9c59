from fractions import Fraction

import numpy as np
import pytest

from wandering.backorbit import phi_coeffs
from wandering.diskcalc import (DenseChainPolynomial, Disk, image_disk, image_radius,
                                is_bijective_on, spherical_distance, taylor_shift)
from wandering.errors import PrecisionExhausted
from wandering.family import phi
from wandering.puiseux import PuiseuxNumber, T
from wandering.residue import get_field
from wandering.valgroup import ONE, ZERO, finite

F2 = get_field(2)
F4 = get_field(2, 2)


def poly(*cs, f=F2):
    return DenseChainPolynomial([c if isinstance(c, PuiseuxNumber) else
                                 PuiseuxNumber.constant(f, c) for c in cs])


def test_frobenius_squares_radius():
    c = T(F2, Fraction(1, 3)) + T(F2, 2)
    D = Disk(c, Fraction(5, 2))
    img = image_disk(poly(0, 0, 1), D)
    assert img.radius_val == 5
    assert img.center == c * c


def test_phi_preserves_disk_of_radius_R():
    a0 = T(F2, -2)
    img = image_disk(DenseChainPolynomial(phi_coeffs(a0)), Disk(PuiseuxNumber.zero(F2), 2))
    assert img.radius_val == 2 and img.center.is_exact_zero
    assert not is_bijective_on(DenseChainPolynomial(phi_coeffs(a0)),
                               Disk(PuiseuxNumber.zero(F2), 2))


def test_translation_is_isometry():
    D = Disk(T(F2, 3), Fraction(7, 4))
    img = image_disk(poly(1, 1), D)
    assert img.radius_val == Fraction(7, 4) and img.center == T(F2, 3) + 1


def test_bijectivity_examples():
    zero = PuiseuxNumber.zero(F2)
    assert not is_bijective_on(poly(0, 0, 1), Disk(zero, 0))
    assert is_bijective_on(DenseChainPolynomial([zero, T(F2, -5)]), Disk(T(F2, 1), 3))
    a = T(F2, -2) + T(F2, 1)
    for M in (1, 3, 6):
        assert is_bijective_on(DenseChainPolynomial(phi_coeffs(a)),
                               Disk(PuiseuxNumber.one(F2), 2 * M))


def test_unknown_coefficient_blocks_radius():
    g = [PuiseuxNumber.zero(F2), T(F2, 2), PuiseuxNumber.zero(F2, prec=1)]
    with pytest.raises(PrecisionExhausted):
        image_radius(g, 0)
    assert image_radius(g, 5) == (7, [1])


def test_membership_and_nesting():
    D = Disk(T(F2, 1), 3)
    assert D.contains(T(F2, 1) + T(F2, 3))
    assert not D.contains(T(F2, 1) + T(F2, 2))
    assert not Disk(T(F2, 1), 3, closed=False).contains(T(F2, 1) + T(F2, 3))
    small = Disk(T(F2, 1) + T(F2, 4), 5)
    assert D.contains_disk(small) and not small.contains_disk(D)
    with pytest.raises(PrecisionExhausted):
        D.contains(T(F2, 1) + PuiseuxNumber.zero(F2, prec=2))


def test_disk_json_roundtrip():
    D = Disk(T(F2, Fraction(-1, 2)) + 1, Fraction(9, 4), closed=False)
    assert Disk.from_json(D.to_json(), F2) == D


def test_spherical_distance_examples():
    assert spherical_distance(T(F2), T(F2, 2)) == finite(1)
    assert spherical_distance(T(F2, -1), T(F2)) == ONE
    x = T(F2, -3) + 1
    assert spherical_distance(x, x) == ZERO
    # both large: compare reciprocals
    assert spherical_distance(T(F2, -3), T(F2, -3) + 1) == finite(6)


def _random_unit(rng, f):
    pairs = [(0, int(rng.integers(1, f.q)))]
    pairs += [(Fraction(k, 4), int(rng.integers(0, f.q))) for k in range(1, 4)]
    return PuiseuxNumber.from_terms(f, pairs)


@pytest.mark.parametrize("seed", range(6))
def test_image_radius_against_probes(seed):
    """Over F_4 every unit is available, so some probe attains the maximum."""
    rng = np.random.default_rng(seed)
    a = _random_unit(rng, F4) * T(F4, -2)
    c = _random_unit(rng, F4) * T(F4, Fraction(int(rng.integers(-4, 16)), 4))
    r = Fraction(int(rng.integers(-4, 16)), 4)
    f = DenseChainPolynomial(phi_coeffs(a))
    img = image_disk(f, Disk(c, r))
    fc = phi(a, c)
    vals = []
    probes = [c + PuiseuxNumber.monomial(F4, r + Fraction(j, 16), u, prec=None)
              for j in range(70) for u in (1, 2, 3)]
    assert len(probes) >= 200
    for x in probes:
        v = (phi(a, x) - fc).val()
        assert v >= img.radius_val
        vals.append(v)
    assert min(vals) == img.radius_val
    # Lipschitz bound with constant s / r, equality when bijective
    bij = is_bijective_on(f, Disk(c, r))
    for x, y in zip(probes[::7], probes[3::7]):
        d = (x - y).val()
        got = (phi(a, x) - phi(a, y)).val()
        assert got >= d + img.radius_val - r
        if bij:
            assert got == d + img.radius_val - r


def test_taylor_shift_reconstructs_values():
    a = T(F2, -2) + T(F2, 3)
    c = T(F2, Fraction(1, 2)) + 1
    g = taylor_shift(phi_coeffs(a), c)
    t = T(F2, Fraction(5, 3))
    acc = PuiseuxNumber.zero(F2)
    for j, gj in enumerate(g):
        acc = acc + gj * t ** j
    assert (acc - phi(a, c + t)).is_zero
