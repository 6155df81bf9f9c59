from fractions import Fraction

from wandering.backorbit import CHAIN_WINDOW, backward_chain, itinerary_pattern, phi_coeffs
from wandering.diskcalc import image_radius, taylor_shift
from wandering.family import phi
from wandering.puiseux import PuiseuxNumber, T, window
from wandering.residue import get_field

F2 = get_field(2)
A0 = T(F2, -2)


def test_pattern():
    assert itinerary_pattern([7, 11, 15], [5, 9, 13], 2) == "0" * 7 + "1" * 5 + "0" * 11 \
        + "1" * 9 + "0" * 15
    assert itinerary_pattern([7], [5], 0) == "0" * 7


def test_chain_to_one_follows_closed_form():
    chain = backward_chain(A0, PuiseuxNumber.one(F2), 7, "0" * 7)
    assert [c.value.val() for c in chain[:7]] == [2 * (1 - Fraction(1, 2 ** (7 - j)))
                                                 for j in range(7)]
    assert chain[7].value == PuiseuxNumber.one(F2) and chain[7].radius_val is None


def _links_hold(a, chain):
    with window(CHAIN_WINDOW):
        for lo, hi in zip(chain, chain[1:]):
            z, s = lo.value.exact(), lo.radius_val
            g = taylor_shift(phi_coeffs(a), z)
            rv, _ = image_radius(g, s)
            # the image of D(z, s) is D(phi(z), rv); it must contain the next disk
            nxt = hi.value
            need = nxt.prec
            assert need is None or rv <= need
            gap = (phi(a, z) - nxt.exact()).val_floor()
            assert gap is None or gap >= rv


def test_links_cover_next_disk():
    a = A0 + T(F2, 8) + T(F2, Fraction(39, 4))
    target = 1 + T(F2, 10)
    pattern = "0" * 7 + "1" * 5 + "0" * 11
    chain = backward_chain(a, target, 20, pattern)
    _links_hold(a, chain)
    assert [c.symbol for c in chain[:20]] == list(pattern[:20])
    for c in chain[:20]:
        sym = "0" if c.value.val() > 0 else "1"
        assert sym == c.symbol
        assert c.radius_val > (c.value.val() if sym == "0" else (c.value - 1).val())


def test_p3_chain():
    f = get_field(3)
    a = T(f, -1)
    chain = backward_chain(a, PuiseuxNumber.one(f), 4, "0000")
    assert [c.value.val() for c in chain[:4]] == [Fraction(1, 2) * (1 - Fraction(1, 3 ** (4 - j)))
                                                 for j in range(4)]
