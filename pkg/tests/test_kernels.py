"""The numba kernels and the numpy fallback must agree bit for bit."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wandering import kernels
from wandering.residue import get_field


def _terms(rng, n, span, q):
    e = np.unique(rng.integers(0, span, n)).astype(np.int64)
    c = rng.integers(1, q, e.size).astype(np.int64)
    return e, c


def _both(fn):
    old = kernels.backend()
    out = {}
    try:
        for name in ("numpy", "numba") if kernels.HAVE_NUMBA else ("numpy",):
            kernels.set_backend(name)
            out[name] = fn()
    finally:
        kernels.set_backend(old)
    return out


@given(st.sampled_from([(2, 1), (3, 1), (2, 2), (3, 2)]), st.integers(0, 2 ** 32),
       st.integers(1, 300), st.integers(1, 300))
def test_mul_and_add_agree(pk, seed, n1, n2):
    f = get_field(*pk)
    rng = np.random.default_rng(seed)
    e1, c1 = _terms(rng, n1, 600, f.q)
    e2, c2 = _terms(rng, n2, 600, f.q)
    hi = int(rng.integers(1, 1300))
    res = _both(lambda: kernels.mul_terms(e1, c1, e2, c2, hi, f, method="pairs"))
    adds = _both(lambda: kernels.add_terms(e1, c1, e2, c2, f))
    for r in (res, adds):
        vals = list(r.values())
        for v in vals[1:]:
            assert np.array_equal(v[0], vals[0][0]) and np.array_equal(v[1], vals[0][1])


def test_fft_matches_pairs():
    f = get_field(2)
    rng = np.random.default_rng(5)
    e1, c1 = _terms(rng, 3000, 4000, 2)
    e2, c2 = _terms(rng, 3000, 4000, 2)
    a = kernels.mul_terms(e1, c1, e2, c2, 6000, f, method="fft")
    b = kernels.mul_terms(e1, c1, e2, c2, 6000, f, method="pairs")
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_products_drop_cancelled_terms():
    f = get_field(2)
    e = np.array([0, 1], np.int64)
    c = np.array([1, 1], np.int64)
    out_e, out_c = kernels.mul_terms(e, c, e, c, 10, f, method="pairs")
    # (1 + T)^2 = 1 + T^2 in characteristic 2
    assert list(out_e) == [0, 2] and list(out_c) == [1, 1]


def test_set_backend_validates():
    with pytest.raises(ValueError):
        kernels.set_backend("cuda")
