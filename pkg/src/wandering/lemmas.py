"""Seeded sampling suites for the local lemmas about ``phi_a``.

Each suite draws random inputs from its hypothesis region, evaluates both
sides with series arithmetic and compares valuations exactly.

* ``image_radius``: the Taylor-formula radius of ``phi_a(D(c, r))`` equals
  the largest ``|phi_a(x) - phi_a(c)|`` over monomial probes ``x = c + u T^e``.
  Probes use every unit of a residue field with more than ``p + 1``
  elements, so the top-order residue polynomial cannot vanish on all of
  them and the maximum is attained.
* ``distortion_equality`` / ``distortion_bound``: the distortion estimate,
  with equality on the unit disk around 1.
* ``contraction``: the closed form for ``|phi^i(x)|`` near 0.
* ``repulsion``: ``|phi^i(x) - 1| = |a|^i |x - 1|`` near 1.
"""

from dataclasses import dataclass
from fractions import Fraction
import warnings

import numpy as np

from .backorbit import phi_coeffs
from .diskcalc import image_radius, taylor_shift
from .family import derive_constants, distortion_bound, orbit_values, phi, shrdisk_predict
from .puiseux import PuiseuxNumber, window
from .residue import get_field
from .valgroup import AbsValue

__all__ = ["SuiteResult", "random_unit", "SUITES", "run_suite", "run_all"]


@dataclass
class SuiteResult:
    name: str
    samples: int
    failures: int
    first_failure: str = None

    @property
    def passed(self):
        return self.failures == 0

    def to_json(self):
        return {"name": self.name, "samples": self.samples, "failures": self.failures,
                "firstFailure": self.first_failure, "pass": self.passed}


def random_unit(field, rng, terms=3, den=4):
    """A unit ``c_0 + sum c_k T^(k/den)`` with random residue coefficients."""
    pairs = [(Fraction(0), field.random_element(rng, nonzero=True))]
    for k in range(1, terms + 1):
        c = field.random_element(rng)
        if c:
            pairs.append((Fraction(k, den), c))
    return PuiseuxNumber.from_terms(field, pairs)


def _rand_exp(rng, lo, hi, den=8):
    """A random exponent in ``[lo, hi]`` on the grid ``1/den``."""
    a, b = int(np.ceil(lo * den)), int(np.floor(hi * den))
    return Fraction(int(rng.integers(a, b + 1)), den)


def _rand_param(field, rng, a0_val):
    return random_unit(field, rng).shift(a0_val)


# ----------------------------------------------------------------------
# suites; each returns None on success or a description of the failure

def _image_radius(rng, p, a0_val, inject):
    f = get_field(p, 2)
    a = _rand_param(f, rng, a0_val)
    c = random_unit(f, rng).shift(_rand_exp(rng, -1, 3))
    r = _rand_exp(rng, -1, 4)
    g = taylor_shift(phi_coeffs(a), c)
    predicted, _ = image_radius(g, r)
    fc = phi(a, c)
    units = [u for u in range(1, f.q)]
    best = None
    for e in (r, r + Fraction(1, 4), r + 1):
        for u in units:
            x = c + PuiseuxNumber.monomial(f, e, u, prec=None)
            v = (phi(a, x) - fc).val()
            if v is not None and v < predicted:
                return f"probe at {e} beats the image radius {predicted}"
            best = v if best is None or (v is not None and v < best) else best
    if inject:
        predicted += 1
    if best != predicted:
        return f"probe maximum {best} != image radius {predicted}"
    return None


def _near_one(f, rng, lo, hi):
    return 1 + random_unit(f, rng).shift(_rand_exp(rng, lo, hi))


def _distortion_equality(rng, p, a0_val, inject):
    f = get_field(p)
    a = _rand_param(f, rng, a0_val)
    y1 = _near_one(f, rng, Fraction(1, 8), 6)
    y2 = _near_one(f, rng, Fraction(1, 8), 6)
    d = (y1 - y2).val()
    if d is None:
        return None
    got = (phi(a, y1) - phi(a, y2)).val()
    want = d + a.val() + (1 if inject else 0)
    if got != want:
        return f"|phi(y1) - phi(y2)| has valuation {got}, expected {want}"
    return None


def _distortion_bound(rng, p, a0_val, inject):
    f = get_field(p)
    a = _rand_param(f, rng, a0_val)
    pick = rng.integers(0, 3)
    if pick == 0:
        y1, y2 = (random_unit(f, rng).shift(_rand_exp(rng, 0, 3)) for _ in range(2))
    elif pick == 1:
        y1 = random_unit(f, rng).shift(_rand_exp(rng, 0, 2))
        y2 = y1 + random_unit(f, rng).shift(_rand_exp(rng, 0, 4))
    else:
        y1, y2 = _near_one(f, rng, Fraction(1, 8), 4), _near_one(f, rng, Fraction(1, 8), 4)
    if y1.val() > y2.val():
        y1, y2 = y2, y1
    bound = distortion_bound(a, y1, y2)
    actual = (phi(a, y1) - phi(a, y2)).abs()
    if inject:
        bound = bound * AbsValue(Fraction(1000))
    if not actual <= bound:
        return f"difference {actual} exceeds the bound {bound}"
    return None


def _contraction(rng, p, a0_val, inject):
    f = get_field(p)
    a = _rand_param(f, rng, a0_val)
    consts = derive_constants(a, p)
    m = int(rng.integers(1, 6))
    vR = consts.R.val
    # R < |x| <= R^(1 - p^-m)  <=>  vR (1 - p^-m) <= val x < vR
    lo = vR * (1 - Fraction(1, p ** m))
    v = lo + (vR - lo) * Fraction(int(rng.integers(0, 8)), 8)
    x = random_unit(f, rng).shift(v)
    vals = orbit_values(a, x, m)
    for i in range(m + 1):
        point, _ = shrdisk_predict(consts, m, x.abs(), i)
        want = point.val + (1 if inject and i == m else 0)
        if vals[i].val() != want:
            return f"step {i}: valuation {vals[i].val()}, closed form {want}"
    return None


def _repulsion(rng, p, a0_val, inject):
    f = get_field(p)
    a = _rand_param(f, rng, a0_val)
    alpha = -a.val()
    M = int(rng.integers(1, 7))
    x = _near_one(f, rng, alpha * M, alpha * M + 4)
    d0 = (x - 1).val()
    vals = orbit_values(a, x, M)
    for i in range(M + 1):
        want = d0 - i * alpha + (1 if inject and i == M else 0)
        if (vals[i] - 1).val() != want:
            return f"step {i}: val(z - 1) = {(vals[i] - 1).val()}, expected {want}"
    return None


SUITES = {
    "image_radius": _image_radius,
    "distortion_equality": _distortion_equality,
    "distortion_bound": _distortion_bound,
    "contraction": _contraction,
    "repulsion": _repulsion,
}


def run_suite(name, samples, seed=0, p=2, a0_val=Fraction(-2), inject=False, window_val=64):
    """Run one suite; ``inject`` corrupts the expected value of the first sample."""
    fn = SUITES[name]
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    failures, first = 0, None
    with window(window_val):
        for k in range(samples):
            msg = fn(rng, p, Fraction(a0_val), inject and k == 0)
            if msg is not None:
                failures += 1
                first = first or f"sample {k}: {msg}"
    return SuiteResult(name, samples, failures, first)


def run_all(samples, seed=0, p=2, a0_val=Fraction(-2), inject=False, names=None):
    if samples == 0:
        warnings.warn("no samples requested; every suite passes vacuously", stacklevel=2)
    return [run_suite(n, samples, seed, p, a0_val, inject) for n in (names or SUITES)]
