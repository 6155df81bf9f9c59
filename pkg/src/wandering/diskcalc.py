"""Disks and their images under polynomials.

Over a non-archimedean field the image of a disk ``D(c, r)`` under a
polynomial ``f`` is again a disk, centred at ``f(c)`` with radius
``max_j |f_j| r^j`` where ``f_j`` are the Taylor coefficients of ``f`` at
``c``.  ``f`` is injective on the disk exactly when the ``j = 1`` term is the
strict maximum.  Everything here is exact valuation arithmetic.

Radii are carried as valuations (``radius_val``); a larger value is a
smaller disk.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .errors import PrecisionExhausted
from .puiseux import PuiseuxNumber
from .valgroup import ONE, AbsValue, as_exponent, exp_from_json, exp_to_json

__all__ = ["Disk", "taylor_shift", "image_radius", "image_disk", "is_bijective_on",
           "spherical_distance", "DenseChainPolynomial"]


@dataclass(frozen=True)
class Disk:
    """``{z : val(z - center) >= radius_val}`` (closed) or ``>`` (open)."""

    center: PuiseuxNumber
    radius_val: Fraction
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "radius_val", as_exponent(self.radius_val))

    @property
    def radius(self):
        return AbsValue(self.radius_val)

    def contains(self, z):
        d = z - self.center
        v = d.val()
        if v is None:
            if d.prec is None or d.prec >= self.radius_val + (0 if self.closed else 1):
                return True
            if self.closed and d.prec >= self.radius_val:
                return True
            raise PrecisionExhausted("membership undecided at the available precision")
        return v >= self.radius_val if self.closed else v > self.radius_val

    def contains_disk(self, other):
        """``other`` is a subset of ``self`` (for closed disks)."""
        if other.radius_val < self.radius_val:
            return False
        if not self.closed and other.closed and other.radius_val == self.radius_val:
            return False
        return self.contains(other.center)

    def to_json(self):
        return {"center": self.center.to_json(), "radiusVal": exp_to_json(self.radius_val),
                "closed": self.closed}

    @classmethod
    def from_json(cls, obj, field):
        return cls(PuiseuxNumber.from_json(obj["center"], field),
                   exp_from_json(obj["radiusVal"]), bool(obj["closed"]))

    def __repr__(self):
        kind = "D̄" if self.closed else "D"
        return f"{kind}(val r = {self.radius_val}; {self.center.format(3)})"


@dataclass(frozen=True)
class DenseChainPolynomial:
    """A polynomial given by its coefficient list, low degree first."""

    coeffs: tuple = dc_field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs or self.coeffs[-1].is_zero:
            raise ValueError("leading coefficient must be nonzero to its precision")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc


def _coeffs(f):
    return list(f.coeffs) if isinstance(f, DenseChainPolynomial) else list(f)


def taylor_shift(coeffs, c):
    """Coefficients of ``g(t) = f(c + t)`` (binomials reduced mod p)."""
    coeffs = _coeffs(coeffs)
    fld = c.field
    d = len(coeffs) - 1
    powers = [PuiseuxNumber.one(fld)]
    for _ in range(d):
        powers.append(powers[-1] * c)
    out = []
    for k in range(d + 1):
        acc = PuiseuxNumber.zero(fld)
        for j in range(k, d + 1):
            b = comb(j, k) % fld.p
            if b == 0 or coeffs[j].is_exact_zero:
                continue
            term = coeffs[j] * powers[j - k]
            acc = acc + (term if b == 1 else term.scale(fld.embed(b)))
        out.append(acc)
    return out


def _radius_terms(shifted, radius_val):
    """``[(j, val(|g_j| r^j) or None, floor)]`` for j >= 1."""
    terms = []
    for j, g in enumerate(shifted[1:], start=1):
        v = g.val()
        if v is not None:
            terms.append((j, v + j * radius_val, None))
        elif g.prec is not None:
            terms.append((j, None, g.prec + j * radius_val))
    return terms


def image_radius(shifted, radius_val):
    """Radius valuation of the image of ``D(c, r)`` given the Taylor data.

    Returns ``(radius_val, argmax_set)``.  Raises PrecisionExhausted when an
    unknown coefficient could still attain the maximum.
    """
    terms = _radius_terms(shifted, radius_val)
    known = [(v, j) for j, v, _ in terms if v is not None]
    if not known:
        raise PrecisionExhausted("no Taylor coefficient of positive degree is known")
    best = min(v for v, _ in known)
    for j, v, floor in terms:
        if v is None and floor <= best:
            raise PrecisionExhausted(
                f"Taylor coefficient of degree {j} is unknown where it could attain the maximum")
    return best, sorted(j for v, j in known if v == best)


def image_disk(f, D):
    shifted = taylor_shift(f, D.center)
    if all(g.is_zero for g in shifted[1:]):
        raise ValueError("polynomial is constant to the available precision")
    rv, _ = image_radius(shifted, D.radius_val)
    return Disk(shifted[0], rv, D.closed)


def is_bijective_on(f, D):
    shifted = taylor_shift(f, D.center)
    if all(g.is_zero for g in shifted[1:]):
        raise ValueError("polynomial is constant to the available precision")
    _, argmax = image_radius(shifted, D.radius_val)
    return argmax == [1]


def spherical_distance(x, y):
    """The chordal metric ``|x-y| / (max(|x|,1) max(|y|,1))``."""
    ax, ay = x.abs(), y.abs()
    if ax <= ONE and ay <= ONE:
        return (x - y).abs()
    if ax >= ONE and ay >= ONE:
        return (x.inverse() - y.inverse()).abs()
    return ONE
