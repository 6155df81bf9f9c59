"""Valuations and absolute values.

Absolute values are written multiplicatively in formulas but computed
additively: ``|x| = 2**(-val(x))`` with ``val(T) = 1``.  A larger valuation
means a *smaller* absolute value.  Exponents are :class:`fractions.Fraction`
instances, which are already reduced with the sign on the numerator, so they
serve directly as the rational-exponent type.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ZeroToNegativePower

__all__ = ["Fraction", "as_exponent", "AbsValue", "ZERO", "ONE", "finite",
           "mul", "max_abs", "pow", "exp_to_json", "exp_from_json"]


def as_exponent(e):
    """Coerce ints, strings like ``"-1/2"`` and Fractions to a Fraction."""
    if isinstance(e, Fraction):
        return e
    if isinstance(e, float):
        raise TypeError("floating exponents are not allowed")
    return Fraction(e)


@dataclass(frozen=True, order=False)
class AbsValue:
    """An absolute value ``2**(-val)``, or zero when ``val is None``.

    ``floor`` is only set for a *zero-to-precision* value: nothing is known
    except that the valuation is at least ``floor``.  Exact zero has
    ``val is None`` and ``floor is None``.
    """

    val: Fraction | None
    floor: Fraction | None = None

    def __post_init__(self):
        if self.val is not None:
            object.__setattr__(self, "val", as_exponent(self.val))
        if self.floor is not None:
            object.__setattr__(self, "floor", as_exponent(self.floor))

    @property
    def is_zero(self):
        return self.val is None

    @property
    def is_exact_zero(self):
        return self.val is None and self.floor is None

    @property
    def zero_to_precision(self):
        return self.val is None and self.floor is not None

    def _key(self):
        # ordering key on absolute values: zero is the smallest
        return (0, 0) if self.val is None else (1, -self.val)

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    def __eq__(self, other):
        if not isinstance(other, AbsValue):
            return NotImplemented
        return self.val == other.val

    def __hash__(self):
        return hash(self.val)

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return mul(self, pow(other, -1))

    def __pow__(self, e):
        return pow(self, e)

    def __repr__(self):
        if self.val is None:
            return "Zero" if self.floor is None else f"Zero(val>={self.floor})"
        return f"Finite({self.val})"

    def to_json(self):
        return None if self.val is None else exp_to_json(self.val)


ZERO = AbsValue(None)
ONE = AbsValue(Fraction(0))


def finite(v):
    return AbsValue(as_exponent(v))


def mul(a, b):
    if a.val is None or b.val is None:
        return ZERO
    return AbsValue(a.val + b.val)


def max_abs(a, b):
    if a.val is None:
        return b
    if b.val is None:
        return a
    return a if a.val <= b.val else b


def pow(a, e):
    e = as_exponent(e)
    if a.val is None:
        if e < 0:
            raise ZeroToNegativePower(f"0 ** {e}")
        return ZERO if e > 0 else ONE
    return AbsValue(a.val * e)


def exp_to_json(e):
    e = as_exponent(e)
    return {"num": e.numerator, "den": e.denominator}


def exp_from_json(obj):
    den = int(obj["den"])
    if den <= 0:
        raise ValueError("exponent denominator must be positive")
    e = Fraction(int(obj["num"]), den)
    if e.denominator != den:
        raise ValueError("exponent is not in lowest terms")
    return e
