"""Truncated Puiseux series over F_(p^k).

A :class:`PuiseuxNumber` is a finite sum ``sum c_e T^e`` with rational
exponents ``e`` and nonzero residue coefficients, plus a precision cutoff
``P``: every exponent ``>= P`` is unknown (``O(T^P)``).  A cutoff of ``None``
marks an exact finite series such as ``0``, ``1`` or ``T^-2``.

Precision policy
----------------
Every primitive operation keeps only the exponents below
``val(result) + W`` where ``W`` is the relative window of the current
context (default 64, see :func:`window`).  Dropping terms lowers the
recorded precision accordingly, so precision loss is always explicit.
Results that would hold more than the term cap (default ``2**25``) raise
:class:`~wandering.errors.TermCapExceeded`.

Exponents are stored as int64 numerators over a per-number denominator
``den`` (the smallest one that works).  This keeps the kernels on plain
integer arrays while the public interface speaks :class:`fractions.Fraction`.
"""

import contextvars
import math
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InvertZero, PrecisionExhausted, TermCapExceeded
from .residue import ResidueField, get_field
from .valgroup import AbsValue, ZERO, as_exponent, exp_from_json, exp_to_json

_WINDOW = contextvars.ContextVar("wandering_window", default=Fraction(64))
_TERM_CAP = contextvars.ContextVar("wandering_term_cap", default=2 ** 25)

_EMPTY = np.empty(0, np.int64)
# exponents are int64 numerators over a common denominator
MAX_DEN = 1 << 40
_EMPTY.setflags(write=False)


def get_window():
    return _WINDOW.get()


def get_term_cap():
    return _TERM_CAP.get()


@contextmanager
def window(w=None, term_cap=None):
    """Temporarily change the relative precision window and term cap."""
    tokens = []
    if w is not None:
        w = as_exponent(w)
        if w <= 0:
            raise ValueError("window must be positive")
        tokens.append((_WINDOW, _WINDOW.set(w)))
    if term_cap is not None:
        tokens.append((_TERM_CAP, _TERM_CAP.set(int(term_cap))))
    try:
        yield
    finally:
        for var, tok in reversed(tokens):
            var.reset(tok)


def _pmin(a, b):
    """Minimum of two precisions where ``None`` means infinite."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


def _padd(a, b):
    if a is None or b is None:
        return None
    return a + b


def _ceil_grid(x, den):
    """Smallest integer n with n/den >= x (grid index of a cutoff)."""
    return math.ceil(x * den)


class PuiseuxNumber:
    """Immutable truncated Puiseux series; see the module docstring."""

    __slots__ = ("field", "den", "exps", "coefs", "prec", "_hash")

    def __init__(self, field, den, exps, coefs, prec):
        # Trusted constructor: inputs already canonical.  Use ``_build``.
        self.field = field
        self.den = den
        self.exps = exps
        self.coefs = coefs
        self.prec = prec
        self._hash = None

    # ------------------------------------------------------------------
    # construction
    @classmethod
    def _build(cls, field, den, exps, coefs, prec, apply_window=True):
        """Canonicalise: cut at precision and window, reduce ``den``."""
        exps = np.asarray(exps, dtype=np.int64)
        coefs = np.asarray(coefs, dtype=np.int64)
        if prec is not None:
            prec = as_exponent(prec)
            n = int(np.searchsorted(exps, _ceil_grid(prec, den), side="left"))
            if n < exps.size:
                exps, coefs = exps[:n], coefs[:n]
        if apply_window and exps.size:
            cut = Fraction(int(exps[0]), den) + _WINDOW.get()
            n = int(np.searchsorted(exps, _ceil_grid(cut, den), side="left"))
            if n < exps.size:
                exps, coefs = exps[:n], coefs[:n]
                prec = _pmin(prec, cut)
        if exps.size > _TERM_CAP.get():
            raise TermCapExceeded(
                f"{exps.size} terms exceed the cap {_TERM_CAP.get()}")
        if exps.size == 0:
            den = 1
            exps = _EMPTY
            coefs = _EMPTY
        elif den > 1:
            g = math.gcd(den, int(np.gcd.reduce(exps)))
            if g > 1:
                exps = exps // g
                den //= g
        return cls(field, den, exps, coefs, prec)

    @classmethod
    def zero(cls, field, prec=None):
        return cls(field, 1, _EMPTY, _EMPTY, None if prec is None else as_exponent(prec))

    @classmethod
    def constant(cls, field, c, prec=None):
        c = int(c)
        if c == 0:
            return cls.zero(field, prec)
        return cls._build(field, 1, [0], [c], prec, apply_window=False)

    @classmethod
    def one(cls, field):
        return cls.constant(field, 1)

    @classmethod
    def from_int(cls, field, n):
        return cls.constant(field, field.embed(n))

    @classmethod
    def monomial(cls, field, e, coef=1, prec="window"):
        """``coef * T^e``; default precision ``e + W``, ``prec=None`` for exact."""
        e = as_exponent(e)
        if prec == "window":
            prec = e + _WINDOW.get()
        if coef == 0:
            return cls.zero(field, prec)
        return cls._build(field, e.denominator, [e.numerator], [int(coef)], prec,
                          apply_window=False)

    @classmethod
    def from_terms(cls, field, terms, prec=None):
        """Build from ``{exponent: code}`` or an iterable of pairs."""
        items = terms.items() if isinstance(terms, dict) else terms
        acc = {}
        for e, c in items:
            e = as_exponent(e)
            c = int(c) % field.q if field.k == 1 else int(c)
            acc[e] = field.add(acc.get(e, 0), c)
        acc = {e: c for e, c in acc.items() if c != 0}
        if not acc:
            return cls.zero(field, prec)
        den = math.lcm(*(e.denominator for e in acc))
        es = sorted(acc)
        exps = np.array([e.numerator * (den // e.denominator) for e in es], dtype=np.int64)
        coefs = np.array([acc[e] for e in es], dtype=np.int64)
        return cls._build(field, den, exps, coefs, prec, apply_window=False)

    # ------------------------------------------------------------------
    # inspection
    def __len__(self):
        return int(self.exps.size)

    @property
    def is_exact(self):
        return self.prec is None

    @property
    def is_zero(self):
        """True when no term is known (exact zero or zero to precision)."""
        return self.exps.size == 0

    @property
    def is_exact_zero(self):
        return self.exps.size == 0 and self.prec is None

    def val(self):
        """Valuation as a Fraction, or ``None`` if no term is known."""
        if self.exps.size == 0:
            return None
        return Fraction(int(self.exps[0]), self.den)

    def val_floor(self):
        """Valuation if known, else the precision (a lower bound), else None."""
        v = self.val()
        return self.prec if v is None else v

    def abs(self):
        if self.exps.size == 0:
            return ZERO if self.prec is None else AbsValue(None, self.prec)
        return AbsValue(Fraction(int(self.exps[0]), self.den))

    def leading(self):
        """``(exponent, code)`` of the lowest term."""
        if self.exps.size == 0:
            raise PrecisionExhausted("no known terms")
        return Fraction(int(self.exps[0]), self.den), int(self.coefs[0])

    def terms(self):
        """List of ``(Fraction exponent, code)`` pairs."""
        d = self.den
        return [(Fraction(int(e), d), int(c)) for e, c in zip(self.exps, self.coefs)]

    def coefficient(self, e):
        e = as_exponent(e)
        if (e * self.den).denominator != 1:
            return 0
        i = int(np.searchsorted(self.exps, int(e * self.den)))
        if i < self.exps.size and self.exps[i] == e * self.den:
            return int(self.coefs[i])
        return 0

    def max_exponent(self):
        if self.exps.size == 0:
            return None
        return Fraction(int(self.exps[-1]), self.den)

    def relative_precision(self):
        v = self.val()
        if v is None or self.prec is None:
            return None
        return self.prec - v

    # ------------------------------------------------------------------
    # grid helpers
    def _on_grid(self, den):
        if den == self.den:
            return self.exps
        return self.exps * (den // self.den)

    def _coerce(self, other):
        if isinstance(other, PuiseuxNumber):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("numbers over different residue fields")
            return other
        if isinstance(other, (int, np.integer)):
            return PuiseuxNumber.from_int(self.field, int(other))
        return NotImplemented

    # ------------------------------------------------------------------
    # precision manipulation
    def truncate(self, prec):
        """Forget everything at or above ``prec``."""
        prec = _pmin(self.prec, as_exponent(prec))
        return PuiseuxNumber._build(self.field, self.den, self.exps, self.coefs, prec,
                                    apply_window=False)

    def exact(self):
        """The same finite sum regarded as an exact element."""
        return PuiseuxNumber(self.field, self.den, self.exps, self.coefs, None)

    def with_precision(self, prec):
        """Same terms with precision lowered to ``prec`` (never raised)."""
        return self.truncate(prec)

    def rewindow(self):
        """Apply the current window (useful after raising precision)."""
        return PuiseuxNumber._build(self.field, self.den, self.exps, self.coefs, self.prec)

    # ------------------------------------------------------------------
    # arithmetic
    def __neg__(self):
        if self.field.p == 2:
            return self
        return PuiseuxNumber(self.field, self.den, self.exps,
                             self.field.vneg(self.coefs), self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        den = math.lcm(self.den, other.den)
        e, c = kernels.add_terms(self._on_grid(den), self.coefs,
                                 other._on_grid(den), other.coefs, self.field)
        return PuiseuxNumber._build(self.field, den, e, c, _pmin(self.prec, other.prec))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mul(other, self.inverse())

    def __pow__(self, n):
        return int_pow(self, n)

    def shift(self, e):
        """Multiply by the exact monomial ``T^e``."""
        e = as_exponent(e)
        if self.exps.size == 0:
            return PuiseuxNumber.zero(self.field, _padd(self.prec, e))
        den = math.lcm(self.den, e.denominator)
        exps = self._on_grid(den) + e.numerator * (den // e.denominator)
        return PuiseuxNumber._build(self.field, den, exps, self.coefs,
                                    _padd(self.prec, e), apply_window=False)

    def scale(self, c):
        """Multiply by the residue constant with code ``c``."""
        c = int(c)
        if c == 0:
            return PuiseuxNumber.zero(self.field)
        if c == 1:
            return self
        return PuiseuxNumber(self.field, self.den, self.exps,
                             self.field.vscale(self.coefs, c), self.prec)

    def frobenius(self):
        """``x^p``, computed exactly by the Frobenius endomorphism."""
        f = self.field
        prec = None if self.prec is None else self.prec * f.p
        coefs = f.frob_table[self.coefs] if f.k > 1 else self.coefs
        if self.den % f.p == 0:
            return PuiseuxNumber._build(f, self.den // f.p, self.exps, coefs, prec)
        return PuiseuxNumber._build(f, self.den, self.exps * f.p, coefs, prec)

    def pth_root(self):
        """The unique ``y`` with ``y^p = x`` (Frobenius is bijective here)."""
        f = self.field
        prec = None if self.prec is None else self.prec / f.p
        coefs = f.frob_inv_table[self.coefs] if f.k > 1 else self.coefs
        return PuiseuxNumber._build(f, self.den * f.p, self.exps, coefs, prec,
                                    apply_window=False)

    def inverse(self):
        return invert(self)

    # ------------------------------------------------------------------
    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = PuiseuxNumber.from_int(self.field, int(other))
        if not isinstance(other, PuiseuxNumber):
            return NotImplemented
        return (self.field == other.field and self.prec == other.prec
                and self.den == other.den and np.array_equal(self.exps, other.exps)
                and np.array_equal(self.coefs, other.coefs))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.den, self.prec, self.exps.tobytes(), self.coefs.tobytes()))
        return self._hash

    def same_value(self, other):
        """True if the two numbers agree up to the smaller precision."""
        d = self - other
        return d.is_zero

    # ------------------------------------------------------------------
    # serialisation
    def to_json(self):
        f = self.field
        return {
            "precision": None if self.prec is None else exp_to_json(self.prec),
            "terms": [[exp_to_json(e), f.coeffs(c)] for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, obj, field):
        prec = obj.get("precision")
        prec = None if prec is None else exp_from_json(prec)
        terms = []
        last = None
        for e, c in obj["terms"]:
            e = exp_from_json(e)
            if last is not None and e <= last:
                raise ValueError("exponents must be strictly increasing")
            last = e
            code = field.element(c)
            if code == 0:
                raise ValueError("zero coefficient in serialised series")
            terms.append((e, code))
        if prec is not None and last is not None and last >= prec:
            raise ValueError("term at or beyond the precision cutoff")
        return cls.from_terms(field, terms, prec)

    def __repr__(self):
        return f"PuiseuxNumber({self.format()})"

    def format(self, max_terms=6):
        f = self.field
        parts = []
        for e, c in self.terms()[:max_terms]:
            cs = str(c) if f.k == 1 else str(f.coeffs(c))
            mono = "1" if e == 0 else f"T^({e})"
            parts.append(mono if cs == "1" else f"{cs}*{mono}")
        if len(self) > max_terms:
            parts.append(f"...({len(self) - max_terms} more)")
        if self.prec is not None:
            parts.append(f"O(T^({self.prec}))")
        return " + ".join(parts) if parts else "0"


# ----------------------------------------------------------------------
# module-level operations

def mul(x, y):
    """Product under the window policy."""
    if x.is_exact_zero or y.is_exact_zero:
        return PuiseuxNumber.zero(x.field)
    vx, vy = x.val_floor(), y.val_floor()
    prec = _pmin(_padd(x.prec, vy), _padd(y.prec, vx))
    if x.is_zero or y.is_zero:
        return PuiseuxNumber.zero(x.field, prec)
    den = math.lcm(x.den, y.den)
    if den > MAX_DEN:
        raise PrecisionExhausted(f"exponent denominator {den} exceeds {MAX_DEN}")
    cap = vx + vy + _WINDOW.get()
    top = x.max_exponent() + y.max_exponent()
    if top >= cap:
        prec = _pmin(prec, cap)
    hi = _ceil_grid(prec, den) if prec is not None else int(x.exps[-1]) * (den // x.den) \
        + int(y.exps[-1]) * (den // y.den) + 1
    e, c = kernels.mul_terms(x._on_grid(den), x.coefs, y._on_grid(den), y.coefs,
                             hi, x.field)
    return PuiseuxNumber._build(x.field, den, e, c, prec)


def invert(x):
    """``1/x`` by leading-monomial division and Newton iteration."""
    if x.is_zero:
        if x.prec is None:
            raise InvertZero("inverse of exact zero")
        raise PrecisionExhausted("inverse of a number that is zero to its precision")
    v, c = x.leading()
    f = x.field
    cinv = f.inv(c)
    u = x.shift(-v).scale(cinv)            # 1 + (positive valuation terms)
    rel = u.prec if u.prec is not None else None
    if len(u) == 1 and rel is None:
        return PuiseuxNumber.monomial(f, -v, cinv, prec=None)
    target = _WINDOW.get() if rel is None else min(_WINDOW.get(), rel)
    one = PuiseuxNumber.one(f)
    y = one
    for _ in range(4 * max(1, math.ceil(math.log2(max(2, float(target))))) + 16):
        err = one - u * y
        lb = err.val_floor()
        if err.is_zero and (lb is None or lb >= target):
            break
        y = y + y * err
    else:  # pragma: no cover - quadratic convergence makes this unreachable
        raise PrecisionExhausted("inverse did not converge")
    y = y.truncate(target)
    return y.shift(-v).scale(cinv)


def int_pow(x, n):
    n = int(n)
    if n < 0:
        return int_pow(invert(x), -n)
    result = PuiseuxNumber.one(x.field)
    base = x
    p = x.field.p
    while n:
        n, r = divmod(n, p)
        for _ in range(r):
            result = result * base
        if n:
            base = base.frobenius()
    return result


def monomial(field, e, coef=1, prec="window"):
    return PuiseuxNumber.monomial(field, e, coef, prec)


def T(field, e=1):
    """Exact monomial ``T^e``."""
    return PuiseuxNumber.monomial(field, e, 1, prec=None)


def poly_eval(coeffs, z):
    """Horner evaluation of ``sum coeffs[j] z^j`` (low-to-high)."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


__all__ = ["PuiseuxNumber", "window", "get_window", "get_term_cap", "mul", "invert",
           "int_pow", "monomial", "T", "poly_eval", "ResidueField", "get_field"]
