"""The finite residue field F_(p^k).

Elements are stored as integer *codes* ``c = sum(d_i * p**i)`` where
``d_0, ..., d_(k-1)`` are the coefficients of the element in the basis
``1, g, ..., g^(k-1)`` (``g`` a root of the modulus).  The JSON form is the
little-endian digit list.  Codes make coefficient arrays plain integer numpy
arrays, which is what the series kernels operate on.

Multiplication uses discrete log / antilog tables, which is why the field
size is capped (default ``2**16``); addition is digitwise mod ``p`` (XOR for
``p = 2``).
"""

from functools import lru_cache

import numpy as np

from .errors import DivisionByZero

DEFAULT_CAP = 2 ** 16


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- dense polynomials over F_p as little-endian int lists ---------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    while len(_trim(a)) >= len(m):
        shift = len(a) - len(m)
        f = a[-1] * inv_lead % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
    return a


def _is_irreducible(m, p):
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in range(p ** d):
            f = [(low // p ** i) % p for i in range(d)] + [1]
            if not _pmod(m, f, p):
                return False
    return True


def smallest_irreducible(p, k):
    """Monic irreducible of degree ``k`` with the smallest code of its low part."""
    if k == 1:
        return [0, 1]
    for low in range(p ** k):
        m = [(low // p ** i) % p for i in range(k)] + [1]
        if m[0] != 0 and _is_irreducible(m, p):
            return m
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class ResidueField:
    """F_(p^k) with the lexicographically smallest irreducible modulus."""

    def __init__(self, p, k=1, cap=DEFAULT_CAP):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if p ** k > cap:
            raise ValueError(f"field size {p}^{k} exceeds the cap {cap}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = smallest_irreducible(p, k)
        self._pw = np.array([p ** i for i in range(k)], dtype=np.int64)
        codes = np.arange(self.q, dtype=np.int64)
        self.digits = (codes[:, None] // self._pw[None, :]) % p
        self._build_tables()

    # -- construction helpers
    def _mulx(self, c):
        """Multiply a code by the generator g."""
        d = [int(x) for x in self.digits[c]]
        d = [0] + d
        top = d.pop()
        if top:
            d = [(d[i] - top * self.modulus[i]) % self.p for i in range(self.k)]
        return int(sum(x * self.p ** i for i, x in enumerate(d)))

    def _polymul_codes(self, a, b):
        p, k = self.p, self.k
        da = [int(x) for x in self.digits[a]]
        db = [int(x) for x in self.digits[b]]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        r = _pmod(prod, self.modulus, p) + [0] * k
        return int(sum(r[i] * p ** i for i in range(k)))

    def _build_tables(self):
        q = self.q
        order = q - 1
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        for g in range(1, q):
            x = 1
            seen = 0
            ok = True
            for e in range(order):
                if e > 0 and x == 1:
                    ok = False
                    break
                exp[e] = x
                x = self._polymul_codes(x, g)
                seen += 1
            if ok and x == 1:
                break
        else:  # pragma: no cover - every finite field has a generator
            raise RuntimeError("no primitive element found")
        self.generator = g
        exp[order:2 * order] = exp[:order]
        exp[2 * order] = exp[0]
        for e in range(order):
            log[exp[e]] = e
        self.exp_table = exp
        self.log_table = log
        frob = np.zeros(q, dtype=np.int64)
        frob[1:] = exp[(log[1:] * self.p) % order]
        self.frob_table = frob
        inv_frob = np.zeros(q, dtype=np.int64)
        inv_frob[frob] = np.arange(q)
        self.frob_inv_table = inv_frob

    # -- element conversion
    def element(self, coeffs):
        if isinstance(coeffs, (int, np.integer)):
            coeffs = [int(coeffs)] + [0] * (self.k - 1)
        coeffs = list(coeffs)
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        if any(not 0 <= int(c) < self.p for c in coeffs):
            raise ValueError("coefficients must lie in [0, p)")
        return int(sum(int(c) * self.p ** i for i, c in enumerate(coeffs)))

    def coeffs(self, c):
        return [int(x) for x in self.digits[int(c)]]

    def embed(self, n):
        """Image of the integer ``n`` in the prime field."""
        return int(n) % self.p

    # -- scalar arithmetic on codes
    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self._pw)

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return int(((-self.digits[a]) % self.p) @ self._pw)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        return int(self.exp_table[self.log_table[a] + self.log_table[b]])

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in the residue field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return int(self.exp_table[(self.q - 1 - self.log_table[a]) % (self.q - 1)])

    def power(self, a, n):
        if a == 0:
            if n < 0:
                raise DivisionByZero("0 to a negative power")
            return 1 if n == 0 else 0
        return int(self.exp_table[(self.log_table[a] * n) % (self.q - 1)])

    def frob(self, a):
        return int(self.frob_table[a])

    def frob_inv(self, a):
        return int(self.frob_inv_table[a])

    # -- vectorised arithmetic on code arrays
    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._pw

    def vneg(self, a):
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return ((-self.digits[a]) % self.p) @ self._pw

    def vmul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        la = self.log_table[a]
        lb = self.log_table[b]
        out = self.exp_table[np.where((la < 0) | (lb < 0), 0, la + lb)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vscale(self, a, c):
        return self.vmul(a, np.full_like(a, c))

    # -- polynomials over the residue field (low-to-high code lists)
    def poly_eval(self, poly, x):
        acc = 0
        for c in reversed(poly):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def _divide_linear(self, poly, r):
        """Synthetic division by (z - r); returns (quotient, remainder)."""
        out = []
        acc = 0
        for c in reversed(poly):
            acc = self.add(self.mul(acc, r), c)
            out.append(acc)
        rem = out.pop()
        return list(reversed(out)), rem

    def roots(self, poly):
        """All roots in F_(p^k) with multiplicity, by exhaustive scan.

        Returned in increasing code order.  An empty list is a valid answer.
        """
        poly = [int(c) for c in poly]
        while poly and poly[-1] == 0:
            poly.pop()
        if not poly:
            raise ValueError("roots of the zero polynomial")
        found = []
        for r in range(self.q):
            if self.poly_eval(poly, r) != 0:
                continue
            mult = 0
            cur = poly
            while len(cur) > 1:
                quo, rem = self._divide_linear(cur, r)
                if rem != 0:
                    break
                mult += 1
                cur = quo
            found.append((r, mult))
        return found

    # -- misc
    def random_element(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.q))

    def describe(self):
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (isinstance(other, ResidueField) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, tuple(self.modulus)))

    def __repr__(self):
        return f"ResidueField(p={self.p}, k={self.k})"


@lru_cache(maxsize=None)
def get_field(p, k=1):
    """Shared, cached field descriptor."""
    return ResidueField(p, k)
