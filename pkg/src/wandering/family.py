"""The family ``phi_a(z) = (1 - a) z^(p+1) + a z^p``.

Besides evaluation and orbits (with the derivative in the parameter carried
along), this module holds the closed-form valuation predictions used as
oracles: points near 0 are squeezed toward ``|z| = R`` and points near 1 are
repelled by a factor ``|a|`` per step.

In characteristic ``p`` the derivative in ``z`` collapses to
``(1 - a) z^p`` and the parameter derivative is ``z^p (1 - z)``, so one
orbit step with derivative costs four series products::

    z' = z^p (z + a (1 - z))
    d' = z^p ((1 - a) d + 1 - z)
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParameter, PreconditionViolated
from .puiseux import PuiseuxNumber, T
from .valgroup import ONE, ZERO, AbsValue, finite, max_abs

__all__ = ["FamilyConstants", "OrbitPoint", "EntryStart", "derive_constants", "phi",
           "phi_dz", "phi_da", "taylor_coefficients", "orbit", "orbit_values",
           "preimage_small", "preimage_near_one", "orbit_point",
           "lambda_y", "distortion_bound", "distortion_check", "shrdisk_predict",
           "repdisk_predict"]


@dataclass(frozen=True)
class FamilyConstants:
    p: int
    a0_abs: AbsValue
    R: AbsValue
    mu: AbsValue
    S: AbsValue
    p_abs: AbsValue = ZERO

    def to_json(self):
        return {"p": self.p, "a0Val": self.a0_abs.to_json(), "RVal": self.R.to_json(),
                "muVal": self.mu.to_json(), "SVal": self.S.to_json(),
                "pAbs": self.p_abs.to_json()}


@dataclass(frozen=True)
class OrbitPoint:
    value: PuiseuxNumber
    d_da: PuiseuxNumber
    step: int


@dataclass(frozen=True)
class EntryStart:
    """Orbit seed given by the parameter itself.

    At step ``step`` the orbit equals ``1 + (a - anchor) / a0`` (derivative
    ``1 / a0``).  With ``anchor = a0`` this is ``a / a0``.  Used by the
    construction in place of a fixed starting point; see the constructor
    module for why.
    """

    a0: PuiseuxNumber
    step: int
    anchor: PuiseuxNumber = None

    def value(self, a):
        anchor = self.a0 if self.anchor is None else self.anchor
        if anchor is self.a0:
            return a * self.a0.inverse()
        return 1 + (a - anchor) * self.a0.inverse()

    def derivative(self):
        return self.a0.inverse()


def derive_constants(a0, p):
    """``R = |a0|^(-1/(p-1))``, ``mu = max(|p|, R)``, ``S = mu R^3``."""
    a0_abs = a0.abs() if isinstance(a0, PuiseuxNumber) else a0
    if a0_abs.val is None or a0_abs.val >= 0:
        raise BadParameter(
            f"|a0| must exceed 1 (got {a0_abs}); such maps have good reduction "
            "and an empty Julia set")
    p_abs = ZERO
    R = a0_abs ** Fraction(-1, p - 1)
    mu = max_abs(p_abs, R)
    S = mu * R ** 3
    return FamilyConstants(p=p, a0_abs=a0_abs, R=R, mu=mu, S=S, p_abs=p_abs)


def phi(a, z):
    return z.frobenius() * (z + a * (1 - z))


def phi_dz(a, z):
    """``(p+1)(1-a) z^p + p a z^(p-1)`` reduced in characteristic ``p``."""
    f = z.field
    p = f.p
    zp = z.frobenius()
    out = (1 - a) * zp
    c1 = f.embed(p + 1)
    out = out.scale(c1)
    c2 = f.embed(p)
    if c2:
        out = out + (a * z ** (p - 1)).scale(c2)
    return out


def phi_da(z):
    """``d phi / d a = z^p (1 - z)``."""
    return z.frobenius() * (1 - z)


def taylor_coefficients(a, c):
    """Coefficients of ``phi_a(c + t)`` as a polynomial in ``t``."""
    from .diskcalc import taylor_shift
    p = c.field.p
    f = c.field
    coeffs = [PuiseuxNumber.zero(f)] * (p + 2)
    coeffs[p] = a
    coeffs[p + 1] = 1 - a
    return taylor_shift(coeffs, c)


def _step(a, z, d):
    zp = z.frobenius()
    w = 1 - z
    z1 = zp * (z + a * w)
    if d is None:
        return z1, None
    d1 = zp * (d - a * d + w)
    return z1, d1


def orbit(a, x, n, with_derivative=True, start_step=0):
    """``[OrbitPoint(phi_a^j(x), d/da, j) for j = 0..n]``.

    ``x`` may be a :class:`EntryStart`, in which case the list covers steps
    ``x.step .. n``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    f = a.field
    if isinstance(x, EntryStart):
        j0 = x.step
        z = x.value(a)
        d = x.derivative() if with_derivative else None
    else:
        j0 = start_step
        z = x
        d = PuiseuxNumber.zero(f) if with_derivative else None
    zero = PuiseuxNumber.zero(f)
    pts = [OrbitPoint(z, d if d is not None else zero, j0)]
    for j in range(j0, n):
        z, d = _step(a, z, d)
        pts.append(OrbitPoint(z, d if d is not None else zero, j + 1))
    return pts


def orbit_values(a, x, n):
    return [pt.value for pt in orbit(a, x, n, with_derivative=False)]


def orbit_point(a, x, n, with_derivative=True):
    """Only the last point of the orbit (keeps memory flat)."""
    f = a.field
    if isinstance(x, EntryStart):
        j0 = x.step
        z = x.value(a)
        d = x.derivative() if with_derivative else None
    else:
        j0 = 0
        z = x
        d = PuiseuxNumber.zero(f) if with_derivative else None
    for _ in range(j0, n):
        z, d = _step(a, z, d)
    return OrbitPoint(z, d if d is not None else PuiseuxNumber.zero(f), n)


# ----------------------------------------------------------------------
# preimages

def _residual_val(r):
    return r.val_floor()


def preimage_small(a, t, stop_val=None, gap=Fraction(1, 64), max_iter=96):
    """A preimage of ``t`` in the open unit disk.

    Iterates ``z <- ((t - (1 - a) z^(p+1)) / a)^(1/p)``.  Near a cluster of
    ``p`` preimages this converges only up to the scale where the cluster
    splits; the residual then creeps toward ``val(a) + p^2 v / (p - 1)``
    (``v = val z``) without reaching it.  Iteration stops at ``stop_val``,
    within ``gap`` of that limit, or when the residual stops improving.
    Returns ``(z, residual)``.
    """
    p = a.field.p
    inv_a = a.inverse()
    b = 1 - a
    z = (t * inv_a).pth_root().exact()
    v = z.val()
    # terms beyond the splitting scale of the cluster carry no information
    cut = v * p / (p - 1)
    limit = a.val() + p * cut
    goal = limit - gap if stop_val is None else min(stop_val, limit - gap)
    best = (z, phi(a, z) - t)
    stale = 0
    for _ in range(max_iter):
        bv = _residual_val(best[1])
        if best[1].is_zero or (bv is not None and bv >= goal) or stale >= 2:
            break
        z = ((t - b * z.frobenius() * z) * inv_a).pth_root().truncate(cut).exact()
        r = phi(a, z) - t
        rv = _residual_val(r)
        if rv is not None and (bv is None or rv > bv):
            best, stale = (z, r), 0
        else:
            stale += 1
    return best


def preimage_near_one(a, t, max_iter=64):
    """The preimage of ``t`` with leading term 1 (Newton; ``phi`` is injective there)."""
    z = PuiseuxNumber.one(a.field)
    b = 1 - a
    r = phi(a, z) - t
    for _ in range(max_iter):
        if r.is_zero:
            break
        h = r / (b * z.frobenius())
        z = (z - h).exact()
        r2 = phi(a, z) - t
        if r2.val_floor() is not None and r.val_floor() is not None \
                and r2.val_floor() <= r.val_floor() and not r2.is_zero:
            z = (z + h).exact()
            break
        r = r2
    return z, phi(a, z) - t


# ----------------------------------------------------------------------
# closed forms

def lambda_y(a_abs, y_abs, p, p_abs=ZERO):
    """``|a| |y|^p max(1, |p| / |y|)``: the local scaling of ``phi_a`` at ``y``."""
    base = a_abs * y_abs ** p
    if p_abs.is_zero:
        return base
    return base * max_abs(ONE, p_abs / y_abs)


def distortion_bound(a, y1, y2):
    """Upper bound for ``|phi_a(y1) - phi_a(y2)|`` when ``|y1| >= |y2|``."""
    p = a.field.p
    a1, a2 = y1.abs(), y2.abs()
    if a1 < a2:
        raise PreconditionViolated("need |y1| >= |y2|")
    diff = (y1 - y2).abs()
    if diff.is_zero:
        return ZERO
    p_abs = ZERO
    if a1.is_zero:
        return ZERO
    inner = max_abs(max_abs(p_abs, a1), (diff / a1) ** (p - 1))
    return diff * a.abs() * a1 ** (p - 1) * inner


def _in_unit_disk_around_one(y):
    return (y - 1).abs() < ONE


def distortion_check(a, y1, y2):
    """``|phi(y1) - phi(y2)|`` within the bound, and equal to ``|a||y1-y2|`` near 1."""
    actual = (phi(a, y1) - phi(a, y2)).abs()
    bound = distortion_bound(a, y1, y2)
    if actual.zero_to_precision and bound.val is not None and actual.floor < bound.val:
        return False
    ok = actual <= bound
    if _in_unit_disk_around_one(y1) and _in_unit_disk_around_one(y2):
        ok = ok and actual == a.abs() * (y1 - y2).abs()
    return ok


def shrdisk_predict(consts, m, x_abs, i):
    """Predicted ``|phi^i(x)|`` and the radius bound ``S'_i`` for ``D(x, S)``."""
    p, R, mu, S = consts.p, consts.R, consts.mu, consts.S
    lo = R
    hi = R ** (1 - Fraction(1, p ** m))
    if not (lo < x_abs <= hi):
        raise PreconditionViolated(f"need R < |x| <= R^(1-p^-m), got {x_abs}")
    if not 0 <= i <= m:
        raise PreconditionViolated("need 0 <= i <= m")
    point = R ** (1 - p ** i) * x_abs ** (p ** i)
    e_i = sum(Fraction(p) ** (j - m) for j in range(1, i + 1))
    radius = mu ** i * R ** (-e_i) * S
    return point, radius


def repdisk_predict(consts, M, dist_to_1, i, r, a_abs=None):
    """``|phi^i(x) - 1| = |a|^i |x - 1|`` and the image radius ``|a|^i r``."""
    a_abs = consts.a0_abs if a_abs is None else a_abs
    lim = a_abs ** (-M)
    if dist_to_1 > lim or r > lim:
        raise PreconditionViolated("need |x-1| <= |a|^-M and r <= |a|^-M")
    if not 0 <= i <= M:
        raise PreconditionViolated("need 0 <= i <= M")
    scale = a_abs ** i
    return scale * dist_to_1, scale * r
