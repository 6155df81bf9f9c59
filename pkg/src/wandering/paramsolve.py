"""Root finding over truncated Puiseux series.

Two tools:

* :func:`puiseux_roots` finds roots of a polynomial with series coefficients
  by the Newton polygon method.  Simple roots are finished with Newton's
  iteration.  Clusters that never separate within the term budget are
  returned as approximants with their honest precision.
* :func:`solve_parameter` solves ``G(a) = target`` for an orbit map ``G``
  that is a scaled isometry on a known disk, by Newton's method with the
  orbit derivative in the parameter.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import math

from .diskcalc import taylor_shift
from .errors import (ExtensionRequired, NewtonStalled, PrecisionExhausted,
                     TargetOutsideImage)
from .family import orbit_point
from .puiseux import PuiseuxNumber, get_window, poly_eval
from .valgroup import as_exponent

__all__ = ["NewtonPolygon", "Root", "puiseux_roots", "SolveReport", "solve_parameter",
           "newton_iteration_cap"]


# Inseparable clusters refine forever, doubling the exponent denominator at
# each level; past this denominator they are reported as clusters.
CLUSTER_DEN_LIMIT = 1 << 24


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(j, val c_j)``.

    ``points`` holds the known coefficients.  A coefficient that is zero only
    to its precision enters as ``(j, precision)`` with ``bound=True``: its
    true point lies on or above that height.
    """

    points: tuple
    bounds: tuple = dc_field(default_factory=tuple)

    @classmethod
    def of(cls, coeffs):
        pts, bnds = [], []
        for j, c in enumerate(coeffs):
            v = c.val()
            if v is not None:
                pts.append((j, v))
            elif c.prec is not None:
                bnds.append((j, c.prec))
        return cls(tuple(pts), tuple(bnds))

    def vertices(self, include_bounds=False):
        pts = sorted(self.points + (self.bounds if include_bounds else ()))
        hull = []
        for pt in pts:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            if hull and hull[-1][0] == pt[0]:
                continue
            hull.append(pt)
        return hull

    def segments(self, include_bounds=False):
        """``[(root valuation, number of roots, left index)]``, largest valuation first."""
        hull = self.vertices(include_bounds)
        out = []
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            out.append((Fraction(y1 - y2) / (x2 - x1), x2 - x1, x1))
        return out

    def zero_root_multiplicity(self):
        """Roots at ``z = 0`` forced by exactly vanishing low coefficients."""
        js = [j for j, _ in self.points] + [j for j, _ in self.bounds]
        return min(js) if js else 0


@dataclass(frozen=True)
class Root:
    value: PuiseuxNumber
    multiplicity: int
    separated: bool

    @property
    def precision(self):
        return self.value.prec


def _residue_poly(coeffs, s, left, length, pts):
    """Coefficients of the residue polynomial on a segment of slope ``-s``."""
    vleft = dict(pts)[left]
    out = []
    for j in range(left, left + length + 1):
        c = coeffs[j]
        e = vleft - s * (j - left)
        out.append(c.coefficient(e) if c.val() is not None and c.val() <= e else 0)
    return out


def _derivative(coeffs):
    f = coeffs[0].field
    out = []
    for j in range(1, len(coeffs)):
        m = f.embed(j)
        out.append(coeffs[j].scale(m) if m else PuiseuxNumber.zero(f))
    if not out:
        out = [PuiseuxNumber.zero(f)]
    return out


def newton_iteration_cap(w=None):
    w = get_window() if w is None else as_exponent(w)
    return 4 * math.ceil(math.log2(max(2, float(w)))) + 16


def _newton_polish(coeffs, z):
    """Newton's method for a simple root; stops when corrections leave the window."""
    w = get_window()
    deriv = _derivative(coeffs)
    for _ in range(newton_iteration_cap(w)):
        r = poly_eval(coeffs, z)
        d = poly_eval(deriv, z)
        if r.is_zero:
            prec = None if r.prec is None else r.prec - d.val()
            return z.truncate(prec) if prec is not None else z
        h = r / d
        z = (z - h).exact()
        if h.val() >= z.val() + w:
            return z.truncate(z.val() + w)
    raise NewtonStalled("root refinement did not converge")


def _cluster_precision(shifted, s):
    """Valuation beyond which the members of a cluster are not resolved."""
    poly = NewtonPolygon.of(shifted)
    vals = [v for v, _, _ in poly.segments(include_bounds=True) if v > s]
    if poly.zero_root_multiplicity() > 0 and not shifted[0].is_exact_zero:
        vals.append(shifted[0].prec - min(v for j, v in poly.points if j > 0)
                    if shifted[0].prec is not None else None)
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def _roots_rec(coeffs, prefix, s_min, budget, out, wanted):
    f = coeffs[0].field
    poly = NewtonPolygon.of(coeffs)
    if poly.zero_root_multiplicity() > 0 and coeffs[0].is_exact_zero:
        out.append(Root(prefix, poly.zero_root_multiplicity(), True))
    for s, length, left in poly.segments():
        if s_min is not None and s <= s_min:
            continue
        if wanted is not None and s_min is None and s != wanted:
            continue
        res = _residue_poly(coeffs, s, left, length, poly.points)
        rts = f.roots(res)
        if sum(m for _, m in rts) < length:
            raise ExtensionRequired(f.k + 1, f"residue polynomial {res} does not split "
                                    f"over F_{f.q}")
        for u, mult in rts:
            if u == 0:
                continue
            mono = PuiseuxNumber.monomial(f, s, u, prec=None)
            z = prefix + mono
            shifted = taylor_shift(coeffs, mono)
            if mult == 1:
                out.append(Root(z, 1, True))
            elif budget <= 0 or z.den > CLUSTER_DEN_LIMIT:
                prec = _cluster_precision(shifted, s)
                out.append(Root(z.truncate(prec) if prec is not None else z, mult, False))
            else:
                _roots_rec(shifted, z, s, budget - 1, out, None)


def puiseux_roots(coeffs, valuation=None, budget=48, polish=True):
    """Roots of ``sum coeffs[j] z^j`` (low degree first).

    ``valuation`` restricts to roots of that valuation.  Roots are returned
    in order of their valuation, ties broken by the smallest residue code of
    the leading coefficient.  Each root carries its multiplicity and whether
    it separated from its neighbours; unseparated clusters are truncated at
    the honest precision where their members may first differ.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_exact_zero:
        coeffs.pop()
    if len(coeffs) < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if valuation is not None:
        valuation = as_exponent(valuation)
    found = []
    _roots_rec(coeffs, PuiseuxNumber.zero(coeffs[0].field), None, budget, found, valuation)
    out = []
    for r in found:
        if r.multiplicity == 1 and polish and not r.value.is_exact_zero:
            out.append(Root(_newton_polish(coeffs, r.value), 1, True))
        else:
            out.append(r)
    out.sort(key=lambda r: (r.value.val() if r.value.val() is not None else Fraction(10 ** 9),
                            r.value.leading()[1] if not r.value.is_zero else 0))
    return out


# ----------------------------------------------------------------------
# parameter Newton

@dataclass
class SolveReport:
    root: PuiseuxNumber
    iterations: int
    residual_vals: list
    converged: bool
    stop_reason: str

    def to_json(self):
        return {"iterations": self.iterations,
                "residualVals": [None if v is None else str(v) for v in self.residual_vals],
                "converged": self.converged, "stopReason": self.stop_reason}


def _rv(r):
    return r.val() if r.val() is not None else r.prec


def solve_parameter(start, n, target, a_init, radius_val=None, scale_val=None,
                    max_iter=None):
    """Solve ``Phi_n(a) = target`` by Newton's method from ``a_init``.

    ``start`` is the orbit seed (a point or an entry map).  When
    ``radius_val`` and ``scale_val`` are given, the map is assumed to send
    the disk of that radius around ``a_init`` bijectively onto a disk whose
    radius valuation is ``radius_val + scale_val``, and a target outside it
    is rejected up front.

    Iteration stops once the Newton correction falls below the working
    window relative to ``|a|`` or the residual vanishes to its precision.
    The residual valuation must increase strictly, otherwise NewtonStalled.
    """
    w = get_window()
    cap = newton_iteration_cap(w) if max_iter is None else max_iter
    a = a_init.exact()
    vals = []
    for it in range(cap):
        pt = orbit_point(a, start, n)
        r = pt.value - target
        vals.append(_rv(r))
        if it == 0 and radius_val is not None and scale_val is not None:
            if r.val() is not None and r.val() < radius_val + scale_val:
                raise TargetOutsideImage(
                    f"target is at valuation {r.val()} from the image centre; the image "
                    f"disk has radius valuation {radius_val + scale_val}")
        if len(vals) > 1 and vals[-1] is not None and vals[-2] is not None \
                and vals[-1] <= vals[-2] and r.val() is not None:
            raise NewtonStalled(f"residual valuation did not increase: {vals[-2]} -> {vals[-1]}")
        if r.is_zero:
            return SolveReport(a, it, vals, True, "residual zero to precision")
        if pt.d_da.is_zero:
            raise PrecisionExhausted("orbit derivative vanished to its precision")
        h = r / pt.d_da
        if h.val() >= a.val() + w:
            return SolveReport(a, it, vals, True, "correction below window")
        a = (a - h).exact()
    raise NewtonStalled(f"no convergence in {cap} iterations")
