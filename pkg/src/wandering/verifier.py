"""Independent checking of a construction certificate.

Nothing the solver computed is trusted except the final parameter, the
anchor it was built against and the plan.  The verifier rebuilds the orbit
of ``x``: steps ``0 .. E`` by a certified backward chain and steps
``E .. N_I`` by forward iteration.  Every series carries its honest
precision, so each valuation read off below is a valuation of the true
orbit (or the check raises PrecisionExhausted).

The disk ``U = D(x, S)`` is pushed forward one step at a time with the
Taylor-coefficient image formula.  Passing all checks certifies that no
``U_n`` (``n <= N_I``) contains 1, hence ``U`` lies in the Fatou set, and
that the itinerary has strictly growing blocks up to the horizon ``N_I``.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .backorbit import backward_chain, phi_coeffs
from .constructor import final_entry, stage_entry
from .diskcalc import image_radius, taylor_shift
from .errors import (DenominatorMismatch, ItineraryBreak, OracleMismatch, PrecisionExhausted,
                     RadiusBoundViolated)
from .family import derive_constants, orbit, orbit_point
from .puiseux import PuiseuxNumber, T, window
from .valgroup import as_exponent, exp_to_json

__all__ = ["VerificationReport", "OracleRow", "valuation_profile", "orbit_checkpoints",
           "check_itinerary", "check_radii", "check_hsia", "check_denominators",
           "cross_check_oracle", "exit_map", "random_disk_point", "check_scaling",
           "verify_certificate"]

CONCLUSION = ("Every U_n with n <= N_I omits 1 (and infinity), so D(x, S) lies in the "
              "Fatou set; the block lengths grow strictly, so the itinerary is not "
              "preperiodic up to the horizon.  Identifying the Fatou component as a "
              "wandering disk is a known result that is cited, not re-checked here.")


# ----------------------------------------------------------------------
# closed-form profile

@dataclass(frozen=True)
class OracleRow:
    step: int
    symbol: str
    kind: str       # "val": val z_j;  "dist": val(z_j - 1)
    value: Fraction

    def to_json(self):
        return {"j": self.step, "symbol": self.symbol, "kind": self.kind,
                "value": exp_to_json(self.value)}


def valuation_profile(consts, plan):
    """Rows ``0 .. N_I`` of the planned orbit, from the closed forms alone."""
    p, vR = consts.p, consts.R.val
    alpha = -consts.a0_abs.val
    rows = []
    for i in range(plan.stages + 1):
        for t in range(plan.m[i]):
            rows.append(OracleRow(plan.n[i] + t, "0", "val",
                                  vR * (1 - Fraction(1, p ** (plan.m[i] - t)))))
        if i < plan.stages:
            for t in range(plan.M[i]):
                rows.append(OracleRow(plan.N[i] + t, "1", "dist", alpha * (plan.M[i] - t)))
    # the orbit leaves the last block at the unit circle
    rows.append(OracleRow(plan.N[-1], "*", "val", Fraction(0)))
    return rows


# ----------------------------------------------------------------------
# orbit reconstruction

@dataclass
class OrbitData:
    a: PuiseuxNumber
    points: list        # z_0 .. z_N with honest precision
    entry_step: int


def orbit_checkpoints(a, a0, plan, anchors):
    """``z_0 .. z_(N_I)`` for the parameter ``a``."""
    entry = final_entry(a0, plan, anchors)
    chain = backward_chain(a, entry.value(a), entry.step, plan.pattern())
    pts = [c.value for c in chain]
    tail = orbit(a, entry, plan.horizon, with_derivative=False)
    pts.extend(pt.value for pt in tail[1:])
    return OrbitData(a, pts, entry.step)


def _classify(z):
    """``"0"`` for the open unit disk at 0, ``"1"`` for the one at 1, else ``"-"``."""
    v = z.val()
    if v is None:
        if z.prec is not None and z.prec > 0:
            return "0"
        raise PrecisionExhausted("iterate is zero to a precision that cannot place it")
    if v > 0:
        return "0"
    d = (z - 1)
    dv = d.val()
    if dv is None:
        if d.prec is not None and d.prec > 0:
            return "1"
        raise PrecisionExhausted("iterate is 1 to a precision that cannot place it")
    return "1" if dv > 0 else "-"


def check_itinerary(orbit_data, plan):
    """Symbols for ``j = 1 .. N_I``; raises ItineraryBreak at the first mismatch."""
    expected = plan.pattern()
    got = []
    for j in range(1, plan.horizon + 1):
        s = _classify(orbit_data.points[j - 1])
        got.append(s)
        if s != expected[j - 1]:
            raise ItineraryBreak(j, f"position {j}: expected {expected[j - 1]}, found {s}")
    return "".join(got)


def _radius_bounds(consts, plan):
    """``{n: [(name, bound_val)]}``: the radius bounds at block boundaries."""
    alpha = -consts.a0_abs.val
    vS, vR, vmu = consts.S.val, consts.R.val, consts.mu.val
    out = {}
    for i in range(plan.stages + 1):
        out.setdefault(plan.n[i], []).append(("S", vS))
        out.setdefault(plan.N[i], []).append(("a^-M S", alpha * plan.M[i] + vS))
        out.setdefault(plan.N[i], []).append(("mu^m R^-2 S", plan.m[i] * vmu - 2 * vR + vS))
    return out


def check_radii(orbit_data, plan, consts, radius_val):
    """Push ``D(x, S)`` forward and test the bounds.

    Returns ``(radius_vals, checks)``; ``radius_vals[n]`` is the exact radius
    valuation of ``U_n``.  Raises RadiusBoundViolated at the first failure.
    """
    a = orbit_data.a
    coeffs = phi_coeffs(a)
    bounds = _radius_bounds(consts, plan)
    radii = [as_exponent(radius_val)]
    checks = []
    for n in range(plan.horizon + 1):
        r = radii[n]
        for name, b in bounds.get(n, ()):
            ok = r >= b
            checks.append((n, b, r, ok))
            if not ok:
                raise RadiusBoundViolated(n, f"U_{n} has radius valuation {r}, bound ({name}) {b}")
        if n < plan.horizon:
            radii.append(_step_radius(coeffs, orbit_data.points[n], r))
    return radii, checks


def _step_radius(coeffs, z, r, margin=Fraction(8)):
    """Image radius of ``D(z, r)``, from a short truncation of ``z`` when it suffices."""
    while True:
        v = z.val()
        cut = None if v is None else v + margin
        zc = z if cut is None or (z.prec is not None and z.prec <= cut) else z.truncate(cut)
        try:
            return image_radius(taylor_shift(coeffs, zc), r)[0]
        except PrecisionExhausted:
            if zc is z:
                raise
            margin *= 4


def check_hsia(orbit_data, radii, stages):
    """``1`` lies outside every ``U_n``.  Returns ``(ok, first_bad_n)``.

    With no stages the orbit of ``x`` ends exactly at 1 by construction, so
    the last step is left out.
    """
    last = len(radii) if stages >= 1 else len(radii) - 1
    for n, (z, r) in enumerate(zip(orbit_data.points[:last], radii[:last])):
        d = z - 1
        v = d.val()
        if v is None:
            if d.prec is not None and d.prec >= r:
                return False, n
            raise PrecisionExhausted(f"cannot separate U_{n} from 1")
        if v >= r:
            return False, n
    return True, None


def check_denominators(orbit_data, plan, consts):
    """``den val z_(n_i) = den((1 - p^-m_i) val R)`` for every block start."""
    out = []
    for i in range(plan.stages + 1):
        expected = (consts.R.val * (1 - Fraction(1, consts.p ** plan.m[i]))).denominator
        v = orbit_data.points[plan.n[i]].val()
        actual = None if v is None else v.denominator
        ok = actual == expected
        out.append((i, expected, actual, ok))
        if not ok:
            raise DenominatorMismatch(i, f"block {i}: denominator {actual}, expected {expected}")
    return out


def cross_check_oracle(orbit_data, plan, consts):
    """Compare every row of the closed-form profile with the orbit."""
    for row in valuation_profile(consts, plan):
        z = orbit_data.points[row.step]
        got = z.val() if row.kind == "val" else (z - 1).val()
        if got != row.value:
            raise OracleMismatch(row.step, f"step {row.step}: {row.kind} {got}, "
                                 f"closed form {row.value}")
    return True


# ----------------------------------------------------------------------
# scaling of the block maps

def exit_map(cert, i):
    """``(seed, N_i)`` with ``Phi_(N_i)(b) = orbit_point(b, seed, N_i)``."""
    plan = cert.plan
    anchors = cert.anchors()
    return stage_entry(cert.a0, plan, anchors, max(i, 1)), plan.N[i]


def random_disk_point(center, radius_val, rng, terms=3, den=4):
    """``center + T^r u`` with ``u`` a short random series with unit-or-smaller size."""
    f = center.field
    pairs = []
    for k in range(terms + 1):
        c = f.random_element(rng)
        if c:
            pairs.append((Fraction(k, den), c))
    if not pairs:
        return center
    u = PuiseuxNumber.from_terms(f, pairs)
    return center + u.shift(as_exponent(radius_val))


def check_scaling(cert, i, pairs, rng):
    """``|Phi(b1) - Phi(b2)| = |a|^-1 |b1 - b2|`` on ``D(a_i, eps_i)``.

    Coincident draws are redrawn, so exactly ``pairs`` distinct pairs are
    checked.  Returns the list of ``(val(b1 - b2), val(image difference))``;
    raises OracleMismatch(i) at the first failure.
    """
    seed, N = exit_map(cert, i)
    center = cert.anchors()[i]
    ev = cert.plan.eps_val[i]
    a_val = cert.a0.val()
    out = []
    while len(out) < pairs:
        b1 = random_disk_point(center, ev, rng)
        b2 = random_disk_point(center, ev, rng)
        d = (b1 - b2).val()
        if d is None:
            continue        # coincident draw; redraw
        img = (orbit_point(b1, seed, N, False).value - orbit_point(b2, seed, N, False).value)
        got = img.val()
        out.append((d, got))
        if got != d - a_val:
            raise OracleMismatch(i, f"stage {i}: image difference at valuation {got}, "
                                 f"expected {d - a_val}")
    return out


# ----------------------------------------------------------------------
# report

@dataclass
class VerificationReport:
    itinerary: str
    steps_pass: list
    radius_checks: list
    radius_vals: list
    hsia_pass: bool
    denominator_checks: list
    oracle_agreement: bool
    x_agrees: bool
    scale_checks: list = dc_field(default_factory=list)
    horizon: int = 0
    window: Fraction = None

    @property
    def passed(self):
        return (all(self.steps_pass) and all(c[3] for c in self.radius_checks)
                and self.hsia_pass and all(c[3] for c in self.denominator_checks)
                and self.oracle_agreement and self.x_agrees)

    def valuation_data(self):
        """Everything that must not depend on the working window."""
        return {"itinerary": self.itinerary, "radii": [str(r) for r in self.radius_vals],
                "denominators": [list(map(str, c)) for c in self.denominator_checks]}

    def to_json(self):
        return {
            "pass": self.passed,
            "horizon": self.horizon,
            "window": None if self.window is None else exp_to_json(self.window),
            "itinerary": self.itinerary,
            "stepsPass": self.steps_pass,
            "radiusChecks": [{"n": n, "boundVal": exp_to_json(b), "actualVal": exp_to_json(r),
                              "pass": ok} for n, b, r, ok in self.radius_checks],
            "radiusVals": [exp_to_json(r) for r in self.radius_vals],
            "hsiaPass": self.hsia_pass,
            "denominatorChecks": [{"i": i, "expected": e, "actual": a, "pass": ok}
                                  for i, e, a, ok in self.denominator_checks],
            "oracleAgreement": self.oracle_agreement,
            "xAgrees": self.x_agrees,
            "scaleChecks": [{"i": i, "samples": n} for i, n in self.scale_checks],
            "conclusion": CONCLUSION,
        }


def verify_certificate(cert, window_val=None, scale_samples=0, seed=0):
    """Re-derive and check everything; raises the first failing check's error."""
    w = cert.window if window_val is None else as_exponent(window_val)
    consts = derive_constants(cert.a0, cert.field.p)
    plan = cert.plan
    with window(w):
        a = cert.a_final.rewindow()
        data = orbit_checkpoints(a, cert.a0, plan, cert.anchors())
        x = data.points[0]
        gap = (cert.x - x).val_floor()
        x_ok = gap is None or x.prec is None or gap >= x.prec
        if not x_ok:
            raise ItineraryBreak(0, "stored x is not the certified starting point")
        itin = check_itinerary(data, plan)
        radii, rchecks = check_radii(data, plan, consts, cert.disk_radius_val)
        hsia, bad = check_hsia(data, radii, plan.stages)
        if not hsia:
            raise RadiusBoundViolated(bad, f"U_{bad} contains 1")
        dchecks = check_denominators(data, plan, consts)
        oracle_ok = cross_check_oracle(data, plan, consts)
        scales = []
        if scale_samples:
            rng = np.random.default_rng(seed)
            for i in range(plan.stages + 1):
                scales.append((i, len(check_scaling(cert, i, scale_samples, rng))))
    return VerificationReport(itin, [True] * len(itin), rchecks, radii, hsia, dchecks,
                              oracle_ok, x_ok, scales, plan.horizon, w)
