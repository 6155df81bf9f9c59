"""Inductive construction of a wandering-domain parameter.

The plan fixes the block lengths: the orbit of ``x`` spends ``m_0`` steps
near 0, ``M_1`` near 1, ``m_1`` near 0, and so on.  Stage ``i`` moves the
parameter by ``rho_i`` so that the next block near 1 has the planned length,
then picks a point whose orbit enters the next block near 0 at the planned
depth ``r_i``.

Entry model
-----------
The exit from a block near 0 to a point near 1 cannot be hit by any
truncated series (see :mod:`wandering.backorbit`).  Each stage therefore
starts its orbit at the previous exit step ``N_(i-1)`` from the affine model
``1 + (a - a_(i-1)) / a0`` of the exit map, which has the scale ``1/|a|``
that the exit map has on the parameter disk.  The orbit before that step is
certified by a backward chain of disks, so the final certificate still
describes a genuine orbit of ``phi_a`` for the final parameter.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import math

from .backorbit import backward_chain, itinerary_pattern
from .errors import BadParameter, ConstraintInfeasible, CertificateFormatError
from .family import EntryStart, derive_constants, orbit_point
from .paramsolve import solve_parameter
from .puiseux import PuiseuxNumber, T, window
from .residue import get_field
from .valgroup import AbsValue, as_exponent, exp_from_json, exp_to_json

__all__ = ["RunConfig", "SequencePlan", "StageRecord", "ConstructionCertificate",
           "plan_sequences", "build_x", "stage_entry", "final_entry", "run_stage",
           "construct", "CERT_VERSION"]

CERT_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    p: int = 2
    k: int = 1
    a0: PuiseuxNumber = None
    a0_val: Fraction = Fraction(-2)
    eps_val: Fraction = None
    stages: int = 2
    window: Fraction = Fraction(64)
    seed: int = 0
    scale_samples: int = 0

    def field(self):
        return get_field(self.p, self.k)

    def a0_number(self):
        if self.a0 is not None:
            return self.a0
        return T(self.field(), as_exponent(self.a0_val))


# ----------------------------------------------------------------------
# sequences

@dataclass(frozen=True)
class SequencePlan:
    p: int
    stages: int
    M: tuple
    m: tuple
    eps_val: tuple
    r_val: tuple
    n: tuple
    N: tuple

    @property
    def horizon(self):
        return self.N[-1]

    def pattern(self):
        return itinerary_pattern(self.m, self.M, self.stages)

    def to_json(self):
        return {"p": self.p, "stages": self.stages, "M": list(self.M), "m": list(self.m),
                "epsVal": [exp_to_json(v) for v in self.eps_val],
                "rVal": [exp_to_json(v) for v in self.r_val],
                "n": list(self.n), "N": list(self.N)}

    @classmethod
    def from_json(cls, obj):
        try:
            M = tuple(int(v) for v in obj["M"])
            m = tuple(int(v) for v in obj["m"])
            I = int(obj["stages"])
            if len(M) != I + 1 or len(m) != I + 1:
                raise CertificateFormatError("plan lists do not match the stage count")
            n, N = _block_steps(M, m, I)
            return cls(int(obj["p"]), I, M, m,
                       tuple(exp_from_json(v) for v in obj["epsVal"]),
                       tuple(exp_from_json(v) for v in obj["rVal"]), n, N)
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"bad plan: {exc}") from exc


def _block_steps(M, m, I):
    n = [0]
    for i in range(1, I + 1):
        n.append(n[-1] + m[i - 1] + M[i - 1])
    N = [n[i] + m[i] for i in range(I + 1)]
    return tuple(n), tuple(N)


def _smallest(lo, ok):
    k = lo
    while not ok(k):
        k += 1
    return k


def plan_sequences(consts, eps_val, stages):
    """Minimal integers satisfying every block-length inequality.

    Works in valuations: with ``alpha = -val(a0)``, ``|a0|^(1-M) <= eps``
    reads ``(M - 1) alpha >= val(eps)``, and so on.
    """
    if stages < 0:
        raise BadParameter("the number of stages must be >= 0")
    alpha = -consts.a0_abs.val
    vR, vmu, vS = consts.R.val, consts.mu.val, consts.S.val
    eps_val = vS if eps_val is None else max(as_exponent(eps_val), vS)
    M = [_smallest(1, lambda k: (k - 1) * alpha >= eps_val)]
    for _ in range(stages):
        prev = M[-1]
        M.append(_smallest(prev + 1, lambda k: (k - prev) * alpha >= vS))
    m = []
    for i in range(stages + 1):
        lo = 1 if not m else m[-1] + 1
        m.append(_smallest(lo, lambda k: k * vmu >= M[i] * alpha + 2 * vR))
    eps = [eps_val] + [(M[i - 1] - 1) * alpha + vS for i in range(1, stages + 1)]
    r = [vR * (1 - Fraction(1, consts.p ** mi)) for mi in m]
    n, N = _block_steps(M, m, stages)
    return SequencePlan(consts.p, stages, tuple(M), tuple(m), tuple(eps), tuple(r), n, N)


# ----------------------------------------------------------------------
# orbit seeds

def stage_entry(a0, plan, anchors, i):
    """Seed for the stage-``i`` orbit: the exit of block ``i - 1``."""
    step = plan.N[i - 1]
    anchor = anchors[i - 1]
    return EntryStart(a0, step, None if anchor is a0 else anchor)


def final_entry(a0, plan, anchors):
    i = max(plan.stages, 1)
    return stage_entry(a0, plan, anchors, i)


def build_x(a, a0, plan, anchors):
    """Certified chain for steps ``0 .. E``; its first checkpoint is ``x``."""
    entry = final_entry(a0, plan, anchors)
    target = entry.value(a)
    return backward_chain(a, target, entry.step, plan.pattern())


# ----------------------------------------------------------------------
# stages

@dataclass
class StageRecord:
    i: int
    b: PuiseuxNumber
    sigma_val: Fraction
    c: PuiseuxNumber
    a_i: PuiseuxNumber
    rho_val: Fraction
    residuals: dict
    solves: dict = dc_field(default_factory=dict)
    window: Fraction = Fraction(64)

    def to_json(self):
        return {"i": self.i, "b": self.b.to_json(), "sigmaVal": exp_to_json(self.sigma_val),
                "c": self.c.to_json(), "a_i": self.a_i.to_json(),
                "rhoVal": exp_to_json(self.rho_val),
                "residuals": {k: (None if v is None else exp_to_json(v))
                              for k, v in self.residuals.items()},
                "solves": self.solves, "window": exp_to_json(self.window)}

    @classmethod
    def from_json(cls, obj, fld):
        return cls(int(obj["i"]), PuiseuxNumber.from_json(obj["b"], fld),
                   exp_from_json(obj["sigmaVal"]), PuiseuxNumber.from_json(obj["c"], fld),
                   PuiseuxNumber.from_json(obj["a_i"], fld), exp_from_json(obj["rhoVal"]),
                   {k: (None if v is None else exp_from_json(v))
                    for k, v in obj["residuals"].items()},
                   obj.get("solves", {}), exp_from_json(obj["window"]))


def _contraction_ok(consts, plan, i):
    """``mu^(m_i) < A^(-1) R^(p+1)`` with ``A = |a|^(M_i - 1)``, in valuations."""
    alpha = -consts.a0_abs.val
    lhs = plan.m[i] * consts.mu.val
    rhs = (plan.M[i - 1] - 1) * alpha + (consts.p + 1) * consts.R.val
    return lhs > rhs


def run_stage(i, consts, plan, a0, anchors):
    if not _contraction_ok(consts, plan, i):
        raise ConstraintInfeasible(f"stage {i}: the contraction condition fails")
    f = a0.field
    alpha = -consts.a0_abs.val
    prev = anchors[i - 1]
    entry = stage_entry(a0, plan, anchors, i)
    n_i, N_i = plan.n[i], plan.N[i]
    scale_val = -(plan.M[i - 1] - 1) * alpha
    rho_val = (plan.M[i - 1] - 1) * alpha

    rb = solve_parameter(entry, n_i, PuiseuxNumber.zero(f), prev,
                         radius_val=plan.eps_val[i - 1], scale_val=scale_val)
    b = rb.root
    if (b - prev).val() != rho_val:
        raise ConstraintInfeasible(f"stage {i}: |b - a_(i-1)| has valuation "
                                   f"{(b - prev).val()}, expected {rho_val}")
    sigma_val = rho_val + plan.r_val[i]
    if plan.eps_val[i] < sigma_val:
        raise ConstraintInfeasible(f"stage {i}: eps_i exceeds sigma")
    rc = solve_parameter(entry, n_i, T(f, plan.r_val[i]), b,
                         radius_val=sigma_val, scale_val=scale_val)
    c = rc.root
    y = orbit_point(c, entry, n_i, with_derivative=False).value
    if y.val() != plan.r_val[i]:
        raise ConstraintInfeasible(f"stage {i}: |Phi_n(c)| has valuation {y.val()}")
    a_i = c
    exit_pt = orbit_point(a_i, entry, N_i, with_derivative=False).value
    residuals = {"b": rb.residual_vals[-1], "c": rc.residual_vals[-1],
                 "exit": (exit_pt - 1).val_floor()}
    return StageRecord(i, b, sigma_val, c, a_i, rho_val, residuals,
                       {"b": rb.to_json(), "c": rc.to_json()})


# ----------------------------------------------------------------------
# certificate

@dataclass
class ConstructionCertificate:
    field: object
    a0: PuiseuxNumber
    eps_val: Fraction
    window: Fraction
    seed: int
    plan: SequencePlan
    x: PuiseuxNumber
    disk_radius_val: Fraction
    stages: list
    a_final: PuiseuxNumber
    verification: dict = None

    def anchors(self):
        return [self.a0] + [s.a_i for s in self.stages]

    def to_json(self):
        return {
            "certVersion": CERT_VERSION,
            "field": self.field.describe(),
            "a0": self.a0.to_json(),
            "epsVal": exp_to_json(self.eps_val),
            "window": exp_to_json(self.window),
            "seed": self.seed,
            "plan": self.plan.to_json(),
            "x": self.x.to_json(),
            "disk": {"center": self.x.to_json(), "radiusVal": exp_to_json(self.disk_radius_val)},
            "stages": [s.to_json() for s in self.stages],
            "aFinal": self.a_final.to_json(),
            "verification": self.verification,
        }

    @classmethod
    def from_json(cls, obj):
        try:
            if obj.get("certVersion") != CERT_VERSION:
                raise CertificateFormatError(f"unsupported certVersion {obj.get('certVersion')}")
            fd = obj["field"]
            fld = get_field(int(fd["p"]), int(fd["k"]))
            if list(fd["modulus"]) != list(fld.modulus):
                raise CertificateFormatError("field modulus differs from the canonical one")
            plan = SequencePlan.from_json(obj["plan"])
            stages = [StageRecord.from_json(s, fld) for s in obj["stages"]]
            if len(stages) != plan.stages:
                raise CertificateFormatError("stage records do not match the plan")
            return cls(fld, PuiseuxNumber.from_json(obj["a0"], fld), exp_from_json(obj["epsVal"]),
                       exp_from_json(obj["window"]), int(obj.get("seed", 0)), plan,
                       PuiseuxNumber.from_json(obj["x"], fld),
                       exp_from_json(obj["disk"]["radiusVal"]), stages,
                       PuiseuxNumber.from_json(obj["aFinal"], fld), obj.get("verification"))
        except CertificateFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc


def construct(config, verify=True):
    """Plan, run every stage, build ``x`` and (optionally) verify."""
    fld = config.field()
    a0 = config.a0_number()
    consts = derive_constants(a0, config.p)
    plan = plan_sequences(consts, config.eps_val, config.stages)
    with window(config.window):
        anchors = [a0]
        records = []
        for i in range(1, plan.stages + 1):
            rec = run_stage(i, consts, plan, a0, anchors)
            rec.window = as_exponent(config.window)
            records.append(rec)
            anchors.append(rec.a_i)
        a_final = anchors[-1]
        chain = build_x(a_final, a0, plan, anchors)
    cert = ConstructionCertificate(fld, a0, plan.eps_val[0], as_exponent(config.window),
                                   config.seed, plan, chain[0].value, consts.S.val,
                                   records, a_final)
    if verify:
        from .verifier import verify_certificate
        cert.verification = verify_certificate(cert, scale_samples=config.scale_samples,
                                               seed=config.seed).to_json()
    return cert
