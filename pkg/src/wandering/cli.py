"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 construction error,
3 configuration error.
"""

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from .constructor import ConstructionCertificate, RunConfig, construct, plan_sequences
from .errors import (BadParameter, CertificateFormatError, DenominatorMismatch, ItineraryBreak,
                     OracleMismatch, RadiusBoundViolated, WanderingError)
from .family import derive_constants
from .lemmas import run_all
from .puiseux import PuiseuxNumber
from .residue import get_field, is_prime
from .valgroup import AbsValue
from .verifier import valuation_profile, verify_certificate

EXIT_PASS, EXIT_VERIFY, EXIT_CONSTRUCT, EXIT_CONFIG = 0, 1, 2, 3

VERIFY_ERRORS = (ItineraryBreak, RadiusBoundViolated, DenominatorMismatch, OracleMismatch)


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _report_error(exc, as_json):
    info = {"status": "error", "error": type(exc).__name__, "message": str(exc)}
    if hasattr(exc, "index"):
        info["index"] = exc.index
    if as_json:
        print(json.dumps(info, sort_keys=True))
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def config_from_args(args):
    if not is_prime(args.p):
        raise BadParameter(f"p = {args.p} is not prime")
    if args.k < 1:
        raise BadParameter("k must be >= 1")
    if args.stages < 0:
        raise BadParameter("the number of stages must be >= 0")
    if args.window <= 0:
        raise BadParameter("the window must be positive")
    a0 = None
    if args.a0:
        obj = json.loads(Path(args.a0).read_text())
        a0 = PuiseuxNumber.from_json(obj, get_field(args.p, args.k))
    return RunConfig(p=args.p, k=args.k, a0=a0, a0_val=args.a0_val, eps_val=args.eps_val,
                     stages=args.stages, window=args.window, seed=args.seed,
                     scale_samples=args.scale_samples)


def dump_certificate(cert):
    return json.dumps(cert.to_json(), sort_keys=True, indent=1) + "\n"


def cmd_construct(args):
    try:
        cfg = config_from_args(args)
        derive_constants(cfg.a0_number(), cfg.p)
    except (BadParameter, OSError, ValueError) as exc:
        _report_error(exc, args.json)
        return EXIT_CONFIG
    try:
        cert = construct(cfg)
    except VERIFY_ERRORS as exc:
        _report_error(exc, args.json)
        return EXIT_VERIFY
    except BadParameter as exc:
        _report_error(exc, args.json)
        return EXIT_CONFIG
    except WanderingError as exc:
        _report_error(exc, args.json)
        return EXIT_CONSTRUCT
    text = dump_certificate(cert)
    if args.out:
        Path(args.out).write_text(text)
    plan = cert.plan
    rep = cert.verification
    if args.json:
        print(json.dumps({"status": "pass", "out": args.out, "plan": plan.to_json(),
                          "verification": rep}, sort_keys=True))
    elif not args.out:
        sys.stdout.write(text)
    else:
        print(f"plan: M={list(plan.M)} m={list(plan.m)} n={list(plan.n)} N={list(plan.N)}")
        print(f"itinerary ({plan.horizon} steps): {rep['itinerary']}")
        print(f"a_final: {cert.a_final.format(4)}")
        print(f"verification: {'pass' if rep['pass'] else 'FAIL'}")
    return EXIT_PASS if rep["pass"] else EXIT_VERIFY


def cmd_verify(args):
    try:
        cert = ConstructionCertificate.from_json(json.loads(Path(args.cert).read_text()))
    except (OSError, json.JSONDecodeError, CertificateFormatError) as exc:
        _report_error(exc, args.json)
        return EXIT_CONFIG
    try:
        report = verify_certificate(cert, window_val=args.window,
                                    scale_samples=args.scale_samples, seed=cert.seed)
    except WanderingError as exc:
        _report_error(exc, args.json)
        return EXIT_VERIFY
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"window: {report.window}")
        print(f"itinerary ({report.horizon} steps): {report.itinerary}")
        for n, b, r, ok in report.radius_checks:
            print(f"  U_{n}: radius val {r} >= {b}  {'ok' if ok else 'FAIL'}")
        print(f"1 outside every U_n: {report.hsia_pass}")
        for i, e, a, ok in report.denominator_checks:
            print(f"  block {i}: denominator {a} (expected {e})  {'ok' if ok else 'FAIL'}")
        print(f"closed-form profile agrees: {report.oracle_agreement}")
        print(f"verification: {'pass' if report.passed else 'FAIL'}")
    return EXIT_PASS if report.passed else EXIT_VERIFY


def cmd_oracle(args):
    try:
        cfg = config_from_args(args)
        consts = derive_constants(AbsValue(cfg.a0_number().val()), cfg.p)
        plan = plan_sequences(consts, cfg.eps_val, cfg.stages)
    except (BadParameter, OSError, ValueError) as exc:
        _report_error(exc, args.json)
        return EXIT_CONFIG
    rows = valuation_profile(consts, plan)
    if args.json:
        print(json.dumps({"constants": consts.to_json(), "plan": plan.to_json(),
                          "rows": [r.to_json() for r in rows]}, sort_keys=True))
        return EXIT_PASS
    print(f"val R = {consts.R.val}  val mu = {consts.mu.val}  val S = {consts.S.val}")
    print(f"M = {list(plan.M)}  m = {list(plan.m)}  n = {list(plan.n)}  N = {list(plan.N)}")
    print("val eps = " + ", ".join(map(str, plan.eps_val)))
    print("val r   = " + ", ".join(map(str, plan.r_val)))
    print(f"{'j':>4}  sym  kind  value")
    for r in rows:
        print(f"{r.step:>4}  {r.symbol:>3}  {r.kind:<4}  {r.value}")
    return EXIT_PASS


def cmd_lemmas(args):
    if args.samples < 0:
        _report_error(BadParameter("samples must be >= 0"), args.json)
        return EXIT_CONFIG
    if args.samples == 0:
        print("warning: no samples requested; the suites pass vacuously", file=sys.stderr)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results = run_all(args.samples, seed=args.seed, p=args.p, a0_val=args.a0_val,
                          inject=args.inject_failure)
    if args.json:
        print(json.dumps([r.to_json() for r in results], sort_keys=True))
    else:
        for r in results:
            status = "pass" if r.passed else "FAIL"
            line = f"{r.name:<22} samples={r.samples} failures={r.failures} {status}"
            print(line + (f"  ({r.first_failure})" if r.first_failure else ""))
    return EXIT_PASS if all(r.passed for r in results) else EXIT_VERIFY


def _instance_flags(p):
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--a0-val", type=_fraction, default=Fraction(-2),
                   help="a0 = T^(a0-val); must be negative")
    p.add_argument("--a0", help="JSON file holding a serialized series for a0")
    p.add_argument("--eps-val", type=_fraction, default=None,
                   help="val(eps); clamped so that eps <= S (default: S)")
    p.add_argument("--stages", type=int, default=2)
    p.add_argument("--window", type=_fraction, default=Fraction(64))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale-samples", type=int, default=0,
                   help="random pairs per stage for the block-map scaling check")


def build_parser():
    parser = argparse.ArgumentParser(prog="wandering", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build and verify a certificate")
    _instance_flags(p)
    p.add_argument("--out", help="certificate path (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-check a stored certificate")
    p.add_argument("cert")
    p.add_argument("--window", type=_fraction, default=None)
    p.add_argument("--scale-samples", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="planned valuation profile (no series arithmetic)")
    _instance_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("lemmas", help="randomized checks of the local lemmas")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--a0-val", type=_fraction, default=Fraction(-2))
    p.add_argument("--inject-failure", action="store_true",
                   help="corrupt one expected value (self-test of the harness)")
    p.set_defaults(func=cmd_lemmas)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_PASS
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
