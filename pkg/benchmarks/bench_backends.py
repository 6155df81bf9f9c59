"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_backends.py [--repeat 3] [--terms 4000]

Each case runs once per backend to warm up (numba compiles on first call),
then ``--repeat`` timed runs; the best time is reported.  Outputs of the two
backends are compared for equality.
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from wandering import kernels
from wandering.constructor import RunConfig, construct, stage_entry
from wandering.family import orbit_point
from wandering.residue import get_field


def random_terms(rng, n, span):
    e = np.unique(rng.integers(0, span, size=n)).astype(np.int64)
    c = rng.integers(1, 2, size=e.size).astype(np.int64)
    return e, c


def case_products(terms):
    f = get_field(2)
    rng = np.random.default_rng(1)
    e1, c1 = random_terms(rng, terms, 40 * terms)
    e2, c2 = random_terms(rng, terms, 40 * terms)
    hi = int(e1[-1] + e2[0])

    def run():
        e, c = kernels.mul_terms(e1, c1, e2, c2, hi, f, method="pairs")
        return e.tolist(), c.tolist()
    return run


def case_exit_orbit(cert):
    seed = stage_entry(cert.a0, cert.plan, cert.anchors(), cert.plan.stages)
    N = cert.plan.horizon
    a = cert.a_final

    def run():
        return orbit_point(a, seed, N, with_derivative=False).value.to_json()
    return run


def case_construct():
    def run():
        cert = construct(RunConfig(p=2, a0_val=Fraction(-2), eps_val=Fraction(8), stages=2))
        return cert.a_final.to_json()
    return run


def best_time(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--terms", type=int, default=4000)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    cert = construct(RunConfig(p=2, a0_val=Fraction(-2), eps_val=Fraction(8), stages=2),
                     verify=False)
    cases = [("sparse product (pairs)", case_products(args.terms)),
             ("desk exit orbit", case_exit_orbit(cert)),
             ("desk construct+verify", case_construct())]

    print(f"{'case':<26}" + "".join(f"{b:>12}" for b in backends) + "     speedup  same")
    for name, fn in cases:
        results = {}
        for b in backends:
            kernels.set_backend(b)
            fn()
            results[b] = best_time(fn, args.repeat)
        row = f"{name:<26}" + "".join(f"{results[b][0]:>11.3f}s" for b in backends)
        if len(backends) == 2:
            speed = results["numpy"][0] / max(results["numba"][0], 1e-9)
            same = results["numpy"][1] == results["numba"][1]
            row += f"  {speed:>9.2f}x  {same}"
        print(row)


if __name__ == "__main__":
    main()
