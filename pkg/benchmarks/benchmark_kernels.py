"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same seeded workloads in two subprocesses, one with the
extension (if built) and one with WEYLALG_PURE_PYTHON=1, and prints a
comparison table.  Coefficient arithmetic is identical in both runs
(exact rational complex numbers), so the ratio isolates the term-loop
and monomial bookkeeping that the extension takes over.

Usage: python benchmarks/benchmark_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time
from fractions import Fraction
from weylalg._backend import KERNEL_BACKEND
from weylalg.randoms import (
    default_basis, random_element, random_even_form,
    random_graded_symmetric_form, random_scalar,
)
from weylalg.star_algebra import equivalence_transform, poisson_bracket, star
from weylalg.seminorm_calculus import WeightedSeminorm, verify_product_estimate

rng = random.Random(42)
B = default_basis()
star_cases = []
for _ in range(400):
    form = random_even_form(rng, B)
    z = random_scalar(rng)
    a = random_element(rng, B, max_degree=6, n_terms=4)
    b = random_element(rng, B, max_degree=6, n_terms=4)
    star_cases.append((form, z, a, b))

results = {"backend": KERNEL_BACKEND}

t0 = time.perf_counter()
for form, z, a, b in star_cases:
    star(a, b, z, form)
results["star_product"] = time.perf_counter() - t0

t0 = time.perf_counter()
for form, z, a, b in star_cases:
    poisson_bracket(a, b, form)
results["poisson_bracket"] = time.perf_counter() - t0

t0 = time.perf_counter()
for form, z, a, b in star_cases[:150]:
    g = random_graded_symmetric_form(rng, B)
    equivalence_transform(a, z, g)
results["equivalence_transform"] = time.perf_counter() - t0

un = WeightedSeminorm.unit(B)
t0 = time.perf_counter()
for form, z, a, b in star_cases[:60]:
    verify_product_estimate(a, b, Fraction(1), form, 1, un)
results["product_estimate"] = time.perf_counter() - t0

print(json.dumps(results))
"""


def run(pure: bool, repeat: int):
    env = dict(os.environ)
    if pure:
        env["WEYLALG_PURE_PYTHON"] = "1"
    else:
        env.pop("WEYLALG_PURE_PYTHON", None)
    best = None
    for _ in range(repeat):
        out = subprocess.run(
            [sys.executable, "-c", WORKLOAD],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        data = json.loads(out.stdout.strip().splitlines()[-1])
        if best is None:
            best = data
        else:
            for key, val in data.items():
                if key != "backend" and val < best[key]:
                    best[key] = val
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3, help="best of N runs")
    args = parser.parse_args()

    compiled = run(pure=False, repeat=args.repeat)
    pure = run(pure=True, repeat=args.repeat)
    if compiled["backend"] != "cython":
        print("note: extension not built; both columns use the pure kernels")

    names = [k for k in compiled if k != "backend"]
    width = max(len(n) for n in names)
    print(f"{'workload':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}")
    for name in names:
        c, p = compiled[name], pure[name]
        print(f"{name:<{width}}  {c:>9.3f}s  {p:>9.3f}s  {p / c:>7.2f}x")


if __name__ == "__main__":
    main()
