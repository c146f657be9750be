"""Randomized verification suites behind the command-line verifier.

Each suite runs a number of seeded trials of one structural identity or
estimate and returns a summary dict {name, trials, failures, details}.
All suites are deterministic given (seed, trials).
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import randoms
from .graded_poly import Element
from .seminorm_calculus import (
    WeightedSeminorm,
    verify_bracket_estimate,
    verify_product_estimate,
)
from .star_algebra import (
    check_star_involution,
    conjugation_is_involution,
    equivalence_transform,
    star,
)


def run_associativity(seed: int, trials: int):
    rng = random.Random(seed)
    basis = randoms.default_basis()
    failures = 0
    for _ in range(trials):
        form = randoms.random_even_form(rng, basis)
        z = randoms.random_scalar(rng)
        a = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        b = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        c = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        if star(star(a, b, z, form), c, z, form) != star(a, star(b, c, z, form), z, form):
            failures += 1
    return {"suite": "associativity", "trials": trials, "failures": failures}


def run_equivalence(seed: int, trials: int):
    rng = random.Random(seed)
    basis = randoms.default_basis()
    failures = 0
    for _ in range(trials):
        lam = randoms.random_even_form(rng, basis)
        g = randoms.random_graded_symmetric_form(rng, basis)
        lam2 = lam + g
        z = randoms.random_scalar(rng)
        a = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        b = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        lhs = equivalence_transform(star(a, b, z, lam), z, g)
        rhs = star(
            equivalence_transform(a, z, g),
            equivalence_transform(b, z, g),
            z,
            lam2,
        )
        if lhs != rhs:
            failures += 1
    return {"suite": "equivalence", "trials": trials, "failures": failures}


def run_product_estimate(seed: int, trials: int, R=1, zmag=1, collect=None):
    R = Fraction(R)
    rng = random.Random(seed)
    basis = randoms.default_basis()
    failures = 0
    worst = None
    for _ in range(trials):
        form = randoms.random_even_form(rng, basis)
        a = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        b = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        weights = {
            name: Fraction(rng.randint(1, 4), rng.randint(1, 2))
            for name in basis.names
        }
        p = WeightedSeminorm(basis, weights)
        report = verify_product_estimate(a, b, Fraction(zmag), form, R, p)
        if collect is not None:
            collect.append(report)
        if not report.holds:
            failures += 1
            worst = report.to_dict()
    out = {"suite": "product-estimate", "trials": trials, "failures": failures}
    if worst:
        out["worst"] = worst
    return out


def run_bracket_estimate(seed: int, trials: int, R=1, collect=None):
    R = Fraction(R)
    rng = random.Random(seed)
    basis = randoms.default_basis()
    failures = 0
    for _ in range(trials):
        form = randoms.random_even_form(rng, basis)
        a = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        b = randoms.random_element(rng, basis, max_degree=4, n_terms=3)
        p = WeightedSeminorm(
            basis,
            {name: Fraction(rng.randint(1, 4), rng.randint(1, 2)) for name in basis.names},
        )
        report = verify_bracket_estimate(a, b, form, R, p)
        if collect is not None:
            collect.append(report)
        if not report.holds:
            failures += 1
    return {"suite": "bracket-estimate", "trials": trials, "failures": failures}


def run_involution(seed: int, trials: int, hbar=1):
    """Compare the entrywise criterion against brute-force conjugation.

    A form failing the criterion is a *finding*, not a suite failure; the
    suite fails only if the criterion and the brute-force test disagree.
    """
    rng = random.Random(seed)
    basis = randoms.default_basis()
    disagreements = 0
    findings = []
    for k in range(trials):
        form = randoms.random_involutive_form(rng, basis, holds=(k % 2 == 0))
        verdict = check_star_involution(form, hbar)
        brute = True
        for ni in basis.names:
            for nj in basis.names:
                gi = Element.generator(basis, ni)
                gj = Element.generator(basis, nj)
                if not conjugation_is_involution(gi, gj, hbar, form):
                    brute = False
        if brute:
            for _ in range(8):
                a = randoms.random_element(
                    rng, basis, max_degree=3, n_terms=2, complex_parts=True
                )
                b = randoms.random_element(
                    rng, basis, max_degree=3, n_terms=2, complex_parts=True
                )
                if not conjugation_is_involution(a, b, hbar, form):
                    brute = False
                    break
        if verdict["holds"] != brute:
            disagreements += 1
        if not verdict["holds"]:
            findings.append(verdict["violations"][:3])
    return {
        "suite": "involution",
        "trials": trials,
        "failures": disagreements,
        "criterion_failures": len(findings),
    }


SUITES = {
    "associativity": run_associativity,
    "equivalence": run_equivalence,
    "product-estimate": run_product_estimate,
    "bracket-estimate": run_bracket_estimate,
    "involution": run_involution,
}
