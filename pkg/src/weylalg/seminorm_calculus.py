"""Weighted seminorms, continuity-estimate verifiers and summability diagnostics.

Only l1-model seminorms are implemented: a positive weight per generator,
p(v) = sum w_i |v_i| on degree-one elements.  Projective tensor powers of
l1 are again l1 with product weights, so the degree-n seminorm of a
polynomial is an exactly computable coefficient sum; general seminorms
would require an infimum over tensor decompositions.

Numeric results are binary64 with a documented relative tolerance of 1e-9
for equality-style checks.  Inequality checks run in exact rational
arithmetic whenever both sides are rational (rational weights and
coefficient magnitudes, integer weight exponent R); otherwise they fall
back to floats.  Verifier grids are embarrassingly parallel and
deterministic given a seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalars
from .bilinear_forms import BilinearForm, lambda_parts
from .errors import DomainError, RefusedPreconditionError
from .graded_poly import Element
from .star_algebra import poisson_bracket, star

REL_TOL = 1e-9


class WeightedSeminorm:
    """A positive weight per generator; p(v) = sum of w_i |v_i|."""

    __slots__ = ("basis", "weights")

    def __init__(self, basis, weights):
        ws = []
        for i, name in enumerate(basis.names):
            if isinstance(weights, dict):
                w = weights.get(name, 1)
            else:
                w = weights[i]
            w = Fraction(w)
            if w <= 0:
                raise DomainError(f"weight for {name!r} must be positive")
            ws.append(w)
        self.basis = basis
        self.weights = tuple(ws)

    @classmethod
    def unit(cls, basis):
        return cls(basis, {})

    def weight(self, i: int) -> Fraction:
        return self.weights[i]

    def scaled(self, c) -> "WeightedSeminorm":
        c = Fraction(c)
        return WeightedSeminorm(self.basis, [w * c for w in self.weights])

    def monomial_weight(self, exps) -> Fraction:
        out = Fraction(1)
        for i, k in enumerate(exps):
            if k:
                out *= self.weights[i] ** k
        return out

    def __repr__(self):
        return f"WeightedSeminorm({dict(zip(self.basis.names, self.weights))})"


def _coeff_abs(c, exact: bool):
    if exact:
        a = scalars.abs_exact(c)
        if a is None:
            raise DomainError(
                "coefficient magnitude is irrational; exact seminorm unavailable"
            )
        return a
    return scalars.scalar_abs(c)


def pn_seminorm(a: Element, n: int, p: WeightedSeminorm, exact: bool = False):
    """Projective tensor seminorm of the degree-n component.

    Equals the sum over ordered coefficient tuples of |coefficient| times
    the product of weights; distinct monomials contribute disjoint tuple
    families, so this collapses to a plain weighted coefficient sum.
    """
    total = Fraction(0) if exact else 0.0
    for e, c in a.terms.items():
        if sum(e) != n:
            continue
        w = p.monomial_weight(e)
        if exact:
            total += _coeff_abs(c, True) * w
        else:
            total += _coeff_abs(c, False) * float(w)
    return total


def _fact_pow(n: int, R, exact: bool):
    if exact:
        R = Fraction(R)
        if R.denominator != 1:
            raise DomainError("exact factorial powers need an integer R")
        if R.numerator >= 0:
            return Fraction(math.factorial(n) ** R.numerator)
        return Fraction(1, math.factorial(n) ** (-R.numerator))
    return math.exp(float(R) * math.lgamma(n + 1))


def p_R(a: Element, p: WeightedSeminorm, R, exact: bool = False):
    """The weighted-factorial seminorm: sum_n n!^R * pn(a, n)."""
    total = Fraction(0) if exact else 0.0
    for n, part in a.grade_components().items():
        total += _fact_pow(n, R, exact) * pn_seminorm(part, n, p, exact)
    if __debug__ and not exact and a.terms:
        lo = p_R_inf(a, p, R)
        hi = 2.0 * p_R_inf(a, p.scaled(2), R)
        t = float(total)
        assert lo <= t * (1 + REL_TOL) + 1e-300
        assert t <= hi * (1 + REL_TOL) + 1e-300
    return total


def p_R_inf(a: Element, p: WeightedSeminorm, R, exact: bool = False):
    """The sup variant: sup_n n!^R * pn(a, n)."""
    best = Fraction(0) if exact else 0.0
    for n, part in a.grade_components().items():
        v = _fact_pow(n, R, exact) * pn_seminorm(part, n, p, exact)
        if v > best:
            best = v
    return best


def wick_epsilon_norm(a: Element, eps: float):
    """Sup of Taylor-coefficient magnitudes damped by n!^eps.

    Monomial coefficients convert to Taylor coefficients by the product of
    exponent factorials.  Odd generators are not part of this picture.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    best = 0.0
    for e, c in a.terms.items():
        for i, k in enumerate(e):
            if k and not a.basis.is_even(i):
                raise DomainError("element contains odd generators")
        taylor = scalars.scalar_abs(c)
        for k in e:
            taylor *= math.factorial(k)
        n = sum(e)
        v = taylor / math.factorial(n) ** eps
        best = max(best, v)
    return best


def _to_float_element(a: Element) -> Element:
    if a.backend == "float":
        return a
    return Element(
        a.basis, "float", {e: scalars.to_complex(c) for e, c in a.terms.items()}
    )


def ommy_norm_upper(a: Element, p_param: float, s: float, seed: int = 0, samples: int = 200):
    """Certified upper bound for the sup-type seminorm sup |a(x)| e^{-s|x|^p}.

    Uses the per-degree bound sup_r r^n e^{-s r^p} = (n/(sp))^{n/p} e^{-n/p}
    with the unit-weight coefficient sum per degree.  A Monte-Carlo lower
    bound (a maximum of sampled values) is returned alongside.
    """
    if not (0 < p_param <= 2):
        raise DomainError("p_param must lie in (0, 2]")
    if s <= 0:
        raise DomainError("s must be positive")
    p = WeightedSeminorm.unit(a.basis)
    upper = 0.0
    for n, part in a.grade_components().items():
        if n == 0:
            bound = 1.0
        else:
            bound = (n / (s * p_param)) ** (n / p_param) * math.exp(-n / p_param)
        upper += pn_seminorm(part, n, p) * bound
    rng = random.Random(seed)
    af = _to_float_element(a)
    names = [a.basis.names[i] for i in a.basis.even_indices()]
    if len(names) != a.basis.dimension:
        raise DomainError("sup-seminorm sampling needs an all-even basis")
    lower = 0.0
    for _ in range(samples):
        radius = rng.expovariate(0.5)
        point = {}
        norm2 = 0.0
        for name in names:
            x = complex(rng.gauss(0, 1), rng.gauss(0, 1))
            point[name] = x
            norm2 += abs(x) ** 2
        scale = radius / math.sqrt(norm2) if norm2 else 0.0
        point = {k: v * scale for k, v in point.items()}
        val = abs(af.evaluate(point)) * math.exp(-s * radius**p_param)
        lower = max(lower, val)
    return {"upper": upper, "lower": lower, "p": p_param, "s": s}


@dataclass
class EstimateReport:
    lhs: object
    rhs: object
    constants: dict
    holds: bool
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "constants": {
                k: (float(v) if isinstance(v, (int, float, Fraction)) else v)
                for k, v in self.constants.items()
            },
            "holds": self.holds,
            "witness": self.witness,
        }


def reports_to_csv(reports) -> str:
    """Flatten estimate reports into CSV rows (lhs, rhs, slack, holds)."""
    lines = ["index,lhs,rhs,slack,holds"]
    for k, rep in enumerate(reports):
        lhs, rhs = float(rep.lhs), float(rep.rhs)
        slack = rhs / lhs if lhs else math.inf
        lines.append(f"{k},{lhs!r},{rhs!r},{slack!r},{int(rep.holds)}")
    return "\n".join(lines) + "\n"


def _dominating_seminorm(form: BilinearForm, p: WeightedSeminorm, exact: bool):
    """Rescale p so that |form(e_i, e_j)| <= p(e_i) p(e_j) everywhere."""
    gamma = Fraction(0) if exact else 0.0
    for i, j in form.pairs():
        c = form.matrix[i][j]
        mag = _coeff_abs(c, exact)
        ratio = mag / (p.weights[i] * p.weights[j])
        if ratio > gamma:
            gamma = ratio
    if gamma <= 1:
        return p, Fraction(1) if exact else 1.0
    if exact:
        sigma = Fraction(math.sqrt(float(gamma))).limit_denominator(10**9)
        while sigma * sigma < gamma:
            sigma *= Fraction(1048577, 1048576)
        return p.scaled(sigma), sigma
    sigma = math.sqrt(gamma) * (1 + 1e-12)
    return p.scaled(Fraction(sigma)), sigma


def _series_sum(term, exact: bool, kmax: int = 40):
    total = Fraction(0) if exact else 0.0
    for k in range(kmax + 1):
        t = term(k)
        total += t
        if not exact and t < 1e-30 * (total or 1.0):
            break
    return total


def verify_product_estimate(
    a: Element, b: Element, z, form: BilinearForm, R, p: WeightedSeminorm,
    exact: bool | None = None,
) -> EstimateReport:
    """Check p_R(a * b) <= c' (cp)_R(a) (cp)_R(b) with the proof constants.

    c = max(2|z|, 2, 2^R); c' is the convergent k-series of the matching
    proof branch, evaluated as a partial sum (a lower bound, which only
    strengthens the check).  Requires R >= 1/2; the estimate is not
    claimed below that.
    """
    R = Fraction(R)
    if R < Fraction(1, 2):
        raise RefusedPreconditionError("the product estimate requires R >= 1/2")
    if exact is None:
        exact = R.denominator == 1 and a.backend == "exact"
    if exact and R.denominator != 1:
        raise DomainError("exact product estimate needs an integer R")
    if not isinstance(z, (scalars.QC, complex)):
        z = scalars.from_rational(a.backend, z)
    zmag = _coeff_abs(z, exact)
    pd, sigma = _dominating_seminorm(form, p, exact)

    prod = star(a, b, z, form)
    lhs = p_R(prod, pd, R, exact)

    two_R = (
        Fraction(2) ** R.numerator if exact else 2.0 ** float(R)
    )
    c = max(2 * zmag, 2 if exact else 2.0, two_R)
    if R <= 1 and zmag >= 1:
        branch = "R<=1,|z|>=1"

        def term(k):
            if exact:
                return Fraction(1) / (
                    zmag**k * Fraction(math.factorial(k)) ** (2 * R.numerator - 1)
                    * Fraction(2) ** (2 * R.numerator * k)
                )
            return 1.0 / (
                float(zmag) ** k
                * math.factorial(k) ** (2 * float(R) - 1)
                * 2.0 ** (2 * float(R) * k)
            )

    elif R <= 1:
        branch = "R<=1,|z|<1"

        def term(k):
            if exact:
                return (
                    zmag**k
                    / Fraction(2) ** (2 * R.numerator * k)
                    / Fraction(math.factorial(k)) ** (2 * R.numerator - 1)
                )
            return (
                float(zmag) ** k
                * 2.0 ** (-2 * float(R) * k)
                / math.factorial(k) ** (2 * float(R) - 1)
            )

    else:
        branch = "R>1"

        def term(k):
            if exact:
                return (
                    zmag**k
                    / Fraction(2) ** (2 * R.numerator * k)
                    / Fraction(math.factorial(k))
                )
            return (
                float(zmag) ** k
                * 2.0 ** (-2 * float(R) * k)
                / math.factorial(k)
            )

    c_prime = _series_sum(term, exact)
    cp = pd.scaled(c) if exact else pd.scaled(Fraction(c))
    rhs = c_prime * p_R(a, cp, R, exact) * p_R(b, cp, R, exact)
    holds = lhs <= rhs if exact else lhs <= rhs * (1 + REL_TOL)
    return EstimateReport(
        lhs,
        rhs,
        {"c": c, "c_prime": c_prime, "branch": branch, "sigma": sigma, "R": R},
        bool(holds),
        {"z": repr(z), "deg_a": a.max_degree(), "deg_b": b.max_degree()},
    )


def verify_bracket_estimate(
    a: Element, b: Element, form: BilinearForm, R, p: WeightedSeminorm,
    exact: bool | None = None,
) -> EstimateReport:
    """Check p_R({a, b}) <= (2^{R+1} p)_R(a) (2^{R+1} p)_R(b) for R >= 0."""
    R = Fraction(R)
    if R < 0:
        raise DomainError("the bracket estimate requires R >= 0")
    if exact is None:
        exact = R.denominator == 1 and a.backend == "exact"
    if exact and R.denominator != 1:
        raise DomainError("exact bracket estimate needs an integer R")
    pd, sigma = _dominating_seminorm(form, p, exact)
    br = poisson_bracket(a, b, form)
    lhs = p_R(br, pd, R, exact)
    if exact:
        c = Fraction(2) ** (R.numerator + 1)
    else:
        c = 2.0 ** (float(R) + 1)
    cp = pd.scaled(Fraction(c))
    rhs = p_R(a, cp, R, exact) * p_R(b, cp, R, exact)
    holds = lhs <= rhs if exact else lhs <= rhs * (1 + REL_TOL)
    return EstimateReport(
        lhs,
        rhs,
        {"c": c, "sigma": sigma, "R": R},
        bool(holds),
        {"deg_a": a.max_degree(), "deg_b": b.max_degree()},
    )


# -- Koethe matrices and summability -------------------------------------


def _monomials_of_degree(basis, n):
    d = basis.dimension
    out = []

    def rec(i, remaining, acc):
        if i == d:
            if remaining == 0:
                out.append(tuple(acc))
            return
        cap = remaining if basis.is_even(i) else min(1, remaining)
        for k in range(cap + 1):
            acc.append(k)
            rec(i + 1, remaining - k, acc)
            acc.pop()

    rec(0, n, [])
    return sorted(out)


class KotheMatrix:
    """Rows: basis monomials up to a degree cap; columns: (seminorm, R) pairs.

    The entry for a degree-n monomial is n!^R times the product of its
    generator weights.  Entries are kept in log space for diagnostics (the
    raw values overflow binary64 well before n = 200); exact values are
    available per entry when R is an integer.
    """

    def __init__(self, basis, columns, n_max):
        if n_max < 0:
            raise DomainError("n_max must be >= 0")
        self.basis = basis
        self.columns = []
        for col in columns:
            p, R = col
            self.columns.append((p, Fraction(R)))
        if not self.columns:
            raise DomainError("at least one column is required")
        self.rows = []
        for n in range(n_max + 1):
            self.rows.extend(_monomials_of_degree(basis, n))
        self.degrees = [sum(e) for e in self.rows]

    def log_entry(self, i: int, j: int) -> float:
        p, R = self.columns[j]
        n = self.degrees[i]
        total = float(R) * math.lgamma(n + 1)
        for g, k in enumerate(self.rows[i]):
            if k:
                total += k * math.log(float(p.weights[g]))
        return total

    def entry(self, i: int, j: int):
        p, R = self.columns[j]
        n = self.degrees[i]
        if R.denominator == 1:
            return Fraction(math.factorial(n)) ** R.numerator * p.monomial_weight(
                self.rows[i]
            )
        return math.exp(self.log_entry(i, j))

    @property
    def shape(self):
        return (len(self.rows), len(self.columns))

    def to_rows(self):
        """Float matrix (entries may be inf for huge values); for export."""
        out = []
        for i in range(len(self.rows)):
            row = []
            for j in range(len(self.columns)):
                lv = self.log_entry(i, j)
                row.append(math.exp(lv) if lv < 700 else math.inf)
            out.append(row)
        return out

    def entry_repr(self, i: int, j: int) -> str:
        v = self.entry(i, j)
        return str(v) if isinstance(v, Fraction) else repr(v)

    def to_csv(self) -> str:
        """CSV with one row per monomial: degree, exponents, then columns."""
        lines = ["degree,monomial," + ",".join(f"col{j}" for j in range(len(self.columns)))]
        for i, exps in enumerate(self.rows):
            mono = "*".join(
                f"{self.basis.names[g]}^{k}" if k > 1 else self.basis.names[g]
                for g, k in enumerate(exps)
                if k
            ) or "1"
            cells = ",".join(self.entry_repr(i, j) for j in range(len(self.columns)))
            lines.append(f"{self.degrees[i]},{mono},{cells}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "rows": [
                {
                    "degree": self.degrees[i],
                    "exponents": list(self.rows[i]),
                    "entries": [self.entry_repr(i, j) for j in range(len(self.columns))],
                }
                for i in range(len(self.rows))
            ],
            "columns": [
                {"R": str(R), "weights": [str(w) for w in p.weights]}
                for p, R in self.columns
            ],
        }


def kothe_matrix(seminorms, R, n_max, basis=None) -> KotheMatrix:
    """Build the weight matrix of the graded algebra's monomial basis.

    ``seminorms`` is a list of WeightedSeminorm (sharing one R) or a list
    of (WeightedSeminorm, R) pairs; a scale grid c*p is expressed through
    ``WeightedSeminorm.scaled``.
    """
    cols = []
    for item in seminorms:
        if isinstance(item, WeightedSeminorm):
            cols.append((item, R))
        else:
            cols.append(item)
    if basis is None:
        basis = cols[0][0].basis
    return KotheMatrix(basis, cols, n_max)


def nuclearity_diagnostic(K: KotheMatrix, mode: str = "nuclear", alphas=None):
    """Grothendieck-Pietsch style summability check on column ratios.

    For each ordered column pair (small, large) with the large column
    dominating entrywise, the partial sums of (small/large)^alpha over the
    rows are computed, alpha = 1 for plain nuclearity or a halving grid
    for the strong variant.  A pair is reported summable when the
    per-degree term blocks decay geometrically (ratio test); identical
    columns give ratio one and are flagged non-summable.
    """
    if mode not in ("nuclear", "strong"):
        raise DomainError("mode must be 'nuclear' or 'strong'")
    if alphas is None:
        alphas = [1.0] if mode == "nuclear" else [1.0, 0.5, 0.25]
    ncols = len(K.columns)
    nrows = len(K.rows)
    comparable = []
    for i in range(ncols):
        for j in range(ncols):
            if i == j:
                continue
            if all(
                K.log_entry(r, j) >= K.log_entry(r, i) - 1e-12 for r in range(nrows)
            ):
                comparable.append((i, j))
    if not comparable:
        raise DomainError("no entrywise-comparable column pairs")
    results = []
    max_degree = max(K.degrees)
    for i, j in comparable:
        logratio = [K.log_entry(r, i) - K.log_entry(r, j) for r in range(nrows)]
        for alpha in alphas:
            blocks = [0.0] * (max_degree + 1)
            for r in range(nrows):
                blocks[K.degrees[r]] += math.exp(alpha * logratio[r])
            partials = []
            acc = 0.0
            for v in blocks:
                acc += v
                partials.append(acc)
            summable = _blocks_summable(blocks)
            results.append(
                {
                    "pair": (i, j),
                    "alpha": alpha,
                    "partials": partials,
                    "block_terms": blocks,
                    "summable": summable,
                }
            )
    return {"mode": mode, "results": results}


def _blocks_summable(blocks, window: int = 5) -> bool:
    terms = [b for b in blocks if b > 0]
    if len(terms) <= window:
        return True
    ratios = [terms[k + 1] / terms[k] for k in range(len(terms) - 1)]
    tail = ratios[-window:]
    return all(r < 0.999 for r in tail)
