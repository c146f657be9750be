"""Degree-truncated elements of the completed algebra.

A truncated series stores one homogeneous component per degree up to its
truncation order.  Because a single contraction lowers the combined
degree by two, *every* output degree of a product of two infinite series
receives contributions from arbitrarily high input degrees; per-degree
exactness of a truncated product is therefore a bookkeeping question,
answered by ``exact_through`` metadata: it is the largest output degree
whose value provably equals the untruncated one given the inputs
consulted.  Tagged closed-form series (exponentials of degree-one
elements) keep their tails under control: contractions against a
degree-one tail are summable in closed form, which is what the
star-exponential and inner-automorphism checks exploit.

Per-degree computations are pure functions assembled in a fixed order;
exact-backend results are identical regardless of evaluation schedule.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import scalars
from .bilinear_forms import BilinearForm, lambda_parts
from .errors import DomainError, RefusedPreconditionError, TruncationBudgetError
from .graded_poly import Element
from .seminorm_calculus import WeightedSeminorm, pn_seminorm
from .star_algebra import star

RATIO_BAND = (0.95, 1.05)
SLOPE_TOL = 0.01
DEFAULT_ORDER = 16


class TruncatedSeries:
    """Per-degree components of a series, truncated at a fixed order."""

    __slots__ = ("basis", "backend", "components", "order", "label", "has_tail", "meta")

    def __init__(self, components, order, label=None, has_tail=True, meta=None):
        if len(components) != order + 1:
            raise DomainError("need one component per degree 0..order")
        first = components[0]
        for n, comp in enumerate(components):
            if comp.basis != first.basis or comp.backend != first.backend:
                raise DomainError("components disagree on basis or backend")
            for e in comp.terms:
                if sum(e) != n:
                    raise DomainError(f"component {n} contains degree {sum(e)} terms")
        self.basis = first.basis
        self.backend = first.backend
        self.components = tuple(components)
        self.order = order
        self.label = label or {"kind": "custom"}
        self.has_tail = has_tail
        self.meta = dict(meta or {})

    @classmethod
    def from_element(cls, a: Element, order: int, label=None):
        comps = [a.grade_component(n) for n in range(order + 1)]
        return cls(
            comps,
            order,
            label or {"kind": "custom"},
            has_tail=a.max_degree() > order,
        )

    def component(self, n: int) -> Element:
        if n > self.order:
            return Element.zero(self.basis, self.backend)
        return self.components[n]

    def as_element(self) -> Element:
        total = Element.zero(self.basis, self.backend)
        for comp in self.components:
            total = total + comp
        return total

    def polynomial_degree(self):
        """Largest stored degree with a nonzero component (-1 if none)."""
        for n in range(self.order, -1, -1):
            if self.components[n]:
                return n
        return -1

    def __repr__(self):
        kind = self.label.get("kind", "custom")
        return f"TruncatedSeries({kind}, order={self.order})"


def exp_element(v: Element, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The exponential series of a degree-one element, truncated.

    For a purely odd v the series terminates exactly at 1 + v.  The
    weighted partial sums p(v)^n n!^{R-1} of the seminorm of the result
    converge precisely for R < 1; see ``convergence_diagnosis``.
    """
    _require_degree_one(v)
    comps = [Element.one(v.basis, v.backend)]
    power = Element.one(v.basis, v.backend)
    tail = True
    for n in range(1, order + 1):
        power = power * v
        if not power:
            comps.extend(
                Element.zero(v.basis, v.backend) for _ in range(n, order + 1)
            )
            tail = False
            break
        comps.append(
            power.scale(scalars.from_rational(v.backend, Fraction(1, math.factorial(n))))
        )
    return TruncatedSeries(comps, order, {"kind": "exp", "v": v}, has_tail=tail)


def star_exp(w: Element, t, z, form: BilinearForm, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Star-exponential of t*w, truncated at total series order ``order``.

    Matches the closed form exp(t w + t^2 z/2 * form(w, w)); the stored
    truncation keeps every term of combined series order <= order, which
    is exactly the partial sum over the first ``order`` star powers.
    Per-degree equality against sum_{l<=order} t^l/l! w*...*w is exact.
    """
    _require_degree_one(w)
    if w.parity() != 0:
        raise DomainError("the star-exponential closed form needs an even element")
    if not isinstance(t, (scalars.QC, complex)):
        t = scalars.from_rational(w.backend, t)
    if not isinstance(z, (scalars.QC, complex)):
        z = scalars.from_rational(w.backend, z)
    lam = form.apply(w, w)
    half_zlam = scalars.mul_rat(w.backend, z * lam, Fraction(1, 2))
    comps = []
    power = Element.one(w.basis, w.backend)
    for n in range(order + 1):
        if n:
            power = power * w
        coeff = scalars.zero(w.backend)
        j = 0
        while n + 2 * j <= order:
            contrib = scalars.mul_rat(
                w.backend,
                t ** (n + 2 * j) * half_zlam**j,
                Fraction(1, math.factorial(n) * math.factorial(j)),
            )
            coeff = coeff + contrib
            j += 1
        comps.append(power.scale(coeff))
    return TruncatedSeries(
        comps,
        order,
        {"kind": "star_exp", "t": t, "z": z, "lam": lam},
        has_tail=bool(w),
    )


def f_epsilon_series(v: Element, eps, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The entire-function series with n!^eps denominators, truncated.

    Its weighted partial sums n!^{R-eps} p(v)^n converge iff R < eps, so
    for eps < 1 these elements escape every completion that still carries
    the star product.  Non-integer eps forces float coefficients.
    """
    _require_degree_one(v)
    if v.parity() != 0:
        raise DomainError("series generator must be even")
    eps_f = Fraction(eps)
    if eps_f <= 0:
        raise DomainError("eps must be positive")
    exact_ok = eps_f.denominator == 1 and v.backend == "exact"
    if not exact_ok and v.backend == "exact":
        v = Element(
            v.basis, "float", {e: scalars.to_complex(c) for e, c in v.terms.items()}
        )
    comps = [Element.one(v.basis, v.backend)]
    power = Element.one(v.basis, v.backend)
    for n in range(1, order + 1):
        power = power * v
        if exact_ok:
            coeff = Fraction(1, math.factorial(n) ** eps_f.numerator)
            comps.append(power.scale(scalars.from_rational(v.backend, coeff)))
        else:
            comps.append(power.scale(complex(math.factorial(n) ** -float(eps_f), 0)))
    return TruncatedSeries(comps, order, {"kind": "f_eps", "eps": eps}, has_tail=bool(v))


def _require_degree_one(v: Element):
    if not v or any(sum(e) != 1 for e in v.terms):
        raise DomainError("expected a nonzero homogeneous degree-1 element")


def truncated_star(
    A: TruncatedSeries,
    B: TruncatedSeries,
    z,
    form: BilinearForm,
    order: int,
    budget: int | None = None,
    require_exact: bool = False,
) -> TruncatedSeries:
    """Product of two truncated series, truncated at ``order``.

    Consults input components up to order + budget (everything stored when
    budget is None).  ``meta["exact_through"]`` reports the largest output
    degree provably unaffected by the inputs' unseen tails: contractions
    lower the combined degree by two, so a tail can reach down into every
    degree unless the partner series is a polynomial.
    """
    if A.basis != B.basis or A.backend != B.backend:
        raise DomainError("series over different bases or backends")
    cap = max(A.order, B.order) if budget is None else order + budget
    ka_max = min(A.order, cap)
    kb_max = min(B.order, cap)
    out = [Element.zero(A.basis, A.backend) for _ in range(order + 1)]
    for k in range(ka_max + 1):
        ak = A.components[k]
        if not ak:
            continue
        for l in range(kb_max + 1):
            bl = B.components[l]
            if not bl:
                continue
            if k + l - 2 * min(k, l) > order:
                continue
            prod = star(ak, bl, z, form)
            for n, part in prod.grade_components().items():
                if n <= order:
                    out[n] = out[n] + part

    la, lb = A.polynomial_degree(), B.polynomial_degree()
    tail_a = A.has_tail or la > ka_max
    tail_b = B.has_tail or lb > kb_max
    if not tail_a and not tail_b:
        exact_through = order
    elif tail_a and tail_b:
        exact_through = -1
    elif tail_a:
        exact_through = ka_max - lb if lb >= 0 else order
    else:
        exact_through = kb_max - la if la >= 0 else order
    exact_through = min(exact_through, order)
    if require_exact and exact_through < order:
        raise TruncationBudgetError(
            f"tails can reach degree {exact_through + 1} and above; "
            "increase the truncation budget"
        )
    return TruncatedSeries(
        out,
        order,
        {"kind": "custom"},
        has_tail=A.has_tail or B.has_tail,
        meta={"exact_through": exact_through},
    )


def convergence_diagnosis(S: TruncatedSeries, p: WeightedSeminorm, R, window: int = 5):
    """Partial sums of n!^R p^n(S_n) with a finite-order growth verdict.

    The verdict inspects the term-ratio sequence: a clearly negative
    log-log slope means the ratios tend to zero (converging), a positive
    one that they blow up (diverging); for flat ratio sequences the level
    decides, with the band [0.95, 1.05] reported as inconclusive.  The
    window and band are finite-order heuristics; the underlying statements
    are asymptotic.
    """
    terms = []
    for n in range(S.order + 1):
        comp = S.components[n]
        v = math.exp(float(R) * math.lgamma(n + 1)) * pn_seminorm(comp, n, p)
        terms.append(v)
    partials = []
    acc = 0.0
    for v in terms:
        acc += v
        partials.append(acc)
    nz = [(n, t) for n, t in enumerate(terms) if t > 0.0]
    verdict, slope = _ratio_verdict(nz, window, not S.has_tail)
    ratios = [
        (nz[k + 1][1] / nz[k][1]) for k in range(len(nz) - 1)
    ]
    return {
        "terms": terms,
        "partials": partials,
        "ratios": ratios,
        "verdict": verdict,
        "slope": slope,
        "metadata": {
            "kind": S.label.get("kind", "custom"),
            "order": S.order,
            "R": float(R),
            "has_tail": S.has_tail,
        },
    }


def _ratio_verdict(nz_terms, window, finite):
    if finite or len(nz_terms) <= 1:
        return "converging", None
    ratios = []
    for k in range(len(nz_terms) - 1):
        n0, t0 = nz_terms[k]
        n1, t1 = nz_terms[k + 1]
        ratios.append((n1, (t1 / t0) ** (1.0 / (n1 - n0))))
    if len(ratios) < window + 2:
        return "inconclusive", None
    pts = ratios[max(len(ratios) // 2, len(ratios) - 3 * window) :]
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(r) for _, r in pts]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    denom = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / denom if denom else 0.0
    if slope < -SLOPE_TOL:
        return "converging", slope
    if slope > SLOPE_TOL:
        return "diverging", slope
    level = math.exp(sum(math.log(r) for _, r in ratios[-window:]) / window)
    if level < RATIO_BAND[0]:
        return "converging", slope
    if level > RATIO_BAND[1]:
        return "diverging", slope
    return "inconclusive", slope


def divergence_witness_standard_ordered(eps: float, hbar: float, L: int):
    """Degree-zero partial sums of f_eps(p) * f_eps(q), standard ordering.

    The l-th term is (-i hbar)^l l!^{1-2eps}; below eps = 1/2 the term
    magnitudes eventually increase without bound, witnessing that no
    continuous product exists there.  Each term is obtained from an
    actual star product of the series components and cross-checked
    against the closed form.
    """
    if not (0 < eps < 0.5):
        raise RefusedPreconditionError("the witness is claimed only for 0 < eps < 1/2")
    if hbar < 0:
        raise DomainError("hbar must be nonnegative")
    if L < 0:
        raise DomainError("L must be >= 0")
    from .basis import GeneratorBasis

    basis = GeneratorBasis(("q", "p"), ("even", "even"))
    form = BilinearForm.from_entries(basis, {("p", "q"): 1}, backend="float")
    z = complex(0, -hbar)
    fp = f_epsilon_series(Element.generator(basis, "p", "float"), eps, L)
    fq = f_epsilon_series(Element.generator(basis, "q", "float"), eps, L)
    terms = []
    for ell in range(L + 1):
        prod = star(fp.components[ell], fq.components[ell], z, form)
        const = prod.grade_component(0)
        val = next(iter(const.terms.values()), 0j)
        closed = (z**ell) * math.factorial(ell) ** (1 - 2 * eps)
        if abs(val - closed) > 1e-9 * max(1.0, abs(closed)):
            raise AssertionError("star route disagrees with the closed form")
        terms.append(val)
    partials = []
    acc = 0j
    for v in terms:
        acc += v
        partials.append(acc)
    term_mags = [abs(v) for v in terms]
    partial_mags = [abs(v) for v in partials]
    increasing_from = None
    for start in range(len(term_mags)):
        if all(
            term_mags[k + 1] > term_mags[k] for k in range(start, len(term_mags) - 1)
        ):
            increasing_from = start
            break
    return {
        "terms": terms,
        "term_magnitudes": term_mags,
        "partial_magnitudes": partial_mags,
        "increasing_from": increasing_from,
    }


def inner_translation_check(w: Element, v: Element, z, form: BilinearForm, order: int = 10):
    """Conjugation by the star-exponential versus the translation.

    Expands Exp(w) * v * Exp(-w) order by order in the one-parameter
    group: the r-th term is sum_{l+m=r} (-1)^m/(l! m!) w^{*l} * v * w^{*m}.
    Order zero is v, order one is phi(v) 1 with phi = 2 z minus(w, .),
    and every higher order vanishes identically (the iterated commutator
    of w with a scalar); the degree-zero partial sums therefore telescope
    to phi(v) and all components match v + phi(v) 1 exactly.
    """
    _require_degree_one(w)
    if w.parity() != 0:
        raise DomainError("conjugating element must be even")
    if not isinstance(z, (scalars.QC, complex)):
        z = scalars.from_rational(w.backend, z)
    if scalars.is_zero(z):
        raise DomainError("z must be nonzero")
    _, minus = lambda_parts(form)
    phi_v = minus.apply(w, v) * z * 2

    star_pows = [Element.one(w.basis, w.backend)]
    for _ in range(order):
        star_pows.append(star(star_pows[-1], w, z, form))

    orders = []
    cumulative = Element.zero(w.basis, w.backend)
    degree0_partials = []
    for r in range(order + 1):
        term = Element.zero(w.basis, w.backend)
        for l in range(r + 1):
            m = r - l
            piece = star(star(star_pows[l], v, z, form), star_pows[m], z, form)
            coeff = scalars.mul_rat(
                w.backend,
                scalars.one(w.backend),
                Fraction((-1) ** m, math.factorial(l) * math.factorial(m)),
            )
            term = term + piece.scale(coeff)
        orders.append(term)
        cumulative = cumulative + term
        c0 = cumulative.grade_component(0)
        degree0_partials.append(next(iter(c0.terms.values()), scalars.zero(w.backend)))

    rhs = v + Element.scalar(w.basis, phi_v, w.backend)
    per_degree_match = [
        cumulative.grade_component(n) == rhs.grade_component(n)
        for n in range(order + 1)
    ]
    return {
        "orders": orders,
        "lhs_element": cumulative,
        "rhs_element": rhs,
        "per_degree_match": per_degree_match,
        "degree0_partials": degree0_partials,
        "phi_v": phi_v,
    }
