"""Sparse graded-commutative polynomial algebra over a finite basis.

Elements are finite sums of canonical monomials with scalar coefficients.
Canonicalization absorbs all Koszul signs at construction time: odd
generators are kept in ascending index order and any reordering sign is
multiplied into the coefficient, so equality of elements is a plain map
comparison.  Zero coefficients are never stored.

No hard degree cap is imposed; products cost O(#terms^2) monomial
merges, and the ordered-tensor expansion (``ordered_coefficients``)
grows like O(#terms^2 * degree!) in the worst case, which is why it is
materialized lazily per degree and never used for storage.  All values
are immutable after construction and every operation is a pure function,
safe for concurrent use.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from . import scalars
from ._backend import kernels_for
from .basis import GeneratorBasis, require_same_basis
from .errors import DomainError


class Monomial:
    """A canonical basis monomial: even exponents plus ordered odd indices."""

    __slots__ = ("basis", "exps")

    def __init__(self, basis: GeneratorBasis, exps):
        exps = tuple(exps)
        if len(exps) != basis.dimension:
            raise DomainError("exponent tuple has wrong length")
        for i, k in enumerate(exps):
            if k < 0:
                raise DomainError("negative exponent")
            if k > 1 and not basis.is_even(i):
                raise DomainError(f"odd generator {basis.names[i]!r} repeated")
        self.basis = basis
        self.exps = exps

    @property
    def even_exponents(self):
        return {
            self.basis.names[i]: k
            for i, k in enumerate(self.exps)
            if k and self.basis.is_even(i)
        }

    @property
    def odd_indices(self):
        return tuple(
            i for i, k in enumerate(self.exps) if k and not self.basis.is_even(i)
        )

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def parity(self) -> int:
        return len(self.odd_indices) & 1

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.basis == other.basis and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        if not any(self.exps):
            return "1"
        parts = []
        for i, k in enumerate(self.exps):
            if not k:
                continue
            name = self.basis.names[i]
            parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)


class Element:
    """A finite sum of canonical monomials with scalar coefficients."""

    __slots__ = ("basis", "backend", "terms")

    def __init__(self, basis: GeneratorBasis, backend: str, terms=None):
        if backend not in scalars.BACKENDS:
            raise DomainError(f"unknown scalar backend {backend!r}")
        self.basis = basis
        self.backend = backend
        self.terms = dict(terms or {})

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, basis, backend="exact"):
        return cls(basis, backend, {})

    @classmethod
    def one(cls, basis, backend="exact"):
        e0 = (0,) * basis.dimension
        return cls(basis, backend, {e0: scalars.one(backend)})

    @classmethod
    def scalar(cls, basis, value, backend="exact"):
        out = cls.zero(basis, backend)
        if not scalars.is_zero(value):
            out.terms[(0,) * basis.dimension] = value
        return out

    @classmethod
    def generator(cls, basis, name, backend="exact"):
        i = basis.index(name)
        e = tuple(1 if j == i else 0 for j in range(basis.dimension))
        return cls(basis, backend, {e: scalars.one(backend)})

    @classmethod
    def from_terms(cls, basis, backend, items):
        """Build from (exponent tuple | Monomial, coefficient) pairs."""
        out = cls.zero(basis, backend)
        for key, c in items:
            e = key.exps if isinstance(key, Monomial) else tuple(key)
            Monomial(basis, e)
            _accumulate(out.terms, e, c)
        return out

    # -- ring structure ------------------------------------------------

    def __add__(self, other):
        require_same_basis(self, other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            _accumulate(terms, e, c)
        return Element(self.basis, self.backend, terms)

    def __sub__(self, other):
        require_same_basis(self, other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            _accumulate(terms, e, -c)
        return Element(self.basis, self.backend, terms)

    def __neg__(self):
        return Element(
            self.basis, self.backend, {e: -c for e, c in self.terms.items()}
        )

    def scale(self, value):
        if not isinstance(value, (scalars.QC, complex)):
            value = scalars.from_rational(self.backend, value)
        if scalars.is_zero(value):
            return Element.zero(self.basis, self.backend)
        return Element(
            self.basis, self.backend, {e: c * value for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        require_same_basis(self, other)
        K = kernels_for(self.basis.dimension)
        terms = K.mul_terms(self.terms, other.terms, self.basis.odd_mask)
        return Element(self.basis, self.backend, terms)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("powers must be nonnegative integers")
        out = Element.one(self.basis, self.backend)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.backend == other.backend
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.basis, self.backend, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure maps -------------------------------------------------

    def items(self):
        for e, c in self.terms.items():
            yield Monomial(self.basis, e), c

    def max_degree(self) -> int:
        """Largest monomial degree present; -1 for the zero element."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def grade_component(self, n: int):
        return Element(
            self.basis,
            self.backend,
            {e: c for e, c in self.terms.items() if sum(e) == n},
        )

    def grade_components(self):
        """Map degree -> homogeneous part, for the degrees present."""
        out = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {
            n: Element(self.basis, self.backend, t) for n, t in sorted(out.items())
        }

    def parity_split(self):
        K = kernels_for(self.basis.dimension)
        even, odd = {}, {}
        for e, c in self.terms.items():
            (odd if K.parity_of(e, self.basis.odd_mask) else even)[e] = c
        return (
            Element(self.basis, self.backend, even),
            Element(self.basis, self.backend, odd),
        )

    def parity(self):
        """0 or 1 for parity-homogeneous elements (0 = zero element), None if mixed."""
        ev, od = self.parity_split()
        if ev and od:
            return None
        return 1 if od else 0

    def conjugate(self):
        return Element(
            self.basis,
            self.backend,
            {e: scalars.conj(c) for e, c in self.terms.items()},
        )

    def evaluate(self, point):
        """Evaluate at a point assigning a scalar to every even generator.

        Elements containing odd generators cannot be evaluated.
        """
        values = {}
        for name, v in point.items():
            values[self.basis.index(name)] = v
        for i in self.basis.even_indices():
            if i not in values:
                raise DomainError(f"no value for generator {self.basis.names[i]!r}")
        total = scalars.zero(self.backend)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if not k:
                    continue
                if not self.basis.is_even(i):
                    raise DomainError("cannot evaluate an element with odd generators")
                term = term * values[i] ** k
            total = total + term
        return total

    def ordered_coefficients(self, n: int):
        """Totally graded-symmetric tensor coefficients of the degree-n part.

        Returns a map from length-n tuples of generator names to scalars.
        Reassembling sum(coeff * x_{i_1} ... x_{i_n}) over the tuples
        reproduces the degree-n part exactly; coefficients flip sign under
        odd-odd transpositions of the tuple.
        """
        out = {}
        for e, c in self.terms.items():
            if sum(e) != n:
                continue
            canonical = []
            repeat = 1
            for i, k in enumerate(e):
                canonical.extend([i] * k)
                if self.basis.is_even(i):
                    repeat *= math.factorial(k)
            base = (
                scalars.mul_rat(self.backend, c, Fraction(repeat, math.factorial(n)))
                if n
                else c
            )
            for tup in _distinct_permutations(tuple(canonical)):
                sign = _koszul_sort_sign(tup, self.basis)
                names = tuple(self.basis.names[i] for i in tup)
                out[names] = base if sign > 0 else -base
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            bits.append(f"({self.terms[e]!r})*{Monomial(self.basis, e)!r}")
        return " + ".join(bits)


def _accumulate(terms, e, c):
    prev = terms.get(e)
    if prev is None:
        if not scalars.is_zero(c):
            terms[e] = c
        return
    s = prev + c
    if scalars.is_zero(s):
        del terms[e]
    else:
        terms[e] = s


def _distinct_permutations(items):
    seen = set()
    for p in itertools.permutations(items):
        if p not in seen:
            seen.add(p)
            yield p


def _koszul_sort_sign(tup, basis):
    """Sign for sorting an index tuple into canonical ascending order.

    Counts inversions between odd generators; even generators commute
    without sign.
    """
    inv = 0
    odd_positions = [i for i in tup if not basis.is_even(i)]
    for a in range(len(odd_positions)):
        for b in range(a + 1, len(odd_positions)):
            if odd_positions[a] > odd_positions[b]:
                inv += 1
    return -1 if inv & 1 else 1


# -- module-level operation names ---------------------------------------


def sym_product(a: Element, b: Element) -> Element:
    """Graded-commutative product on the symmetric algebra."""
    return a * b


def ordered_coefficients(a: Element, n: int):
    return a.ordered_coefficients(n)


def grade_component(a: Element, n: int) -> Element:
    return a.grade_component(n)


def parity_split(a: Element):
    return a.parity_split()


def conjugate(a: Element) -> Element:
    return a.conjugate()


def evaluate(a: Element, point):
    return a.evaluate(point)
