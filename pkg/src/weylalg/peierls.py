"""Exact lattice field theory on a periodic-space, finite-time window.

A 1+1-dimensional wave operator with unit speed and rational mass term is
discretized so that every structural identity of the continuum theory
(Green operators, propagator, covariant and canonical Poisson pairings,
Casimirs, locality, time-slice reduction) becomes a finite exact check
over the rationals.  Light cones are exact: a source at (t0, x0)
influences (t, x) only for |x - x0| <= |t - t0| in periodic distance.

Temporal boundaries are hard: all test sections must keep one step of
margin (1 <= t <= T-2), which preserves the discrete symmetry of the wave
operator under the counting pairing and therefore all exactness claims.
The overall sign of the canonical two-slice pairing is fixed once so that
restriction to any slice pair is a Poisson morphism onto the covariant
pairing (see ``SIGMA_SIGN``).
"""

from __future__ import annotations

from fractions import Fraction

from . import scalars
from .basis import GeneratorBasis
from .bilinear_forms import BilinearForm
from .errors import DomainError, WindowOverflowError

# Fixed so that lambda_sigma(rho(phi), rho(psi)) = +lambda_cov(phi, psi);
# frozen after being derived against the brute-force pairing oracle.
SIGMA_SIGN = -1


class LatticeSection:
    """Finitely supported rational function on the (t, x) window."""

    __slots__ = ("values",)

    def __init__(self, values=None):
        vals = {}
        for key, v in (values or {}).items():
            q = Fraction(v)
            if q:
                vals[(int(key[0]), int(key[1]))] = q
        self.values = vals

    @classmethod
    def delta(cls, t, x, value=1):
        return cls({(t, x): value})

    def __getitem__(self, key):
        return self.values.get(key, Fraction(0))

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LatticeSection(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return LatticeSection()
        return LatticeSection({k: v * c for k, v in self.values.items()})

    def support(self):
        return set(self.values)

    def time_range(self):
        if not self.values:
            return None
        ts = [t for t, _ in self.values]
        return min(ts), max(ts)

    def __eq__(self, other):
        if not isinstance(other, LatticeSection):
            return NotImplemented
        return self.values == other.values

    def __bool__(self):
        return bool(self.values)

    def __repr__(self):
        return f"LatticeSection({self.values!r})"


class CauchyPair:
    """Values on two consecutive time slices, on all spatial sites."""

    __slots__ = ("u0", "u1")

    def __init__(self, u0, u1):
        self.u0 = tuple(Fraction(v) for v in u0)
        self.u1 = tuple(Fraction(v) for v in u1)
        if len(self.u0) != len(self.u1):
            raise DomainError("slices must have equal length")

    @property
    def sites(self):
        return len(self.u0)

    def __eq__(self, other):
        if not isinstance(other, CauchyPair):
            return NotImplemented
        return self.u0 == other.u0 and self.u1 == other.u1

    def __repr__(self):
        return f"CauchyPair({self.u0!r}, {self.u1!r})"


class LatticeSpacetime:
    """A T x N window, periodic in space, with rational squared mass."""

    __slots__ = ("T", "N", "m2")

    def __init__(self, T: int, N: int, m2=0):
        if T < 3 or N < 3:
            raise DomainError("need T >= 3 and N >= 3")
        m2 = Fraction(m2)
        if m2 < 0:
            raise DomainError("squared mass must be nonnegative")
        self.T = T
        self.N = N
        self.m2 = m2

    # -- basic checks ---------------------------------------------------

    def _check_in_window(self, u: LatticeSection):
        for t, x in u.values:
            if not (0 <= t < self.T and 0 <= x < self.N):
                raise WindowOverflowError(f"site ({t}, {x}) outside the window")

    def check_margin(self, u: LatticeSection):
        self._check_in_window(u)
        for t, _ in u.values:
            if t < 1 or t > self.T - 2:
                raise WindowOverflowError(
                    f"support touches the temporal boundary (t = {t})"
                )

    def spatial_distance(self, x0: int, x1: int) -> int:
        d = abs(x0 - x1) % self.N
        return min(d, self.N - d)

    def is_spacelike(self, p, q) -> bool:
        return self.spatial_distance(p[1], q[1]) > abs(p[0] - q[0])

    # -- the wave operator ----------------------------------------------

    def apply_D(self, u: LatticeSection) -> LatticeSection:
        """Discrete wave operator; symmetric under the counting pairing
        on margin-respecting sections."""
        self.check_margin(u)
        out = {}
        for (t, x), v in u.values.items():
            for (dt, dx), c in (
                ((1, 0), 1),
                ((-1, 0), 1),
                ((0, 1), -1),
                ((0, -1), -1),
            ):
                key = (t + dt, (x + dx) % self.N)
                s = out.get(key, Fraction(0)) + c * v
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
            if self.m2:
                key = (t, x)
                s = out.get(key, Fraction(0)) + self.m2 * v
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return LatticeSection(out)

    def _dense(self, u: LatticeSection):
        rows = [[Fraction(0)] * self.N for _ in range(self.T)]
        for (t, x), v in u.values.items():
            rows[t][x] = v
        return rows

    def _forward_step(self, prev_row, cur_row, src_row):
        N, m2 = self.N, self.m2
        return [
            src_row[x]
            + cur_row[(x + 1) % N]
            + cur_row[(x - 1) % N]
            - prev_row[x]
            - m2 * cur_row[x]
            for x in range(N)
        ]

    def green_retarded(self, phi: LatticeSection) -> LatticeSection:
        """The unique solution of D u = phi vanishing below the source."""
        self.check_margin(phi)
        src = self._dense(phi)
        rows = [[Fraction(0)] * self.N for _ in range(self.T)]
        for t in range(1, self.T - 1):
            rows[t + 1] = self._forward_step(rows[t - 1], rows[t], src[t])
        return _from_dense(rows)

    def green_advanced(self, phi: LatticeSection) -> LatticeSection:
        """The unique solution of D u = phi vanishing above the source."""
        self.check_margin(phi)
        src = self._dense(phi)
        rows = [[Fraction(0)] * self.N for _ in range(self.T)]
        for t in range(self.T - 2, 0, -1):
            rows[t - 1] = self._forward_step(rows[t + 1], rows[t], src[t])
        return _from_dense(rows)

    def propagator(self, phi: LatticeSection) -> LatticeSection:
        """Retarded minus advanced; solves the homogeneous equation."""
        return self.green_retarded(phi) - self.green_advanced(phi)

    # -- pairings ---------------------------------------------------------

    def pairing(self, phi: LatticeSection, u: LatticeSection) -> Fraction:
        total = Fraction(0)
        small, big = (
            (phi.values, u) if len(phi.values) <= len(u.values) else (u.values, phi)
        )
        for key, v in small.items():
            total += v * big[key]
        return total

    def lambda_cov(self, phi: LatticeSection, psi: LatticeSection) -> Fraction:
        """Covariant pairing: propagated phi integrated against psi."""
        self.check_margin(psi)
        return self.pairing(psi, self.propagator(phi))

    def solve_cauchy(self, data: CauchyPair, t0: int) -> LatticeSection:
        """Leapfrog evolution of two-slice data, both time directions."""
        if data.sites != self.N:
            raise DomainError("data has the wrong number of sites")
        if not (0 <= t0 and t0 + 1 <= self.T - 1):
            raise WindowOverflowError("slice pair outside the window")
        zero_src = [Fraction(0)] * self.N
        rows = [None] * self.T
        rows[t0] = list(data.u0)
        rows[t0 + 1] = list(data.u1)
        for t in range(t0 + 1, self.T - 1):
            rows[t + 1] = self._forward_step(rows[t - 1], rows[t], zero_src)
        for t in range(t0, 0, -1):
            rows[t - 1] = self._forward_step(rows[t + 1], rows[t], zero_src)
        return _from_dense(rows)

    def rho_sigma(self, phi: LatticeSection, t0: int) -> CauchyPair:
        """Two-slice restriction of the propagated section at (t0, t0+1)."""
        if not (0 <= t0 and t0 + 1 <= self.T - 1):
            raise WindowOverflowError("slice pair outside the window")
        g = self.propagator(phi)
        u0 = [g[(t0, x)] for x in range(self.N)]
        u1 = [g[(t0 + 1, x)] for x in range(self.N)]
        return CauchyPair(u0, u1)

    def lambda_sigma(self, A: CauchyPair, B: CauchyPair) -> Fraction:
        """Discrete Wronskian pairing of two-slice data; antisymmetric,
        and conserved along solutions of the homogeneous equation."""
        if A.sites != B.sites:
            raise DomainError("slice size mismatch")
        total = Fraction(0)
        for x in range(A.sites):
            total += A.u1[x] * B.u0[x] - A.u0[x] * B.u1[x]
        return SIGMA_SIGN * total

    # -- Casimirs and the time slice --------------------------------------

    def solution_basis(self, t0: int = 1):
        """2N solutions spanning all Cauchy data on slices (t0, t0+1)."""
        out = []
        zero = [Fraction(0)] * self.N
        for slot in range(2):
            for x in range(self.N):
                row = list(zero)
                row[x] = Fraction(1)
                data = CauchyPair(row, zero) if slot == 0 else CauchyPair(zero, row)
                out.append(self.solve_cauchy(data, t0))
        return out

    def is_casimir(self, phi: LatticeSection) -> bool:
        """True iff the propagated section vanishes; cross-checked against
        the pairing with a full basis of solutions."""
        g = self.propagator(phi)
        by_propagator = not g
        by_solutions = all(
            self.pairing(phi, u) == 0 for u in self.solution_basis()
        )
        if by_propagator != by_solutions:
            raise AssertionError("casimir criteria disagree; lattice bug")
        return by_propagator

    def slab_matrix(self, t0: int):
        """Matrix of rho_sigma on the basis of slab-site deltas."""
        if t0 < 1 or t0 + 1 > self.T - 2:
            raise WindowOverflowError("slab must respect the temporal margin")
        cols = []
        for t in (t0, t0 + 1):
            for x in range(self.N):
                pair = self.rho_sigma(LatticeSection.delta(t, x), t0)
                cols.append(list(pair.u0) + list(pair.u1))
        return [[cols[c][r] for c in range(2 * self.N)] for r in range(2 * self.N)]

    def slab_representative(self, phi: LatticeSection, t0: int) -> LatticeSection:
        """A section on slices {t0, t0+1} with the same two-slice restriction.

        Solves the exact 2N x 2N system; the difference to the original is
        then a Casimir, so no covariant pairing changes.  A singular system
        cannot occur (the slab restriction is a bijection); it would signal
        a bug.
        """
        self.check_margin(phi)
        target_pair = self.rho_sigma(phi, t0)
        target = list(target_pair.u0) + list(target_pair.u1)
        M = self.slab_matrix(t0)
        sol = _solve_exact(M, target)
        if sol is None:
            raise AssertionError("slab system is singular; lattice bug")
        out = {}
        for i, v in enumerate(sol):
            if v:
                t = t0 if i < self.N else t0 + 1
                x = i % self.N
                out[(t, x)] = v
        return LatticeSection(out)

    # -- covariant Weyl generators ----------------------------------------

    def covariant_weyl_generators(self, sections, scale=1) -> BilinearForm:
        """Gram matrix of covariant pairings as an even bilinear form.

        The result feeds the star-product machinery directly; it is
        antisymmetric by construction, so complex conjugation is a
        star-involution for every real hbar.  ``scale`` rescales the
        pairing (a pure normalization convention, default 1).
        """
        scale = Fraction(scale)
        sections = list(sections)
        if not sections:
            raise DomainError("need at least one test section")
        for phi in sections:
            self.check_margin(phi)
        props = [self.propagator(phi) for phi in sections]
        n = len(sections)
        basis = GeneratorBasis([f"g{i}" for i in range(n)], ["even"] * n)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                val = self.pairing(sections[j], props[i]) * scale
                row.append(scalars.QC(val))
            rows.append(row)
        return BilinearForm(basis, rows, backend="exact")

    def margin_sites(self):
        return [
            (t, x) for t in range(1, self.T - 1) for x in range(self.N)
        ]

    def __repr__(self):
        return f"LatticeSpacetime(T={self.T}, N={self.N}, m2={self.m2})"


def _from_dense(rows):
    out = {}
    for t, row in enumerate(rows):
        for x, v in enumerate(row):
            if v:
                out[(t, x)] = v
    return LatticeSection(out)


def _solve_exact(M, rhs):
    """Gaussian elimination over the rationals; None if singular."""
    n = len(M)
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if A[r][col]:
                piv = r
                break
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def exact_rank(M) -> int:
    """Row rank of a rational matrix by exact elimination."""
    A = [list(r) for r in M]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    rank = 0
    for col in range(cols):
        piv = None
        for r in range(rank, rows):
            if A[r][col]:
                piv = r
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = 1 / A[rank][col]
        A[rank] = [v * inv for v in A[rank]]
        for r in range(rows):
            if r != rank and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def kernel_identification_report(st: LatticeSpacetime, t0: int = None):
    """Exact identification ker(rho_sigma) = image(D) on the margin basis.

    Builds the two-slice restriction on all margin deltas and the image of
    the wave operator on all deltas one step further inside, computes the
    exact ranks, and verifies the inclusion of the image in the kernel.
    """
    if t0 is None:
        t0 = (st.T - 1) // 2
    margin = st.margin_sites()
    index = {site: i for i, site in enumerate(margin)}
    rho_cols = []
    for site in margin:
        pair = st.rho_sigma(LatticeSection.delta(*site), t0)
        rho_cols.append(list(pair.u0) + list(pair.u1))
    rho_matrix = [
        [rho_cols[c][r] for c in range(len(margin))] for r in range(2 * st.N)
    ]
    rho_rank = exact_rank(rho_matrix)

    inner = [
        (t, x) for t in range(2, st.T - 2) for x in range(st.N)
    ]
    d_cols = []
    inclusion_ok = True
    for site in inner:
        img = st.apply_D(LatticeSection.delta(*site))
        col = [Fraction(0)] * len(margin)
        for key, v in img.values.items():
            col[index[key]] = v
        d_cols.append(col)
        pair = st.rho_sigma(img, t0)
        if any(pair.u0) or any(pair.u1):
            inclusion_ok = False
    d_matrix = [[d_cols[c][r] for c in range(len(d_cols))] for r in range(len(margin))]
    d_rank = exact_rank(d_matrix)

    kernel_dim = len(margin) - rho_rank
    return {
        "margin_dim": len(margin),
        "rho_rank": rho_rank,
        "kernel_dim": kernel_dim,
        "d_rank": d_rank,
        "image_in_kernel": inclusion_ok,
        "kernel_equals_image": inclusion_ok and d_rank == kernel_dim,
    }
