"""Naive cohomology of (sections of ^ker rho, breve d) and, over the point,
the standard complex ``{Theta, .}`` together with the comparison map."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import linalg
from .algebroid import Algebroid, AlgebroidError, check_courant, generating_functions, random_section
from .exterior import (
    MultiSection,
    UnsupportedOperation,
    breve_contract,
    graded_poisson,
    sort_sign,
    subsets,
    wedge,
    xi,
    xi_inverse,
)
from .scalars import Poly, monomials_up_to


class NotInKernelError(ValueError):
    pass


class FiltrationError(UnsupportedOperation):
    def __init__(self, message: str, element: Any = None):
        super().__init__(message)
        self.element = element


@dataclass
class FiniteComplex:
    """Cochain spaces (as basis labels) and differentials ``D_k: C^k -> C^{k+1}``.

    ``differentials[k]`` has ``len(bases[k+1])`` rows and ``len(bases[k])`` columns.
    """

    bases: list
    differentials: list

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def dims(self) -> list[int]:
        return [len(b) for b in self.bases]

    def square_zero_failures(self) -> list[int]:
        bad = []
        for k in range(len(self.differentials) - 1):
            prod = linalg.matmul(self.differentials[k + 1], self.differentials[k], inner=len(self.bases[k + 1]))
            if not linalg.is_zero_matrix(prod):
                bad.append(k)
        return bad

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims()))


@dataclass
class CohomologyResult:
    dims: list
    representatives: list  # per degree: list of coordinate vectors
    complex: FiniteComplex
    elements: list = field(default_factory=list)  # per degree: representatives as MultiSections

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))


def _column(m, j):
    return [row[j] for row in m]


def cohomology_of(cx: FiniteComplex) -> tuple[list[int], list[list]]:
    """Dimensions and representative cocycles (kernel vectors independent modulo the image)."""
    dims, reps = [], []
    for k, basis in enumerate(cx.bases):
        dim = len(basis)
        if k < len(cx.differentials) and cx.bases[k + 1]:
            Z = linalg.nullspace(cx.differentials[k], cols=dim)
        else:
            Z = [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)]
        if k > 0 and cx.bases[k - 1] and dim:
            prev = cx.differentials[k - 1]
            B = linalg.column_space_basis([_column(prev, j) for j in range(len(cx.bases[k - 1]))], dim)
        else:
            B = []
        picks = linalg.extend_modulo(B, Z, dim)
        dims.append(len(Z) - len(B))
        reps.append(picks)
        assert len(picks) == dims[-1]
    return dims, reps


# -- kernel sections --------------------------------------------------------------


def kernel_frame(alg: Algebroid) -> list[MultiSection]:
    """A frame of ker rho: the full frame over the point, else the declared one."""
    if alg.is_point:
        return [alg.basis(i) for i in range(alg.n)]
    if alg.kernel_frame is None:
        raise UnsupportedOperation(
            f"{alg.name}: polynomial base without a declared kernel frame (syzygy computation is not provided)"
        )
    return list(alg.kernel_frame)


def kernel_defects(alg: Algebroid, alpha: MultiSection) -> list[tuple[Poly, MultiSection]]:
    """Pairs ``(f, i_Df alpha)`` with nonzero contraction, over generating functions f."""
    if alg.is_point or alpha.k == 0:
        return []
    out = []
    for f in generating_functions(alg.vars):
        c = breve_contract(alg.D(f), alpha, alg.metric)
        if c:
            out.append((f, c))
    return out


def _basis_courant(alg: Algebroid):
    cache = alg.__dict__.get("_courant_cache")
    if cache is None:
        n = alg.n
        cache = [[alg.courant(alg.basis(i), alg.basis(j)) for j in range(n)] for i in range(n)]
        alg.__dict__["_courant_cache"] = cache
    return cache


def naive_differential(alg: Algebroid, alpha: MultiSection, check_kernel: bool = True) -> MultiSection:
    """Cartan-type differential on kernel multisections, paired against E through Xi."""
    if check_kernel:
        bad = kernel_defects(alg, alpha)
        if bad:
            f, c = bad[0]
            raise NotInKernelError(f"input is not a kernel section: contraction with D({f}) gives {c}")
    n, k = alg.n, alpha.k
    vals = xi(alpha, alg.metric)
    br = _basis_courant(alg)
    zero = Poly.zero(alg.vars)

    def value(idx: tuple) -> Poly:
        ss = sort_sign(idx)
        if ss is None:
            return zero
        sign, key = ss
        v = vals.get(key)
        if v is None:
            return zero
        return v if sign > 0 else -v

    out: dict = {}
    for J in subsets(n, k + 1):
        acc = zero
        for i, ji in enumerate(J):
            rho = alg.anchor[ji]
            if rho.is_zero():
                continue
            t = rho.apply(value(J[:i] + J[i + 1:]))
            if t:
                acc = acc + (t if i % 2 == 0 else -t)
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                w = br[J[i]][J[j]]
                if not w:
                    continue
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                sgn = -1 if (i + j) % 2 else 1
                for (l,), c in w.coeffs.items():
                    v = value((l,) + rest)
                    if v:
                        acc = acc + (c * v).scale(sgn)
        if acc:
            out[J] = acc
    return xi_inverse(out, n, k + 1, alg.vars, alg.metric)


class NaiveComplex:
    """Truncated naive complex over a constant kernel frame.

    Basis of ``C^k``: pairs ``(monomial, S)`` meaning ``x^monomial * f_S`` with
    ``f_S`` the wedge of frame elements indexed by ``S``.  In ``weight`` mode
    the coefficient degree in ``C^k`` is capped at ``cap - k``; in ``flat``
    mode at ``cap`` in every degree.
    """

    def __init__(self, alg: Algebroid, degree_cap: int | None = 3, mode: str = "weight"):
        if mode not in ("weight", "flat"):
            raise ValueError("mode must be 'weight' or 'flat'")
        self.alg = alg
        self.frame = kernel_frame(alg)
        for idx, s in enumerate(self.frame):
            if any(not c.is_constant() for c in s.coeffs.values()):
                raise UnsupportedOperation(f"kernel frame element {idx + 1} has non-constant coefficients")
        self.r = len(self.frame)
        self.mode = mode
        self.cap = 0 if alg.is_point else (3 if degree_cap is None else degree_cap)
        nv = len(alg.vars)
        self.monos = []
        for k in range(self.r + 1):
            c = self.cap if mode == "flat" or alg.is_point else self.cap - k
            self.monos.append(monomials_up_to(nv, c))
        self.wedges = []
        for k in range(self.r + 1):
            row = {}
            for S in subsets(self.r, k):
                w = MultiSection.scalar(alg.n, Poly.one(alg.vars))
                for s in S:
                    w = wedge(w, self.frame[s])
                row[S] = w
            self.wedges.append(row)
        self.bases = [[(m, S) for m in self.monos[k] for S in subsets(self.r, k)] for k in range(self.r + 1)]
        self._index = [{b: i for i, b in enumerate(basis)} for basis in self.bases]
        self._solvers = [self._make_solver(k) for k in range(self.r + 1)]
        self.complex = FiniteComplex(self.bases, [self._matrix(k) for k in range(self.r)])

    def _make_solver(self, k: int):
        keys = subsets(self.alg.n, k)
        Ss = subsets(self.r, k)
        A = [[self.wedges[k][S][I].constant_value() for S in Ss] for I in keys]
        return keys, Ss, A

    def element(self, k: int, label) -> MultiSection:
        mono, S = label
        return self.wedges[k][S].times(Poly.monomial(self.alg.vars, mono))

    def vector_to_element(self, k: int, vec) -> MultiSection:
        out = MultiSection.zero(self.alg.n, k, self.alg.vars)
        for label, c in zip(self.bases[k], vec):
            if c:
                out = out + self.element(k, label).times(c)
        return out

    def coordinates(self, k: int, beta: MultiSection) -> list[Fraction]:
        """Coordinates of a kernel multisection in the truncated basis of ``C^k``."""
        keys, Ss, A = self._solvers[k]
        monos = set()
        for c in beta.coeffs.values():
            monos.update(c.terms)
        vec = [Fraction(0)] * len(self.bases[k])
        for mono in monos:
            rhs = [beta[I].coeff(mono) for I in keys]
            x = linalg.solve(A, rhs, cols=len(Ss))
            if x is None:
                raise AlgebroidError(f"{beta} is not in the span of wedges of the kernel frame")
            for S, v in zip(Ss, x):
                if not v:
                    continue
                pos = self._index[k].get((mono, S))
                if pos is None:
                    raise FiltrationError(
                        f"coefficient x^{mono} exceeds the degree cap in form degree {k}", beta
                    )
                vec[pos] = v
        return vec

    def _matrix(self, k: int):
        cols = []
        for label in self.bases[k]:
            alpha = self.element(k, label)
            d = naive_differential(self.alg, alpha, check_kernel=False)
            try:
                cols.append(self.coordinates(k + 1, d))
            except FiltrationError as exc:
                raise FiltrationError(
                    f"breve d does not preserve the degree filtration: image of basis element "
                    f"{alpha.format(self.alg.basis_names)} is {d.format(self.alg.basis_names)}",
                    alpha,
                ) from exc
        rows = len(self.bases[k + 1])
        return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def naive_cohomology(alg: Algebroid, degree_cap: int | None = 3, mode: str = "weight") -> CohomologyResult:
    nc = NaiveComplex(alg, degree_cap, mode)
    dims, reps = cohomology_of(nc.complex)
    elements = [[nc.vector_to_element(k, v) for v in reps[k]] for k in range(len(reps))]
    return CohomologyResult(dims, reps, nc.complex, elements)


# -- degree one ------------------------------------------------------------------------


def _require_kernel(alg: Algebroid, theta: MultiSection):
    r = alg.rho(theta)
    if not r.is_zero():
        raise NotInKernelError(f"theta is not in ker rho: rho(theta) = {r}")


def is_naive_one_cocycle(alg: Algebroid, theta: MultiSection, trials: int = 16, seed: int = 0) -> bool:
    """``<theta, [[a,b]]> = rho(a)<theta,b> - rho(b)<theta,a>`` on frame pairs and random sections."""
    _require_kernel(alg, theta)
    n = alg.n
    B = [alg.basis(i) for i in range(n)]
    pairs = [(B[i], B[j]) for i in range(n) for j in range(i + 1, n)]
    if not alg.is_point:
        rng = random.Random(seed)
        pairs += [(random_section(alg, rng), random_section(alg, rng)) for _ in range(trials)]
    for a, b in pairs:
        lhs = alg.pair(theta, alg.courant(a, b))
        rhs = alg.rho(a).apply(alg.pair(theta, b)) - alg.rho(b).apply(alg.pair(theta, a))
        if lhs != rhs:
            return False
    return True


def coboundary_system(alg: Algebroid, max_degree: int, scale: int = 1):
    """Columns ``scale * D(m)`` for monomials ``m`` with ``1 <= deg m <= max_degree``.

    Returns ``(monomials, row_keys, matrix)`` with rows indexed by
    ``(component, coefficient monomial)``.
    """
    monos = [m for m in monomials_up_to(len(alg.vars), max_degree) if sum(m) >= 1]
    cols = [alg.D(Poly.monomial(alg.vars, m)).times(scale) for m in monos]
    row_keys = [(i, m) for i in range(alg.n) for m in monomials_up_to(len(alg.vars), max(max_degree - 1, 0))]
    A = [[c[i].coeff(m) for c in cols] for (i, m) in row_keys]
    return monos, row_keys, A


def section_vector(theta: MultiSection, row_keys) -> list[Fraction]:
    return [theta[i].coeff(m) for (i, m) in row_keys]


def is_one_coboundary(alg: Algebroid, theta: MultiSection) -> tuple[bool, Poly | None]:
    """Whether ``theta = Df`` for a polynomial f; the certificate f when it is."""
    _require_kernel(alg, theta)
    if not theta:
        return True, Poly.zero(alg.vars)
    if alg.is_point:
        return False, None
    deg = theta.coefficient_degree() + 1
    monos, row_keys, A = coboundary_system(alg, deg)
    rhs = section_vector(theta, row_keys)
    if any(theta[i].degree() > deg - 1 for i in range(alg.n)):
        return False, None
    x = linalg.solve(A, rhs, cols=len(monos))
    if x is None:
        return False, None
    f = Poly(alg.vars, {m: v for m, v in zip(monos, x)})
    assert alg.D(f) == theta
    return True, f


# -- standard complex over the point -------------------------------------------------


class ThetaError(ValueError):
    pass


@dataclass
class ThetaFunction:
    theta: MultiSection


def _require_point(alg: Algebroid, what: str):
    if not alg.is_point:
        raise UnsupportedOperation(f"{what} is only realized over the point base")


def build_theta(alg: Algebroid) -> ThetaFunction:
    """The cubic ``Theta`` with ``{{Theta, e_i}, e_j} = e_i o e_j``; checks ``{Theta, Theta} = 0``."""
    _require_point(alg, "the standard complex")
    bad = check_courant(alg, trials=0)
    if bad:
        raise ThetaError(f"{alg.name} is not a Courant algebroid; Theta is not defined")
    n, g = alg.n, alg.metric
    T3 = subsets(n, 3)
    B = [alg.basis(i) for i in range(n)]
    rows, rhs = [], []
    images = {}
    for T in T3:
        eT = MultiSection.basis(n, T)
        images[T] = [[graded_poisson(graded_poisson(eT, B[i], g), B[j], g) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            target = alg.table[i][j]
            for l in range(n):
                rows.append([images[T][i][j][l].constant_value() for T in T3])
                rhs.append(target[l].constant_value())
    sol = linalg.solve(rows, rhs, cols=len(T3))
    if sol is None:
        raise ThetaError("no cubic Theta reproduces the Dorfman products (bracket sign convention broken)")
    theta = MultiSection(n, 3, (), {T: v for T, v in zip(T3, sol) if v}) if n >= 3 else MultiSection.zero(n, 3)
    for i in range(n):
        for j in range(n):
            if graded_poisson(graded_poisson(theta, B[i], g), B[j], g) != alg.table[i][j]:
                raise ThetaError(f"derived bracket mismatch at ({i + 1},{j + 1})")
    if graded_poisson(theta, theta, g):
        raise ThetaError("{Theta, Theta} != 0")
    return ThetaFunction(theta)


def _point_coords(ms: MultiSection) -> list[Fraction]:
    return [ms[I].constant_value() for I in subsets(ms.n, ms.k)]


def standard_complex(alg: Algebroid, theta: ThetaFunction | None = None) -> FiniteComplex:
    _require_point(alg, "the standard complex")
    theta = theta or build_theta(alg)
    n = alg.n
    bases = [list(subsets(n, k)) for k in range(n + 1)]
    mats = []
    for k in range(n):
        cols = [_point_coords(graded_poisson(theta.theta, MultiSection.basis(n, I), alg.metric)) for I in bases[k]]
        mats.append([[cols[j][i] for j in range(len(cols))] for i in range(len(bases[k + 1]))])
    return FiniteComplex(bases, mats)


def standard_cohomology(alg: Algebroid, theta: ThetaFunction | None = None) -> CohomologyResult:
    cx = standard_complex(alg, theta)
    dims, reps = cohomology_of(cx)
    elements = [
        [MultiSection(alg.n, k, (), {I: c for I, c in zip(cx.bases[k], v) if c}) for v in reps[k]]
        for k in range(len(reps))
    ]
    return CohomologyResult(dims, reps, cx, elements)


@dataclass
class PhiReport:
    theta_is_differential: bool
    closed_agree: bool
    mismatches: list
    naive_dims: list
    standard_dims: list
    theta: MultiSection
    df_is_bracket: bool

    @property
    def isomorphism(self) -> bool:
        return self.theta_is_differential and self.closed_agree and self.naive_dims == self.standard_dims

    @property
    def verdict(self) -> str:
        return "phi isomorphism" if self.isomorphism else "phi not shown to be an isomorphism"


def compare_phi(alg: Algebroid) -> PhiReport:
    """Over the point: ``{Theta, c} = breve d c`` on every basis c, closedness transfer, dimensions."""
    _require_point(alg, "the comparison map")
    th = build_theta(alg)
    std = standard_complex(alg, th)
    nc = NaiveComplex(alg)
    naive = nc.complex
    mismatches = []
    for k in range(alg.n):
        for j, I in enumerate(std.bases[k]):
            a = _column(std.differentials[k], j)
            b = _column(naive.differentials[k], j)
            if a != b:
                mismatches.append(I)
    closed_agree = True
    for k in range(alg.n):
        for v in linalg.nullspace(std.differentials[k], cols=len(std.bases[k])):
            if any(linalg.matvec(naive.differentials[k], v)):
                closed_agree = False
    one = MultiSection.scalar(alg.n, Poly.one(()))
    df_ok = not graded_poisson(th.theta, one, alg.metric)
    nd, _ = cohomology_of(naive)
    sd, _ = cohomology_of(std)
    return PhiReport(not mismatches, closed_agree, mismatches, nd, sd, th.theta, df_ok)
