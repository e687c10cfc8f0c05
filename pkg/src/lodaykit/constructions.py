"""Factories for the example algebroids: quadratic Lie algebras, a Loday-only
point example, Drinfeld doubles of Lie bialgebras and twisted exact Courant
algebroids over affine space."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .algebroid import Algebroid, ViolationWitness
from .exterior import MetricData, MultiSection, sort_sign
from .scalars import Derivation, Poly


class ConstructionError(ValueError):
    def __init__(self, message: str, witness: ViolationWitness | None = None):
        super().__init__(message)
        self.witness = witness


def _zero_structure(n: int):
    return [[[0] * n for _ in range(n)] for _ in range(n)]


def lie_algebra(name: str, structure, metric, basis_names=None) -> Algebroid:
    """Point-base algebroid whose Dorfman product is the given Lie bracket."""
    return Algebroid.from_structure(name, (), metric, None, structure, basis_names=basis_names)


def abelian(n: int) -> Algebroid:
    return lie_algebra(f"abelian({n})", _zero_structure(n), MetricData.identity(n))


def sl2_split() -> Algebroid:
    # basis h, e, f
    c = _zero_structure(3)
    h, e, f = 0, 1, 2
    c[h][e][e], c[e][h][e] = 2, -2
    c[h][f][f], c[f][h][f] = -2, 2
    c[e][f][h], c[f][e][h] = 1, -1
    g = ((2, 0, 0), (0, 0, 1), (0, 1, 0))
    return lie_algebra("sl2_split", c, g, basis_names=("h", "e", "f"))


def aff1_loday() -> Algebroid:
    """``[e1, e2] = e2`` with the identity metric: Loday but not Courant."""
    c = _zero_structure(2)
    c[0][1][1], c[1][0][1] = 1, -1
    return lie_algebra("aff1_loday", c, MetricData.identity(2))


def direct_sum(a: Algebroid, b: Algebroid, name: str | None = None) -> Algebroid:
    if not (a.is_point and b.is_point):
        raise ConstructionError("direct_sum is only provided over the point base")
    n, m = a.n, b.n
    N = n + m
    c = _zero_structure(N)
    for i in range(n):
        for j in range(n):
            for k, v in enumerate(a.structure(i, j)):
                c[i][j][k] = v.constant_value()
    for i in range(m):
        for j in range(m):
            for k, v in enumerate(b.structure(i, j)):
                c[n + i][n + j][n + k] = v.constant_value()
    g = [[Fraction(0)] * N for _ in range(N)]
    for i in range(n):
        for j in range(n):
            g[i][j] = a.metric.g[i][j]
    for i in range(m):
        for j in range(m):
            g[n + i][n + j] = b.metric.g[i][j]
    names = tuple(f"a.{s}" for s in a.basis_names) + tuple(f"b.{s}" for s in b.basis_names)
    return lie_algebra(name or f"direct_sum({a.name},{b.name})", c, g, basis_names=names)


def change_basis(alg: Algebroid, P, name: str | None = None) -> Algebroid:
    """Re-express a point algebroid in the frame ``f_j = sum_i P[i][j] e_i``."""
    n = alg.n
    P = linalg.to_fractions(P)
    Q = linalg.inverse(P)
    C = [[[alg.structure(i, j)[k].constant_value() for k in range(n)] for j in range(n)] for i in range(n)]
    newc = _zero_structure(n)
    for a in range(n):
        for b in range(n):
            vec = [Fraction(0)] * n
            for i in range(n):
                if not P[i][a]:
                    continue
                for j in range(n):
                    if not P[j][b]:
                        continue
                    w = P[i][a] * P[j][b]
                    for k in range(n):
                        if C[i][j][k]:
                            vec[k] += w * C[i][j][k]
            newc[a][b] = linalg.matvec(Q, vec)
    g = alg.metric.g
    newg = linalg.matmul(linalg.transpose([list(r) for r in P]), linalg.matmul([list(r) for r in g], P))
    return lie_algebra(name or alg.name, newc, newg)


def _random_unimodular_ish(n: int, rng: random.Random):
    while True:
        P = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            P[i][i] += rng.choice((1, 2))
        if linalg.det(linalg.to_fractions(P)) != 0:
            return P


def scale_metric(alg: Algebroid, factor) -> Algebroid:
    """Same bracket, metric multiplied by a nonzero rational (still invariant)."""
    factor = Fraction(factor)
    g = [[x * factor for x in row] for row in alg.metric.g]
    c = [[[v.constant_value() for v in alg.structure(i, j)] for j in range(alg.n)] for i in range(alg.n)]
    return lie_algebra(alg.name, c, g, basis_names=alg.basis_names)


def random_quadratic(seed: int, rank: int = 4) -> Algebroid:
    """Quadratic Lie algebra: direct sum of catalog blocks in a random rational frame.

    From rank 3 upwards at least one block is non-abelian.
    """
    if rank < 1:
        raise ValueError("rank must be positive")
    rng = random.Random(seed)
    blocks: list[Algebroid] = []
    left = rank
    while left:
        options = []
        if left >= 3:
            options.append("sl2")
        if left >= 4:
            options.append("double_aff1")
        if not options or (blocks and any(b.name != "abelian(1)" for b in blocks) and rng.random() < 0.5):
            options = ["abelian"]
        kind = rng.choice(options)
        if kind == "sl2":
            blocks.append(scale_metric(sl2_split(), rng.choice((1, 2, -1, Fraction(1, 2)))))
            left -= 3
        elif kind == "double_aff1":
            blocks.append(drinfeld_double(LieBialgebraData.from_names("aff1", "abelian")))
            left -= 4
        else:
            blocks.append(lie_algebra("abelian(1)", _zero_structure(1), ((rng.choice((1, -1, 2)),),)))
            left -= 1
    rng.shuffle(blocks)
    alg = blocks[0]
    for b in blocks[1:]:
        alg = direct_sum(alg, b)
    P = _random_unimodular_ish(rank, rng)
    return change_basis(alg, P, name=f"random_quadratic({seed})")


# -- Lie bialgebras and their doubles ---------------------------------------------


def _lie_structure(name: str):
    m = re.fullmatch(r"abelian(?:\((\d+)\))?", name)
    if m:
        n = int(m.group(1) or 2)
        return n, _zero_structure(n)
    if name == "aff1":
        c = _zero_structure(2)
        c[0][1][1], c[1][0][1] = 1, -1
        return 2, c
    if name == "sl2":
        return 3, [[[v.constant_value() for v in sl2_split().structure(i, j)] for j in range(3)] for i in range(3)]
    raise ConstructionError(f"unknown Lie algebra {name!r}")


@dataclass
class LieBialgebraData:
    """Structure constants ``c`` of g and ``gamma`` of g* on the dual basis."""

    n: int
    c: list
    gamma: list

    def __post_init__(self):
        self.c = [[[Fraction(v) for v in self.c[i][j]] for j in range(self.n)] for i in range(self.n)]
        self.gamma = [[[Fraction(v) for v in self.gamma[i][j]] for j in range(self.n)] for i in range(self.n)]

    @classmethod
    def from_names(cls, g: str, gstar: str) -> "LieBialgebraData":
        n1, c = _lie_structure(g)
        n2, gamma = _lie_structure(gstar if not gstar.startswith("abelian") or "(" in gstar else f"abelian({n1})")
        if n1 != n2:
            raise ConstructionError(f"dimension mismatch: {g} has {n1}, {gstar} has {n2}")
        return cls(n1, c, gamma)

    @classmethod
    def sl2_standard(cls, t=1) -> "LieBialgebraData":
        """sl2 with the standard cobracket ``delta(e) = t e^h``, ``delta(f) = t f^h``."""
        n, c = _lie_structure("sl2")
        gamma = _zero_structure(3)
        h, e, f = 0, 1, 2
        gamma[e][h][e], gamma[h][e][e] = t, -t
        gamma[f][h][f], gamma[h][f][f] = t, -t
        return cls(n, c, gamma)

    @classmethod
    def aff1_with_cobracket(cls, a, b) -> "LieBialgebraData":
        """aff(1) with ``[eps1, eps2] = a eps1 + b eps2`` on the dual."""
        n, c = _lie_structure("aff1")
        gamma = [[[0, 0], [a, b]], [[-a, -b], [0, 0]]]
        return cls(n, c, gamma)

    def violations(self) -> list[ViolationWitness]:
        """Antisymmetry, Jacobi for both brackets and the 1-cocycle condition on the cobracket."""
        n = self.n
        out = []
        for label, s in (("g", self.c), ("g*", self.gamma)):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        if s[i][j][k] != -s[j][i][k]:
                            out.append(ViolationWitness(f"{label}:antisymmetry", {"i": i + 1, "j": j + 1}, s[i][j][k], -s[j][i][k]))
            for i, j, k in combinations(range(n), 3):
                for t in range(n):
                    v = sum(
                        s[i][j][l] * s[l][k][t] + s[j][k][l] * s[l][i][t] + s[k][i][l] * s[l][j][t]
                        for l in range(n)
                    )
                    if v:
                        out.append(ViolationWitness(f"{label}:jacobi", {"i": i + 1, "j": j + 1, "k": k + 1}, v, 0))
        c, gm = self.c, self.gamma
        # delta(e_i)^{jk} = gamma^{jk}_i; require delta([x,y]) = ad_x delta(y) - ad_y delta(x)
        for a in range(n):
            for b in range(n):
                for j in range(n):
                    for k in range(n):
                        lhs = sum(c[a][b][l] * gm[j][k][l] for l in range(n))
                        rhs = Fraction(0)
                        for l in range(n):
                            rhs += c[a][l][j] * gm[l][k][b] + c[a][l][k] * gm[j][l][b]
                            rhs -= c[b][l][j] * gm[l][k][a] + c[b][l][k] * gm[j][l][a]
                        if lhs != rhs:
                            out.append(ViolationWitness("cocycle", {"x": f"e{a + 1}", "y": f"e{b + 1}", "component": (j + 1, k + 1)}, lhs, rhs))
        return out


def drinfeld_double(b: LieBialgebraData, name: str | None = None) -> Algebroid:
    """``g + g*`` over the point with ``<X + xi, Y + eta> = xi(Y) + eta(X)``.

    Mixed products are the two coadjoint actions:
    ``e_i o eps^j = -sum_k c_ik^j eps^k + sum_k gamma^{jk}_i e_k``.
    """
    bad = b.violations()
    if bad:
        raise ConstructionError(f"not a Lie bialgebra: {bad[0].axiom_id} fails at {bad[0].inputs}", bad[0])
    n = b.n
    N = 2 * n
    s = _zero_structure(N)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                s[i][j][k] = b.c[i][j][k]
                s[n + i][n + j][n + k] = b.gamma[i][j][k]
                mixed_star = -b.c[i][k][j]
                mixed_g = b.gamma[j][k][i]
                s[i][n + j][n + k] += mixed_star
                s[i][n + j][k] += mixed_g
                s[n + j][i][n + k] -= mixed_star
                s[n + j][i][k] -= mixed_g
    g = [[0] * N for _ in range(N)]
    for i in range(n):
        g[i][n + i] = g[n + i][i] = 1
    names = tuple(f"e{i + 1}" for i in range(n)) + tuple(f"eps{i + 1}" for i in range(n))
    return lie_algebra(name or "double", s, g, basis_names=names)


# -- exact Courant algebroids ------------------------------------------------------


@dataclass
class ThreeFormData:
    """Polynomial 3-form ``sum phi_ijk dx_i ^ dx_j ^ dx_k`` (``i < j < k``)."""

    m: int
    components: Mapping[tuple, Poly]
    vars: tuple = ()

    def __post_init__(self):
        if not self.vars:
            self.vars = default_vars(self.m)
        self.vars = tuple(self.vars)
        clean = {}
        for key, p in self.components.items():
            ss = sort_sign(tuple(key))
            if ss is None or len(key) != 3 or max(key) >= self.m:
                raise ConstructionError(f"bad 3-form index {key}")
            sign, k = ss
            if not isinstance(p, Poly):
                p = Poly.const(self.vars, p)
            clean[k] = clean.get(k, Poly.zero(self.vars)) + p.scale(sign)
        self.components = {k: v for k, v in clean.items() if v}

    def value(self, i: int, j: int, k: int) -> Poly:
        ss = sort_sign((i, j, k))
        if ss is None:
            return Poly.zero(self.vars)
        sign, key = ss
        p = self.components.get(key)
        return Poly.zero(self.vars) if p is None else p.scale(sign)

    def exterior_derivative(self) -> dict:
        """Nonzero components of the 4-form ``d phi``."""
        out = {}
        for quad in combinations(range(self.m), 4):
            acc = Poly.zero(self.vars)
            for pos, a in enumerate(quad):
                rest = quad[:pos] + quad[pos + 1:]
                p = self.components.get(rest)
                if p:
                    t = p.partial_index(a)
                    acc = acc + (t if pos % 2 == 0 else -t)
            if acc:
                out[quad] = acc
        return out


def default_vars(m: int) -> tuple:
    return ("x", "y", "z")[:m] if m <= 3 else tuple(f"x{i + 1}" for i in range(m))


def exact_courant(m: int, phi: ThreeFormData | None = None, vars: Sequence[str] | None = None) -> Algebroid:
    """``TM + T*M`` over ``Q[x_1..x_m]`` with bracket twisted by the closed 3-form ``phi``.

    Frame: ``d/dx_1..d/dx_m`` then ``dx_1..dx_m``; ``d_i o d_j = phi(d_i, d_j, .)``,
    all other frame products vanish.
    """
    vars = tuple(vars) if vars else default_vars(m)
    if phi is None:
        phi = ThreeFormData(m, {}, vars)
    if phi.m != m or phi.vars != vars:
        raise ConstructionError("3-form does not live on this base")
    dphi = phi.exterior_derivative()
    if dphi:
        key, val = sorted(dphi.items())[0]
        raise ConstructionError(f"3-form is not closed: (d phi)_{tuple(i + 1 for i in key)} = {val}")
    N = 2 * m
    zero = Poly.zero(vars)
    s = [[[zero] * N for _ in range(N)] for _ in range(N)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                s[i][j][m + k] = phi.value(i, j, k)
    g = [[0] * N for _ in range(N)]
    for i in range(m):
        g[i][m + i] = g[m + i][i] = 1
    anchor = [Derivation.coordinate(vars, v) for v in vars] + [Derivation.zero(vars)] * m
    frame = [MultiSection.basis(N, (m + i,), vars) for i in range(m)]
    names = tuple(f"d/d{v}" for v in vars) + tuple(f"d{v}" for v in vars)
    label = "exact_courant(%d%s)" % (m, "" if not phi.components else ", phi")
    return Algebroid.from_structure(label, vars, g, anchor, s, kernel_frame=frame, basis_names=names)


# -- catalog ------------------------------------------------------------------------


def catalog(name: str) -> Algebroid:
    """Named fixtures: ``abelian(n)``, ``sl2_split``, ``aff1_loday``,
    ``direct_sum(a,b)``, ``random_quadratic(seed)``."""
    name = name.strip()
    m = re.fullmatch(r"abelian\((\d+)\)", name)
    if m:
        return abelian(int(m.group(1)))
    if name == "sl2_split":
        return sl2_split()
    if name == "aff1_loday":
        return aff1_loday()
    m = re.fullmatch(r"random_quadratic\((-?\d+)(?:,\s*(\d+))?\)", name)
    if m:
        return random_quadratic(int(m.group(1)), int(m.group(2) or 4))
    if name.startswith("direct_sum(") and name.endswith(")"):
        inner = name[len("direct_sum("):-1]
        depth = 0
        for pos, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return direct_sum(catalog(inner[:pos]), catalog(inner[pos + 1:]))
    raise ConstructionError(f"unknown catalog entry {name!r}")
