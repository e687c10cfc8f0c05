"""Line modules with a global trivializing section, the modular cocycle and its class."""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .algebroid import (
    Algebroid,
    AlgebroidError,
    CheckReport,
    ViolationWitness,
    generating_functions,
    random_poly,
    random_section,
)
from .cohomology import coboundary_system, is_naive_one_cocycle, section_vector
from .exterior import MultiSection
from .scalars import Poly


@dataclass(frozen=True)
class LineModuleStructure:
    """``nabla_{e_i} s = lams[i] s`` for the distinguished section ``s``.

    Extended by ``nabla_{sum f_i e_i}(h s) = sum_i f_i (lams[i] h + rho(e_i) h) s``.
    """

    lams: tuple

    def nabla(self, alg: Algebroid, e: MultiSection, h: Poly) -> Poly:
        """Coefficient of ``s`` in ``nabla_e (h s)``."""
        out = alg.rho(e).apply(h)
        for (i,), f in e.coeffs.items():
            if self.lams[i]:
                out = out + f * self.lams[i] * h
        return out


def check_module(alg: Algebroid, mod: LineModuleStructure, trials: int = 16, seed: int = 0) -> CheckReport:
    """The four module axioms on frame sections, generating functions and random data."""
    rep = CheckReport("module axioms")
    rng = random.Random(seed)
    n = alg.n
    B = [alg.basis(i) for i in range(n)]
    one = Poly.one(alg.vars)
    fs = generating_functions(alg.vars)
    samples = [(B[i], B[j], f, one) for i in range(n) for j in range(n) for f in fs[:3]]
    samples += [
        (random_section(alg, rng), random_section(alg, rng), random_poly(alg.vars, rng), random_poly(alg.vars, rng))
        for _ in range(trials)
    ]

    def check(label, inputs, lhs, rhs):
        rep.checked += 1
        if lhs != rhs:
            rep.witnesses.append(ViolationWitness(label, inputs, lhs, rhs))

    for f in fs:
        check("nabla_Df s=0", {"f": f}, mod.nabla(alg, alg.D(f), one), Poly.zero(alg.vars))
    for e1, e2, f, h in samples:
        check(
            "nabla_e(fs)",
            {"e": e1, "f": f, "h": h},
            mod.nabla(alg, e1, f * h),
            f * mod.nabla(alg, e1, h) + alg.rho(e1).apply(f) * h,
        )
        check("nabla_fe s", {"e": e1, "f": f, "h": h}, mod.nabla(alg, e1.times(f), h), f * mod.nabla(alg, e1, h))
        lhs = mod.nabla(alg, e1, mod.nabla(alg, e2, h)) - mod.nabla(alg, e2, mod.nabla(alg, e1, h))
        rhs = mod.nabla(alg, alg.courant(e1, e2), h)
        check("flatness", {"e1": e1, "e2": e2, "h": h}, lhs, rhs)
    return rep


def top_section(alg: Algebroid) -> MultiSection:
    return MultiSection.basis(alg.n, range(alg.n), alg.vars)


def top_connection(alg: Algebroid) -> LineModuleStructure:
    """``lams[i]`` read off from ``L_{e_i}(e_1 ^ ... ^ e_n)``."""
    top = top_section(alg)
    key = tuple(range(alg.n))
    lams = []
    for i in range(alg.n):
        v = alg.lie_derivative(alg.basis(i), top)
        if set(v.coeffs) - {key}:
            raise AlgebroidError("Lie derivative of the top section left ^top E")  # pragma: no cover
        lams.append(v[key])
    return LineModuleStructure(tuple(lams))


def cocycle_of(alg: Algebroid, mod: LineModuleStructure) -> MultiSection:
    """The section ``theta`` with ``<theta, e_i> = lams[i]``."""
    ginv = alg.metric.g_inv
    comps = []
    for k in range(alg.n):
        acc = Poly.zero(alg.vars)
        for i, lam in enumerate(mod.lams):
            if lam and ginv[i][k]:
                acc = acc + lam.scale(ginv[i][k])
        comps.append(acc)
    return MultiSection.vector(comps, alg.vars)


@dataclass
class ModularClass:
    representative: MultiSection
    coboundary_basis: list
    reduced: MultiSection
    truncation_degree: int

    @property
    def is_zero(self) -> bool:
        return not self.reduced

    @property
    def verdict(self) -> str:
        return "zero" if self.is_zero else "nonzero"


def reduce_modulo_coboundaries(alg: Algebroid, theta: MultiSection, degree: int) -> tuple[MultiSection, list]:
    """Canonical remainder of ``theta`` modulo ``{2 D f : deg f <= degree}`` and the spanning set used."""
    if alg.is_point:
        return theta, []
    monos, row_keys, A = coboundary_system(alg, degree, scale=2)
    basis = [alg.D(Poly.monomial(alg.vars, m)).times(2) for m in monos]
    if any(theta[i].degree() > max(degree - 1, 0) for i in range(alg.n)):
        raise ValueError("truncation too small for theta")
    vec = section_vector(theta, row_keys)
    # Row-reduce [coboundary columns | theta]; the theta column after full
    # reduction against pivot rows gives the canonical remainder.
    rows = len(row_keys)
    cols = linalg.transpose(A) if A and A[0] else []
    span = linalg.column_space_basis(cols, rows)
    if not span:
        return theta, basis
    R, pivots = linalg.rref(span)
    rem = list(vec)
    for r, p in zip(R, pivots):
        if rem[p]:
            f = rem[p]
            rem = [x - f * y for x, y in zip(rem, r)]
    comps = [Poly.zero(alg.vars)] * alg.n
    for (i, m), v in zip(row_keys, rem):
        if v:
            comps[i] = comps[i] + Poly.monomial(alg.vars, m, v)
    return MultiSection.vector(comps, alg.vars), basis


def modular_class(alg: Algebroid, mod: LineModuleStructure | None = None, truncation: int | None = None) -> ModularClass:
    """Modular cocycle of ``mod`` (default ``^top E`` with ``nabla = L``) reduced modulo coboundaries."""
    mod = mod or top_connection(alg)
    theta = cocycle_of(alg, mod)
    r = alg.rho(theta)
    if not r.is_zero():
        raise AlgebroidError(f"modular cocycle is not in ker rho: rho(theta) = {r}")
    if not is_naive_one_cocycle(alg, theta):
        raise AlgebroidError("modular cocycle fails the 1-cocycle identity")
    deg = truncation if truncation is not None else theta.coefficient_degree() + 1
    deg = max(deg, 1)
    reduced, basis = reduce_modulo_coboundaries(alg, theta, deg)
    return ModularClass(theta, basis, reduced, deg)


def gauge_shift(mod: LineModuleStructure, alg: Algebroid, g: Poly) -> LineModuleStructure:
    """Connection in the frame ``exp(g) s``: ``lams[i] + rho(e_i) g``."""
    return LineModuleStructure(tuple(lam + alg.anchor[i].apply(g) for i, lam in enumerate(mod.lams)))


@dataclass
class GaugeReport:
    g: Poly
    theta: MultiSection
    theta_shifted: MultiSection
    expected_shift: MultiSection
    shift_ok: bool
    coset_ok: bool
    verdict: str

    @property
    def passed(self) -> bool:
        return self.shift_ok and self.coset_ok


def gauge_shift_check(alg: Algebroid, g: Poly, mod: LineModuleStructure | None = None) -> GaugeReport:
    """Rescaling ``s -> exp(g) s`` shifts the cocycle by exactly ``2 D g`` and keeps the class."""
    mod = mod or top_connection(alg)
    shifted = gauge_shift(mod, alg, g)
    theta = cocycle_of(alg, mod)
    theta2 = cocycle_of(alg, shifted)
    expected = alg.D(g).times(2)
    shift_ok = (theta2 - theta) == expected
    deg = max(theta.coefficient_degree(), theta2.coefficient_degree(), 0) + 1
    c1 = modular_class(alg, mod, truncation=deg)
    c2 = modular_class(alg, shifted, truncation=deg)
    coset_ok = c1.reduced == c2.reduced and c1.is_zero == c2.is_zero
    return GaugeReport(g, theta, theta2, expected, shift_ok, coset_ok, c1.verdict)
