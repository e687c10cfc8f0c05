"""Exterior algebra of a free rank-n module over the coefficient ring.

Multisections are stored in the basis ``e_I = e_{i1} ^ ... ^ e_{ik}`` with
``I`` strictly increasing.  The pseudo-metric is extended to ``^k E`` by the
determinant rule, which also fixes the isomorphism Xi onto forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg
from .scalars import Poly, RingMismatchError, Scalar


class UnsupportedOperation(Exception):
    """Raised when an operation is only defined over the point base."""


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def subset_index(n: int, k: int) -> dict:
    return {s: i for i, s in enumerate(subsets(n, k))}


def merge_sign(a: tuple, b: tuple) -> tuple[int, tuple] | None:
    """Sign and sorted union of ``e_a ^ e_b``; None when they share an index."""
    if set(a) & set(b):
        return None
    inv = 0
    for x in a:
        inv += sum(1 for y in b if y < x)
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def sort_sign(idx: Sequence[int]) -> tuple[int, tuple] | None:
    """Sign of the permutation sorting ``idx``; None if an index repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


class MultiSection:
    """Element of ``^k`` of the free rank-``n`` module over ``Q[vars]``.

    Degrees above ``n`` are allowed and hold only zero (wedge overflow).
    """

    __slots__ = ("n", "k", "vars", "coeffs")

    def __init__(self, n: int, k: int, vars: Sequence[str] = (), coeffs: Mapping[tuple, Poly] | None = None):
        if k < 0:
            raise ValueError(f"negative degree {k}")
        self.n = n
        self.k = k
        self.vars = tuple(vars)
        clean = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != k or any(a >= b for a, b in zip(key, key[1:])) or (key and not 0 <= key[0] <= key[-1] < n):
                raise ValueError(f"bad index tuple {key} for degree {k}, rank {n}")
            if not isinstance(c, Poly):
                c = Poly.const(self.vars, c)
            elif c.vars != self.vars:
                raise RingMismatchError(f"coefficient over {c.vars}, expected {self.vars}")
            if c:
                clean[key] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, n, k, vars, coeffs) -> "MultiSection":
        s = object.__new__(cls)
        s.n, s.k, s.vars, s.coeffs = n, k, vars, coeffs
        return s

    @classmethod
    def zero(cls, n: int, k: int, vars: Sequence[str] = ()) -> "MultiSection":
        return cls._raw(n, k, tuple(vars), {})

    @classmethod
    def scalar(cls, n: int, f: Poly) -> "MultiSection":
        return cls._raw(n, 0, f.vars, {(): f} if f else {})

    @classmethod
    def basis(cls, n: int, idx: Iterable[int], vars: Sequence[str] = ()) -> "MultiSection":
        s = sort_sign(tuple(idx))
        vars = tuple(vars)
        k = len(tuple(idx))
        if s is None:
            return cls.zero(n, k, vars)
        sign, key = s
        return cls._raw(n, k, vars, {key: Poly.const(vars, sign)})

    @classmethod
    def vector(cls, components: Sequence[Poly | Scalar], vars: Sequence[str] = ()) -> "MultiSection":
        vars = tuple(vars)
        n = len(components)
        return cls(n, 1, vars, {(i,): c for i, c in enumerate(components)})

    # -- access -------------------------------------------------------------

    def __getitem__(self, key) -> Poly:
        if isinstance(key, int):
            key = (key,)
        return self.coeffs.get(tuple(key), Poly.zero(self.vars))

    def components(self) -> list[Poly]:
        """Coefficient list of a degree-1 section."""
        if self.k != 1:
            raise ValueError("components() is defined for degree-1 sections")
        return [self[(i,)] for i in range(self.n)]

    def scalar_value(self) -> Poly:
        if self.k != 0:
            raise ValueError("scalar_value() needs a degree-0 element")
        return self[()]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient_degree(self) -> int:
        return max((c.degree() for c in self.coeffs.values()), default=-1)

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "MultiSection"):
        # zero has every degree, so only nonzero operands must agree on k
        same_k = self.k == other.k or not self.coeffs or not other.coeffs
        if (self.n, self.vars) != (other.n, other.vars) or not same_k:
            raise ValueError(
                f"incompatible multisections: (n={self.n}, k={self.k}, {self.vars}) vs "
                f"(n={other.n}, k={other.k}, {other.vars})"
            )

    def __add__(self, other: "MultiSection") -> "MultiSection":
        self._check(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out[key] + c if key in out else c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return MultiSection._raw(self.n, self.k, self.vars, out)

    def __neg__(self) -> "MultiSection":
        return MultiSection._raw(self.n, self.k, self.vars, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "MultiSection") -> "MultiSection":
        return self + (-other)

    def times(self, f: Poly | Scalar) -> "MultiSection":
        """Multiply every coefficient by a function or rational."""
        if isinstance(f, Poly) and f.vars != self.vars:
            raise RingMismatchError("scalar from a different ring")
        out = {}
        for key, c in self.coeffs.items():
            p = c * f
            if p:
                out[key] = p
        return MultiSection._raw(self.n, self.k, self.vars, out)

    __mul__ = times
    __rmul__ = times

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSection):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return (self.n, self.vars) == (other.n, other.vars)
        return (self.n, self.k, self.vars, self.coeffs) == (other.n, other.k, other.vars, other.coeffs)

    def __hash__(self) -> int:
        k = self.k if self.coeffs else None
        return hash((self.n, k, self.vars, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.coeffs:
            return "0"
        names = names or [f"e{i + 1}" for i in range(self.n)]
        parts = []
        for key in sorted(self.coeffs):
            c = self.coeffs[key]
            basis = "^".join(names[i] for i in key)
            cs = str(c)
            if not key:
                parts.append(cs)
            elif cs == "1":
                parts.append(basis)
            elif cs == "-1":
                parts.append("-" + basis)
            elif len(c.terms) == 1 and "+" not in cs and " - " not in cs:
                parts.append(f"{cs}*{basis}")
            else:
                parts.append(f"({cs})*{basis}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def wedge(a: MultiSection, b: MultiSection) -> MultiSection:
    if a.n != b.n or a.vars != b.vars:
        raise ValueError("wedge of multisections over different modules")
    k = a.k + b.k
    if k > a.n:
        return MultiSection._raw(a.n, k, a.vars, {})
    out: dict = {}
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            ms = merge_sign(ka, kb)
            if ms is None:
                continue
            sign, key = ms
            p = ca * cb
            if sign < 0:
                p = -p
            s = out[key] + p if key in out else p
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return MultiSection._raw(a.n, k, a.vars, out)


@dataclass(frozen=True, eq=False)
class MetricData:
    """Nondegenerate symmetric bilinear form on the frame, with its inverse."""

    g: tuple
    g_inv: tuple = field(init=False)

    def __post_init__(self):
        g = tuple(tuple(Fraction(x) for x in row) for row in self.g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("metric must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i + 1},{j + 1})")
        try:
            inv = linalg.inverse([list(r) for r in g]) if n else []
        except ZeroDivisionError:
            raise ValueError("metric is singular") from None
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "g_inv", tuple(tuple(r) for r in inv))
        object.__setattr__(self, "_minor_cache", {})

    @property
    def n(self) -> int:
        return len(self.g)

    @classmethod
    def identity(cls, n: int) -> "MetricData":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __eq__(self, other) -> bool:
        return isinstance(other, MetricData) and self.g == other.g

    def __hash__(self) -> int:
        return hash(self.g)

    def minors(self, k: int, inverse: bool = False) -> dict:
        """Nonzero ``det(g[I, J])`` keyed by ``I -> [(J, det), ...]`` for k-subsets."""
        cache = self._minor_cache
        key = (k, inverse)
        if key not in cache:
            m = self.g_inv if inverse else self.g
            table = {}
            for I in subsets(self.n, k):
                row = []
                for J in subsets(self.n, k):
                    d = linalg.det([[m[i][j] for j in J] for i in I])
                    if d:
                        row.append((J, d))
                table[I] = row
            cache[key] = table
        return cache[key]


def metric_pair(a: MultiSection, b: MultiSection, g: MetricData) -> Poly:
    """Determinant extension of the metric to ``^k E``."""
    if a.k != b.k:
        raise ValueError(f"cannot pair degree {a.k} with degree {b.k}")
    if a.vars != b.vars:
        raise RingMismatchError("pairing across different rings")
    table = g.minors(a.k)
    out = Poly.zero(a.vars)
    for I, ca in a.coeffs.items():
        for J, d in table[I]:
            cb = b.coeffs.get(J)
            if cb is not None:
                out = out + (ca * cb).scale(d)
    return out


def xi(a: MultiSection, g: MetricData) -> dict:
    """Xi(a) as a dict of form values ``J -> <a, e_J>``."""
    table = g.minors(a.k)
    out: dict = {}
    for I, ca in a.coeffs.items():
        for J, d in table[I]:
            p = ca.scale(d)
            s = out[J] + p if J in out else p
            if s:
                out[J] = s
            else:
                out.pop(J, None)
    return out


def xi_inverse(form: Mapping[tuple, Poly], n: int, k: int, vars: Sequence[str], g: MetricData) -> MultiSection:
    """The multisection ``b`` with ``<b, e_J> = form[J]`` for every k-subset ``J``."""
    table = g.minors(k, inverse=True)
    out: dict = {}
    for J, w in form.items():
        if not w:
            continue
        for I, d in table[J]:
            p = w.scale(d)
            s = out[I] + p if I in out else p
            if s:
                out[I] = s
            else:
                out.pop(I, None)
    return MultiSection._raw(n, k, tuple(vars), out)


def lower(e: MultiSection, g: MetricData) -> list[Poly]:
    """Covector ``<e, .>`` as components on the frame."""
    comps = e.components()
    out = []
    for j in range(e.n):
        acc = Poly.zero(e.vars)
        for i, c in enumerate(comps):
            if c and g.g[i][j]:
                acc = acc + c.scale(g.g[i][j])
        out.append(acc)
    return out


def breve_contract(e: MultiSection, a: MultiSection, g: MetricData) -> MultiSection:
    """Metric-twisted contraction ``Xi^{-1} i_e Xi``, an odd derivation of degree -1."""
    if e.k != 1:
        raise ValueError("contraction needs a degree-1 section")
    if a.k == 0:
        raise ValueError("cannot contract a degree-0 element")
    cov = lower(e, g)
    out: dict = {}
    for key, c in a.coeffs.items():
        for pos, i in enumerate(key):
            if not cov[i]:
                continue
            p = c * cov[i]
            if pos % 2:
                p = -p
            rest = key[:pos] + key[pos + 1:]
            s = out[rest] + p if rest in out else p
            if s:
                out[rest] = s
            else:
                out.pop(rest, None)
    return MultiSection._raw(a.n, a.k - 1, a.vars, out)


def contract_or_zero(e: MultiSection, a: MultiSection, g: MetricData) -> MultiSection:
    """:func:`breve_contract`, extended by zero on degree 0 (operator form)."""
    if a.k == 0:
        return a
    return breve_contract(e, a, g)


def _left_derivatives(a: MultiSection):
    """Yield ``(i, sign, rest, coeff)`` for the left derivative d/de_i of each term."""
    for key, c in a.coeffs.items():
        for pos, i in enumerate(key):
            yield i, (-1 if pos % 2 else 1), key[:pos] + key[pos + 1:], c


def _right_derivatives(a: MultiSection):
    for key, c in a.coeffs.items():
        k = len(key)
        for pos, i in enumerate(key):
            yield i, (-1 if (k - 1 - pos) % 2 else 1), key[:pos] + key[pos + 1:], c


def graded_poisson(a: MultiSection, b: MultiSection, g: MetricData) -> MultiSection:
    """Degree -2 Poisson bracket on ``^E`` over the point, ``{e_i, e_j} = g_ij``.

    Computed as ``sum g_ij (a d<-/de_i) ^ (d->/de_j b)`` with right and left
    Grassmann derivatives, which makes it a biderivation with Koszul signs.
    """
    if a.vars or b.vars:
        raise UnsupportedOperation("the graded Poisson bracket is only realized over the point base")
    if a.n != b.n:
        raise ValueError("bracket of multisections of different rank")
    n = a.n
    k = a.k + b.k - 2
    if k < 0:
        return MultiSection.zero(n, 0)
    out: dict = {}
    rights = list(_right_derivatives(a))
    lefts = list(_left_derivatives(b))
    gm = g.g
    for i, si, ra, ca in rights:
        row = gm[i]
        for j, sj, rb, cb in lefts:
            gij = row[j]
            if not gij:
                continue
            ms = merge_sign(ra, rb)
            if ms is None:
                continue
            sign, key = ms
            p = (ca * cb).scale(gij * si * sj * sign)
            s = out[key] + p if key in out else p
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return MultiSection._raw(n, k, (), out)
