"""Random search for Loday-type structures that satisfy (A), (D), (E) but not (B) or (C).

Over a point (B) and (C) hold trivially, so the search runs over a small
polynomial base.  Structures are given by a frame table, so (C) holds by
construction; the probe still evaluates it and reports whatever it finds.
Nothing here asserts a theorem.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebroid import Algebroid, AlgebroidError, check_loday_axioms
from .scalars import Derivation, Poly

_METRICS = (
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((1, 0), (0, -1)),
    ((2, 0), (0, 1)),
)


@dataclass
class ProbeResult:
    trials: int
    seed: int
    sampled: int = 0
    satisfying_ade: int = 0
    ade_with_anchor: int = 0  # of those, how many have a nonzero anchor
    violating_b: int = 0
    violating_c: int = 0
    findings: list = field(default_factory=list)  # (algebroid, witnesses)


def _small_poly(vars, rng: random.Random) -> Poly:
    # Mostly zero or linear so that the remaining axioms have a fair chance.
    if rng.random() < 0.4:
        return Poly.zero(vars)
    p = Poly.const(vars, rng.randint(-2, 2))
    if rng.random() < 0.5:
        p = p + Poly.var(vars, vars[0]).scale(rng.randint(-1, 1))
    return p


def random_candidate(rng: random.Random, rank: int = 2, vars=("x",)) -> Algebroid:
    """Rank ``rank`` over ``Q[vars]`` with constant metric and antisymmetric frame table."""
    vars = tuple(vars)
    if rank == 2:
        g = rng.choice(_METRICS)
    else:
        g = tuple(tuple(rng.choice((1, -1)) if i == j else 0 for j in range(rank)) for i in range(rank))
    anchor = []
    for _ in range(rank):
        if rng.random() < 0.5:
            anchor.append(Derivation.zero(vars))
        else:
            anchor.append(Derivation(vars, [_small_poly(vars, rng) for _ in vars]))
    zero = Poly.zero(vars)
    s = [[[zero] * rank for _ in range(rank)] for _ in range(rank)]
    for i in range(rank):
        for j in range(i + 1, rank):
            for k in range(rank):
                p = _small_poly(vars, rng)
                s[i][j][k] = p
                s[j][i][k] = -p
    return Algebroid.from_structure("probe", vars, g, anchor, s)


def probe_redundancy(trials: int, seed: int, rank: int = 2, vars=("x",), axiom_trials: int = 4) -> ProbeResult:
    rng = random.Random(seed)
    res = ProbeResult(trials, seed)
    for t in range(trials):
        try:
            alg = random_candidate(rng, rank, vars)
        except (AlgebroidError, ValueError):
            continue
        res.sampled += 1
        wit = check_loday_axioms(alg, trials=axiom_trials, seed=seed + t)
        ids = {w.axiom_id for w in wit}
        if ids & {"A", "D", "E"}:
            continue
        res.satisfying_ade += 1
        if any(not a.is_zero() for a in alg.anchor):
            res.ade_with_anchor += 1
        bad = [w for w in wit if w.axiom_id in ("B", "C")]
        if any(w.axiom_id == "B" for w in bad):
            res.violating_b += 1
        if any(w.axiom_id == "C" for w in bad):
            res.violating_c += 1
        if bad:
            res.findings.append((alg, bad))
    return res
