"""Sanity checks on the reference implementations themselves."""
from math import comb

import pytest
import sympy as sp

from oracles import DeRham, ExactCourantOracle, ce_dims, ce_matrices, traces

SL2 = [[[0, 0, 0], [0, 2, 0], [0, 0, -2]], [[0, -2, 0], [0, 0, 0], [1, 0, 0]], [[0, 0, 2], [-1, 0, 0], [0, 0, 0]]]


def test_ce_abelian():
    n = 4
    zero = [[[0] * n for _ in range(n)] for _ in range(n)]
    assert ce_dims(n, zero) == [comb(n, k) for k in range(n + 1)]


def test_ce_sl2_whitehead():
    assert ce_dims(3, SL2) == [1, 0, 0, 1]
    mats = ce_matrices(3, SL2)
    for a, b in zip(mats, mats[1:]):
        assert (b * a).is_zero_matrix


def test_ce_aff1():
    c = [[[0, 0], [0, 1]], [[0, -1], [0, 0]]]
    # H^1 = span(eps1), H^2 = 0 for the non-unimodular 2d algebra
    assert ce_dims(2, c) == [1, 1, 0]
    assert traces(2, c) == [1, 0]


@pytest.mark.parametrize("m,cap", [(1, 3), (2, 3), (3, 3), (3, 4)])
def test_koszul_homotopy(m, cap):
    dr = DeRham(m, cap)
    assert dr.homotopy_defects() == []
    assert dr.dims() == [1] + [0] * m
    for k in range(m - 1):
        assert (dr.matrix(k + 1) * dr.matrix(k)).is_zero_matrix


def test_cartan_oracle_symmetric_part():
    x, y, z = sp.symbols("x y z")
    o = ExactCourantOracle((x, y, z), {(0, 1, 2): x})
    X, xi = [y, 1, x * z], [x, z**2, 0]
    vec, form = o.bracket(X, xi, X, xi)
    # a o a = d <a, a> / 2 and no vector part
    half = o.pairing(X, xi, X, xi) / 2
    assert vec == [0, 0, 0]
    assert [sp.expand(f - sp.diff(half, s)) for f, s in zip(form, (x, y, z))] == [0, 0, 0]
