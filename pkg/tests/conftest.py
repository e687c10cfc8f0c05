import sys
from pathlib import Path

import pytest
import sympy as sp

sys.path.insert(0, str(Path(__file__).parent))

from lodaykit.constructions import (  # noqa: E402
    LieBialgebraData,
    ThreeFormData,
    abelian,
    aff1_loday,
    drinfeld_double,
    exact_courant,
    random_quadratic,
    sl2_split,
)
from lodaykit.scalars import Poly  # noqa: E402


def to_sympy(p: Poly, syms=None):
    if syms is None:
        syms = sp.symbols(p.vars) if p.vars else ()
    out = sp.Integer(0)
    for mono, c in p.terms.items():
        t = sp.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, mono):
            t *= s**e
        out += t
    return sp.expand(out)


def linear_twist() -> ThreeFormData:
    """The closed 3-form (x + y) dx^dy^dz."""
    return ThreeFormData(3, {(0, 1, 2): Poly.var(("x", "y", "z"), "x") + Poly.var(("x", "y", "z"), "y")})


def double_fixtures():
    return {
        "double(abelian2, abelian2)": drinfeld_double(LieBialgebraData.from_names("abelian(2)", "abelian(2)")),
        "double(aff1, abelian)": drinfeld_double(LieBialgebraData.from_names("aff1", "abelian")),
        "double(abelian, aff1)": drinfeld_double(LieBialgebraData.from_names("abelian(2)", "aff1")),
        "double(sl2, standard)": drinfeld_double(LieBialgebraData.sl2_standard()),
        "double(aff1, a=1 b=1)": drinfeld_double(LieBialgebraData.aff1_with_cobracket(1, 1)),
    }


def exact_fixtures():
    out = {}
    for m in (1, 2, 3):
        out[f"exact({m}, 0)"] = exact_courant(m)
    out["exact(3, 3dxdydz)"] = exact_courant(3, ThreeFormData(3, {(0, 1, 2): 3}))
    out["exact(3, (x+y)dxdydz)"] = exact_courant(3, linear_twist())
    return out


def quadratic_fixtures():
    out = {"abelian(3)": abelian(3), "sl2_split": sl2_split()}
    for s in (1, 2, 3):
        out[f"random_quadratic({s})"] = random_quadratic(s)
    return out


def point_fixtures():
    out = dict(quadratic_fixtures())
    out.update(double_fixtures())
    return out


@pytest.fixture(scope="session")
def sl2():
    return sl2_split()


@pytest.fixture(scope="session")
def aff1():
    return aff1_loday()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
