"""Exact scalars: sparse multivariate polynomials over Q and polynomial vector fields.

The point base is the polynomial ring in zero variables, so every higher
module works over a single ring type.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Monomial = tuple  # exponent vector


class RingMismatchError(ValueError):
    pass


def _grlex_key(mono: Monomial) -> tuple:
    return (sum(mono), mono)


class Poly:
    """Polynomial with rational coefficients in a fixed, ordered list of variables.

    Instances are treated as immutable.  ``terms`` maps exponent vectors to
    nonzero :class:`~fractions.Fraction` coefficients.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str] = (), terms: Mapping[Monomial, Scalar] | None = None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            n = len(self.vars)
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise ValueError(f"exponent vector {mono} has wrong length for variables {self.vars}")
                if c:
                    clean[mono] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, vars: Sequence[str], c: Scalar) -> "Poly":
        vars = tuple(vars)
        return cls._raw(vars, {(0,) * len(vars): Fraction(c)} if c else {})

    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "Poly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def one(cls, vars: Sequence[str] = ()) -> "Poly":
        return cls.const(vars, 1)

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise ValueError(f"unknown variable {name!r}; ring has {vars}")
        mono = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, vars: Sequence[str], mono: Monomial, c: Scalar = 1) -> "Poly":
        return cls(vars, {tuple(mono): c})

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise RingMismatchError(f"variable lists differ: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly._raw(self.vars, {})
        if len(other.terms) == 1 and not self.vars:
            # point base: pure rational arithmetic
            return self.scale(next(iter(other.terms.values())))
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Poly._raw(self.vars, out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Poly":
        if not c:
            return Poly._raw(self.vars, {})
        if c == 1:
            return self
        c = Fraction(c)
        return Poly._raw(self.vars, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.one(self.vars)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus -----------------------------------------------------------

    def partial(self, var: str) -> "Poly":
        try:
            idx = self.vars.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r}; ring has {self.vars}") from None
        return self.partial_index(idx)

    def partial_index(self, idx: int) -> "Poly":
        out = {}
        for mono, c in self.terms.items():
            e = mono[idx]
            if e:
                m = mono[:idx] + (e - 1,) + mono[idx + 1:]
                out[m] = c * e
        return Poly._raw(self.vars, out)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            t = c
            for v, e in zip(self.vars, mono):
                if e:
                    t *= Fraction(values[v]) ** e
            total += t
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * len(self.vars): Fraction(other)} if other else {})
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, vars={self.vars})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text form, e.g. ``2/3*x^2*y - x + 1``."""
    if not p.terms:
        return "0"
    pieces = []
    for i, (mono, c) in enumerate(p.sorted_terms()):
        factors = []
        for v, e in zip(p.vars, mono):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = _fmt_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_rational(mag) + "*" + "*".join(factors)
        if i == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


class PolySyntaxError(ValueError):
    pass


def parse_poly(text: str, vars: Sequence[str] = ()) -> Poly:
    """Parse the canonical syntax produced by :func:`format_poly`.

    Accepts sums of signed terms; each term is a ``*``-product of rationals
    ``p/q`` and powers ``v^k`` of ring variables.
    """
    vars = tuple(vars)
    pos = 0
    tokens = []
    text = text.strip()
    if not text:
        raise PolySyntaxError("empty polynomial string")
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r} at column {pos + 1} in {text!r}")
        pos = m.end()
        num, name, caret, star, sign = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("var", name))
        elif caret:
            tokens.append(("^", None))
        elif star:
            tokens.append(("*", None))
        else:
            tokens.append(("sign", sign))

    result = Poly.zero(vars)
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == "sign":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise PolySyntaxError(f"expected '+' or '-' between terms in {text!r}")
        first = False
        coeff = Fraction(sign)
        mono = [0] * len(vars)
        expect_factor = True
        while i < len(tokens) and tokens[i][0] != "sign":
            kind, val = tokens[i]
            if expect_factor:
                if kind == "num":
                    try:
                        coeff *= Fraction(val)
                    except ZeroDivisionError:
                        raise PolySyntaxError(f"zero denominator in {text!r}") from None
                    i += 1
                elif kind == "var":
                    if val not in vars:
                        raise PolySyntaxError(f"unknown variable {val!r} in {text!r}; ring has {vars}")
                    exp = 1
                    i += 1
                    if i < len(tokens) and tokens[i][0] == "^":
                        if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                            raise PolySyntaxError(f"exponent must be a nonnegative integer in {text!r}")
                        exp = int(tokens[i + 1][1])
                        i += 2
                    mono[vars.index(val)] += exp
                else:
                    raise PolySyntaxError(f"expected a factor in {text!r}")
                expect_factor = False
            else:
                if kind != "*":
                    raise PolySyntaxError(f"expected '*' between factors in {text!r}")
                expect_factor = True
                i += 1
        if expect_factor:
            raise PolySyntaxError(f"dangling operator in {text!r}")
        result = result + Poly(vars, {tuple(mono): coeff})
    return result


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree <= ``degree``, graded-lex ascending."""
    if degree < 0:
        return []
    out: list[Monomial] = []

    def rec(prefix: list, remaining: int, left: int):
        if left == 0:
            out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, left - 1)

    rec([], degree, nvars)
    return sorted(set(out), key=_grlex_key)


class Derivation:
    """Polynomial vector field ``sum_i a_i d/dx_i``."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: Sequence[str], coeffs: Iterable[Poly] | None = None):
        self.vars = tuple(vars)
        if coeffs is None:
            coeffs = [Poly.zero(self.vars)] * len(self.vars)
        coeffs = tuple(coeffs)
        if len(coeffs) != len(self.vars):
            raise ValueError("a derivation needs one coefficient per variable")
        for c in coeffs:
            if c.vars != self.vars:
                raise RingMismatchError(f"coefficient ring {c.vars} differs from {self.vars}")
        self.coeffs = coeffs

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Derivation":
        return cls(vars)

    @classmethod
    def coordinate(cls, vars: Sequence[str], name: str) -> "Derivation":
        vars = tuple(vars)
        return cls(vars, [Poly.one(vars) if v == name else Poly.zero(vars) for v in vars])

    def __call__(self, p: Poly) -> Poly:
        return self.apply(p)

    def apply(self, p: Poly) -> Poly:
        if p.vars != self.vars:
            raise RingMismatchError(f"derivation over {self.vars} applied to polynomial over {p.vars}")
        out = Poly.zero(self.vars)
        for i, a in enumerate(self.coeffs):
            if a:
                d = p.partial_index(i)
                if d:
                    out = out + a * d
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.vars != self.vars:
            raise RingMismatchError("derivations over different rings")
        return Derivation(self.vars, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other.times(-1)

    def times(self, f: Poly | Scalar) -> "Derivation":
        return Derivation(self.vars, [a * f for a in self.coeffs])

    def bracket(self, other: "Derivation") -> "Derivation":
        """Commutator ``[X, Y]`` of vector fields."""
        return Derivation(self.vars, [self.apply(b) - other.apply(a) for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.vars == other.vars and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.vars, self.coeffs))

    def __str__(self) -> str:
        parts = [f"({c})*d/d{v}" for c, v in zip(self.coeffs, self.vars) if c]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__
