"""JSON algebroid files.

All rationals and polynomials travel as strings in the canonical polynomial
syntax, so no number ever goes through a float.  Schema::

    {
      "format": "lodaykit.algebroid/1",
      "name": "sl2_split",
      "base": {"type": "point"} | {"type": "polynomial", "variables": ["x", ...]},
      "rank": n,
      "basis_names": [n strings],
      "metric": n x n rational strings,
      "anchor": n lists, one polynomial string per variable,
      "dorfman": n x n lists of n polynomial strings (e_i o e_j = sum_k c[i][j][k] e_k),
      "kernel_frame": null | list of sections, each n polynomial strings
    }
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .algebroid import Algebroid, AlgebroidError
from .exterior import MetricData, MultiSection
from .scalars import Derivation, Poly, PolySyntaxError, format_poly, parse_poly

FORMAT = "lodaykit.algebroid/1"


class AlgebroidFileError(ValueError):
    def __init__(self, message: str, path: tuple = (), line: int | None = None):
        loc = _path_str(path)
        prefix = f"line {line}: " if line else ""
        super().__init__(f"{prefix}{loc + ': ' if loc else ''}{message}")
        self.path = path
        self.line = line


def _path_str(path: tuple) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out


# -- line locator -------------------------------------------------------------------

_WS = re.compile(r"[ \t\n\r]*")
_STR = re.compile(r'"(?:[^"\\]|\\.)*"')
_LIT = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|true|false|null")


def locate_lines(text: str) -> dict:
    """Map each JSON value path to the line where the value starts (best effort)."""
    lines: dict = {}
    pos = 0

    def line_at(p):
        return text.count("\n", 0, p) + 1

    def ws(p):
        return _WS.match(text, p).end()

    def value(p, path):
        p = ws(p)
        lines[path] = line_at(p)
        ch = text[p:p + 1]
        if ch == "{":
            p = ws(p + 1)
            if text[p:p + 1] == "}":
                return p + 1
            while True:
                p = ws(p)
                m = _STR.match(text, p)
                key = json.loads(m.group(0))
                p = ws(m.end())
                p = value(p + 1, path + (key,))  # skip ':'
                p = ws(p)
                if text[p] == ",":
                    p += 1
                    continue
                return p + 1
        if ch == "[":
            p = ws(p + 1)
            if text[p:p + 1] == "]":
                return p + 1
            i = 0
            while True:
                p = value(p, path + (i,))
                p = ws(p)
                i += 1
                if text[p] == ",":
                    p += 1
                    continue
                return p + 1
        if ch == '"':
            return _STR.match(text, p).end()
        return _LIT.match(text, p).end()

    try:
        value(pos, ())
    except (AttributeError, IndexError, ValueError):
        pass
    return lines


# -- parsing -------------------------------------------------------------------------


class _Ctx:
    def __init__(self, text: str):
        self.lines = locate_lines(text)

    def fail(self, path: tuple, message: str):
        line = None
        p = tuple(path)
        while p and p not in self.lines:
            p = p[:-1]
        line = self.lines.get(p)
        raise AlgebroidFileError(message, tuple(path), line)


def _expect(ctx: _Ctx, cond: bool, path, message):
    if not cond:
        ctx.fail(path, message)


def _poly(ctx: _Ctx, s: Any, vars: tuple, path: tuple) -> Poly:
    _expect(ctx, isinstance(s, str), path, "expected a polynomial string")
    try:
        return parse_poly(s, vars)
    except PolySyntaxError as exc:
        if not vars and "unknown variable" in str(exc):
            ctx.fail(path, f"polynomial coefficient {s!r} on point base")
        ctx.fail(path, f"malformed polynomial: {exc}")
    except (ValueError, ZeroDivisionError) as exc:
        ctx.fail(path, f"malformed polynomial {s!r}: {exc}")


def _rational(ctx: _Ctx, s: Any, path: tuple) -> Fraction:
    _expect(ctx, isinstance(s, str), path, "expected a rational string such as \"3/2\"")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        ctx.fail(path, f"malformed rational {s!r}")


def _list(ctx, obj, path, length=None, what="list"):
    _expect(ctx, isinstance(obj, list), path, f"expected a {what}")
    if length is not None:
        _expect(ctx, len(obj) == length, path, f"expected {length} entries, found {len(obj)}")
    return obj


def parse_algebroid(text: str) -> Algebroid:
    """Parse and validate an algebroid file; errors carry the JSON path and line."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebroidFileError(f"invalid JSON: {exc.msg}", (), exc.lineno) from None
    ctx = _Ctx(text)
    _expect(ctx, isinstance(data, dict), (), "top level must be an object")
    if "format" in data:
        _expect(ctx, data["format"] == FORMAT, ("format",), f"unsupported format {data['format']!r}")
    for key in ("name", "base", "rank", "metric", "anchor", "dorfman"):
        _expect(ctx, key in data, (), f"missing key {key!r}")
    known = {"format", "name", "base", "rank", "basis_names", "metric", "anchor", "dorfman", "kernel_frame"}
    extra = sorted(set(data) - known)
    _expect(ctx, not extra, (extra[0],) if extra else (), f"unknown key {extra[0]!r}" if extra else "")

    name = data["name"]
    _expect(ctx, isinstance(name, str), ("name",), "name must be a string")
    base = data["base"]
    _expect(ctx, isinstance(base, dict) and base.get("type") in ("point", "polynomial"), ("base",),
            "base must be {\"type\": \"point\"} or {\"type\": \"polynomial\", \"variables\": [...]}")
    if base["type"] == "point":
        _expect(ctx, set(base) == {"type"}, ("base",), "point base takes no other fields")
        vars: tuple = ()
    else:
        v = _list(ctx, base.get("variables"), ("base", "variables"), what="list of variable names")
        _expect(ctx, len(v) > 0, ("base", "variables"), "polynomial base needs at least one variable")
        for i, name_ in enumerate(v):
            _expect(ctx, isinstance(name_, str) and re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name_) is not None,
                    ("base", "variables", i), "variable names must be identifiers")
        _expect(ctx, len(set(v)) == len(v), ("base", "variables"), "duplicate variable names")
        vars = tuple(v)

    n = data["rank"]
    _expect(ctx, isinstance(n, int) and not isinstance(n, bool) and n >= 1, ("rank",), "rank must be a positive integer")

    names = data.get("basis_names")
    if names is not None:
        _list(ctx, names, ("basis_names",), n)
        for i, s in enumerate(names):
            _expect(ctx, isinstance(s, str), ("basis_names", i), "basis names must be strings")

    rows = _list(ctx, data["metric"], ("metric",), n, "matrix")
    g = []
    for i, row in enumerate(rows):
        _list(ctx, row, ("metric", i), n)
        g.append([_rational(ctx, x, ("metric", i, j)) for j, x in enumerate(row)])
    for i in range(n):
        for j in range(i):
            _expect(ctx, g[i][j] == g[j][i], ("metric", i, j), f"metric is not symmetric: entry ({i + 1},{j + 1}) != ({j + 1},{i + 1})")
    try:
        metric = MetricData(tuple(tuple(r) for r in g))
    except ValueError as exc:
        ctx.fail(("metric",), str(exc))

    anchor = []
    for i, a in enumerate(_list(ctx, data["anchor"], ("anchor",), n)):
        _list(ctx, a, ("anchor", i), len(vars))
        anchor.append(Derivation(vars, [_poly(ctx, s, vars, ("anchor", i, j)) for j, s in enumerate(a)]))

    table = []
    for i, row in enumerate(_list(ctx, data["dorfman"], ("dorfman",), n)):
        _list(ctx, row, ("dorfman", i), n)
        trow = []
        for j, vec in enumerate(row):
            _list(ctx, vec, ("dorfman", i, j), n)
            trow.append(MultiSection.vector([_poly(ctx, s, vars, ("dorfman", i, j, k)) for k, s in enumerate(vec)], vars))
        table.append(trow)

    frame = data.get("kernel_frame")
    if frame is not None:
        fr = []
        for i, vec in enumerate(_list(ctx, frame, ("kernel_frame",))):
            _list(ctx, vec, ("kernel_frame", i), n)
            fr.append(MultiSection.vector([_poly(ctx, s, vars, ("kernel_frame", i, k)) for k, s in enumerate(vec)], vars))
        frame = fr

    try:
        return Algebroid(name, vars, metric, anchor, table, kernel_frame=frame, basis_names=names)
    except AlgebroidError as exc:
        ctx.fail((), str(exc))


# -- serialization -------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_data(alg: Algebroid) -> dict:
    n = alg.n
    base: dict = {"type": "point"} if alg.is_point else {"type": "polynomial", "variables": list(alg.vars)}
    return {
        "format": FORMAT,
        "name": alg.name,
        "base": base,
        "rank": n,
        "basis_names": list(alg.basis_names),
        "metric": [[_frac(x) for x in row] for row in alg.metric.g],
        "anchor": [[format_poly(c) for c in a.coeffs] for a in alg.anchor],
        "dorfman": [[[format_poly(c) for c in alg.table[i][j].components()] for j in range(n)] for i in range(n)],
        "kernel_frame": None
        if alg.kernel_frame is None
        else [[format_poly(c) for c in s.components()] for s in alg.kernel_frame],
    }


def _dump(obj: Any, indent: int = 0) -> str:
    """JSON with one innermost list per line."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and any(isinstance(x, (list, dict)) for x in obj):
        items = [f"{pad}  {_dump(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def serialize(alg: Algebroid) -> str:
    return _dump(to_data(alg)) + "\n"
