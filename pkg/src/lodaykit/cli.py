"""Command line front end.

Every command produces a :class:`Report`; the text form is rendered from the
same dictionary as the JSON form, so both carry the same numbers.  Exit status
is 0 iff there is no ``fail`` verdict and no error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .algebroid import (
    AlgebroidError,
    check_courant,
    check_loday_axioms,
    derived_lemma_check,
    operator_identity_check,
    verify_lie_identities,
)
from .cohomology import compare_phi, naive_cohomology, standard_cohomology
from .constructions import (
    ConstructionError,
    LieBialgebraData,
    ThreeFormData,
    catalog,
    default_vars,
    drinfeld_double,
    exact_courant,
)
from .exterior import MultiSection, UnsupportedOperation
from .io import AlgebroidFileError, parse_algebroid, serialize
from .modular import check_module, gauge_shift_check, modular_class, top_connection
from .probe import probe_redundancy
from .scalars import PolySyntaxError, parse_poly

MAX_WITNESSES = 5


@dataclass
class Report:
    command: str
    input_digest: str | None = None
    seed: int = 0
    verdicts: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if self.errors:
            return 2
        return 1 if "fail" in self.verdicts.values() else 0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "verdicts": self.verdicts,
            "results": self.results,
            "witnesses": self.witnesses,
            "errors": self.errors,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"command: {d['command']}"]
        if d["input_digest"]:
            lines.append(f"input: {d['input_digest']}")
        lines.append(f"seed: {d['seed']}")
        if d["verdicts"]:
            lines.append("verdicts:")
            lines += [f"  {k}: {v}" for k, v in sorted(d["verdicts"].items())]
        if d["results"]:
            lines.append("results:")
            for k, v in sorted(d["results"].items()):
                lines.append(f"  {k}: {_compact(v)}")
        if d["witnesses"]:
            lines.append("witnesses:")
            for w in d["witnesses"]:
                inputs = ", ".join(f"{k}={v}" for k, v in w["inputs"].items())
                lines.append(f"  - [{w['check']}:{w['axiom']}] {inputs}")
                lines.append(f"    lhs = {w['lhs']}")
                lines.append(f"    rhs = {w['rhs']}")
                lines.append(f"    defect = {w['defect']}")
        if d["errors"]:
            lines.append("errors:")
            lines += [f"  {e}" for e in d["errors"]]
        lines.append(f"exit: {d['exit_code']}")
        return "\n".join(lines) + "\n"


def _compact(v: Any) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False, sort_keys=True)


def _witness_dicts(check: str, witnesses, names) -> list[dict]:
    out = []
    for w in witnesses[:MAX_WITNESSES]:
        d = w.describe(names)
        try:
            defect = w.defect
            d["defect"] = defect.format(names) if isinstance(defect, MultiSection) else str(defect)
        except TypeError:
            d["defect"] = "n/a"
        d["check"] = check
        out.append(d)
    return out


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _load(report: Report, path: str):
    with open(path, "rb") as fh:
        raw = fh.read()
    report.input_digest = _digest(raw)
    return parse_algebroid(raw.decode("utf-8"))


# -- commands --------------------------------------------------------------------------


def cmd_check(args, rep: Report):
    alg = _load(rep, args.file)
    names = alg.basis_names
    rep.results["algebroid"] = alg.name
    loday = check_loday_axioms(alg, trials=args.trials, seed=args.seed)
    rep.verdicts["loday"] = _verdict(not loday)
    rep.results["loday_witnesses"] = len(loday)
    rep.witnesses += _witness_dicts("loday", loday, names)
    cour = check_courant(alg, trials=args.trials, seed=args.seed)
    rep.verdicts["courant"] = _verdict(not cour)
    rep.results["courant_witnesses"] = len(cour)
    rep.witnesses += _witness_dicts("courant", cour, names)
    if loday:
        for key in ("derived_lemma", "lie:1", "lie:3", "lie:4", "lie:5", "lie:6", "lie:7", "lie:L_fe"):
            rep.verdicts[key] = "skipped"
        return
    dl = derived_lemma_check(alg, seed=args.seed)
    rep.verdicts["derived_lemma"] = _verdict(dl.passed)
    rep.witnesses += _witness_dicts("derived_lemma", dl.witnesses, names)
    lie = verify_lie_identities(alg, trials=args.trials, seed=args.seed, courant=not cour)
    for k, v in lie.statuses.items():
        rep.verdicts[f"lie:{k}"] = v
    for k in lie.statuses:
        rep.witnesses += _witness_dicts(f"lie:{k}", [w for w in lie.witnesses if w.axiom_id == k], names)
    op = operator_identity_check(alg, seed=args.seed)
    rep.verdicts["lie:L_fe"] = _verdict(op.passed)
    rep.witnesses += _witness_dicts("lie:L_fe", op.witnesses, names)


def _format_elements(elements, names) -> list:
    return [[e.format(names) for e in row] for row in elements]


def cmd_cohomology(args, rep: Report):
    alg = _load(rep, args.file)
    names = alg.basis_names
    rep.results["algebroid"] = alg.name
    if args.theory in ("naive", "both"):
        res = naive_cohomology(alg, degree_cap=args.degree_cap, mode=args.mode)
        rep.results["naive_dims"] = res.dims
        rep.results["naive_complex_dims"] = res.complex.dims()
        rep.results["naive_representatives"] = _format_elements(res.elements, names)
        if not alg.is_point:
            rep.results["degree_cap"] = args.degree_cap
            rep.results["truncation"] = args.mode
        bad = res.complex.square_zero_failures()
        rep.verdicts["naive:d^2=0"] = _verdict(not bad)
    if args.theory in ("standard", "both"):
        res = standard_cohomology(alg)
        rep.results["standard_dims"] = res.dims
        rep.results["standard_representatives"] = _format_elements(res.elements, names)
    if args.theory == "both":
        phi = compare_phi(alg)
        rep.verdicts["phi"] = _verdict(phi.isomorphism)
        rep.results["phi_verdict"] = "φ isomorphism" if phi.isomorphism else "φ not shown to be an isomorphism"


def cmd_modular(args, rep: Report):
    alg = _load(rep, args.file)
    names = alg.basis_names
    rep.results["algebroid"] = alg.name
    mod = top_connection(alg)
    chk = check_module(alg, mod, seed=args.seed)
    rep.verdicts["module_axioms"] = _verdict(chk.passed)
    rep.witnesses += _witness_dicts("module_axioms", chk.witnesses, names)
    mc = modular_class(alg, mod)
    rep.results["connection"] = [str(x) for x in mod.lams]
    rep.results["representative"] = mc.representative.format(names)
    rep.results["reduced_representative"] = mc.reduced.format(names)
    rep.results["modular_class"] = mc.verdict
    if alg.is_point:
        rep.verdicts["gauge"] = "skipped"
        return
    rep.results["truncation_degree"] = mc.truncation_degree
    gauges = args.gauge or [str(v) for v in alg.vars] + [f"{v}^2" for v in alg.vars]
    ok = True
    rows = []
    for text in gauges:
        g = parse_poly(text, alg.vars)
        gr = gauge_shift_check(alg, g, mod)
        ok = ok and gr.passed
        rows.append(
            {
                "g": str(g),
                "shifted_representative": gr.theta_shifted.format(names),
                "expected_shift": gr.expected_shift.format(names),
                "shift_ok": gr.shift_ok,
                "class_unchanged": gr.coset_ok,
            }
        )
    rep.verdicts["gauge"] = _verdict(ok)
    rep.results["gauge_checks"] = rows


def cmd_compare(args, rep: Report):
    alg = _load(rep, args.file)
    rep.results["algebroid"] = alg.name
    phi = compare_phi(alg)
    rep.verdicts["theta_is_differential"] = _verdict(phi.theta_is_differential)
    rep.verdicts["closed_agree"] = _verdict(phi.closed_agree)
    rep.verdicts["Df=0"] = _verdict(phi.df_is_bracket)
    rep.verdicts["phi"] = _verdict(phi.isomorphism)
    rep.results["theta"] = phi.theta.format(alg.basis_names)
    rep.results["naive_dims"] = phi.naive_dims
    rep.results["standard_dims"] = phi.standard_dims
    rep.results["mismatched_basis_elements"] = [list(I) for I in phi.mismatches]
    rep.results["phi_verdict"] = "φ isomorphism" if phi.isomorphism else "φ not shown to be an isomorphism"


def _parse_phi(m: int, items: Sequence[str], vars) -> ThreeFormData:
    comps = {}
    for item in items:
        try:
            idx, val = item.split("=", 1)
            key = tuple(int(t) - 1 for t in idx.split(","))
        except ValueError:
            raise ConstructionError(f"bad --phi entry {item!r}; expected i,j,k=POLY") from None
        comps[key] = parse_poly(val, vars)
    return ThreeFormData(m, comps, vars)


def _bialgebra_from_file(path: str, rep: Report) -> LieBialgebraData:
    with open(path, "rb") as fh:
        raw = fh.read()
    rep.input_digest = _digest(raw)
    data = json.loads(raw)
    try:
        n = int(data["rank"])
        c = [[[Fraction(v) for v in vec] for vec in row] for row in data["bracket"]]
        gamma = [[[Fraction(v) for v in vec] for vec in row] for row in data["cobracket"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConstructionError(f"bad bialgebra file: {exc}") from None
    return LieBialgebraData(n, c, gamma)


def cmd_construct(args, rep: Report):
    if args.kind == "double":
        if args.bialgebra:
            b = _bialgebra_from_file(args.bialgebra, rep)
        elif args.g == "sl2" and args.dual == "standard":
            b = LieBialgebraData.sl2_standard()
        else:
            b = LieBialgebraData.from_names(args.g, args.dual)
        bad = b.violations()
        if bad:
            rep.witnesses += _witness_dicts("bialgebra", bad, None)
            raise ConstructionError("input is not a Lie bialgebra")
        label = args.name or ("double(bialgebra)" if args.bialgebra else f"double({args.g}, {args.dual})")
        alg = drinfeld_double(b, name=label)
    elif args.kind == "exact":
        vars = default_vars(args.m)
        alg = exact_courant(args.m, _parse_phi(args.m, args.phi or [], vars))
    else:
        alg = catalog(args.entry)
    text = serialize(alg)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    rep.results["algebroid"] = alg.name
    rep.results["rank"] = alg.n
    rep.results["output"] = args.output or "-"
    rep.results["output_digest"] = _digest(text.encode("utf-8"))


def cmd_probe(args, rep: Report):
    vars = tuple(args.vars.split(","))
    res = probe_redundancy(args.trials, args.seed, rank=args.rank, vars=vars)
    rep.results.update(
        {
            "trials": res.trials,
            "sampled": res.sampled,
            "satisfying_A_D_E": res.satisfying_ade,
            "satisfying_A_D_E_with_nonzero_anchor": res.ade_with_anchor,
            "violating_B": res.violating_b,
            "violating_C": res.violating_c,
            "base_variables": list(vars),
            "rank": args.rank,
        }
    )
    for alg, wit in res.findings[:MAX_WITNESSES]:
        rep.witnesses += _witness_dicts("probe", wit[:1], alg.basis_names)
    # findings are reported, never judged
    rep.verdicts["probe"] = "pass"


COMMANDS = {
    "check": cmd_check,
    "cohomology": cmd_cohomology,
    "modular": cmd_modular,
    "compare": cmd_compare,
    "construct": cmd_construct,
    "probe-redundancy": cmd_probe,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lodaykit", description="Exact checks and cohomology for Loday and Courant algebroids.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_file=True):
        if with_file:
            sp.add_argument("file", help="algebroid JSON file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("check", help="axioms, Courant invariance, derived lemma, Lie derivative identities")
    common(sp)
    sp.add_argument("--trials", type=int, default=32)

    sp = sub.add_parser("cohomology", help="naive and/or standard cohomology")
    common(sp)
    sp.add_argument("--theory", choices=("naive", "standard", "both"), default="naive")
    sp.add_argument("--degree-cap", type=int, default=3)
    sp.add_argument("--mode", choices=("weight", "flat"), default="weight")

    sp = sub.add_parser("modular", help="modular class of the top exterior power")
    common(sp)
    sp.add_argument("--gauge", action="append", help="gauge function g (repeatable); default: each variable and its square")

    sp = sub.add_parser("compare", help="naive vs standard cohomology over a point")
    common(sp)

    sp = sub.add_parser("construct", help="write an algebroid file")
    csub = sp.add_subparsers(dest="kind", required=True)
    d = csub.add_parser("double", help="Drinfeld double of a Lie bialgebra")
    d.add_argument("--g", default="aff1", help="abelian(n), aff1 or sl2")
    d.add_argument("--dual", default="abelian", help="bracket on the dual: abelian(n), aff1, or 'standard' for sl2")
    d.add_argument("--bialgebra", help="JSON file with rank, bracket and cobracket")
    d.add_argument("--name")
    e = csub.add_parser("exact", help="exact Courant algebroid on Q[x_1..x_m]")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--phi", action="append", help="3-form component 'i,j,k=POLY' (1-based, repeatable)")
    c = csub.add_parser("catalog", help="named fixture")
    c.add_argument("entry")
    for kp in (d, e, c):
        common(kp, with_file=False)
        kp.add_argument("-o", "--output")

    sp = sub.add_parser("probe-redundancy", help="random search for (A),(D),(E) structures violating (B) or (C)")
    common(sp, with_file=False)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--rank", type=int, default=2)
    sp.add_argument("--vars", default="x")
    return p


def run(command: str, args: argparse.Namespace) -> Report:
    rep = Report(command, seed=getattr(args, "seed", 0))
    try:
        COMMANDS[command](args, rep)
    except (
        AlgebroidFileError,
        AlgebroidError,
        ConstructionError,
        UnsupportedOperation,
        PolySyntaxError,
        ValueError,
        OSError,
    ) as exc:
        rep.errors.append(f"{type(exc).__name__}: {exc}")
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    rep = run(args.command, args)
    out = rep.to_json() if args.format == "json" else rep.to_text()
    stream = sys.stderr if args.command == "construct" and not args.output else sys.stdout
    stream.write(out)
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
