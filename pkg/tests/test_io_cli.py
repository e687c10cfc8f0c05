import json
import re

import pytest

from conftest import double_fixtures, exact_fixtures, quadratic_fixtures
from lodaykit.cli import build_parser, main, run
from lodaykit.constructions import LieBialgebraData, aff1_loday, catalog, sl2_split
from lodaykit.io import AlgebroidFileError, parse_algebroid, serialize, to_data


def all_fixtures():
    out = {"aff1_loday": aff1_loday(), "sum": catalog("direct_sum(sl2_split, aff1_loday)")}
    for group in (quadratic_fixtures(), double_fixtures(), exact_fixtures()):
        out.update(group)
    return out


@pytest.mark.parametrize("name", list(all_fixtures()))
def test_roundtrip(name):
    alg = all_fixtures()[name]
    text = serialize(alg)
    back = parse_algebroid(text)
    assert back == alg
    assert serialize(back) == text


def _mutate(alg, **changes):
    data = to_data(alg)
    data.update(changes)
    return json.dumps(data, indent=2)


def test_singular_metric():
    with pytest.raises(AlgebroidFileError, match="singular"):
        parse_algebroid(_mutate(aff1_loday(), metric=[["1", "0"], ["0", "0"]]))


def test_non_symmetric_metric():
    with pytest.raises(AlgebroidFileError, match=r"metric\[1\]\[0\].*not symmetric"):
        parse_algebroid(_mutate(aff1_loday(), metric=[["1", "2"], ["0", "1"]]))


def test_polynomial_on_point_base():
    data = to_data(aff1_loday())
    data["dorfman"][0][1] = ["0", "x"]
    with pytest.raises(AlgebroidFileError, match="polynomial coefficient 'x' on point base") as info:
        parse_algebroid(json.dumps(data, indent=2))
    assert info.value.path == ("dorfman", 0, 1, 1)
    assert info.value.line is not None


def test_malformed_polynomial_line_anchor():
    E = exact_fixtures()["exact(1, 0)"]
    text = serialize(E).replace('["1"]', '["1 +"]', 1)
    with pytest.raises(AlgebroidFileError, match="malformed polynomial") as info:
        parse_algebroid(text)
    lines = text.splitlines()
    assert '"1 +"' in lines[info.value.line - 1]


def test_schema_errors():
    with pytest.raises(AlgebroidFileError, match="missing key 'rank'"):
        data = to_data(sl2_split())
        del data["rank"]
        parse_algebroid(json.dumps(data))
    with pytest.raises(AlgebroidFileError, match="expected 3 entries"):
        parse_algebroid(_mutate(sl2_split(), anchor=[[], []]))
    with pytest.raises(AlgebroidFileError, match="unknown key"):
        parse_algebroid(_mutate(sl2_split(), extra=1))
    with pytest.raises(AlgebroidFileError, match="rational"):
        parse_algebroid(_mutate(sl2_split(), metric=[[2, 0, 0], [0, 0, 1], [0, 1, 0]]))


def test_invalid_json_reports_line():
    with pytest.raises(AlgebroidFileError, match="line 3"):
        parse_algebroid('{\n  "name": "x",\n  "rank": ,\n}')


def test_wrong_kernel_frame_rejected():
    E = exact_fixtures()["exact(1, 0)"]
    with pytest.raises(AlgebroidFileError, match="nonzero anchor"):
        parse_algebroid(_mutate(E, kernel_frame=[["1", "0"]]))


# -- CLI ----------------------------------------------------------------------------------


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, alg in (("sl2", sl2_split()), ("aff1", aff1_loday())):
        p = tmp_path / f"{name}.json"
        p.write_text(serialize(alg))
        paths[name] = str(p)
    return paths


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cohomology_both_sl2(files, capsys):
    code, out, _ = cli(capsys, "cohomology", files["sl2"], "--theory", "both", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["results"]["naive_dims"] == [1, 0, 0, 1]
    assert rep["results"]["standard_dims"] == [1, 0, 0, 1]
    assert rep["results"]["phi_verdict"] == "φ isomorphism"
    assert rep["verdicts"]["phi"] == "pass"


def test_modular_on_constructed_double(tmp_path, capsys):
    out_file = tmp_path / "double.json"
    code, _, _ = cli(capsys, "construct", "double", "--g", "aff1", "--dual", "abelian", "-o", str(out_file))
    assert code == 0
    code, out, _ = cli(capsys, "modular", str(out_file), "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["results"]["modular_class"] == "zero"


def test_modular_aff1_nonzero(files, capsys):
    code, out, _ = cli(capsys, "modular", files["aff1"], "--format", "json")
    rep = json.loads(out)
    assert rep["results"]["modular_class"] == "nonzero"
    assert rep["results"]["representative"] == "e1"


def test_check_aff1(files, capsys):
    code, out, _ = cli(capsys, "check", files["aff1"], "--format", "json")
    rep = json.loads(out)
    assert code == 1
    assert rep["verdicts"]["loday"] == "pass"
    assert rep["verdicts"]["courant"] == "fail"
    assert rep["verdicts"]["lie:7"] == "skipped"
    w = rep["witnesses"][0]
    assert w["inputs"] == {"e": "e1", "e1": "e2", "e2": "e2"}
    assert w["defect"] == "2"


def test_check_sl2_passes(files, capsys):
    code, out, _ = cli(capsys, "check", files["sl2"])
    assert code == 0 and "fail" not in out


def test_construct_exact_and_check(tmp_path, capsys):
    p = tmp_path / "e.json"
    code, _, _ = cli(capsys, "construct", "exact", "--m", "3", "--phi", "1,2,3=x + y", "-o", str(p))
    assert code == 0
    alg = parse_algebroid(p.read_text())
    assert alg.n == 6 and alg.kernel_frame is not None
    code, out, _ = cli(capsys, "cohomology", str(p), "--format", "json")
    assert json.loads(out)["results"]["naive_dims"] == [1, 0, 0, 0]


def test_construct_to_stdout(capsys):
    code, out, err = cli(capsys, "construct", "catalog", "sl2_split")
    assert code == 0
    assert parse_algebroid(out) == sl2_split()
    assert "construct" in err


def test_construct_bialgebra_file(tmp_path, capsys):
    b = {"rank": 2, "bracket": [[[0, 0], [0, 1]], [[0, -1], [0, 0]]], "cobracket": [[[0, 0], [1, 1]], [[-1, -1], [0, 0]]]}
    src = tmp_path / "b.json"
    src.write_text(json.dumps(b))
    out_file = tmp_path / "d.json"
    code, out, _ = cli(capsys, "construct", "double", "--bialgebra", str(src), "-o", str(out_file))
    assert code == 0
    code, _, _ = cli(capsys, "check", str(out_file))
    assert code == 0


def test_construct_rejects_non_bialgebra(tmp_path, capsys):
    gamma = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    gamma[0][1][0], gamma[1][0][0] = 1, -1
    c = [[[str(v) for v in vec] for vec in row] for row in LieBialgebraData.sl2_standard().c]
    src = tmp_path / "bad.json"
    src.write_text(json.dumps({"rank": 3, "bracket": c, "cobracket": gamma}))
    code, out, _ = cli(capsys, "construct", "double", "--bialgebra", str(src), "-o", str(tmp_path / "x.json"))
    assert code == 2 and "not a Lie bialgebra" in out


def test_compare(files, capsys):
    code, out, _ = cli(capsys, "compare", files["sl2"])
    assert code == 0 and "φ isomorphism" in out


def test_error_exit_status(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(_mutate(aff1_loday(), metric=[["1", "0"], ["0", "0"]]))
    code, out, _ = cli(capsys, "check", str(bad))
    assert code == 2 and "singular" in out
    code, out, _ = cli(capsys, "cohomology", str(tmp_path / "missing.json"))
    assert code == 2
    E = tmp_path / "e.json"
    E.write_text(serialize(exact_fixtures()["exact(1, 0)"]))
    code, out, _ = cli(capsys, "cohomology", str(E), "--theory", "standard")
    assert code == 2 and "UnsupportedOperation" in out


@pytest.mark.parametrize("argv", [
    ["check", "{aff1}", "--seed", "5", "--trials", "8"],
    ["modular", "{aff1}"],
    ["cohomology", "{sl2}", "--theory", "both"],
    ["probe-redundancy", "--trials", "15", "--seed", "2"],
])
@pytest.mark.parametrize("fmt", ["text", "json"])
def test_reports_byte_deterministic(files, capsys, argv, fmt):
    argv = [a.format(**files) for a in argv] + ["--format", fmt]
    _, first, _ = cli(capsys, *argv)
    _, second, _ = cli(capsys, *argv)
    assert first == second


def test_text_numbers_appear_in_json(files, capsys):
    _, text, _ = cli(capsys, "check", files["aff1"], "--trials", "4")
    _, js, _ = cli(capsys, "check", files["aff1"], "--trials", "4", "--format", "json")
    for num in set(re.findall(r"-?\d+(?:/\d+)?", text)):
        assert num in js


def test_probe_report(capsys):
    code, out, _ = cli(capsys, "probe-redundancy", "--trials", "20", "--seed", "1", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == 1
    r = rep["results"]
    assert r["sampled"] == 20 and r["satisfying_A_D_E"] <= r["sampled"]
    assert r["violating_C"] == 0  # frame tables make the anchor rule automatic


def test_run_api(files):
    args = build_parser().parse_args(["compare", files["sl2"]])
    rep = run("compare", args)
    assert rep.exit_code == 0 and rep.results["naive_dims"] == [1, 0, 0, 1]
    assert rep.input_digest.startswith("sha256:")
