import json
import subprocess
import sys
from importlib import resources

import pytest

from statrel.cli import main
from statrel.demos import U_PARTITION, V_PARTITION
from statrel.model import Experiment, InferenceBase


def _fixture(name):
    return str(resources.files("statrel").joinpath("fixtures", f"{name}.json"))


@pytest.fixture
def universe(tmp_path):
    d = tmp_path / "universe"
    d.mkdir()
    for i, name in enumerate(["table1", "table2", "table3"], 1):
        (d / f"i{i}.json").write_text(open(_fixture(name)).read())
    return d


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- relate --------------------------------------------------------------------

@pytest.mark.parametrize("kind,a,b,code", [
    ("C", "table1", "table2", 0),
    ("C", "table1", "table3", 0),
    ("C", "table2", "table3", 1),
    ("L", "table2", "table3", 0),
    ("S", "table2", "table3", 1),
    ("G", "table2", "table3", 1),
    ("C-durbin", "table1", "table2", 0),
    ("L", "theorem8_bernoulli", "theorem8_geometric", 0),
    ("C", "theorem8_bernoulli", "theorem8_geometric", 1),
])
def test_relate_exit_codes(kind, a, b, code, capsys):
    got, out, _ = run(["relate", kind, _fixture(a), _fixture(b)], capsys)
    assert got == code
    assert out.startswith("related" if code == 0 else "not related")


def test_relate_prints_witness(capsys):
    _, out, _ = run(["relate", "L", _fixture("table2"), _fixture("table3")], capsys)
    witness = json.loads(out.split("\n", 1)[1])
    assert witness == {"kind": "L", "c": "3/2"}


def test_relate_parameter_mismatch_reason(capsys):
    code, out, _ = run(["relate", "L", _fixture("table2"), _fixture("theorem8_bernoulli")], capsys)
    assert code == 1 and "ParameterMismatch" in out


def test_relate_missing_file(tmp_path, capsys):
    code, _, err = run(["relate", "L", str(tmp_path / "nope.json"), _fixture("table2")], capsys)
    assert code == 2 and err.startswith("error:")


def test_relate_invalid_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["relate", "L", str(bad), _fixture("table2")], capsys)[0] == 2


def test_relate_invalid_base(tmp_path, capsys):
    raw = json.loads(open(_fixture("table2")).read())
    raw["densities"][0][0] = "2/3"
    bad = tmp_path / "rowsum.json"
    bad.write_text(json.dumps(raw))
    code, _, err = run(["relate", "L", str(bad), _fixture("table2")], capsys)
    assert code == 2 and "RowSumError" in err


# -- prove and verify ------------------------------------------------------------

@pytest.mark.parametrize("method,kinds", [("efm", "C C C C"), ("birnbaum", "C S C")])
def test_prove_then_verify(method, kinds, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(["prove", method, _fixture("table2"), _fixture("table3"),
                        "-o", str(cert)], capsys)
    assert code == 0 and kinds in out
    code, out, _ = run(["verify", str(cert)], capsys)
    assert code == 0 and out.startswith("OK")


def test_prove_to_stdout(capsys):
    code, out, err = run(["prove", "efm", _fixture("table2"), _fixture("table3")], capsys)
    assert code == 0 and len(json.loads(out)["links"]) == 4 and "4 links" in err


def test_prove_unrelated(capsys):
    code, _, err = run(["prove", "efm", _fixture("table2"), _fixture("theorem8_bernoulli")],
                    capsys)
    assert code == 1 and "cannot prove" in err


def test_verify_corrupted_certificate(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(["prove", "efm", _fixture("table2"), _fixture("table3"), "-o", str(cert)], capsys)
    data = json.loads(cert.read_text())
    data["links"][1]["witness"]["ancillary"] = [[z] for cell in data["links"][1]["witness"][
        "ancillary"] for z in cell]
    cert.write_text(json.dumps(data))
    code, out, _ = run(["verify", str(cert)], capsys)
    assert code == 1 and out.startswith("FAIL link 1")


def test_verify_invalid_json(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    cert.write_text("[")
    assert run(["verify", str(cert)], capsys)[0] == 2


# -- demo, msuf, ancillaries, condition ----------------------------------------------

def test_demo_all(capsys):
    code, out, _ = run(["demo", "all"], capsys)
    assert code == 0 and "FAIL" not in out


def test_demo_unknown():
    with pytest.raises(SystemExit) as exc:
        main(["demo", "nope"])
    assert exc.value.code == 2


def test_msuf(capsys):
    code, out, _ = run(["msuf", _fixture("table2")], capsys)
    assert code == 0
    assert json.loads(out) == [["(1,1)"], ["(1,2)"], ["(2,1)", "(2,2)"]]


def test_ancillaries(capsys):
    code, out, _ = run(["ancillaries", _fixture("table1")], capsys)
    parts = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(parts) == 3
    assert U_PARTITION.to_json() in parts and V_PARTITION.to_json() in parts


def test_maximal_ancillaries(capsys):
    _, out, _ = run(["ancillaries", "--maximal", _fixture("table1")], capsys)
    assert sorted(json.loads(l) for l in out.splitlines()) == sorted(
        [U_PARTITION.to_json(), V_PARTITION.to_json()])


def test_ancillaries_too_large(capsys):
    code, _, err = run(["ancillaries", "--max-points", "3", _fixture("table1")], capsys)
    assert code == 2 and "error" in err


def test_condition(tmp_path, capsys):
    part = tmp_path / "u.json"
    part.write_text(json.dumps(U_PARTITION.to_json()))
    code, out, _ = run(["condition", _fixture("table1"), "--partition", str(part)], capsys)
    got = InferenceBase.from_dict(json.loads(out))
    assert code == 0 and got.experiment.row("2") == (1 / 4, 3 / 4)


def test_condition_not_ancillary(tmp_path, capsys):
    part = tmp_path / "d.json"
    part.write_text(json.dumps([["(1,1)", "(2,2)"], ["(1,2)", "(2,1)"]]))
    code, _, err = run(["condition", _fixture("table1"), "--partition", str(part)], capsys)
    assert code == 2 and "NotAncillary" in err


# -- closure -----------------------------------------------------------------------

def test_closure_one_class(universe, capsys):
    code, out, _ = run(["closure", "--universe", str(universe), "--kinds", "C"], capsys)
    assert code == 0
    assert "class: i1.json i2.json i3.json" in out
    assert out.count("edge C:") == 2


def test_closure_chain(universe, tmp_path, capsys):
    cert = tmp_path / "chain.json"
    code, out, _ = run(["closure", "--universe", str(universe), "--kinds", "C",
                        "--chain", "i2.json", "i3.json", "-o", str(cert)], capsys)
    assert code == 0 and "chain: 2 links C C" in out
    assert run(["verify", str(cert)], capsys)[0] == 0


def test_closure_no_chain(universe, capsys):
    code, out, _ = run(["closure", "--universe", str(universe), "--kinds", "G",
                        "--chain", "i2.json", "i3.json"], capsys)
    assert code == 1 and "no chain" in out


def test_closure_empty_dir(tmp_path, capsys):
    assert run(["closure", "--universe", str(tmp_path)], capsys)[0] == 2


def test_closure_bad_kind(universe, capsys):
    assert run(["closure", "--universe", str(universe), "--kinds", "Q"], capsys)[0] == 2


# -- search-maximal ------------------------------------------------------------------

def test_search_limit_zero(capsys):
    code, out, _ = run(["search-maximal", "--limit", "0"], capsys)
    assert code == 0 and out == ""


def test_search_single_parameter_is_empty(capsys):
    # with one parameter the discrete partition is the unique maximal ancillary
    code, out, _ = run(["search-maximal", "--x-size", "3", "--theta-size", "1",
                        "--denominator", "6"], capsys)
    assert code == 0 and out == ""


def test_search_deterministic(capsys):
    argv = ["search-maximal", "--x-size", "4", "--theta-size", "2", "--denominator", "6",
            "--limit", "3"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second and len(first.splitlines()) == 3
    for line in first.splitlines():
        Experiment.from_dict(json.loads(line))


def test_search_bounds(capsys):
    code, _, err = run(["search-maximal", "--x-size", "9"], capsys)
    assert code == 2 and "error" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "statrel", "relate", "L",
                           _fixture("table2"), _fixture("table3")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("related under L")
