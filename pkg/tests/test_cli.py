import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from templie.cli import main, parse_betas

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report_schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json", "--no-timestamp")
    docs = [json.loads(line) for line in out.splitlines() if line.strip()] \
        if argv[0] == "spectrum" else [json.loads(out)]
    for d in docs:
        jsonschema.validate(d, SCHEMA)
    return code, docs


def test_basis_links_six_zero(capsys):
    code, (doc,) = run_json(capsys, "basis", "--links", "6", "0")
    assert code == 0
    assert [r[3] for r in doc["result"]["rows"]] == ["21/32", "11/16", "25/32", "13/16", "7/8"]


def test_basis_spins(capsys):
    code, (doc,) = run_json(capsys, "basis", "--spins", "5", "-0.5")
    assert code == 0
    assert [r[1] for r in doc["result"]["rows"]][:3] == ["++---", "+-+--", "+--+-"]
    assert len(doc["result"]["rows"]) == 10


def test_negative_fraction_argument(capsys):
    code, (doc,) = run_json(capsys, "basis", "--spins", "5", "-1/2")
    assert code == 0 and len(doc["result"]["rows"]) == 10


def test_basis_trivial(capsys):
    code, (doc,) = run_json(capsys, "basis", "--links", "2", "2")
    assert code == 0 and len(doc["result"]["rows"]) == 1


@pytest.mark.parametrize("argv", [
    ["basis", "--links", "6", "1"],
    ["basis", "--spins", "4", "1/2"],
    ["matrix", "loop", "5", "2"],
    ["matrix", "loop", "4"],
    ["matrix", "xxz", "3"],
    ["decompose", "5", "0", "3"],
    ["spectrum", "reality"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_argparse_usage_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["matrix", "nope", "3"])
    assert exc.value.code == 2


def test_cap_exit(capsys, monkeypatch):
    assert run(capsys, "matrix", "loop", "13", "1")[0] == 3
    assert run(capsys, "verify", "intertwine", "--n-max", "11")[0] == 3
    monkeypatch.setenv("TEMPLIE_MAX_N", "4")
    assert run(capsys, "basis", "--links", "5", "1")[0] == 3
    monkeypatch.setenv("TEMPLIE_MAX_N", "13")
    assert run(capsys, "basis", "--links", "13", "1")[0] == 0


def test_matrix_s_six_zero(capsys):
    code, (doc,) = run_json(capsys, "matrix", "S", "6", "0")
    assert code == 0
    e = doc["result"]["entries"]
    assert e[4][4] == ["4", "0", "1"]
    assert e[3][4] == ["0", "-1"]
    assert e[0][1] == []
    assert doc["result"]["rows"][0] == "[[1, 2], [3, 4], [5, 6]]"


def test_matrix_f_six_zero(capsys):
    code, (doc,) = run_json(capsys, "matrix", "f", "6", "0")
    e = doc["result"]["entries"]
    assert len(e) == 10 and len(e[0]) == 5
    assert e[3][4] == ["0", "-1"]
    assert doc["result"]["rows"][3] == "+---+"


def test_matrix_loop_two_zero(capsys):
    code, (doc,) = run_json(capsys, "matrix", "loop", "2", "0")
    assert doc["result"]["entries"] == [[["0", "-1"]]]


def test_matrix_evaluated_and_xxz(capsys):
    _, (doc,) = run_json(capsys, "matrix", "gram", "4", "0", "--beta", "1/2")
    assert doc["result"]["entries"] == [["1/4", "1/2"], ["1/2", "1/4"]]
    _, (doc,) = run_json(capsys, "matrix", "xxz", "2", "0", "--q", "i")
    assert doc["result"]["exact"] is False
    _, (doc,) = run_json(capsys, "matrix", "spin", "3")
    assert len(doc["result"]["entries"]) == 8


def test_csv_has_header(capsys):
    code, out, _ = run(capsys, "matrix", "S", "6", "0", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "row" and len(rows) == 6
    code, out, _ = run(capsys, "spectrum", "reality", "--loop", "4", "0", "--beta", "0,1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["params", "status", "result"] and len(rows) == 3


@pytest.mark.parametrize("argv", [
    ["verify", "intertwine", "--n-max", "9"],
    ["verify", "suf", "--p-max", "6", "--a-max", "6", "--b-max", "6"],
    ["verify", "pseudo", "--n", "6", "--d", "0"],
    ["verify", "inject", "--n-max", "8"],
    ["verify", "gp", "--n-max", "6"],
    ["verify", "gram-adjoint", "--n-max", "6"],
    ["verify", "special", "--p-max", "1"],
])
def test_verify_suites_pass(capsys, argv):
    code, (doc,) = run_json(capsys, *argv)
    assert code == 0
    assert doc["status"] == "pass"
    assert all(r["ok"] for r in doc["result"])


def test_parallel_matches_serial(capsys):
    serial = run(capsys, "verify", "all", "--n-max", "7", "--format", "json", "--no-timestamp")
    par = run(capsys, "verify", "all", "--n-max", "7", "--jobs", "3", "--format", "json",
              "--no-timestamp")
    assert serial[0] == par[0] == 0
    assert serial[1] == par[1]


def test_output_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["decompose", "20", "3", "5", "--format", "json", "--no-timestamp",
                     "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert "timestamp" not in json.loads(paths[0].read_text())


def test_timestamp_present_by_default(capsys):
    code, out, _ = run(capsys, "decompose", "6", "3", "generic", "--format", "json")
    assert "timestamp" in json.loads(out)


def test_spectrum_reality_range(capsys):
    code, docs = run_json(capsys, "spectrum", "reality", "--loop", "6", "0", "--beta", "-2.5:3:0.5")
    assert code == 0
    assert len(docs) == 12
    assert all(d["status"] == "pass" for d in docs)


def test_spectrum_inclusion(capsys):
    code, (doc,) = run_json(capsys, "spectrum", "inclusion", "--n", "4", "--beta", "1.7")
    assert code == 0
    assert doc["result"]["equal"] and doc["result"]["included"]


def test_spectrum_jordan(capsys):
    code, (doc,) = run_json(capsys, "spectrum", "jordan", "--xxz", "2", "--q", "i")
    assert code == 0
    assert doc["result"]["nontrivial"] == 1
    (blk,) = [b for b in doc["result"]["blocks"] if max(b["block_sizes"]) > 1]
    assert blk["block_sizes"][0] == 2 and blk["eigenvalue"] == ["0", "0"]


def test_spectrum_positivity_and_scan(capsys):
    code, (doc,) = run_json(capsys, "spectrum", "positivity", "--loop", "6", "0")
    assert code == 0
    code, (doc,) = run_json(capsys, "spectrum", "gram-scan", "--loop", "4", "0")
    assert doc["result"]["det"] == ["0", "0", "-1", "0", "1"]
    assert doc["result"]["largest_root"] == 1.0


def test_spectrum_failure_exit(capsys):
    # at beta = 1 the XXZ chain has Jordan blocks whose eigenvalues drift off the
    # real axis by ~1e-8 in floating point; a 1e-12 tolerance must report failure
    code, (doc,) = run_json(capsys, "spectrum", "reality", "--xxz", "6", "--beta", "1", "--tol", "1e-12")
    assert code == 1
    assert doc["status"] == "fail"


@pytest.mark.parametrize("argv,label", [
    (["decompose", "20", "3", "5"], "P_{20,10} + P_{20,12} + V_{20,14} + V_{20,16} + P_{20,20}"),
    (["decompose", "6", "3", "generic"], "I_{6,6}"),
    (["decompose", "6", "0", "2"], "P_{6,2} + P_{6,6}"),
])
def test_decompose(capsys, argv, label):
    code, (doc,) = run_json(capsys, *argv)
    assert code == 0
    assert doc["result"]["decomposition"] == label
    assert doc["result"]["audit"]["ok"]


def test_parse_betas():
    assert parse_betas("0:1:0.5") == [0.0, 0.5, 1.0]
    assert parse_betas("1,2:3:1") == [1.0, 2.0, 3.0]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "templie", "basis", "--links", "4", "0"],
                         capture_output=True, text=True, check=True)
    assert "(())" in res.stdout
