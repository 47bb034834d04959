import csv
import io
import json
import subprocess
import sys

import pytest

from pencilpairs.cli import run
from pencilpairs.varieties import default_catalog, dump_catalog


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def as_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_catalog_verify_passes():
    code, out, _ = call("catalog", "verify")
    assert code == 0
    assert out.count("not checkable") == 11
    assert out.count(" ok ") == 9


def test_catalog_verify_fails_on_bad_data(tmp_path):
    data = json.loads(dump_catalog(default_catalog()))
    next(e for e in data if e["id"] == "2-6")["euler"] = -11
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data), encoding="utf-8")
    code, out, _ = call("catalog", "verify", "--catalog", str(p))
    assert code == 1
    assert "MISMATCH" in out


def test_catalog_list_csv():
    code, out, _ = call("catalog", "list", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 20
    assert rows[0]["id"] == "1-5"


def test_pairs_report_json():
    doc = as_json("pairs", "report", "--group", "2,48", "--k", "1")
    assert doc["kind"] == "records"
    assert [(r[0], r[2]) for r in doc["rows"]] == [("2-32", 90), ("3-27", 88)]


def test_pairs_report_records_and_surfaces():
    doc = as_json("pairs", "report", "--group", "1,10", "--k", "2", "--records")
    assert doc["rows"][0][3:6] == [312, 310, 2]
    doc = as_json("pairs", "report", "--pair", "cp2:d=2", "--pair", "p1xp1:2,1")
    assert doc["rows"][0][3:5] == [3, 4]


def test_g10_table_shape():
    code, out, _ = call("pairs", "report", "--group", "1,18")
    lines = out.splitlines()
    assert code == 0
    assert lines[1].split() == ["id", "chi", "crit(k=1)"]
    assert len(lines) == 3 + 5


def test_groups():
    doc = as_json("pairs", "groups")
    assert [r[3] for r in doc["rows"]] == [
        "1-5 2-4", "1-6 2-5 2-6 3-1", "1-7 2-7 2-8 3-2", "1-8 2-9 2-10",
        "1-9 2-11 3-3 3-4 8-1", "2-32 3-27",
    ]


def test_search_dim2_bounds():
    doc = as_json("pairs", "search-dim2", "--bounds", "cp2_max_d=2,p1xp1_max=2,ruled_max_d=4")
    pairs = {(r[0], r[1]) for r in doc["rows"]}
    assert ("cp2:d=2", "p1xp1:2,1") in pairs


def test_dp6_and_cable():
    assert [r[2] for r in as_json("pairs", "dp6", "--k", "1")["rows"]] == [6, 4]
    doc = as_json("cable", "--group", "2,48", "--max-k", "3")
    assert doc["columns"] == ["k", "2-32", "3-27"]
    assert doc["rows"][0] == [1, 90, 88]
    doc = as_json("cable", "--pair", "cp2:d=2", "--pair", "ruled:chi=2,d=4,k=1", "--max-k", "2")
    assert doc["rows"] == [[1, 3, 4, -1], [2, 27, 28, -1]]


def test_twists_paths_agree():
    by_entry = dict(map(tuple, as_json("twists", "--entry", "3-3", "--k", "2")["rows"]))
    by_model = dict(map(tuple, as_json(
        "twists", "--ambient", "1,1,2", "--divisor", "1,1,2", "--bundle", "1,1,1", "--k", "2"
    )["rows"]))
    assert by_entry["crit"] == by_entry["crit_closed_form"] == by_model["crit"]
    surf = dict(map(tuple, as_json("twists", "--surface", "cp2:d=2")["rows"]))
    assert (surf["crit"], surf["punctures"], surf["fiber_genus"]) == (3, 4, 0)
    no_model = dict(map(tuple, as_json("twists", "--entry", "1-9")["rows"]))
    assert no_model["crit"] == 66


def test_fillings_and_discrepancies():
    doc = as_json("fillings", "--n", "2")
    assert doc["rows"] == [["i=1", 8], ["CP2", 7]]
    doc = as_json("discrepancies")
    assert len(doc["rows"]) == 5


def test_mcg_commands(a2_path):
    rep = dict(map(tuple, as_json("mcg", "eval", "--config", str(a2_path), "--word", "e1 e2 e1")["rows"]))
    assert (rep["p"], rep["det"]) == (3, -1)
    assert rep["matrix"] == [[0, -1], [-1, 0]]
    rep = dict(map(tuple, as_json(
        "mcg", "move", "--config", str(a2_path), "--word", "e1 e2", "--move", "slide:0"
    )["rows"]))
    assert rep["word_after"] == "e1.e2 e1" and rep["tau_preserved"] and rep["p_preserved"]
    rep = dict(map(tuple, as_json("mcg", "parity", "--config", str(a2_path), "--word", "e1 e2")["rows"]))
    assert rep["verdict"] == "consistent"
    code, _, err = call("mcg", "move", "--config", str(a2_path), "--word", "e1 e2", "--move", "commute:0")
    assert code == 1 and "commute requires disjoint" in err


def test_ring_integrate():
    rep = dict(map(tuple, as_json("ring", "integrate", "--ambient", "1,1,2",
                                  "--expr", "(w1+w2+w3)^3*(w1+w2+2*w3)")["rows"]))
    assert rep["integral"] == 18
    code, _, err = call("ring", "integrate", "--ambient", "2", "--expr", "w1 +")
    assert code == 1 and "position 4" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["catalog"],
        ["pairs", "report", "--group", "2"],
        ["pairs", "report", "--group", "a,b"],
        ["pairs", "report"],
        ["pairs", "search-dim2", "--bounds", "nope=3"],
        ["fillings", "--format", "xml"],
        ["fillings", "--n", "two"],
        ["cable", "--max-k", "0", "--group", "2,48"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize(
    "argv",
    [
        ["catalog", "verify", "--catalog", "/nonexistent/catalog.json"],
        ["mcg", "eval", "--config", "/nonexistent.json", "--word", "e1"],
        ["pairs", "report", "--group", "5,5"],
        ["twists", "--entry", "9-9"],
        ["fillings", "--n", "1"],
    ],
)
def test_runtime_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_parity_not_applicable_for_odd_n(tmp_path):
    p = tmp_path / "odd.json"
    p.write_text(json.dumps({
        "n": 3, "gram": [[0, 1], [-1, 0]],
        "spheres": [{"id": "e1", "v": [1, 0]}],
    }), encoding="utf-8")
    code, _, err = call("mcg", "parity", "--config", str(p), "--word", "e1")
    assert code == 1 and "not applicable" in err


def test_output_is_deterministic_and_format_independent():
    argv = ["cable", "--group", "1,18", "--max-k", "4"]
    for fmt in ("table", "csv", "json"):
        assert call(*argv, "--format", fmt) == call(*argv, "--format", fmt)
    table = call(*argv, "--format", "json")[1]
    csv_rows = list(csv.reader(io.StringIO(call(*argv, "--format", "csv")[1])))[1:]
    assert [[int(x) for x in r] for r in csv_rows] == json.loads(table)["rows"]


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "pencilpairs", "fillings", "--n", "2", "--format", "csv"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert res.stdout == "filling,euler\ni=1,8\nCP2,7\n"
