import csv
import io
import json
import subprocess
import sys

import pytest

from multicss import __version__
from multicss.analytics import build_case, predict
from multicss.cli import main
from multicss.codes import emit_alist, parse_mtx, repetition_code


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def header_ok(doc, seed=0):
    return doc["tool_version"] == __version__ and doc["seed"] == seed and doc["command_line"].startswith("multicss ")


def test_build_case_a_mtx(tmp_path):
    code, out, _ = run("build", "--d", "3", "--case", "A", "--rep", "2,2,2", "--format", "mtx", "--out", str(tmp_path))
    assert code == 0
    hx = parse_mtx((tmp_path / "hx.mtx").read_text())
    hz = parse_mtx((tmp_path / "hz.mtx").read_text())
    assert hx.cols == hz.cols == 24
    ref = build_case("A", (2, 2, 2))
    assert hx == ref.hx and hz == ref.hz
    layout = json.loads((tmp_path / "layout.json").read_text())
    assert header_ok(layout)
    assert layout["layout"]["qubits"]["BBC"] == [0, 8]


def test_build_toric_alist_inline():
    code, out, _ = run("build", "--d", "2", "--seed-blocks", "BC", "--flips", "1", "--rep", "3,3", "--format", "alist")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 18 and doc["hx_shape"] == [9, 18]
    assert doc["hx"].splitlines()[0] == "18 9"


def test_build_even_seed_is_a_legality_error():
    code, out, err = run("build", "--d", "2", "--seed-blocks", "BB", "--flips", "1", "--rep", "3,3")
    assert code == 3 and out == ""
    assert "even number" in err


def test_build_no_x_checks_reports_legality():
    code, _, err = run("build", "--d", "3", "--seed-blocks", "BBB,BCC,CBC,CCB", "--flips", "1", "--rep", "2,2,2")
    assert code == 3 and "no X-check" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--case", "A"],
        ["build", "--case", "A", "--rep", "2,2"],
        ["build", "--d", "3", "--rep", "2,2,2"],
        ["build", "--case", "A", "--rep", "2,x,2"],
        ["metrics", "--case", "A", "--rep", "2,2,2", "--trials", "0"],
        ["lattice", "--case", "A", "--rep", "2,2"],
        ["scan", "--n", "24", "--cases", "Q"],
        ["classify", "--d", "9"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_two(argv):
    assert run(*argv)[0] == 2


def test_alist_inputs(tmp_path):
    paths = []
    for i, L in enumerate((2, 3, 2)):
        p = tmp_path / f"c{i}.alist"
        p.write_text(emit_alist(repetition_code(L)))
        paths += ["--alist", str(p)]
    code, out, _ = run("metrics", "--case", "B", *paths, "--trials", "100")
    assert code == 0
    m = json.loads(out)["metrics"]
    p = predict("B", (2, 3, 2))
    assert (m["n"], m["k"], m["d"], m["d_kind"]) == (p.n, p.k, p.d, "exact") == (48, 4, 2, "exact")


def test_bad_alist_is_usage_error(tmp_path):
    p = tmp_path / "bad.alist"
    p.write_text("3 3\n2 2\n")
    code, _, err = run("metrics", "--d", "2", "--seed-blocks", "BC", "--flips", "1", "--alist", str(p), "--alist", str(p))
    assert code == 2 and "line 3" in err


def test_metrics_json_and_csv():
    code, out, _ = run("metrics", "--case", "D", "--rep", "3,3,4", "--trials", "300", "--seed", "1")
    assert code == 0
    doc = json.loads(out)
    assert header_ok(doc, seed=1)
    assert {k: doc["metrics"][k] for k in ("n", "k", "d")} == {"n": 144, "k": 36, "d": 4}
    code, out, _ = run("metrics", "--case", "D", "--rep", "3,3,4", "--trials", "300", "--seed", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows == [{"n": "144", "k": "36", "d": "4", "d_kind": "exact", "d_x": str(doc["metrics"]["d_x"]), "d_z": str(doc["metrics"]["d_z"])}]


def test_metrics_exact_budget_exit_four():
    code, _, err = run("metrics", "--case", "A", "--rep", "3,3,3", "--exact", "--budget", "100")
    assert code == 4 and "budget" in err


def test_metrics_from_matrix_files(tmp_path):
    run("build", "--case", "C", "--rep", "2,2,2", "--format", "mtx", "--out", str(tmp_path))
    code, out, _ = run("metrics", "--hx", str(tmp_path / "hx.mtx"), "--hz", str(tmp_path / "hz.mtx"), "--exact")
    assert code == 0
    m = json.loads(out)["metrics"]
    assert (m["n"], m["k"], m["d"]) == (32, 10, 2)
    assert run("metrics", "--hx", str(tmp_path / "hx.mtx"))[0] == 2


def test_validate_pass_and_fail(tmp_path):
    code, out, _ = run("validate", "--case", "B", "--rep", "2,3,4")
    assert code == 0 and json.loads(out)["result"] == "pass"
    (tmp_path / "hx.mtx").write_text("%%MatrixMarket matrix coordinate pattern general\n1 2 1\n1 1\n")
    code, out, _ = run("validate", "--hx", str(tmp_path / "hx.mtx"), "--hz", str(tmp_path / "hx.mtx"))
    doc = json.loads(out)
    assert code == 1 and doc["result"] == "fail" and doc["violation"] == {"x_row": 0, "z_row": 0}


def test_classify_three():
    code, out, _ = run("classify", "--d", "3")
    doc = json.loads(out)
    assert code == 0 and header_ok(doc)
    assert [c["count"] for c in doc["classes"]] == [4, 3, 4, 3]


def test_lattice_document():
    code, out, _ = run("lattice", "--case", "B", "--rep", "2,2,2")
    doc = json.loads(out)
    assert code == 0 and header_ok(doc)
    assert len(doc["qubits"]) == 32 and doc["coordinate_unit"] == "half lattice spacing"


def test_scan_small_csv(tmp_path):
    code, _, _ = run("scan", "--n", "48", "--cases", "B,D", "--trials", "200", "--format", "csv", "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "scan.csv", newline="")))
    assert list(rows[0]) == ["case", "L", "n", "k", "d", "d_kind"]
    assert {r["case"] for r in rows} == {"B", "D"} and all(r["n"] == "48" for r in rows)
    hit = [r for r in rows if r["case"] == "D" and r["L"] == "2 2 3"]
    assert hit and hit[0]["k"] == "8"


def test_scan_144_contains_largest_k():
    code, out, _ = run("scan", "--n", "144", "--cases", "B,D", "--trials", "2000", "--seed", "1")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert any(r["case"] == "D" and r["L"] == [3, 3, 4] and r["k"] == 36 for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ["metrics", "--case", "B", "--rep", "2,6,6", "--trials", "400", "--seed", "9"],
        ["scan", "--n", "36", "--trials", "150", "--seed", "2", "--format", "csv"],
        ["classify", "--d", "4"],
        ["lattice", "--case", "D", "--rep", "2,3,2"],
        ["build", "--case", "C", "--rep", "2,3,2", "--format", "alist"],
    ],
)
def test_byte_identical_reruns(argv):
    a, b = run(*argv), run(*argv)
    assert a[0] == 0 and a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "multicss", "classify", "--d", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["classes"][0]["count"] == 1
