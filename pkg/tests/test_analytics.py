import math

import numpy as np
import pytest

from multicss.analytics import (
    CaseLabel,
    build_case,
    case_of,
    geometry_matrices,
    lattice_geometry,
    numeric_k,
    ordered_triples,
    predict,
    scan_fixed_n,
)
from multicss.construct import ConstructionSpec, classify, validate_css
from multicss.metrics import compute_k


def test_predict_examples():
    p = predict("A", (4, 5, 6))
    assert (p.n, p.k, p.d) == (360, 3, 4)
    p = predict("D", (3, 3, 12))
    assert (p.n, p.k, p.d) == (432, 100, 6)
    p = predict("C", (2, 3, 5))
    assert p.k is None and p.d == 2
    assert predict("B", (2, 6, 9)).d == 9
    assert predict("B", (3, 3, 4)).k == 12
    assert predict("D", (3, 3, 4)).k == 36


def test_predict_case_b_distance_uses_twice_lcm():
    # (2, 6, 9): lcm term 6, doubled 12; L1 L2 = 12; L3 = 9
    assert predict("B", (2, 6, 9)).d == min(2 * math.lcm(2, 6), 2 * 6, 9)
    assert predict("B", (3, 5, 40)).d == 15


def test_predict_case_c_beta():
    assert predict("C", (5, 6, 7)).d == 5
    assert predict("C", (6, 6, 7)).d == 4
    assert predict("C", (3, 3, 3)).d == 3


def test_predict_rejects_nonpositive():
    with pytest.raises(ValueError):
        predict("A", (0, 2, 2))


def test_case_label_specs_and_counts():
    assert CaseLabel.A.spec == ConstructionSpec(3, ("BBB",), (1,))
    assert CaseLabel.D.spec == ConstructionSpec(3, ("BBB", "CCB"), (1, 3))
    assert CaseLabel.A.qubit_count((2, 3, 4)) == 72
    assert CaseLabel.B.qubit_count((2, 3, 4)) == 96
    for case in CaseLabel:
        assert build_case(case, (2, 3, 4)).n == case.qubit_count((2, 3, 4))


def test_case_of_covers_every_three_code_spec():
    seen = {}
    for cls in classify(3):
        for orbit in cls.orbits:
            for spec in orbit:
                seen[spec] = case_of(spec)
    assert len(seen) == 28
    assert sorted(c.value for c in set(seen.values())) == ["A", "B", "C", "D"]
    with pytest.raises(ValueError):
        case_of(ConstructionSpec(3, ("BBB", "BCC", "CBC", "CCB"), (1,)))


@pytest.mark.parametrize("case", list(CaseLabel))
def test_numeric_k_matches_prediction_on_small_grid(case):
    for L in [(2, 2, 2), (2, 3, 4), (3, 3, 2), (1, 2, 3), (1, 1, 1)]:
        k = numeric_k(case, L)
        p = predict(case, L)
        if p.k is not None:
            assert k == p.k, (case, L)


def test_ordered_triples():
    assert ordered_triples(4) == [(1, 1, 4), (1, 2, 2), (1, 4, 1), (2, 1, 2), (2, 2, 1), (4, 1, 1)]
    assert len(ordered_triples(36)) == 36
    assert all(math.prod(t) == 108 for t in ordered_triples(108))


def test_scan_three_qubits():
    rows = scan_fixed_n(3, distance_trials=50, seed=0)
    assert len(rows) == 1
    r = rows[0]
    assert (r.case, r.lengths, r.n) == (CaseLabel.A, (1, 1, 1), 3)
    assert r.k == compute_k(build_case("A", (1, 1, 1)))


def test_scan_is_deterministic_and_ordered():
    a = [r.as_dict() for r in scan_fixed_n(24, ["D", "A"], distance_trials=100, seed=4)]
    b = [r.as_dict() for r in scan_fixed_n(24, ["A", "D"], distance_trials=100, seed=4)]
    assert a == b
    assert [r["case"] for r in a] == ["A"] * len(ordered_triples(8)) + ["D"] * len(ordered_triples(6))
    for r in a:
        if r["k"] == 0:
            assert r["d"] is None and r["d_kind"] == "undefined"


def test_scan_skips_cases_without_factorization():
    assert [r.case for r in scan_fixed_n(9, distance_trials=10)] == [CaseLabel.A] * len(ordered_triples(3))
    with pytest.raises(ValueError):
        scan_fixed_n(0)


# -- geometry ------------------------------------------------------------------------


def test_geometry_case_a_222():
    doc = lattice_geometry("A", (2, 2, 2))
    assert len(doc["qubits"]) == 24
    assert {q["kind"] for q in doc["qubits"]} == {"edge"}
    assert len(doc["z_checks"]) == 8 and {c["kind"] for c in doc["z_checks"]} == {"corner"}
    assert len(doc["x_checks"]) == 24 and {c["kind"] for c in doc["x_checks"]} == {"plaquette"}
    assert {len(c["support"]) for c in doc["z_checks"]} == {6}
    assert {len(c["support"]) for c in doc["x_checks"]} == {4}


def test_geometry_case_b_has_body_centers():
    doc = lattice_geometry("B", (2, 2, 2))
    assert len(doc["qubits"]) == 32
    assert sum(q["kind"] == "body" for q in doc["qubits"]) == 8


def test_geometry_coordinates():
    doc = lattice_geometry("C", (2, 3, 4))
    assert doc["torus"] == [4, 6, 8]
    for q in doc["qubits"]:
        parity = ["C" if c % 2 else "B" for c in q["coord"]]
        assert "".join(parity) == q["block"]
    assert sorted(q["index"] for q in doc["qubits"]) == list(range(len(doc["qubits"])))


@pytest.mark.parametrize("case", list(CaseLabel))
@pytest.mark.parametrize("L", [(2, 2, 2), (2, 3, 4), (1, 3, 2), (3, 1, 1)])
def test_geometry_matches_check_matrices(case, L):
    code = build_case(case, L)
    hx, hz = geometry_matrices(lattice_geometry(case, L))
    assert np.array_equal(hx, code.hx.to_dense())
    assert np.array_equal(hz, code.hz.to_dense())
    assert validate_css(code)
