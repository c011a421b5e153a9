"""Three repetition codes: closed forms, fixed-n scans and lattice geometry.

The four inequivalent three-code constructions are exposed as
:class:`CaseLabel`.  Their canonical specs seed Z checks on the cube
corners (``BBB``) and, for B and D, also on the plaquettes spanning
directions 1 and 2 (``CCB``), so the third direction is the distinguished
one.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from multicss.codes import repetition_code
from multicss.construct import ConstructionSpec, CssCode, assemble, classify, derive_roles, label_distance
from multicss.metrics import DEFAULT_BUDGET, code_metrics, compute_k


class CaseLabel(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def spec(self) -> ConstructionSpec:
        seed = ("BBB",) if self in (CaseLabel.A, CaseLabel.C) else ("BBB", "CCB")
        flips = (1,) if self in (CaseLabel.A, CaseLabel.B) else (1, 3)
        return ConstructionSpec(3, seed, flips)

    def qubit_count(self, lengths: tuple[int, int, int]) -> int:
        return (3 if self is CaseLabel.A else 4) * math.prod(lengths)


_CLASS_TO_CASE = {
    (1, (1,)): CaseLabel.A,
    (2, (1,)): CaseLabel.B,
    (1, (1, 3)): CaseLabel.C,
    (2, (1, 3)): CaseLabel.D,
}


@lru_cache(maxsize=None)
def _three_code_classes():
    return tuple(classify(3))


def case_of(spec: ConstructionSpec) -> CaseLabel:
    """Case of an arbitrary three-code spec, found through the classification."""
    for cls in _three_code_classes():
        if spec in cls:
            return _CLASS_TO_CASE[(cls.seed_size, cls.flip_counts)]
    raise ValueError(f"{spec} is not a legal three-code construction")


def build_case(case: CaseLabel | str, lengths: Iterable[int]) -> CssCode:
    case = CaseLabel(case)
    return assemble(case.spec, [repetition_code(L) for L in lengths])


# -- closed forms ----------------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    n: int
    k: int | None
    d: int


def _pairwise_coprime(lengths) -> bool:
    return all(math.gcd(a, b) == 1 for a, b in itertools.combinations(lengths, 2))


def predict(case: CaseLabel | str, lengths: tuple[int, int, int]) -> Prediction:
    """Tabulated k and d for repetition-code inputs; case C has no k formula."""
    case = CaseLabel(case)
    l1, l2, l3 = lengths
    if min(lengths) < 1:
        raise ValueError(f"lengths must be positive, got {lengths}")
    n = case.qubit_count(lengths)
    layered_d = min(2 * math.lcm(l1, l2), l1 * l2, l3)
    if case is CaseLabel.A:
        return Prediction(n, 3, min(lengths))
    if case is CaseLabel.B:
        return Prediction(n, 4 * math.gcd(l1, l2), layered_d)
    if case is CaseLabel.C:
        beta = 5 if _pairwise_coprime(lengths) else 4
        return Prediction(n, None, min(l1, l2, l3, beta))
    alpha = 8 if l1 % 3 == 0 and l2 % 3 == 0 else 0
    return Prediction(n, 4 * math.gcd(l1, l2) + alpha * (l3 - 1), layered_d)


# -- fixed-n scan ------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    case: CaseLabel
    lengths: tuple[int, int, int]
    n: int
    k: int
    d: int | None
    d_kind: str

    def as_dict(self) -> dict:
        return {
            "case": self.case.value,
            "L": list(self.lengths),
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "d_kind": self.d_kind,
        }


def ordered_triples(product: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(1, product + 1):
        if product % a:
            continue
        rest = product // a
        for b in range(1, rest + 1):
            if rest % b == 0:
                out.append((a, b, rest // b))
    return out


def scan_fixed_n(
    n: int,
    cases: Iterable[CaseLabel | str] = tuple(CaseLabel),
    distance_trials: int = 1000,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> list[ScanRow]:
    """Every ordered (L1, L2, L3) giving ``n`` qubits, with numeric k and d."""
    if n < 1:
        raise ValueError("n must be positive")
    rows = []
    for case in sorted({CaseLabel(c) for c in cases}, key=lambda c: c.value):
        per_cell = 3 if case is CaseLabel.A else 4
        if n % per_cell:
            continue
        for lengths in ordered_triples(n // per_cell):
            code = build_case(case, lengths)
            m = code_metrics(code, trials=distance_trials, seed=seed, budget=budget)
            rows.append(ScanRow(case, lengths, code.n, m.k, m.d, m.d_kind))
    return rows


# -- lattice geometry ------------------------------------------------------------------


_KIND = {0: "corner", 1: "edge", 2: "plaquette", 3: "body"}


def _sites(label: str, lengths) -> list[tuple[int, ...]]:
    """Doubled coordinates of a block's sites, in layout order (axis 1 slowest)."""
    offsets = [1 if ch == "C" else 0 for ch in label]
    return [tuple(2 * i + o for i, o in zip(idx, offsets)) for idx in itertools.product(*(range(L) for L in lengths))]


def _index_of(coord, lengths) -> int:
    return int(np.ravel_multi_index(tuple(c // 2 for c in coord), lengths))


def _support(check: tuple[int, ...], check_label: str, qubit_label: str, lengths) -> list[tuple[int, ...]]:
    """Qubit sites of one block reached from ``check`` by unit steps along the flipped axes.

    A site reached an even number of ways cancels; on a length-1 axis both
    steps land on the same site.
    """
    steps = []
    for t, q in zip(check_label, qubit_label):
        steps.append((0,) if t == q else (-1, 1))
    hits: Counter = Counter()
    for delta in itertools.product(*steps):
        hits[tuple((c + s) % (2 * L) for c, s, L in zip(check, delta, lengths))] += 1
    return [site for site, count in hits.items() if count % 2]


def lattice_geometry(case: CaseLabel | str, lengths: tuple[int, int, int]) -> dict:
    """Sites and check supports of a case on the periodic ``L1 x L2 x L3`` lattice.

    Coordinates are in half lattice spacings: a block label contributes an
    odd coordinate along each axis where it holds checks of that classical
    code.  Corners are therefore ``BBB``, edge midpoints carry one ``C``,
    plaquette centers two and body centers three.  Qubit indices equal the
    column indices of the assembled check matrices.
    """
    case = CaseLabel(case)
    lengths = tuple(int(L) for L in lengths)
    if min(lengths) < 1:
        raise ValueError(f"lengths must be positive, got {lengths}")
    spec = case.spec

    roles = derive_roles(spec)
    block_len = math.prod(lengths)
    qubit_offset = {label: i * block_len for i, label in enumerate(roles.qubit_blocks)}

    qubits = []
    for label in roles.qubit_blocks:
        for coord in _sites(label, lengths):
            qubits.append(
                {
                    "index": qubit_offset[label] + _index_of(coord, lengths),
                    "block": label,
                    "kind": _KIND[label.count("C")],
                    "coord": list(coord),
                }
            )

    def checks(labels):
        out = []
        row = 0
        for label in labels:
            for coord in _sites(label, lengths):
                support = []
                for q in roles.qubit_blocks:
                    if label_distance(label, q) in spec.flip_counts:
                        support += [qubit_offset[q] + _index_of(s, lengths) for s in _support(coord, label, q, lengths)]
                out.append(
                    {
                        "row": row,
                        "block": label,
                        "kind": _KIND[label.count("C")],
                        "coord": list(coord),
                        "support": sorted(support),
                    }
                )
                row += 1
        return out

    return {
        "case": case.value,
        "L": list(lengths),
        "coordinate_unit": "half lattice spacing",
        "torus": [2 * L for L in lengths],
        "qubits": qubits,
        "z_checks": checks(roles.z_blocks),
        "x_checks": checks(roles.x_blocks),
    }


def geometry_matrices(doc: dict) -> tuple[np.ndarray, np.ndarray]:
    """Dense (hx, hz) rebuilt from a geometry document's supports."""
    n = len(doc["qubits"])

    def build(checks):
        m = np.zeros((len(checks), n), dtype=np.uint8)
        for c in checks:
            m[c["row"], c["support"]] = 1
        return m

    return build(doc["x_checks"]), build(doc["z_checks"])


def numeric_k(case: CaseLabel | str, lengths) -> int:
    return compute_k(build_case(case, lengths))
