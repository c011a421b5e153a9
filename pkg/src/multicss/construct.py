"""Block/FLIP construction of CSS codes from ``D`` classical codes.

Blocks are labelled by strings over ``{"B", "C"}`` of length ``D``: entry
``l`` says whether sector ``l`` carries the bits or the checks of classical
code ``l``.  Labels with an even number of ``B`` hold qubits, labels with an
odd number hold checks.  A FLIP swaps ``B`` and ``C`` in one sector.

Blocks are ordered lexicographically (``B`` before ``C``) and, inside a
block, elements are indexed by the multi-index over sectors with sector 1
slowest, matching :func:`multicss.gf2.kron_all`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from multicss.codes import ClassicalCode
from multicss.gf2 import BitMatrix, kron, mat_mul, pack_rows

MAX_QUBITS = 20_000
MAX_CLASSIFY_D = 5


class LegalityError(ValueError):
    """Raised for specs the recipe rejects."""


def b_count(label: str) -> int:
    return label.count("B")


def label_distance(a: str, b: str) -> int:
    return sum(x != y for x, y in zip(a, b))


def differing_sectors(a: str, b: str) -> list[int]:
    return [i for i, (x, y) in enumerate(zip(a, b)) if x != y]


def flip(label: str, sectors: Sequence[int]) -> str:
    chars = list(label)
    for s in sectors:
        chars[s] = "C" if chars[s] == "B" else "B"
    return "".join(chars)


def all_labels(d: int) -> list[str]:
    return sorted("".join("BC"[(m >> (d - 1 - i)) & 1] for i in range(d)) for m in range(2**d))


def check_labels(d: int) -> list[str]:
    return [w for w in all_labels(d) if b_count(w) % 2 == 1]


@dataclass(frozen=True)
class ConstructionSpec:
    """``D``, the seed Z-check blocks and the allowed (odd) FLIP counts."""

    d: int
    z_seed: tuple[str, ...]
    flip_counts: tuple[int, ...]

    def __post_init__(self):
        seed = tuple(sorted(set(self.z_seed)))
        flips = tuple(sorted(set(int(f) for f in self.flip_counts)))
        object.__setattr__(self, "z_seed", seed)
        object.__setattr__(self, "flip_counts", flips)
        if self.d < 1:
            raise LegalityError(f"need at least one classical code, got D={self.d}")
        if not seed:
            raise LegalityError("the Z-check seed must contain at least one block")
        for w in seed:
            if len(w) != self.d or set(w) - {"B", "C"}:
                raise LegalityError(f"block label {w!r} is not a length-{self.d} string over B/C")
            if b_count(w) % 2 == 0:
                raise LegalityError(f"seed block {w} has an even number of B's; Z-check blocks need an odd count")
        if not flips:
            raise LegalityError("at least one FLIP count is required")
        for f in flips:
            if f % 2 == 0 or not 1 <= f <= self.d:
                raise LegalityError(f"FLIP count {f} must be odd and within 1..{self.d}")


@dataclass(frozen=True)
class RoleAssignment:
    z_blocks: tuple[str, ...]
    qubit_blocks: tuple[str, ...]
    x_blocks: tuple[str, ...]


def _closure(labels: Sequence[str], d: int, flips: Sequence[int]) -> set[str]:
    out = set()
    for w in labels:
        for f in flips:
            for sectors in combinations(range(d), f):
                out.add(flip(w, sectors))
    return out


def derive_roles(spec: ConstructionSpec) -> RoleAssignment:
    qubits = _closure(spec.z_seed, spec.d, spec.flip_counts)
    xs = _closure(sorted(qubits), spec.d, spec.flip_counts) - set(spec.z_seed)
    return RoleAssignment(tuple(spec.z_seed), tuple(sorted(qubits)), tuple(sorted(xs)))


@dataclass(frozen=True)
class LegalityReport:
    no_x_checks: bool
    decoupled: bool
    role_conflict: bool

    @property
    def legal(self) -> bool:
        return not (self.no_x_checks or self.decoupled or self.role_conflict)

    def reasons(self) -> list[str]:
        out = []
        if self.no_x_checks:
            out.append("no X-check blocks are generated")
        if self.decoupled:
            out.append("the block graph splits into disconnected pieces")
        if self.role_conflict:
            out.append("a block is assigned both X and Z roles")
        return out


def check_legality(spec: ConstructionSpec, roles: RoleAssignment | None = None) -> LegalityReport:
    """Flag recipe outputs that are not genuine ``D``-code constructions.

    Decoupling is judged on the block graph: blocks are nodes, and a check
    block is joined to a qubit block when their labels differ in an allowed
    number of sectors.
    """
    roles = derive_roles(spec) if roles is None else roles
    no_x = not roles.x_blocks
    conflict = bool(set(roles.x_blocks) & set(roles.z_blocks))
    nodes = list(roles.z_blocks) + list(roles.qubit_blocks) + list(roles.x_blocks)
    adj: dict[str, set[str]] = defaultdict(set)
    for t in list(roles.z_blocks) + list(roles.x_blocks):
        for q in roles.qubit_blocks:
            if label_distance(t, q) in spec.flip_counts:
                adj[t].add(q)
                adj[q].add(t)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return LegalityReport(no_x_checks=no_x, decoupled=len(seen) != len(set(nodes)), role_conflict=conflict)


# -- assembly ------------------------------------------------------------------


@dataclass(frozen=True)
class CssCode:
    """Check matrices plus the block layout.

    ``qubit_layout`` maps qubit labels to column ranges; ``x_layout`` and
    ``z_layout`` map check labels to row ranges of ``hx`` and ``hz``.
    """

    hx: BitMatrix
    hz: BitMatrix
    qubit_layout: dict[str, tuple[int, int]] = field(default_factory=dict)
    x_layout: dict[str, tuple[int, int]] = field(default_factory=dict)
    z_layout: dict[str, tuple[int, int]] = field(default_factory=dict)
    spec: ConstructionSpec | None = None

    def __post_init__(self):
        if self.hx.cols != self.hz.cols:
            raise ValueError(f"hx has {self.hx.cols} columns but hz has {self.hz.cols}")

    @property
    def n(self) -> int:
        return self.hx.cols

    def swapped(self) -> CssCode:
        return CssCode(self.hz, self.hx, self.qubit_layout, self.z_layout, self.x_layout, None)

    def layout_document(self) -> dict:
        def ranges(layout):
            return {k: list(v) for k, v in layout.items()}

        return {"qubits": ranges(self.qubit_layout), "x_checks": ranges(self.x_layout), "z_checks": ranges(self.z_layout)}


def _sector_dim(code: ClassicalCode, side: str) -> int:
    return code.n_checks if side == "C" else code.n_bits


def block_size(label: str, codes: Sequence[ClassicalCode]) -> int:
    return int(np.prod([_sector_dim(c, s) for c, s in zip(codes, label)], dtype=np.int64))


def sub_block(check: str, qubit: str, codes: Sequence[ClassicalCode]) -> np.ndarray:
    """Dense action of check block ``check`` on qubit block ``qubit``."""
    out = np.ones((1, 1), dtype=np.uint8)
    for code, t, q in zip(codes, check, qubit):
        if t == q:
            factor = np.eye(_sector_dim(code, t), dtype=np.uint8)
        elif t == "C":
            factor = code.h.to_dense()
        else:
            factor = code.h.to_dense().T
        out = np.kron(out, factor)
    return out


def _layout(labels: Sequence[str], codes: Sequence[ClassicalCode]) -> dict[str, tuple[int, int]]:
    out = {}
    start = 0
    for w in labels:
        size = block_size(w, codes)
        out[w] = (start, start + size)
        start += size
    return out


def _stack_checks(
    check_blocks: Sequence[str],
    qubit_layout: dict[str, tuple[int, int]],
    n: int,
    flips: Sequence[int],
    codes: Sequence[ClassicalCode],
) -> BitMatrix:
    parts = []
    total = 0
    for t in check_blocks:
        rows = block_size(t, codes)
        stripe = np.zeros((rows, n), dtype=np.uint8)
        for q, (lo, hi) in qubit_layout.items():
            if label_distance(t, q) in flips:
                stripe[:, lo:hi] = sub_block(t, q, codes)
        parts.append(pack_rows(stripe))
        total += rows
    words = np.vstack(parts) if parts else np.zeros((0, (n + 63) // 64), dtype=np.uint64)
    return BitMatrix(words, total, n)


def assemble(spec: ConstructionSpec, codes: Sequence[ClassicalCode], max_qubits: int = MAX_QUBITS) -> CssCode:
    """Build ``hx`` and ``hz`` for ``spec`` from one classical code per sector."""
    codes = list(codes)
    if len(codes) != spec.d:
        raise ValueError(f"spec has D={spec.d} but {len(codes)} classical codes were given")
    roles = derive_roles(spec)
    qubit_layout = _layout(roles.qubit_blocks, codes)
    n = max((hi for _, hi in qubit_layout.values()), default=0)
    if n > max_qubits:
        raise ValueError(f"construction needs {n} qubits, above the cap of {max_qubits}")
    hz = _stack_checks(roles.z_blocks, qubit_layout, n, spec.flip_counts, codes)
    hx = _stack_checks(roles.x_blocks, qubit_layout, n, spec.flip_counts, codes)
    return CssCode(
        hx=hx,
        hz=hz,
        qubit_layout=qubit_layout,
        x_layout=_layout(roles.x_blocks, codes),
        z_layout=_layout(roles.z_blocks, codes),
        spec=spec,
    )


def css_violation(code: CssCode) -> tuple[int, int] | None:
    """First ``(x_row, z_row)`` pair whose supports overlap oddly, if any."""
    prod = mat_mul(code.hx, code.hz.T)
    if prod.is_zero():
        return None
    dense = prod.to_dense()
    i, j = np.argwhere(dense)[0]
    return int(i), int(j)


def validate_css(code: CssCode) -> bool:
    return css_violation(code) is None


# -- classification ------------------------------------------------------------


@dataclass(frozen=True)
class CodeClass:
    """Inequivalent construction type.

    ``orbits`` lists each distinct code of the type as the group of specs
    identified with it under X/Z exchange.
    """

    seed_size: int
    flip_counts: tuple[int, ...]
    representative: ConstructionSpec
    orbits: tuple[tuple[ConstructionSpec, ...], ...]

    @property
    def count(self) -> int:
        return len(self.orbits)

    @property
    def n_specs(self) -> int:
        return sum(len(o) for o in self.orbits)

    def __contains__(self, spec: ConstructionSpec) -> bool:
        return any(spec in orbit for orbit in self.orbits)


def swap_partner(spec: ConstructionSpec, roles: RoleAssignment | None = None) -> ConstructionSpec | None:
    """Spec whose Z seed is ``spec``'s X-check blocks under the same FLIP counts."""
    roles = derive_roles(spec) if roles is None else roles
    if not roles.x_blocks:
        return None
    return ConstructionSpec(spec.d, roles.x_blocks, spec.flip_counts)


def is_exact_swap(spec: ConstructionSpec) -> bool:
    """True when the swap partner regenerates the same blocks with X and Z exchanged."""
    roles = derive_roles(spec)
    partner = swap_partner(spec, roles)
    if partner is None:
        return False
    proles = derive_roles(partner)
    return proles.qubit_blocks == roles.qubit_blocks and proles.x_blocks == roles.z_blocks


def _spec_key(spec: ConstructionSpec) -> tuple:
    return (len(spec.z_seed), spec.z_seed)


def classify(d: int, max_d: int = MAX_CLASSIFY_D) -> list[CodeClass]:
    """Census of legal constructions for ``d`` codes, up to X/Z exchange.

    Each legal spec is merged with its swap partner; a merged group is one
    distinct code.  Groups are keyed by the seed size of their canonical
    member (smallest seed, then lexicographic) and the FLIP-count set, and
    classes come out sorted by FLIP set and then seed size.
    """
    if d < 2:
        raise ValueError(f"classification needs D >= 2, got {d}")
    if d > max_d:
        raise ValueError(f"D={d} exceeds the exhaustive-enumeration cap of {max_d}")
    odd = check_labels(d)
    odd_flips = list(range(1, d + 1, 2))
    flip_sets = [fs for r in range(1, len(odd_flips) + 1) for fs in combinations(odd_flips, r)]

    parent: dict[ConstructionSpec, ConstructionSpec] = {}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    edges = []
    for flips in flip_sets:
        for r in range(1, len(odd) + 1):
            for seed in combinations(odd, r):
                spec = ConstructionSpec(d, seed, flips)
                roles = derive_roles(spec)
                if not check_legality(spec, roles).legal:
                    continue
                parent[spec] = spec
                partner = swap_partner(spec, roles)
                if partner is not None:
                    edges.append((spec, partner))
    for a, b in edges:
        if b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb, key=_spec_key)] = min(ra, rb, key=_spec_key)

    merged: dict[ConstructionSpec, list[ConstructionSpec]] = defaultdict(list)
    for spec in parent:
        merged[find(spec)].append(spec)
    groups: dict[tuple, list[tuple[ConstructionSpec, ...]]] = defaultdict(list)
    for members in merged.values():
        orbit = tuple(sorted(members, key=_spec_key))
        canonical = orbit[0]
        groups[(len(canonical.z_seed), canonical.flip_counts)].append(orbit)

    classes = []
    for (size, flips), orbits in groups.items():
        orbits = sorted(orbits, key=lambda o: _spec_key(o[0]))
        classes.append(CodeClass(size, flips, orbits[0][0], tuple(orbits)))
    classes.sort(key=lambda c: (c.flip_counts, c.seed_size))
    return classes


# -- two-code reference ----------------------------------------------------------


def hgp_reference(c1: ClassicalCode, c2: ClassicalCode) -> tuple[BitMatrix, BitMatrix]:
    """Textbook hypergraph product, qubits ordered as bit-bit then check-check.

    ``hx = [H1 (x) I_n2 | I_m1 (x) H2^T]`` and
    ``hz = [I_n1 (x) H2 | H1^T (x) I_m2]``.
    """
    h1, h2 = c1.h, c2.h
    m1, n1 = h1.shape
    m2, n2 = h2.shape
    hx = BitMatrix.hstack([kron(h1, BitMatrix.identity(n2)), kron(BitMatrix.identity(m1), h2.T)], rows=m1 * n2)
    hz = BitMatrix.hstack([kron(BitMatrix.identity(n1), h2), kron(h1.T, BitMatrix.identity(m2))], rows=n1 * m2)
    return hx, hz


def hgp_spec() -> ConstructionSpec:
    return ConstructionSpec(2, ("BC",), (1,))
