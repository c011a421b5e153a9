"""Classical codes: repetition codes, seeded random LDPC matrices, alist I/O."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from multicss.gf2 import BitMatrix


class AlistError(ValueError):
    """Malformed alist input; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ClassicalCode:
    """Parity-check matrix ``h`` with checks as rows and bits as columns."""

    name: str
    h: BitMatrix

    def __post_init__(self):
        if self.h.rows < 1 and self.h.cols < 1:
            raise ValueError("a classical code needs at least one bit or one check")

    @property
    def n_checks(self) -> int:
        return self.h.rows

    @property
    def n_bits(self) -> int:
        return self.h.cols

    def dual(self) -> ClassicalCode:
        return ClassicalCode(f"dual({self.name})", self.h.T)


def repetition_code(length: int) -> ClassicalCode:
    """Periodic repetition code: check ``i`` touches bits ``i`` and ``i+1 mod L``.

    For ``L == 1`` the single check meets bit 0 twice and cancels, leaving
    the 1x1 zero matrix.  That is the convention under which the closed-form
    dimensions of the three-code products hold at ``L = 1``; keeping ``[1]``
    instead breaks them (e.g. case A at (1, 6, 6) drops to k = 0).
    """
    if length < 1:
        raise ValueError(f"repetition code length must be positive, got {length}")
    h = np.zeros((length, length), dtype=np.uint8)
    idx = np.arange(length)
    h[idx, idx] ^= 1
    h[idx, (idx + 1) % length] ^= 1
    return ClassicalCode(f"rep({length})", BitMatrix.from_dense(h))


def random_ldpc(rows: int, cols: int, row_weight: int, seed: int) -> ClassicalCode:
    """Random check matrix with exactly ``row_weight`` ones per row.

    Positions come from numpy's PCG64 generator seeded with ``seed``, so the
    output is identical across runs and platforms.
    """
    if not 1 <= row_weight <= cols:
        raise ValueError(f"row weight {row_weight} must lie in [1, {cols}]")
    if rows < 0:
        raise ValueError("row count must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(seed))
    h = np.zeros((rows, cols), dtype=np.uint8)
    for r in range(rows):
        h[r, rng.choice(cols, size=row_weight, replace=False)] = 1
    return ClassicalCode(f"ldpc({rows}x{cols},w={row_weight},seed={seed})", BitMatrix.from_dense(h))


# -- alist -------------------------------------------------------------------


def emit_alist(code: ClassicalCode | BitMatrix) -> str:
    """Canonical alist text: columns are bits, rows are checks, 1-based indices."""
    h = code.h if isinstance(code, ClassicalCode) else code
    dense = h.to_dense()
    m, n = dense.shape
    col_lists = [np.flatnonzero(dense[:, j]) + 1 for j in range(n)]
    row_lists = [np.flatnonzero(dense[i]) + 1 for i in range(m)]
    col_deg = [len(c) for c in col_lists]
    row_deg = [len(r) for r in row_lists]
    lines = [
        f"{n} {m}",
        f"{max(col_deg, default=0)} {max(row_deg, default=0)}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    lines += [" ".join(map(str, c)) for c in col_lists]
    lines += [" ".join(map(str, r)) for r in row_lists]
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise AlistError(lineno, f"non-integer token in {line.strip()!r}") from exc


def parse_alist(text: str, name: str = "alist") -> ClassicalCode:
    """Parse alist text.

    Adjacency lists may be zero-padded to the maximum degree, as some tools
    write them; the padding is dropped.  Column and row lists must describe
    the same matrix.
    """
    lines = text.splitlines()
    # alist blocks are positional; blank lines only carry meaning as empty adjacency lists
    def line(i: int) -> str:
        if i >= len(lines):
            raise AlistError(i + 1, "unexpected end of file")
        return lines[i]

    header = _ints(line(0), 1)
    if len(header) != 2 or min(header) < 0:
        raise AlistError(1, "expected 'n m' header")
    n, m = header
    maxes = _ints(line(1), 2)
    if len(maxes) != 2:
        raise AlistError(2, "expected maximum column and row degrees")
    col_deg = _ints(line(2), 3)
    if len(col_deg) != n:
        raise AlistError(3, f"expected {n} column degrees, found {len(col_deg)}")
    row_deg = _ints(line(3), 4)
    if len(row_deg) != m:
        raise AlistError(4, f"expected {m} row degrees, found {len(row_deg)}")
    if col_deg and max(col_deg) != maxes[0] or row_deg and max(row_deg) != maxes[1]:
        raise AlistError(2, "maximum degrees disagree with the degree lists")

    dense = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        lineno = 5 + j
        entries = [e for e in _ints(line(4 + j), lineno) if e != 0]
        if len(entries) != col_deg[j]:
            raise AlistError(lineno, f"column {j + 1} declares degree {col_deg[j]} but lists {len(entries)} entries")
        for e in entries:
            if not 1 <= e <= m:
                raise AlistError(lineno, f"row index {e} out of range 1..{m}")
            if dense[e - 1, j]:
                raise AlistError(lineno, f"row index {e} repeated")
            dense[e - 1, j] = 1

    seen = np.zeros_like(dense)
    for i in range(m):
        lineno = 5 + n + i
        entries = [e for e in _ints(line(4 + n + i), lineno) if e != 0]
        if len(entries) != row_deg[i]:
            raise AlistError(lineno, f"row {i + 1} declares degree {row_deg[i]} but lists {len(entries)} entries")
        for e in entries:
            if not 1 <= e <= n:
                raise AlistError(lineno, f"column index {e} out of range 1..{n}")
            if not dense[i, e - 1]:
                raise AlistError(lineno, f"row {i + 1} lists column {e} absent from the column lists")
            seen[i, e - 1] = 1
    if not np.array_equal(seen, dense):
        raise AlistError(5 + n, "row lists disagree with column lists")
    return ClassicalCode(name, BitMatrix.from_dense(dense))


def read_alist(path) -> ClassicalCode:
    from pathlib import Path

    p = Path(path)
    return parse_alist(p.read_text(), name=p.stem)


# -- MatrixMarket ----------------------------------------------------------------


def emit_mtx(h: BitMatrix) -> str:
    """``coordinate pattern general`` MatrixMarket text, 1-based, row-major order."""
    rows, cols = np.nonzero(h.to_dense())
    lines = ["%%MatrixMarket matrix coordinate pattern general", f"{h.rows} {h.cols} {len(rows)}"]
    lines += [f"{r + 1} {c + 1}" for r, c in zip(rows, cols)]
    return "\n".join(lines) + "\n"


def parse_mtx(text: str) -> BitMatrix:
    """Read a MatrixMarket coordinate matrix; stored values are taken mod 2."""
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket matrix coordinate"):
        raise ValueError("line 1: not a MatrixMarket coordinate matrix")
    pattern = "pattern" in lines[0].lower()
    body = [(i + 1, ln) for i, ln in enumerate(lines[1:], start=1) if ln.strip() and not ln.startswith("%")]
    if not body:
        raise ValueError("missing size line")
    lineno, size = body[0]
    try:
        m, n, nnz = (int(t) for t in size.split())
    except ValueError as exc:
        raise ValueError(f"line {lineno}: expected 'rows cols nnz'") from exc
    if len(body) - 1 != nnz:
        raise ValueError(f"declared {nnz} entries but found {len(body) - 1}")
    dense = np.zeros((m, n), dtype=np.uint8)
    for lineno, ln in body[1:]:
        toks = ln.split()
        r, c = int(toks[0]), int(toks[1])
        if not (1 <= r <= m and 1 <= c <= n):
            raise ValueError(f"line {lineno}: entry ({r}, {c}) outside a {m}x{n} matrix")
        if pattern:
            dense[r - 1, c - 1] = 1
        else:
            dense[r - 1, c - 1] ^= int(float(toks[2])) & 1
    return BitMatrix.from_dense(dense)
