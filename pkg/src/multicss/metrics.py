"""Code dimension, logical operators and minimum distance of CSS codes.

Naming follows the operator type: Z-type logicals lie in ``ker(hx)`` but
not in the row space of ``hz``; their minimum weight is ``d_z``.  X-type
logicals are the mirror image.

A vector ``v`` in ``ker(hx)`` is a nontrivial Z logical exactly when it
anticommutes with some X logical, so every distance routine tracks a
*signature*: the inner products of a support with the X-logical basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from multicss import _kernels
from multicss.construct import CssCode
from multicss.gf2 import BitMatrix, independent_rows, kernel_basis, mat_vec, pack_rows, rank, unpack_rows

DEFAULT_BUDGET = 2**24
SIDES = ("X", "Z")


class DistanceBudgetError(RuntimeError):
    """Exact search would enumerate more than the allowed number of vectors."""

    def __init__(self, side: str, required: int, budget: int):
        super().__init__(f"exact {side}-distance needs at least {required} enumerated vectors, budget is {budget}")
        self.side = side
        self.required = required
        self.budget = budget


class UndefinedDistanceError(ValueError):
    """The code encodes no logical qubits."""


def compute_k(code: CssCode) -> int:
    return code.n - rank(code.hx) - rank(code.hz)


def _checks(code: CssCode, side: str) -> tuple[BitMatrix, BitMatrix]:
    """(matrix whose kernel holds ``side`` logicals, matrix whose rows are ``side`` stabilizers)."""
    if side == "Z":
        return code.hx, code.hz
    if side == "X":
        return code.hz, code.hx
    raise ValueError(f"side must be 'X' or 'Z', got {side!r}")


def logical_basis(code: CssCode, side: str) -> BitMatrix:
    """Representatives of a basis of ``side``-type logicals modulo stabilizers."""
    commute, stabilizers = _checks(code, side)
    kern = kernel_basis(commute)
    stacked = BitMatrix.vstack([stabilizers, kern], cols=code.n)
    keep = [i - stabilizers.rows for i in independent_rows(stacked) if i >= stabilizers.rows]
    return BitMatrix(kern.words[keep], len(keep), code.n)


def _other(side: str) -> str:
    return "X" if side == "Z" else "Z"


@dataclass
class _SideProblem:
    side: str
    checks: BitMatrix  # columns are syndromes
    kernel: BitMatrix
    dual_logicals: BitMatrix

    @classmethod
    def build(cls, code: CssCode, side: str) -> _SideProblem:
        commute, _ = _checks(code, side)
        return cls(side, commute, kernel_basis(commute), logical_basis(code, _other(side)))

    def column_signatures(self) -> np.ndarray:
        """Packed signature of each qubit, shape ``(n, words)``."""
        return pack_rows(self.dual_logicals.to_dense().T)

    def kernel_with_signatures(self) -> tuple[np.ndarray, int]:
        kern = self.kernel.to_dense()
        sig = (kern.astype(np.int64) @ self.dual_logicals.to_dense().T.astype(np.int64)) & 1
        return np.hstack([self.kernel.words, pack_rows(sig.astype(np.uint8))]), self.kernel.words.shape[1]

    def is_logical(self, v: np.ndarray) -> bool:
        return not mat_vec(self.checks, v).any() and bool(mat_vec(self.dual_logicals, v).any())


@dataclass(frozen=True)
class SideDistance:
    side: str
    weight: int
    witness: np.ndarray = field(repr=False)


# -- exact routes -----------------------------------------------------------------


def _gray_search(prob: _SideProblem, budget: int) -> SideDistance:
    """Walk every vector of the kernel in Gray-code order, low bits tabulated."""
    m = prob.kernel.rows
    if 2**m > budget:
        raise DistanceBudgetError(prob.side, 2**m, budget)
    rows, nb = prob.kernel_with_signatures()
    low = min(m, 14)
    table = np.zeros((1 << low, rows.shape[1]), dtype=np.uint64)
    coeff = np.zeros((1 << low, m), dtype=np.uint8)
    for i in range(low):
        table[1 << i : 2 << i] = table[: 1 << i] ^ rows[i]
        coeff[1 << i : 2 << i] = coeff[: 1 << i]
        coeff[1 << i : 2 << i, i] = 1
    best, best_coeff = None, None
    acc = np.zeros(rows.shape[1], dtype=np.uint64)
    high = np.zeros(m, dtype=np.uint8)
    for g in range(1 << (m - low)):
        if g:
            bit = (g & -g).bit_length() - 1
            acc ^= rows[low + bit]
            high[low + bit] ^= 1
        cur = table ^ acc
        logical = cur[:, nb:].any(axis=1)
        if not logical.any():
            continue
        weights = np.bitwise_count(cur[:, :nb]).sum(axis=1)
        weights[~logical] = np.iinfo(weights.dtype).max
        i = int(np.argmin(weights))
        if best is None or weights[i] < best:
            best = int(weights[i])
            best_coeff = coeff[i] | high
    if best is None:
        raise UndefinedDistanceError("no nontrivial logical operator exists")
    witness = (best_coeff.astype(np.int64) @ prob.kernel.to_dense().astype(np.int64)) & 1
    return SideDistance(prob.side, best, witness.astype(np.uint8))


class _SubsetTables:
    """All column subsets of each size with their syndrome hash and signature.

    Syndromes are bucketed through a random linear 64-bit hash; equal
    syndromes always share a hash, and every candidate is re-verified
    exactly, so collisions cost time but never correctness.
    """

    def __init__(self, prob: _SideProblem, budget: int, seed: int = 0):
        self.prob = prob
        self.n = prob.checks.cols
        self.budget = budget
        self.spent = 0
        rng = np.random.Generator(np.random.PCG64(seed))
        row_keys = rng.integers(0, 2**63, size=prob.checks.rows, dtype=np.uint64) * np.uint64(2) + rng.integers(
            0, 2, size=prob.checks.rows, dtype=np.uint64
        )
        checks = prob.checks.to_dense().astype(bool)
        col_hash = np.zeros(self.n, dtype=np.uint64)
        for r in range(prob.checks.rows):
            col_hash[checks[r]] ^= row_keys[r]
        self.col_hash = col_hash
        self.col_sig = prob.column_signatures()
        self.levels = [
            (np.zeros((1, 0), dtype=np.int32), np.zeros(1, dtype=np.uint64), np.zeros((1, self.col_sig.shape[1]), dtype=np.uint64))
        ]

    def level(self, s: int):
        while len(self.levels) <= s:
            idx, hs, sig = self.levels[-1]
            last = idx[:, -1] if idx.shape[1] else np.full(idx.shape[0], -1, dtype=np.int32)
            rep = (self.n - 1 - last).astype(np.int64)
            total = int(rep.sum())
            if self.spent + total > self.budget:
                raise DistanceBudgetError(self.prob.side, self.spent + total, self.budget)
            self.spent += total
            parent = np.repeat(np.arange(idx.shape[0]), rep)
            offsets = np.arange(total) - np.repeat(np.cumsum(rep) - rep, rep)
            j = (np.repeat(last + 1, rep) + offsets).astype(np.int32)
            self.levels.append(
                (
                    np.column_stack([idx[parent], j]).astype(np.int32),
                    hs[parent] ^ self.col_hash[j],
                    sig[parent] ^ self.col_sig[j],
                )
            )
        return self.levels[s]

    def _verify(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        v = np.zeros(self.n, dtype=np.uint8)
        np.bitwise_xor.at(v, a, 1)
        np.bitwise_xor.at(v, b, 1)
        return v if self.prob.is_logical(v) else None

    def find(self, w: int) -> np.ndarray | None:
        """A logical of weight at most ``w``, built as a pair of subsets."""
        a, b = (w + 1) // 2, w // 2
        _, ha, sa = self.level(a)
        if a == b:
            hs, sig, tag = ha, sa, np.zeros(len(ha), dtype=np.int8)
        else:
            _, hb, sb = self.level(b)
            hs = np.concatenate([ha, hb])
            sig = np.vstack([sa, sb])
            tag = np.concatenate([np.ones(len(ha), dtype=np.int8), np.zeros(len(hb), dtype=np.int8)])
        keys = [sig[:, c] for c in range(sig.shape[1] - 1, -1, -1)] + [tag, hs]
        order = np.lexsort(keys)
        hs_s, tag_s, sig_s = hs[order], tag[order], sig[order]
        if len(order) < 2:
            return None
        new_group = np.r_[True, hs_s[1:] != hs_s[:-1]]
        new_seg = new_group | np.r_[True, tag_s[1:] != tag_s[:-1]]
        group = np.cumsum(new_group) - 1
        seg = np.cumsum(new_seg) - 1
        sig_change = np.r_[False, (sig_s[1:] != sig_s[:-1]).any(axis=1)]
        if a == b:
            hot = np.unique(group[sig_change & ~new_group])
        else:
            # a group mixing both tags is a candidate unless each tag holds one identical signature
            seg_diff = np.zeros(seg[-1] + 1, dtype=bool)
            seg_diff[seg[sig_change & ~new_seg]] = True
            seg_first = np.flatnonzero(new_seg)
            seg_group = group[seg_first]
            two = np.flatnonzero(seg_group[1:] == seg_group[:-1])
            first_sig = sig_s[seg_first]
            differs = seg_diff[two] | seg_diff[two + 1] | (first_sig[two] != first_sig[two + 1]).any(axis=1)
            hot = seg_group[two[differs]]
        if len(hot) == 0:
            return None
        starts = np.flatnonzero(new_group)
        ends = np.r_[starts[1:], len(order)]
        for g in hot:
            members = order[starts[g] : ends[g]]
            for x_pos, i in enumerate(members):
                for j in members[x_pos + 1 :]:
                    if tag[i] == tag[j] and a != b:
                        continue
                    if (sig[i] == sig[j]).all():
                        continue
                    ai, aj = self._support(i, a, b), self._support(j, a, b)
                    v = self._verify(ai, aj)
                    if v is not None:
                        return v
        return None

    def _support(self, i: int, a: int, b: int) -> np.ndarray:
        na = len(self.levels[a][1])
        if a == b or i < na:
            return self.levels[a][0][i]
        return self.levels[b][0][i - na]


def _weight_search(
    probs: dict[str, _SideProblem],
    budget: int,
    uppers: dict[str, SideDistance] | None = None,
) -> dict[str, SideDistance | None]:
    """Meet-in-the-middle search over supports by increasing weight.

    Every logical of weight ``w`` splits into column subsets of sizes
    ``ceil(w/2)`` and ``floor(w/2)`` with equal syndromes and different
    signatures.  Any such pair found while no lighter logical exists is a
    disjoint split, so the first hit has minimum weight.

    Both sides advance together until one of them hits, which fixes the
    code distance.  The other side is then resolved if the budget allows
    and left as ``None`` otherwise.  Known upper bounds (with witnesses)
    let the search stop once lighter logicals are ruled out.
    """
    uppers = uppers or {}
    for prob in probs.values():
        if prob.kernel.rows == 0 or prob.dual_logicals.rows == 0:
            raise UndefinedDistanceError("no nontrivial logical operator exists")
    n = next(iter(probs.values())).checks.cols
    limit = {side: (uppers[side].weight if side in uppers else n + 1) for side in probs}
    bound = min(limit.values())
    if bound <= n:
        need = sum(math.comb(n, s) for s in range(1, bound // 2 + 1))
        if need > budget:
            raise DistanceBudgetError("/".join(probs), need, budget)
    tables = {side: _SubsetTables(prob, budget) for side, prob in probs.items()}

    found: dict[str, SideDistance | None] = {}
    reached = 0
    for w in range(1, min(bound, n + 1)):
        for side in probs:
            v = tables[side].find(w)
            if v is not None:
                assert int(v.sum()) == w
                found[side] = SideDistance(side, w, v)
        reached = w
        if found:
            break
    if not found:
        for side in probs:
            if limit[side] == bound and side in uppers:
                found[side] = uppers[side]
        if not found:
            raise UndefinedDistanceError("no nontrivial logical operator exists")

    for side in probs:
        if side in found:
            continue
        result = uppers.get(side)
        try:
            for w in range(reached + 1, min(limit[side], n + 1)):
                v = tables[side].find(w)
                if v is not None:
                    result = SideDistance(side, w, v)
                    break
        except DistanceBudgetError:
            result = None
        found[side] = result
    return found


@dataclass(frozen=True)
class DistanceResult:
    """Distance per side; ``kind`` is ``"exact"`` or ``"upper_bound"``.

    An exact result always fixes ``d``.  A side heavier than ``d`` that the
    budget could not resolve is reported as ``None``.
    """

    kind: str
    d_x: int | None
    d_z: int | None
    witness_x: np.ndarray | None = field(repr=False, compare=False)
    witness_z: np.ndarray | None = field(repr=False, compare=False)
    method: str = ""
    trials: int | None = None
    seed: int | None = None

    @property
    def d(self) -> int:
        return min(v for v in (self.d_x, self.d_z) if v is not None)


def _gray_applies(probs, budget: int) -> bool:
    return all(p.kernel.rows <= min(20, int(math.log2(max(budget, 1)))) for p in probs.values())


def distance_exact(
    code: CssCode,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
    upper: DistanceResult | None = None,
) -> DistanceResult:
    """Exact minimum weight of a nontrivial logical operator.

    ``method`` picks the Gray-code walk of each kernel (``"gray"``), the
    increasing-weight subset search (``"weight"``), or lets the kernel
    dimension decide.  ``budget`` caps the number of enumerated vectors per
    side; exceeding it raises :class:`DistanceBudgetError`.  An ``upper``
    result with witnesses lets the weight search stop early.
    """
    if compute_k(code) == 0:
        raise UndefinedDistanceError("k = 0: the code has no logical operators")
    probs = {side: _SideProblem.build(code, side) for side in SIDES}
    if method == "auto":
        method = "gray" if upper is None and _gray_applies(probs, budget) else "weight"
    if method == "gray":
        sides = {side: _gray_search(prob, budget) for side, prob in probs.items()}
    elif method == "weight":
        uppers = {}
        if upper is not None:
            for side, d, wit in (("X", upper.d_x, upper.witness_x), ("Z", upper.d_z, upper.witness_z)):
                if d is not None:
                    uppers[side] = SideDistance(side, d, wit)
        sides = _weight_search(probs, budget, uppers)
    else:
        raise ValueError(f"unknown exact method {method!r}")

    def part(side):
        r = sides[side]
        return (None, None) if r is None else (r.weight, r.witness)

    (dx, wx), (dz, wz) = part("X"), part("Z")
    return DistanceResult("exact", dx, dz, wx, wz, method=method)


# -- randomized upper bound -----------------------------------------------------------

_CHUNK = 256


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, fixed by ``(seed, trial)`` alone."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def trial_permutations(n: int, seed: int, start: int, stop: int) -> np.ndarray:
    return np.vstack([trial_rng(seed, t).permutation(n) for t in range(start, stop)]).astype(np.int64)


def _estimate_side(prob: _SideProblem, trials: int, seed: int) -> tuple[SideDistance, np.ndarray]:
    gen, nb = prob.kernel_with_signatures()
    n = prob.checks.cols
    per_trial = np.empty(trials, dtype=np.int64)
    for start in range(0, trials, _CHUNK):
        stop = min(trials, start + _CHUNK)
        per_trial[start:stop] = _kernels.information_set_trials(gen, nb, trial_permutations(n, seed, start, stop))
    found = per_trial >= 0
    if not found.any():
        raise UndefinedDistanceError("no nontrivial logical operator exists")
    best_trial = int(np.flatnonzero(found)[np.argmin(per_trial[found])])
    w = np.array(gen, copy=True)
    _kernels.eliminate(w, trial_permutations(n, seed, best_trial, best_trial + 1)[0], True)
    logical = w[:, nb:].any(axis=1)
    weights = np.where(logical, np.bitwise_count(w[:, :nb]).sum(axis=1), np.iinfo(np.int64).max)
    row = w[int(np.argmin(weights)), :nb]
    witness = unpack_rows(row[None, :], n)[0]
    return SideDistance(prob.side, int(per_trial[best_trial]), witness), per_trial


def distance_estimate(code: CssCode, trials: int, seed: int = 0) -> DistanceResult:
    """Upper bound on the distance by random information-set reduction.

    Each trial draws a column order from the stream ``(seed, trial)``,
    fully reduces a basis of the commuting space with pivots taken in that
    order, and records the lightest reduced row that is a nontrivial
    logical.  The minimum over trials is witnessed by an explicit logical,
    so it never undercuts the true distance.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    if compute_k(code) == 0:
        raise UndefinedDistanceError("k = 0: the code has no logical operators")
    x, _ = _estimate_side(_SideProblem.build(code, "X"), trials, seed)
    z, _ = _estimate_side(_SideProblem.build(code, "Z"), trials, seed)
    return DistanceResult("upper_bound", x.weight, z.weight, x.witness, z.witness, "information_set", trials, seed)


def estimate_trace(code: CssCode, side: str, trials: int, seed: int = 0) -> np.ndarray:
    """Per-trial minimum weights for one side (``-1`` where a trial found nothing)."""
    return _estimate_side(_SideProblem.build(code, side), trials, seed)[1]


# -- combined report -------------------------------------------------------------------


@dataclass(frozen=True)
class CodeMetrics:
    """Parameters of one code.

    ``d_kind`` is ``"exact"``, ``"upper_bound"`` or ``"undefined"`` (k = 0).
    With an exact ``d``, a heavier side the exact search left open carries
    the estimator's bound instead, or ``None`` without one.
    """

    n: int
    k: int
    d: int | None
    d_kind: str
    d_x: int | None = None
    d_z: int | None = None
    estimator: dict | None = None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "d_kind": self.d_kind,
            "d_x": self.d_x,
            "d_z": self.d_z,
            "estimator": self.estimator,
        }


def code_metrics(code: CssCode, trials: int = 1000, seed: int = 0, budget: int = DEFAULT_BUDGET) -> CodeMetrics:
    """n, k and the best available distance.

    Small kernels are walked exhaustively.  Otherwise the estimator supplies
    witnessed upper bounds and the exact search rules out anything lighter;
    only if that would exceed ``budget`` is ``d`` reported as an upper bound.
    """
    k = compute_k(code)
    if k == 0:
        return CodeMetrics(code.n, 0, None, "undefined")
    probs = {side: _SideProblem.build(code, side) for side in SIDES}
    if _gray_applies(probs, budget):
        res = distance_exact(code, budget, method="gray")
        return CodeMetrics(code.n, k, res.d, "exact", res.d_x, res.d_z, None)
    est = distance_estimate(code, trials, seed)
    info = {"method": est.method, "trials": trials, "seed": seed}
    try:
        res = distance_exact(code, budget, method="weight", upper=est)
    except DistanceBudgetError:
        return CodeMetrics(code.n, k, est.d, "upper_bound", est.d_x, est.d_z, info)
    dx = res.d_x if res.d_x is not None else est.d_x
    dz = res.d_z if res.d_z is not None else est.d_z
    return CodeMetrics(code.n, k, res.d, "exact", dx, dz, info)
