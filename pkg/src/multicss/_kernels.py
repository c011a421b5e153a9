"""numba kernels for elimination on bit-packed rows.

Rows are stored as ``uint64`` words, bit ``j`` of a row living in word
``j >> 6`` at position ``j & 63``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def eliminate(w, order, full):
    """Row-reduce ``w`` in place, trying pivot columns in ``order``.

    With ``full`` the result is reduced (pivot columns are unit vectors);
    otherwise only entries below each pivot are cleared.  Returns the pivot
    columns, one per nonzero row of the result.
    """
    m, nw = w.shape
    pivots = np.empty(min(m, order.shape[0]), dtype=np.int64)
    r = 0
    for c in order:
        if r == m:
            break
        wi = c >> 6
        bit = _ONE << np.uint64(c & 63)
        p = -1
        for i in range(r, m):
            if w[i, wi] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for t in range(nw):
                tmp = w[r, t]
                w[r, t] = w[p, t]
                w[p, t] = tmp
        start = 0 if full else r + 1
        for i in range(start, m):
            if i != r and (w[i, wi] & bit):
                for t in range(nw):
                    w[i, t] ^= w[r, t]
        pivots[r] = c
        r += 1
    return pivots[:r]


@njit(cache=True)
def information_set_trials(gen, nbit_words, perms):
    """Minimum logical weight found per trial of random information-set reduction.

    ``gen`` holds one codeword per row: ``nbit_words`` words of support,
    followed by words of its logical signature.  A row counts as logical
    when its signature is nonzero.  Each trial reduces a fresh copy with
    pivots tried in the order of the corresponding row of ``perms``.
    Trials with no logical row report ``-1``.
    """
    ntrials = perms.shape[0]
    m, nw = gen.shape
    out = np.full(ntrials, -1, dtype=np.int64)
    w = np.empty_like(gen)
    for t in range(ntrials):
        w[:, :] = gen
        eliminate(w, perms[t], True)
        best = -1
        for i in range(m):
            logical = False
            for s in range(nbit_words, nw):
                if w[i, s] != 0:
                    logical = True
                    break
            if not logical:
                continue
            wt = 0
            for s in range(nbit_words):
                wt += popcount64(w[i, s])
            if best < 0 or wt < best:
                best = wt
        out[t] = best
    return out
