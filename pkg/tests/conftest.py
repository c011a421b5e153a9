"""Independent reference routines used as oracles across the test suite.

Everything here works on plain integer numpy arrays and avoids the
package's packed kernels.
"""

import itertools

import numpy as np
import pytest


def naive_matmul(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            s = 0
            for k in range(a.shape[1]):
                s += a[i, k] * b[k, j]
            out[i, j] = s % 2
    return out.astype(np.uint8)


def naive_rank(a):
    """Textbook elimination on a copy, one column at a time."""
    m = np.array(a, dtype=np.uint8) % 2
    r = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def all_vectors(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8).reshape(-1, n)


def span(rows):
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.shape[0] == 0:
        return {tuple(np.zeros(rows.shape[1], dtype=np.uint8))}
    combos = all_vectors(rows.shape[0])
    return {tuple(v) for v in (combos.astype(np.int64) @ rows.astype(np.int64)) % 2}


def brute_side_distance(commute, stabilizers):
    """Minimum weight of v with commute v = 0 and v outside rowspace(stabilizers).

    Enumerates supports by increasing weight; for small n only.
    """
    commute = np.asarray(commute, dtype=np.int64)
    stab = naive_rank(stabilizers)
    n = commute.shape[1]
    for w in range(1, n + 1):
        for support in itertools.combinations(range(n), w):
            v = np.zeros(n, dtype=np.uint8)
            v[list(support)] = 1
            if ((commute @ v) % 2).any():
                continue
            if naive_rank(np.vstack([stabilizers, v])) > stab:
                return w
    return None


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
