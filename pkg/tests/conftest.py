import itertools

import numpy as np
import pytest

from lprips.metric import from_points, validate_metric


def line(*xs):
    return from_points(np.array(xs, dtype=float)[:, None])


def two_point(d=1.0):
    return validate_metric([[0.0, d], [d, 0.0]])


def unit_square():
    return from_points([[0, 0], [1, 0], [1, 1], [0, 1]])


def rank_mod(M, p):
    """Plain Gaussian elimination mod p, independent of the package's reduction."""
    A = [[int(v) % p for v in row] for row in np.asarray(M, dtype=np.int64)]
    rank, cols = 0, len(A[0]) if A else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [(v * inv) % p for v in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [(a - f * b) % p for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


def betti_dense(C, n, p=2):
    """dim C_n - rank d_n - rank d_{n+1} from dense matrices."""
    dn = C.boundary_dense(n) if n > 0 else np.zeros((0, C.size(n)))
    dup = C.boundary_dense(n + 1)
    rn = rank_mod(dn, p) if dn.size else 0
    ru = rank_mod(dup, p) if dup.size else 0
    return C.size(n) - rn - ru


def subsequence_weight(D, p, cyclic=False):
    """Max over increasing index subsequences of the lp norm of consecutive gaps (closing gap if cyclic)."""
    k = len(D)
    best = 0.0
    for size in range(2, k + 1):
        for idx in itertools.combinations(range(k), size):
            gaps = [D[a][b] for a, b in zip(idx, idx[1:])]
            if cyclic:
                gaps.append(D[idx[-1]][idx[0]])
            if p == np.inf:
                v = max(gaps)
            else:
                v = sum(g ** p for g in gaps) ** (1 / p)
                if cyclic:
                    v *= 2 ** (-1 / p)
            best = max(best, v)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line_ in ACCEPTANCE_LINES:
            terminalreporter.write_line(line_)
