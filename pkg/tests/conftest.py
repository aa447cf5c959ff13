import pathlib

import numpy as np
import pytest

from edgeldpc import CodeTables, ParityCheckMatrix, generate_gallager_code

DATA_DIR = pathlib.Path(__file__).parent / "data"

# (14,7) tutorial code; within each column the rows are listed in the
# enumeration order of the variable-oriented tables (descending row index)
PAIRS_14_7 = (
    (5, 0), (3, 0), (2, 0), (0, 0),
    (4, 1), (0, 1),
    (5, 2), (1, 2),
    (6, 3), (4, 3), (1, 3),
    (4, 4), (3, 4),
    (1, 5), (0, 5),
    (4, 6), (2, 6),
    (6, 7), (5, 7),
    (5, 8), (4, 8),
    (2, 9), (1, 9),
    (6, 10), (0, 10),
    (3, 11), (1, 11),
    (6, 12), (3, 12),
    (5, 13), (0, 13),
)

GOLDEN_VARIABLE = {
    "e": list(range(31)),
    "v": [0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13],
    "c": [5, 3, 2, 0, 4, 0, 5, 1, 6, 4, 1, 4, 3, 1, 0, 4, 2, 6, 5, 5, 4, 2, 1, 6, 0, 3, 1, 6, 3, 5, 0],
    "t": [4, 4, 4, 4, 2, 2, 2, 2, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    "s": [0, 0, 0, 0, 4, 4, 6, 6, 8, 8, 8, 11, 11, 13, 13, 15, 15, 17, 17, 19, 19, 21, 21, 23, 23, 25, 25, 27, 27, 29, 29],
    "u": [0, 1, 2, 3, 0, 1, 0, 1, 0, 1, 2, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
}

GOLDEN_CHECK = {
    "e": [3, 5, 14, 24, 30, 7, 10, 13, 22, 26, 2, 16, 21, 1, 12, 25, 28, 4, 9, 11, 15, 20, 0, 6, 18, 19, 29, 8, 17, 23, 27],
    "v": [0, 1, 5, 10, 13, 2, 3, 5, 9, 11, 0, 6, 9, 0, 4, 11, 12, 1, 3, 4, 6, 8, 0, 2, 7, 8, 13, 3, 7, 10, 12],
    "c": [0] * 5 + [1] * 5 + [2] * 3 + [3] * 4 + [4] * 5 + [5] * 5 + [6] * 4,
    "t": [5] * 5 + [5] * 5 + [3] * 3 + [4] * 4 + [5] * 5 + [5] * 5 + [4] * 4,
    "s": [0] * 5 + [5] * 5 + [10] * 3 + [13] * 4 + [17] * 5 + [22] * 5 + [27] * 4,
    "u": [0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 0, 1, 2, 0, 1, 2, 3, 0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 0, 1, 2, 3],
}


@pytest.fixture(scope="session")
def h14():
    return ParityCheckMatrix(14, 7, PAIRS_14_7)


@pytest.fixture(scope="session")
def tables14(h14):
    return CodeTables.from_matrix(h14)


@pytest.fixture(scope="session")
def h96():
    return generate_gallager_code(96, 3, 6, seed=1)


@pytest.fixture(scope="session")
def tables96(h96):
    return CodeTables.from_matrix(h96)


@pytest.fixture(scope="session")
def alist_14_7_path():
    return DATA_DIR / "ldpc_14_7.alist"


def xorshift128plus_reference(s0, s1, count):
    """Direct transcription of the published xorshift128+ routine.

    Kept deliberately separate from the library implementation: state as a
    two-element list, update written with the same temporaries as the C code.
    """
    mask = (1 << 64) - 1
    s = [s0, s1]
    out = []
    for _ in range(count):
        x = s[0]
        y = s[1]
        s[0] = y
        x = (x ^ (x << 23)) & mask
        s[1] = x ^ y ^ (x >> 18) ^ (y >> 5)
        out.append((s[1] + y) & mask)
    return out


def random_parity_matrix(rng, max_m=64, max_n=128):
    """Random valid H: every row and column gets at least one entry."""
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(2, max_n + 1))
    ones = set()
    for i in range(m):
        ones.add((i, int(rng.integers(n))))
    for j in range(n):
        ones.add((int(rng.integers(m)), j))
    for _ in range(int(rng.integers(0, m * n // 4 + 1))):
        ones.add((int(rng.integers(m)), int(rng.integers(n))))
    return ParityCheckMatrix(n, m, tuple(ones))


def dense_syndrome(H, c_hat):
    """Brute-force oracle: dense mod-2 matrix-vector product."""
    return (H.to_dense() @ np.asarray(c_hat, dtype=np.int64)) % 2


def gf2_nullspace_basis(dense):
    """Basis of the GF(2) null space of a dense 0/1 matrix, by elimination."""
    a = np.array(dense, dtype=np.uint8) % 2
    m, n = a.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        hits = np.flatnonzero(a[row:, col]) + row
        if len(hits) == 0:
            continue
        if hits[0] != row:
            a[[row, hits[0]]] = a[[hits[0], row]]
        for other in range(m):
            if other != row and a[other, col]:
                a[other] ^= a[row]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = np.zeros(n, dtype=np.uint8)
        vec[fc] = 1
        for prow, pcol in enumerate(pivots):
            if a[prow, fc]:
                vec[pcol] = 1
        basis.append(vec)
    return basis
