"""Random structures and brute-force oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random

from frcode import from_matrix

MAX_SIDE = 12


def fr_parameter_tuples(max_side: int = MAX_SIDE) -> list[tuple[int, int, int, int]]:
    out = []
    for n in range(1, max_side + 1):
        for v in range(1, max_side + 1):
            for alpha in range(1, v + 1):
                if (n * alpha) % v == 0:
                    out.append((n, alpha, v, n * alpha // v))
    return out


def random_regular_matrix(rng: random.Random, n, alpha, v, rho, swaps=None) -> list[list[int]]:
    """Random 0/1 matrix with row sums alpha and column sums rho.

    Starts from the cyclic layout (block i holds points i*alpha .. i*alpha+alpha-1
    mod v) and mixes it with margin-preserving 2x2 switches.
    """
    m = [[0] * v for _ in range(n)]
    for i in range(n):
        for t in range(alpha):
            m[i][(i * alpha + t) % v] = 1
    for _ in range(swaps if swaps is not None else 20 * n * v):
        r1, r2 = rng.randrange(n), rng.randrange(n)
        c1, c2 = rng.randrange(v), rng.randrange(v)
        if m[r1][c1] and m[r2][c2] and not m[r1][c2] and not m[r2][c1]:
            m[r1][c1] = m[r2][c2] = 0
            m[r1][c2] = m[r2][c1] = 1
    return m


def regular_corpus(count: int, seed: int, max_side: int = MAX_SIDE):
    rng = random.Random(seed)
    params = fr_parameter_tuples(max_side)
    out = []
    for _ in range(count):
        p = rng.choice(params)
        out.append((p, from_matrix(random_regular_matrix(rng, *p))))
    return out


def random_structure(rng: random.Random, max_side: int = MAX_SIDE, density=None):
    n, v = rng.randint(1, max_side), rng.randint(1, max_side)
    d = rng.random() if density is None else density
    return from_matrix([[int(rng.random() < d) for _ in range(v)] for _ in range(n)])


def zero_submatrix_widths(matrix) -> list[int]:
    """widths[k] = max number of columns of an all-zero k-row submatrix, k = 0..n.

    Enumerates column subsets, so it never touches unions of rows.
    """
    n, v = len(matrix), len(matrix[0])
    widths = [0] * (n + 1)
    for r in range(v + 1):
        for cols in itertools.combinations(range(v), r):
            zero_rows = sum(1 for row in matrix if not any(row[j] for j in cols))
            for k in range(zero_rows + 1):
                if widths[k] < r:
                    widths[k] = r
    return widths
