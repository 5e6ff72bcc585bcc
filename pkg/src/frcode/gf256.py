"""Arithmetic in GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1.

Scalars are Python ints in [0, 256); packet-level operations work on
``numpy.uint8`` arrays through a full 256x256 multiplication table.
"""

from __future__ import annotations

import numpy as np

POLY = 0x11B
GENERATOR = 0x03  # 0x02 is not primitive for this polynomial


def _xtime_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        if a & 0x100:
            a ^= POLY
        b >>= 1
    return r


def _build_tables():
    exp = np.zeros(512, dtype=np.int64)
    log = np.zeros(256, dtype=np.int64)
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x = _xtime_mul(x, GENERATOR)
    exp[255:510] = exp[:255]
    a = np.arange(256)
    mul = exp[(log[:, None] + log[None, :]) % 255].astype(np.uint8)
    mul[0, :] = 0
    mul[:, 0] = 0
    inv = np.zeros(256, dtype=np.uint8)
    inv[1:] = exp[(255 - log[a[1:]]) % 255]
    return exp, log, mul, inv


EXP, LOG, MUL, INV = _build_tables()


def mul(a: int, b: int) -> int:
    return int(MUL[a, b])


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return int(INV[a])


def power(a: int, e: int) -> int:
    if e == 0:
        return 1
    if a == 0:
        return 0
    return int(EXP[(int(LOG[a]) * e) % 255])


class SingularMatrixError(ArithmeticError):
    pass


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(r x m) @ (m x c) over GF(256), both uint8."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    return np.bitwise_xor.reduce(MUL[a[:, :, None], b[None, :, :]], axis=1)


def invert(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a square uint8 matrix; raises SingularMatrixError."""
    m = a.shape[0]
    aug = np.concatenate([a.astype(np.uint8), np.eye(m, dtype=np.uint8)], axis=1)
    for c in range(m):
        nz = np.nonzero(aug[c:, c])[0]
        if nz.size == 0:
            raise SingularMatrixError(f"matrix is singular (column {c})")
        p = c + int(nz[0])
        if p != c:
            aug[[c, p]] = aug[[p, c]]
        aug[c] = MUL[INV[aug[c, c]], aug[c]]
        factors = aug[:, c].copy()
        factors[c] = 0
        aug ^= MUL[factors[:, None], aug[c][None, :]]
    return aug[:, m:]


def batch_nonsingular(mats: np.ndarray) -> np.ndarray:
    """Boolean mask: which of a stack (B, m, m) of matrices are invertible."""
    a = mats.astype(np.uint8).copy()
    b, m, _ = a.shape
    ok = np.ones(b, dtype=bool)
    rows = np.arange(b)
    for c in range(m):
        col = a[:, c:, c]
        has = col.any(axis=1)
        ok &= has
        p = c + np.argmax(col != 0, axis=1)
        pivot = a[rows, p].copy()
        a[rows, p] = a[:, c]
        a[:, c] = pivot
        scale = INV[a[:, c, c]]
        a[:, c] = MUL[scale[:, None], a[:, c]]
        factors = a[:, :, c].copy()
        factors[:, c] = 0
        a ^= MUL[factors[:, :, None], a[:, c][:, None, :]]
    return ok
