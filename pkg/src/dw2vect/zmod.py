"""Linear systems over Z/m.

Used to find coboundary primitives and normalizing shifts exactly.  The
modulus is split into prime powers (Chinese remainder theorem); modulo each
prime power the matrix is reduced with full pivoting on the entry of least
p-adic valuation, which keeps every division exact.
"""
from __future__ import annotations

import numpy as np


def factorize(m: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _valuation(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def _solve_prime_power(A: np.ndarray, b: np.ndarray, p: int, e: int) -> np.ndarray | None:
    q = p**e
    A = [[int(v) % q for v in row] for row in A]
    b = [int(v) % q for v in b]
    rows, cols = len(A), len(A[0]) if A else 0
    col_perm = list(range(cols))
    pivots = []  # (row, valuation)
    r = 0
    while r < rows and r < cols:
        best = (e, -1, -1)
        for i in range(r, rows):
            for j in range(r, cols):
                if A[i][j]:
                    v = _valuation(A[i][j], p, e)
                    if v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best[0] == 0:
                break
        v, i, j = best
        if i < 0:
            break
        A[r], A[i] = A[i], A[r]
        b[r], b[i] = b[i], b[r]
        for row in A:
            row[r], row[j] = row[j], row[r]
        col_perm[r], col_perm[j] = col_perm[j], col_perm[r]
        unit = (A[r][r] // p**v) % q
        inv_unit = pow(unit, -1, q)
        for i2 in range(r + 1, rows):
            if A[i2][r]:
                factor = (A[i2][r] // p**v) * inv_unit % q
                A[i2] = [(x - factor * y) % q for x, y in zip(A[i2], A[r])]
                b[i2] = (b[i2] - factor * b[r]) % q
        pivots.append(v)
        r += 1
    if any(b[i] % q for i in range(r, rows)):
        return None
    x = [0] * cols
    for i in range(r - 1, -1, -1):
        v = pivots[i]
        rhs = (b[i] - sum(A[i][j] * x[j] for j in range(i + 1, cols))) % q
        if rhs % p**v:
            return None
        unit = (A[i][i] // p**v) % q
        x[i] = (rhs // p**v) * pow(unit, -1, q) % q
    out = [0] * cols
    for k, c in enumerate(col_perm):
        out[c] = x[k]
    return np.array(out, dtype=np.int64)


def solve_mod(A, b, m: int) -> np.ndarray | None:
    """One solution of ``A x = b (mod m)``, or None if there is none."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError("shape mismatch")
    if m == 1 or A.shape[1] == 0:
        return np.zeros(A.shape[1], dtype=np.int64) if not np.any(b % m) else None
    x = np.zeros(A.shape[1], dtype=np.int64)
    modulus = 1
    for p, e in factorize(m):
        q = p**e
        xq = _solve_prime_power(A, b, p, e)
        if xq is None:
            return None
        # combine x (mod modulus) with xq (mod q)
        t = ((xq - x) % q) * pow(modulus, -1, q) % q
        x = x + modulus * t
        modulus *= q
    return x % m
