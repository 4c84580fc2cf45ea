"""Dense exact linear algebra over a base field GF(q).

Matrices are 2-D ``numpy.int64`` arrays whose entries are field indices; the
field is passed explicitly as the first argument.
"""

from __future__ import annotations

import numpy as np

from .errors import ColumnMismatch, DimensionMismatch
from .gf import GF


def as_matrix(F: GF, data, cols: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a 2-D int64 matrix over F, validating entries."""
    M = np.array(data, dtype=np.int64)
    if M.ndim == 1:
        if M.size == 0:
            M = M.reshape(0, cols or 0)
        else:
            M = M.reshape(1, -1)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {M.shape}")
    if M.size and (M.min() < 0 or M.max() >= F.order):
        raise ValueError(f"entries out of range for {F}")
    return M


def identity(k: int) -> np.ndarray:
    return np.eye(k, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def rref(F: GF, M) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form.

    Returns ``(R, rank, pivots)``; R has the shape of M with zero rows at the
    bottom, and ``pivots`` lists the pivot columns in increasing order.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise DimensionMismatch("rref needs a 2-D matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r] = F.vmul(R[r], F.inv(lead))
        col = R[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            R[idx] = F.vsub(R[idx], F.vmul(col[idx, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return rref(F, M)[1]


def row_basis(F: GF, M) -> np.ndarray:
    """Canonical basis of the row space: the rref with zero rows dropped."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0)
    R, rk, _ = rref(F, M)
    return R[:rk]


def _check_cols(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape[1] != B.shape[1]:
        raise ColumnMismatch(f"{A.shape[1]} vs {B.shape[1]} columns")


def stack_rank(F: GF, A, B) -> int:
    """Rank of A stacked on top of B."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    _check_cols(A, B)
    return rank(F, np.vstack([A, B]))


def same_rowspace(F: GF, A, B) -> bool:
    RA, RB = row_basis(F, A), row_basis(F, B)
    return RA.shape == RB.shape and bool(np.array_equal(RA, RB))


def nullspace(F: GF, M) -> np.ndarray:
    """Basis (as rows) of the right kernel {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return identity(cols)
    R, rk, pivots = rref(F, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    out = zeros(len(free), cols)
    for i, f in enumerate(free):
        out[i, f] = 1
        for j, p in enumerate(pivots):
            out[i, p] = F.neg(int(R[j, f]))
    return out


def left_nullspace(F: GF, M) -> np.ndarray:
    """Basis (as rows) of {y : y M = 0}."""
    return nullspace(F, np.asarray(M, dtype=np.int64).T)


def solve(F: GF, A, b) -> np.ndarray | None:
    """One solution x of A x = b, or None when the system is inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch("A and b disagree on row count")
    aug = np.hstack([A, b[:, None]])
    R, rk, pivots = rref(F, aug)
    n = A.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for j, p in enumerate(pivots):
        x[p] = R[j, n]
    return x


def intersect_rowspaces(F: GF, A, B) -> np.ndarray:
    """Canonical basis of rowspace(A) ∩ rowspace(B) (Zassenhaus)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    _check_cols(A, B)
    n = A.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return zeros(0, n)
    top = np.hstack([A, A])
    bottom = np.hstack([B, zeros(B.shape[0], n)])
    R, rk, _ = rref(F, np.vstack([top, bottom]))
    R = R[:rk]
    inter = R[~R[:, :n].any(axis=1), n:]
    return row_basis(F, inter)


# -- elementary matrix operations -------------------------------------------

def add(F: GF, A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    return F.vadd(A, B)


def sub(F: GF, A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    return F.vsub(A, B)


def scalar_mul(F: GF, c: int, A) -> np.ndarray:
    return F.vmul(np.asarray(A), int(c))


def transpose(A) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(A, dtype=np.int64).T)


def hstack(A, B) -> np.ndarray:
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch("row counts differ")
    return np.hstack([A, B])


def vstack(A, B) -> np.ndarray:
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    _check_cols(A, B)
    return np.vstack([A, B])


def matmul(F: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.ndim == 1:
        A = A[None, :]
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    if F.s == 1:
        if F.p < (1 << 16):
            return (A @ B) % F.p
        out = zeros(A.shape[0], B.shape[1])
        for j in range(A.shape[1]):
            out = (out + np.outer(A[:, j], B[j]) % F.p) % F.p
        return out
    prod = F.vmul(A[:, :, None], B[None, :, :])
    return np.bitwise_xor.reduce(prod, axis=1)


def random_matrix(F: GF, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return F.random(rng, (rows, cols))


def random_full_rank(F: GF, k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform k×n matrix conditioned on rank k (rejection sampling)."""
    if k > n:
        raise DimensionMismatch("full row rank needs k <= n")
    while True:
        M = random_matrix(F, k, n, rng)
        if rank(F, M) == k:
            return M
