"""Liftings of payload matrices into flats, and the affine-to-linear map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import linalg as la
from ..errors import DimensionMismatch
from ..gf import GF
from ..matroid import Flat, MatroidSpec, affine_header, closure, flat_from_span, matroid
from ..protocol import RANC, RLNC, SAF, Protocol


@dataclass(frozen=True)
class LiftedCodeword:
    kind: Protocol
    payload: np.ndarray
    flat: Flat


def linear_lift(m: MatroidSpec, M) -> Flat:
    """Row space of (I_k | M)."""
    if m.kind is not RLNC:
        raise DimensionMismatch("linear lifting lives in the projective geometry")
    M = la.as_matrix(m.field, M)
    k = M.shape[0]
    if M.shape[1] != m.n - k:
        raise DimensionMismatch(f"payload must be {k}×{m.n - k}")
    return flat_from_span(m, np.hstack([la.identity(k), M]))


def affine_lift(m: MatroidSpec, M) -> Flat:
    """Affine closure of the rows of (I'_k | M)."""
    if m.kind is not RANC:
        raise DimensionMismatch("affine lifting lives in the affine geometry")
    M = la.as_matrix(m.field, M)
    k = M.shape[0]
    if M.shape[1] != m.n - k + 1:
        raise DimensionMismatch(f"payload must be {k}×{m.n - k + 1}")
    return closure(m, [tuple(r) for r in np.hstack([affine_header(k), M]).tolist()])


def subset_lift(q: int, n: int, l: int, word) -> Flat:
    """{i q^(n-l) + X_i}: a length-q^l word over [q^(n-l)] as a subset of [q^n].

    Element v of [q^n] is the packet of its base-q digits, most significant first.
    """
    word = [int(x) for x in word]
    if len(word) != q**l:
        raise DimensionMismatch(f"word length must be q^l = {q**l}")
    if any(not 0 <= x < q ** (n - l) for x in word):
        raise ValueError("word symbols must lie in [q^(n-l)]")
    m = matroid(SAF, q, n)
    pts = []
    for i, x in enumerate(word):
        v = i * q ** (n - l) + x
        digits = []
        for _ in range(n):
            v, r = divmod(v, q)
            digits.append(r)
        pts.append(tuple(reversed(digits)))
    return closure(m, pts)


def lift(kind, payload, q: int | None = None, n: int | None = None, l: int | None = None) -> LiftedCodeword:
    """Lift a payload with the protocol's systematic lifting.

    RLNC and RANC take a k×w matrix plus (q, n); SAF takes a word plus (q, n, l).
    """
    kind = Protocol.parse(kind)
    if kind is SAF:
        flat = subset_lift(q, n, l, payload)
        return LiftedCodeword(kind, np.asarray(payload, dtype=np.int64), flat)
    m = matroid(kind, q, n)
    P = la.as_matrix(m.field, payload)
    flat = linear_lift(m, P) if kind is RLNC else affine_lift(m, P)
    return LiftedCodeword(kind, P, flat)


def extend_received(F: GF, M, k: int) -> np.ndarray:
    """Prepend the column 1 - sum_{i<k-1} col_i to the points in M.

    Row-wise this is (1 | M) X, mapping an affine flat of GF(q)^n onto a linear
    subspace of GF(q)^(n+1); the affine lifting of C goes to rowspace(I_k | C).
    """
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[1] < k - 1:
        raise DimensionMismatch(f"need at least {k - 1} columns")
    col = np.ones(M.shape[0], dtype=np.int64)
    if k > 1:
        col = F.vsub(col, F.vsum(M[:, : k - 1], axis=1))
    return np.hstack([col[:, None], M])


def homogenizing_matrix(F: GF, n: int, k: int) -> np.ndarray:
    """X = (v_k^T | I'_{n+1}) with v_k = (1, -1, ..., -1, 0, ..., 0) (k nonzeros)."""
    X = np.zeros((n + 1, n + 1), dtype=np.int64)
    X[0, 0] = 1
    for i in range(1, k):
        X[i, 0] = F.neg(1)
    for i in range(1, n + 1):
        X[i, i] = 1
    return X


def affine_to_linear(f: Flat, k: int) -> Flat:
    """The linear subspace r(f) of GF(q)^(n+1) attached to an affine flat."""
    m = f.matroid
    if m.kind is not RANC:
        raise DimensionMismatch("affine_to_linear needs an affine flat")
    target = matroid(RLNC, m.q, m.n + 1)
    if f.rank == 0:
        return closure(target, [])
    X = homogenizing_matrix(m.field, m.n, k)
    return flat_from_span(target, la.matmul(m.field, f.matrix(), X))
