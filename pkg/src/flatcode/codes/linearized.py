"""Linearized polynomials and dense linear algebra over an extension field.

A linearized polynomial is a coefficient list ``[a_0, ..., a_t]`` standing for
sum_i a_i x^(q^i); composition is the ring product.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .. import linalg as la
from ..errors import DimensionMismatch
from ..gf import ExtField

LinPoly = list


def lp_trim(P: LinPoly) -> LinPoly:
    P = list(P)
    while P and P[-1] == 0:
        P.pop()
    return P


def lp_degree(P: LinPoly) -> int:
    """q-degree; -1 for the zero polynomial."""
    return len(lp_trim(P)) - 1


def lp_eval(E: ExtField, P: LinPoly, x: int) -> int:
    acc = 0
    for i, a in enumerate(P):
        if a:
            acc = E.add(acc, E.mul(a, E.frobenius(x, i)))
    return acc


def lp_add(E: ExtField, A: LinPoly, B: LinPoly) -> LinPoly:
    n = max(len(A), len(B))
    A = list(A) + [0] * (n - len(A))
    B = list(B) + [0] * (n - len(B))
    return lp_trim([E.add(a, b) for a, b in zip(A, B)])


def lp_sub(E: ExtField, A: LinPoly, B: LinPoly) -> LinPoly:
    return lp_add(E, A, [E.neg(b) for b in B])


def lp_scale(E: ExtField, c: int, A: LinPoly) -> LinPoly:
    """Left scalar multiple c * A(x)."""
    return lp_trim([E.mul(c, a) for a in A])


def lp_compose(E: ExtField, A: LinPoly, B: LinPoly) -> LinPoly:
    """(A ∘ B)(x) = A(B(x))."""
    if not A or not B:
        return []
    out = [0] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        if a:
            for j, b in enumerate(B):
                if b:
                    out[i + j] = E.add(out[i + j], E.mul(a, E.frobenius(b, i)))
    return lp_trim(out)


def lp_shift(E: ExtField, B: LinPoly) -> LinPoly:
    """x^q ∘ B."""
    return [0] + [E.frobenius(b, 1) for b in B]


def subspace_polynomial(E: ExtField, elements: Sequence[int]) -> LinPoly:
    """Monic linearized polynomial whose roots are exactly span_GF(q)(elements).

    Dependent generators are skipped, so the q-degree equals the span dimension.
    """
    P = [1]
    for d in elements:
        v = lp_eval(E, P, d)
        if v:
            # (x^q - v^(q-1) x) vanishes on v, hence the product vanishes on d
            factor = [E.neg(E.pow(v, E.q - 1)), 1]
            P = lp_compose(E, factor, P)
    return P


def gf_basis(E: ExtField) -> list[int]:
    """Polynomial basis 1, a, ..., a^(m-1) as field integers."""
    return [E.q**j for j in range(E.m)]


def lp_matrix(E: ExtField, P: LinPoly):
    """GF(q) matrix of x -> P(x) in the polynomial basis (row j = image of basis j)."""
    return np.array([E.expand(lp_eval(E, P, b)) for b in gf_basis(E)], dtype=np.int64)


def lp_kernel(E: ExtField, P: LinPoly) -> list[int]:
    """GF(q)-basis of the root space of P."""
    M = lp_matrix(E, P)
    K = la.left_nullspace(E.base, M)
    return [E.pack([int(x) for x in row]) for row in K]


def span_rank(E: ExtField, elements: Sequence[int]) -> int:
    """Dimension over GF(q) of the span of extension elements."""
    if not elements:
        return 0
    return la.rank(E.base, np.array([E.expand(x) for x in elements], dtype=np.int64))


# -- linear algebra over the extension field -----------------------------------

def ext_rref(E: ExtField, M: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    R = [list(r) for r in M]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = E.inv(R[r][c])
        R[r] = [E.mul(inv, x) for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [E.sub(a, E.mul(f, b)) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def ext_solve(E: ExtField, A: list[list[int]], b: Sequence[int]) -> list[int] | None:
    """One solution x of A x = b, or None when inconsistent."""
    if len(A) != len(b):
        raise DimensionMismatch("A and b disagree on row count")
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = ext_rref(E, aug)
    if piv and piv[-1] == n:
        return None
    x = [0] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def ext_nullspace(E: ExtField, A: list[list[int]], n: int) -> list[list[int]]:
    """Basis of {x : A x = 0} for an r×n matrix A."""
    if not A:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    R, piv = ext_rref(E, A)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for i, p in enumerate(piv):
            x[p] = E.neg(R[i][f])
        out.append(x)
    return out


def ext_inverse(E: ExtField, A: list[list[int]]) -> list[list[int]]:
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, piv = ext_rref(E, aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in R[:n]]
