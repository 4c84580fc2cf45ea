"""Gabidulin rank-metric codes with a syndrome / Berlekamp-Massey decoder.

A codeword is the evaluation of f(x) = sum_{i<K} u_i x^(q^i) at N points of
GF(q^nu) that are linearly independent over GF(q).  As a matrix, row j is the
coordinate expansion of symbol j, so the rank distance between two codewords
is the rank of the difference of their N×nu matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import linalg as la
from ..errors import DecodeFailure, DimensionMismatch, ParameterOutOfRange
from ..gf import GF, ExtField, ext_field_create
from .linearized import (
    ext_inverse,
    ext_nullspace,
    ext_solve,
    lp_compose,
    lp_degree,
    lp_eval,
    lp_kernel,
    lp_shift,
    lp_sub,
    lp_scale,
    span_rank,
    subspace_polynomial,
)


@dataclass(frozen=True)
class DecodeResult:
    message: list[int]
    codeword: list[int]
    error_rank: int


@dataclass(eq=False)
class GabidulinCode:
    """Gabidulin code of length N, minimum rank distance d over GF(q^nu)."""

    base: GF
    nu: int
    length: int
    d: int
    points: list[int] | None = None
    ext: ExtField = field(init=False)

    def __post_init__(self):
        N, d = self.length, self.d
        if not 1 <= N <= self.nu:
            raise ParameterOutOfRange(f"need 1 <= N <= nu, got N={N}, nu={self.nu}")
        if not 1 <= d <= N:
            raise ParameterOutOfRange(f"need 1 <= d <= N, got d={d}")
        E = ext_field_create(self.base, self.nu)
        self.ext = E
        if self.points is None:
            self.points = [E.q**j for j in range(N)]  # 1, a, ..., a^(N-1)
        self.points = [int(g) for g in self.points]
        if len(self.points) != N or span_rank(E, self.points) != N:
            raise ParameterOutOfRange("evaluation points must be N independent elements")
        K = self.dimension
        # Moore rows g^[i] for the message positions, inverted on the first K points
        self._frob_points = [[E.frobenius(g, i) for g in self.points] for i in range(K)]
        self._moore_inv = ext_inverse(E, [row[:K] for row in self._frob_points])
        self.h = self._parity_vector()
        self._h_frob = [[E.frobenius(hj, l) for hj in self.h] for l in range(d - 1)]
        self._h_coords = np.array([E.expand(hj) for hj in self.h], dtype=np.int64)

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def dimension(self) -> int:
        return self.length - self.d + 1

    @property
    def capability(self) -> int:
        return (self.d - 1) // 2

    def cardinality(self) -> int:
        return self.ext.order**self.dimension

    def _parity_vector(self) -> list[int]:
        """h with sum_j c_j h_j^[l] = 0 for every codeword c and l < d-1."""
        E, N, K, d = self.ext, self.length, self.dimension, self.d
        if N == 1:
            return [1]
        rows = [[E.frobenius(g, s) for g in self.points] for s in range(-(d - 2), K)]
        ker = ext_nullspace(E, rows, N)
        assert len(ker) == 1
        return ker[0]

    # -- encoding --------------------------------------------------------------
    def encode_symbols(self, message: Sequence[int]) -> list[int]:
        E = self.ext
        if len(message) != self.dimension:
            raise DimensionMismatch(f"message length {len(message)} != {self.dimension}")
        out = []
        for j in range(self.length):
            acc = 0
            for i, u in enumerate(message):
                if u:
                    acc = E.add(acc, E.mul(int(u), self._frob_points[i][j]))
            out.append(acc)
        return out

    def to_matrix(self, symbols: Sequence[int]) -> np.ndarray:
        return np.array([self.ext.expand(int(c)) for c in symbols], dtype=np.int64).reshape(
            len(symbols), self.nu
        )

    def from_matrix(self, M) -> list[int]:
        M = np.asarray(M, dtype=np.int64)
        if M.shape != (self.length, self.nu):
            raise DimensionMismatch(f"expected shape {(self.length, self.nu)}, got {M.shape}")
        return [self.ext.pack([int(x) for x in row]) for row in M]

    def message_of(self, codeword: Sequence[int]) -> list[int]:
        """Invert the encoder on a codeword via the first K positions."""
        E, K = self.ext, self.dimension
        u = []
        for i in range(K):
            acc = 0
            for j in range(K):
                if codeword[j]:
                    acc = E.add(acc, E.mul(int(codeword[j]), self._moore_inv[j][i]))
            u.append(acc)
        return u

    # -- decoding --------------------------------------------------------------
    def syndromes(self, y: Sequence[int]) -> list[int]:
        E = self.ext
        out = []
        for hl in self._h_frob:
            acc = 0
            for yj, hj in zip(y, hl):
                if yj:
                    acc = E.add(acc, E.mul(int(yj), hj))
            out.append(acc)
        return out

    def decode_symbols(
        self, y: Sequence[int], known_span: Sequence[int] = (), erasures=None
    ) -> DecodeResult:
        """Bounded-distance decoding of a received word.

        The received word is modelled as y = c + L X + sum_p Z_p V_p, where
        ``erasures`` is the known N×mu matrix L over GF(q) with unknown values X,
        ``known_span`` spans the known part of the V_p, and the rest of the
        V_p (dimension tau) is unknown.  Decoding succeeds whenever
        mu + delta + 2 tau <= d - 1, delta being the dimension of the known span.
        """
        E, F, N, d = self.ext, self.base, self.length, self.d
        y = [int(v) for v in y]
        if len(y) != N:
            raise DimensionMismatch(f"received length {len(y)} != {N}")
        Lhat = np.zeros((N, 0), dtype=np.int64) if erasures is None else np.asarray(erasures, dtype=np.int64)
        if Lhat.ndim != 2 or Lhat.shape[0] != N:
            raise DimensionMismatch(f"erasure matrix must have {N} rows")
        mu = Lhat.shape[1]
        s = self.syndromes(y)
        if mu == 0 and not any(s):
            return DecodeResult(self.message_of(y), y, 0)
        # erasure locators and the polynomial vanishing on their span
        lam_u = [self._combine_h(Lhat[:, u]) for u in range(mu)]
        sigma = subspace_polynomial(E, lam_u)
        if lp_degree(sigma) != mu:
            raise DecodeFailure("erasure locators are dependent")
        gamma = subspace_polynomial(E, [int(x) for x in known_span])
        delta = lp_degree(gamma)
        n_syn = d - 1 - mu
        if n_syn < 0 or delta > n_syn:
            raise DecodeFailure("erasures and known errors exceed the minimum distance")
        # t_l = sum_m sigma_m^[l] s_{l+m}: syndromes with the erasures removed
        t = []
        for l in range(n_syn):
            acc = 0
            for i, si in enumerate(sigma):
                if si:
                    acc = E.add(acc, E.mul(E.frobenius(si, l), s[l + i]))
            t.append(acc)
        # modified syndromes absorb the known part of the error span
        mod = []
        for l in range(delta, n_syn):
            acc = 0
            for i, gi in enumerate(gamma):
                if gi:
                    acc = E.add(acc, E.mul(gi, E.frobenius(t[l - i], i)))
            mod.append(acc)
        lam, L = berlekamp_massey(E, mod)
        if 2 * L > len(mod):
            raise DecodeFailure("error span too large")
        span_poly = lp_compose(E, lam, gamma)
        tau = lp_degree(span_poly)
        basis = lp_kernel(E, span_poly)
        if len(basis) != tau:
            raise DecodeFailure("error span polynomial does not split")
        # t_l^[-l] = sum_p V_p^[-l] x'_p
        A = [[E.frobenius(ep, -l) for ep in basis] for l in range(n_syn)]
        b = [E.frobenius(t[l], -l) for l in range(n_syn)]
        x = ext_solve(E, A, b) if basis else ([] if not any(b) else None)
        if x is None:
            raise DecodeFailure("inconsistent error values")
        # x'_p = sum_j Z_pj sigma(h_j) with Z over GF(q)
        sh = np.array([E.expand(lp_eval(E, sigma, hj)) for hj in self.h], dtype=np.int64)
        e = [0] * N
        for ep, xp in zip(basis, x):
            row = la.solve(F, sh.T, np.array(E.expand(xp), dtype=np.int64))
            if row is None:
                raise DecodeFailure("error locator outside the code support")
            for j, c in enumerate(row):
                if c:
                    e[j] = E.add(e[j], E.scale(int(c), ep))
        r = [E.sub(a, b) for a, b in zip(y, e)]
        if mu == 0:
            if any(self.syndromes(r)):
                raise DecodeFailure("correction did not produce a codeword")
            return DecodeResult(self.message_of(r), r, span_rank(E, e))
        # r_j = sum_i u_i g_j^[i] + sum_u L_ju X_u
        K = self.dimension
        M = [
            [self._frob_points[i][j] for i in range(K)] + [int(c) for c in Lhat[j]]
            for j in range(N)
        ]
        sol = ext_solve(E, M, r)
        if sol is None:
            raise DecodeFailure("no codeword explains the erasures")
        u = sol[:K]
        c = self.encode_symbols(u)
        return DecodeResult(u, c, span_rank(E, e))

    def _combine_h(self, coeffs) -> int:
        """sum_j coeffs_j h_j for a GF(q) vector."""
        E = self.ext
        acc = 0
        for cj, hj in zip(coeffs, self.h):
            if cj:
                acc = E.add(acc, E.scale(int(cj), hj))
        return acc

    def decode(self, received, known_span: Sequence[int] = (), erasures=None) -> list[int]:
        """Decode an N×nu matrix (or symbol list) to the message."""
        if isinstance(received, np.ndarray) and received.ndim == 2:
            received = self.from_matrix(received)
        return self.decode_symbols(received, known_span, erasures).message


def berlekamp_massey(E: ExtField, s: Sequence[int]) -> tuple[list[int], int]:
    """Shortest linearized Lambda with sum_i Lambda_i s_{r-i}^[i] = 0 for r >= L."""
    lam = [1]
    B = [1]
    L = 0
    for r in range(len(s)):
        delta = 0
        for i, li in enumerate(lam):
            if li and r - i >= 0:
                delta = E.add(delta, E.mul(li, E.frobenius(s[r - i], i)))
        B = lp_shift(E, B)
        if delta == 0:
            continue
        T = lp_sub(E, lam, lp_scale(E, delta, B))
        if 2 * L <= r:
            B = lp_scale(E, E.inv(delta), lam)
            L = r + 1 - L
        lam = T
    return lam, L


def gabidulin_code(q: int, nu: int, length: int, d: int, points=None) -> GabidulinCode:
    from ..matroid import field_for_order

    return GabidulinCode(field_for_order(q), nu, length, d, points)


def gabidulin_encode(code: GabidulinCode, message: Sequence[int]) -> np.ndarray:
    """Codeword as an N×nu matrix over GF(q)."""
    return code.to_matrix(code.encode_symbols(message))


def gabidulin_decode(code: GabidulinCode, received, known_span: Sequence[int] = ()) -> list[int]:
    """Message of the unique codeword within rank distance t; raises DecodeFailure."""
    return code.decode(received, known_span)


def rank_distance(F: GF, A, B) -> int:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    return la.rank(F, la.sub(F, A, B))
