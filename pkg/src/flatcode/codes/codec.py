"""End-to-end error-correcting codecs: lifted Gabidulin codes over RANC / RLNC.

The affine codec maps a received affine flat to a linear subspace with
``extend_received`` and then shares the linear decoding path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import linalg as la
from ..errors import DecodeFailure, DimensionMismatch, ParameterOutOfRange, RankDeficient
from ..matroid import MatroidSpec, affine_header, basis, closure, matroid
from ..protocol import RANC, RLNC, Protocol
from .gabidulin import GabidulinCode, gabidulin_code
from .lifting import extend_received


@dataclass(eq=False)
class FlatCodec:
    kind: Protocol
    q: int
    n: int
    k: int
    d: int
    code: GabidulinCode = field(init=False)

    def __post_init__(self):
        self.kind = Protocol.parse(self.kind)
        if self.kind not in (RANC, RLNC):
            raise ParameterOutOfRange("codecs exist for RLNC and RANC only")
        nu = self.n - self.k + (1 if self.kind is RANC else 0)
        if self.k < 1 or self.k > nu:
            raise ParameterOutOfRange(f"need 1 <= k <= payload width {nu}")
        self.code = gabidulin_code(self.q, nu, self.k, self.d)

    @property
    def matroid(self) -> MatroidSpec:
        return matroid(self.kind, self.q, self.n)

    @property
    def nu(self) -> int:
        return self.code.nu

    @property
    def message_length(self) -> int:
        return self.code.dimension

    def random_message(self, rng: np.random.Generator) -> list[int]:
        return [self.code.ext.random(rng) for _ in range(self.message_length)]

    def header(self) -> np.ndarray:
        return affine_header(self.k) if self.kind is RANC else la.identity(self.k)

    def encode(self, message: Sequence[int]) -> list[tuple]:
        """k packets: rows of (header | Gabidulin codeword matrix)."""
        C = self.code.to_matrix(self.code.encode_symbols(message))
        P = np.hstack([self.header(), C])
        return [tuple(int(x) for x in row) for row in P]

    def received_subspace(self, received: Sequence) -> np.ndarray:
        """Basis of the received flat in the linear frame GF(q)^(k + nu)."""
        m = self.matroid
        if not received:
            raise RankDeficient("nothing received")
        g = closure(m, received)
        if self.kind is RLNC:
            return g.matrix()
        pts = np.array(basis(g), dtype=np.int64)
        return extend_received(m.field, pts, self.k)

    def decode_subspace(self, S) -> list[int]:
        """Decode a linear subspace of GF(q)^(k + nu) given by spanning rows.

        Header columns without a pivot in the rref are treated as erasures,
        rows whose header vanishes as known error directions.
        """
        F = self.code.base
        k = self.k
        S = np.asarray(S, dtype=np.int64)
        if S.ndim != 2 or S.shape[1] != k + self.nu:
            raise DimensionMismatch(f"expected {k + self.nu} columns")
        R, rho, pivots = la.rref(F, S)
        if rho < k:
            raise RankDeficient(f"received rank {rho} < {k}")
        a = sum(1 for p in pivots if p < k)
        H = np.zeros((k, k), dtype=np.int64)
        rhat = np.zeros((k, self.nu), dtype=np.int64)
        for i, p in enumerate(pivots[:a]):
            H[p] = R[i, :k]
            rhat[p] = R[i, k:]
        missing = [j for j in range(k) if j not in pivots[:a]]
        Lhat = la.sub(F, H[:, missing], la.identity(k)[:, missing])
        ext = self.code.ext
        known = [ext.pack([int(x) for x in row]) for row in R[a:rho, k:]]
        return self.code.decode(rhat, known, Lhat if missing else None)

    def decode(self, received: Sequence) -> list[int]:
        return self.decode_subspace(self.received_subspace(received))


def make_codec(kind, q: int, n: int, k: int, d: int) -> FlatCodec:
    return FlatCodec(Protocol.parse(kind), q, n, k, d)


def ranc_codec(q: int, n: int, k: int, d: int) -> FlatCodec:
    return make_codec(RANC, q, n, k, d)


def rlnc_codec(q: int, n: int, k: int, d: int) -> FlatCodec:
    return make_codec(RLNC, q, n, k, d)


def ranc_codec_encode(codec: FlatCodec, message) -> list[tuple]:
    return codec.encode(message)


def ranc_codec_decode(received, codec: FlatCodec) -> list[int]:
    return codec.decode(received)


def rlnc_codec_encode(codec: FlatCodec, message) -> list[tuple]:
    return codec.encode(message)


def rlnc_codec_decode(received, codec: FlatCodec) -> list[int]:
    return codec.decode(received)
