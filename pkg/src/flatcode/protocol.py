from __future__ import annotations

from enum import Enum


class Protocol(str, Enum):
    """Transmission protocol, one per matroid family."""

    SAF = "saf"  # store-and-forward: free matroid
    RLNC = "rlnc"  # linear coding: projective geometry
    RANC = "ranc"  # affine coding: affine geometry

    @classmethod
    def parse(cls, value) -> "Protocol":
        if isinstance(value, Protocol):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown protocol {value!r}; expected saf, rlnc or ranc") from None

    def __str__(self):
        return self.value


SAF, RLNC, RANC = Protocol.SAF, Protocol.RLNC, Protocol.RANC


def matroid_rank(kind: Protocol, q: int, n: int) -> int:
    """Rank r of the protocol matroid on packets of length n over GF(q)."""
    kind = Protocol.parse(kind)
    if kind is SAF:
        return q**n
    if kind is RLNC:
        return n
    return n + 1
