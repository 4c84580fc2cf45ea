"""The three protocol matroids and their flats.

* SAF   - free matroid on all packets of GF(q)^n; a flat is a finite set.
* RLNC  - projective geometry; elements are nonzero leading-1 vectors and a
          flat is a linear subspace, stored as its rref basis.
* RANC  - affine geometry; elements are arbitrary points and a flat is an
          affine subspace, stored as the rref of its homogenized span (1|V).

Flats are immutable and canonical, so ``==`` and ``hash`` compare subspaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .analysis import cardinality, flat_count
from .errors import (
    DimensionMismatch,
    DuplicateRows,
    EmptyFlat,
    InvalidElement,
    KindMismatch,
    RankDeficient,
    DecodeFailure,
    RankOutOfRange,
    TooLarge,
)
from .gf import GF, field_create, is_prime
from .protocol import RANC, RLNC, SAF, Protocol, matroid_rank

Packet = tuple


def field_for_order(q: int) -> GF:
    """GF(q) for q prime or a power of two."""
    if q >= 2 and is_prime(q):
        return field_create(q, 1)
    if q >= 2 and q & (q - 1) == 0:
        return field_create(2, q.bit_length() - 1)
    raise ValueError(f"unsupported field order {q}")


@dataclass(frozen=True)
class MatroidSpec:
    kind: Protocol
    q: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Protocol.parse(self.kind))
        if self.n < 1:
            raise ValueError("packet length must be positive")
        field_for_order(self.q)

    @property
    def field(self) -> GF:
        return field_for_order(self.q)

    @property
    def rank(self) -> int:
        return matroid_rank(self.kind, self.q, self.n)

    @property
    def width(self) -> int:
        """Columns of the stored flat representation."""
        return self.n + 1 if self.kind is RANC else self.n

    def __repr__(self):
        name = {SAF: "S", RLNC: "L", RANC: "A"}[self.kind]
        return f"{name}({self.q},{self.n})"


def matroid(kind, q: int, n: int) -> MatroidSpec:
    return MatroidSpec(Protocol.parse(kind), q, n)


@dataclass(frozen=True)
class Flat:
    matroid: MatroidSpec
    rows: tuple

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def kind(self) -> Protocol:
        return self.matroid.kind

    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.matroid.width)

    def __len__(self):
        return cardinality(self.kind, self.matroid.q, self.rank)

    def __repr__(self):
        return f"{type(self).__name__}({self.matroid!r}, rank={self.rank}, rows={list(self.rows)})"


class SubsetFlat(Flat):
    """Sorted tuple of distinct packets."""


class LinearFlat(Flat):
    """Rref basis of a linear subspace (no zero rows)."""


class AffineFlat(Flat):
    """Rref of the homogenized span; column 0 is the first pivot."""


_FLAT_CLASS = {SAF: SubsetFlat, RLNC: LinearFlat, RANC: AffineFlat}


def _rows_tuple(M: np.ndarray) -> tuple:
    return tuple(tuple(int(x) for x in row) for row in M)


def _make(m: MatroidSpec, rows: tuple) -> Flat:
    return _FLAT_CLASS[m.kind](m, rows)


def empty_flat(m: MatroidSpec) -> Flat:
    return _make(m, ())


def _check_same(f: Flat, g: Flat) -> None:
    if f.matroid != g.matroid:
        raise KindMismatch(f"{f.matroid!r} vs {g.matroid!r}")


# -- elements -------------------------------------------------------------------

def normalize_projective(F: GF, v) -> tuple:
    """Scale a nonzero vector so its leading nonzero symbol is 1."""
    v = np.asarray(v, dtype=np.int64)
    nz = np.flatnonzero(v)
    if nz.size == 0:
        raise InvalidElement("the zero vector is not a projective point")
    lead = int(v[nz[0]])
    if lead != 1:
        v = F.vmul(v, F.inv(lead))
    return tuple(int(x) for x in v)


def validate_element(m: MatroidSpec, e) -> tuple:
    e = tuple(int(x) for x in e)
    if len(e) != m.n:
        raise InvalidElement(f"packet length {len(e)} != {m.n}")
    if any(not 0 <= x < m.q for x in e):
        raise InvalidElement("packet symbol out of range")
    if m.kind is RLNC:
        nz = [x for x in e if x]
        if not nz:
            raise InvalidElement("zero packet is not an RLNC element")
        if nz[0] != 1:
            raise InvalidElement("RLNC elements need leading symbol 1")
    return e


def _element_matrix(m: MatroidSpec, elements: Sequence) -> np.ndarray:
    """Matrix whose row space represents the elements (homogenized for RANC)."""
    rows = [validate_element(m, e) for e in elements]
    V = np.array(rows, dtype=np.int64).reshape(len(rows), m.n)
    if m.kind is RANC:
        V = np.hstack([np.ones((len(rows), 1), dtype=np.int64), V])
    return V


def rank_of(m: MatroidSpec, elements: Iterable) -> int:
    """Matroid rank of a collection of packets."""
    elements = list(elements)
    if m.kind is SAF:
        return len({validate_element(m, e) for e in elements})
    if not elements:
        return 0
    return la.rank(m.field, _element_matrix(m, elements))


def closure(m: MatroidSpec, elements: Iterable) -> Flat:
    elements = list(elements)
    if m.kind is SAF:
        return _make(m, tuple(sorted({validate_element(m, e) for e in elements})))
    if not elements:
        return empty_flat(m)
    return _make(m, _rows_tuple(la.row_basis(m.field, _element_matrix(m, elements))))


def flat_from_span(m: MatroidSpec, M) -> Flat:
    """Flat whose stored span is rowspace(M) (homogenized rows for RANC).

    For RANC, a span without a column-0 pivot holds no point and is rejected.
    """
    if m.kind is SAF:
        raise KindMismatch("SAF flats have no span representation")
    M = la.as_matrix(m.field, M, cols=m.width)
    if M.shape[1] != m.width:
        raise DimensionMismatch(f"expected {m.width} columns")
    B = la.row_basis(m.field, M)
    if m.kind is RANC and B.shape[0] and B[0, 0] != 1:
        raise InvalidElement("span has no point in the affine chart")
    return _make(m, _rows_tuple(B))


def contains(f: Flat, e) -> bool:
    m = f.matroid
    e = validate_element(m, e)
    if m.kind is SAF:
        return e in f.rows
    if f.rank == 0:
        return False
    v = np.array(([1] if m.kind is RANC else []) + list(e), dtype=np.int64)
    return la.rank(m.field, np.vstack([f.matrix(), v])) == f.rank


def flats_equal(f: Flat, g: Flat) -> bool:
    _check_same(f, g)
    return f.rows == g.rows


def is_subflat(g: Flat, f: Flat) -> bool:
    """True when g ⊆ f."""
    _check_same(f, g)
    if g.rank == 0:
        return True
    if g.rank > f.rank:
        return False
    if f.matroid.kind is SAF:
        return set(g.rows) <= set(f.rows)
    return la.stack_rank(f.matroid.field, f.matrix(), g.matrix()) == f.rank


def basis(f: Flat) -> list[tuple]:
    """A basis of f made of matroid elements."""
    m = f.matroid
    if m.kind is not RANC:
        return list(f.rows)
    if f.rank == 0:
        return []
    F = m.field
    M = f.matrix()
    p0 = M[0, 1:]
    pts = [tuple(int(x) for x in p0)]
    for row in M[1:]:
        pts.append(tuple(int(x) for x in F.vadd(p0, row[1:])))
    return pts


def join(f: Flat, g: Flat) -> Flat:
    """Closure of f ∪ g."""
    _check_same(f, g)
    m = f.matroid
    if m.kind is SAF:
        return _make(m, tuple(sorted(set(f.rows) | set(g.rows))))
    if f.rank == 0:
        return g
    if g.rank == 0:
        return f
    return _make(m, _rows_tuple(la.row_basis(m.field, np.vstack([f.matrix(), g.matrix()]))))


def meet(f: Flat, g: Flat) -> Flat:
    """f ∩ g; parallel affine flats meet in the empty flat."""
    _check_same(f, g)
    m = f.matroid
    if m.kind is SAF:
        return _make(m, tuple(sorted(set(f.rows) & set(g.rows))))
    if f.rank == 0 or g.rank == 0:
        return empty_flat(m)
    inter = la.intersect_rowspaces(m.field, f.matrix(), g.matrix())
    if m.kind is RANC and (inter.shape[0] == 0 or inter[0, 0] != 1):
        return empty_flat(m)
    return _make(m, _rows_tuple(inter))


def union_rank(f: Flat, g: Flat) -> int:
    _check_same(f, g)
    m = f.matroid
    if m.kind is SAF:
        return len(set(f.rows) | set(g.rows))
    if f.rank == 0 or g.rank == 0:
        return f.rank + g.rank
    return la.stack_rank(m.field, f.matrix(), g.matrix())


# -- sampling ---------------------------------------------------------------------

def sample_element(f: Flat, rng: np.random.Generator) -> tuple:
    """Uniform element of the flat."""
    m = f.matroid
    if f.rank == 0:
        raise EmptyFlat("cannot sample from the empty flat")
    if m.kind is SAF:
        return f.rows[int(rng.integers(f.rank))]
    F = m.field
    M = f.matrix()
    if m.kind is RLNC:
        while True:
            c = F.random(rng, f.rank)
            if c.any():
                break
        return normalize_projective(F, la.matmul(F, c[None, :], M)[0])
    c = np.concatenate([[1], F.random(rng, f.rank - 1)]).astype(np.int64)
    v = la.matmul(F, c[None, :], M)[0]
    return tuple(int(x) for x in v[1:])


def random_element(m: MatroidSpec, rng: np.random.Generator) -> tuple:
    """Uniform element of the whole ground set."""
    F = m.field
    if m.kind is RLNC:
        while True:
            v = F.random(rng, m.n)
            if v.any():
                return normalize_projective(F, v)
    return tuple(int(x) for x in F.random(rng, m.n))


def random_flat(m: MatroidSpec, k: int, rng: np.random.Generator) -> Flat:
    """Random rank-k flat, built as the closure of random elements."""
    if not 0 <= k <= m.rank:
        raise RankOutOfRange(f"rank {k} outside [0, {m.rank}]")
    f = empty_flat(m)
    while f.rank < k:
        e = random_element(m, rng)
        if f.rank == 0 or not contains(f, e):
            f = join(f, closure(m, [e]))
    return f


def flat_counts(m: MatroidSpec, k: int) -> tuple[int, int]:
    """(N_k, C_k) for rank-k flats."""
    return flat_count(m.kind, m.q, m.n, k), cardinality(m.kind, m.q, k)


# -- enumeration (small matroids only) ------------------------------------------

def ground_set(m: MatroidSpec, limit: int = 1 << 16) -> list[tuple]:
    total = m.q**m.n
    if total > limit:
        raise TooLarge(f"{total} packets exceed the enumeration limit")
    pts = list(itertools.product(range(m.q), repeat=m.n))
    if m.kind is RLNC:
        pts = [p for p in pts if any(p) and next(x for x in p if x) == 1]
    return pts


def _rref_patterns(q: int, k: int, width: int, first_pivot_zero: bool):
    """Every k×width rref matrix of rank k over the integers 0..q-1."""
    cols = range(width)
    for piv in itertools.combinations(cols, k):
        if first_pivot_zero and (k == 0 or piv[0] != 0):
            continue
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, width) if j not in piv]
        for vals in itertools.product(range(q), repeat=len(free)):
            M = [[0] * width for _ in range(k)]
            for i, p in enumerate(piv):
                M[i][p] = 1
            for (i, j), v in zip(free, vals):
                M[i][j] = v
            yield tuple(tuple(r) for r in M)


def enumerate_flats(m: MatroidSpec, k: int, limit: int = 20000) -> list[Flat]:
    """All flats of rank k, in a deterministic order."""
    n_k = flat_counts(m, k)[0]
    if n_k > limit:
        raise TooLarge(f"{n_k} flats of rank {k} exceed the limit {limit}")
    if k == 0:
        return [empty_flat(m)]
    if m.kind is SAF:
        return [_make(m, c) for c in itertools.combinations(ground_set(m), k)]
    if m.kind is RLNC:
        return [_make(m, M) for M in _rref_patterns(m.q, k, m.n, False)]
    return [_make(m, M) for M in _rref_patterns(m.q, k, m.n + 1, True)]


def flat_elements(f: Flat) -> list[tuple]:
    """Every element of f (small flats only)."""
    m = f.matroid
    if m.kind is SAF:
        return list(f.rows)
    if f.rank == 0:
        return []
    F = m.field
    M = f.matrix()
    out = set()
    if m.kind is RLNC:
        for c in itertools.product(range(m.q), repeat=f.rank):
            if any(c):
                out.add(normalize_projective(F, la.matmul(F, np.array([c]), M)[0]))
    else:
        for c in itertools.product(range(m.q), repeat=f.rank - 1):
            v = la.matmul(F, np.array([(1,) + c]), M)[0]
            out.add(tuple(int(x) for x in v[1:]))
    return sorted(out)


# -- uncoded protocol: canonical bases --------------------------------------------

@dataclass(frozen=True)
class CanonicalBasisMessage:
    message: np.ndarray
    packets: tuple

    @property
    def k(self) -> int:
        return len(self.packets)


def payload_width(m: MatroidSpec, k: int) -> int:
    if m.kind is SAF:
        return m.n
    if m.kind is RLNC:
        return m.n - k
    return m.n - k + 1


def affine_header(k: int) -> np.ndarray:
    """I'_k: row 0 is zero, row i has a 1 in column i-1."""
    H = np.zeros((k, max(k - 1, 0)), dtype=np.int64)
    for i in range(1, k):
        H[i, i - 1] = 1
    return H


def encode_message(m: MatroidSpec, message) -> CanonicalBasisMessage:
    """Systematic canonical basis of the flat carrying ``message``."""
    M = la.as_matrix(m.field, message)
    k = M.shape[0]
    if k < 1 or k > m.rank:
        raise RankOutOfRange(f"message with {k} rows cannot fit rank {m.rank}")
    width = payload_width(m, k)
    if M.shape[1] != width:
        raise DimensionMismatch(f"{m.kind} with k={k} needs payload width {width}, got {M.shape[1]}")
    if m.kind is SAF:
        if len({tuple(r) for r in M.tolist()}) != k:
            raise DuplicateRows("SAF message rows must be distinct")
        P = M
    elif m.kind is RLNC:
        P = np.hstack([la.identity(k), M])
    else:
        P = np.hstack([affine_header(k), M])
    return CanonicalBasisMessage(M.copy(), _rows_tuple(P))


def decode_message(m: MatroidSpec, packets: Sequence, k: int | None = None) -> np.ndarray:
    """Recover the message matrix from any set of packets spanning the sent flat.

    ``k`` is the rank of the sent flat; by default the rank of the packets.
    SAF returns the distinct packets in sorted order, the canonical order of
    a subset flat.
    """
    f = closure(m, packets)
    if k is None:
        k = f.rank
    if f.rank < k:
        raise RankDeficient(f"received rank {f.rank} < {k}")
    if f.rank > k:
        raise DecodeFailure(f"received rank {f.rank} > {k}")
    if k == 0:
        raise RankDeficient("nothing received")
    R = f.matrix()
    if m.kind is SAF:
        return R
    if not np.array_equal(R[:, :k], la.identity(k)):
        raise DecodeFailure("received flat is not a lifting (header not invertible)")
    Mp = R[:, k:].copy()
    if m.kind is RANC:
        Mp[1:] = m.field.vadd(Mp[1:], Mp[0][None, :])
    return Mp


def decodable_indices(m: MatroidSpec, received: Sequence, canonical) -> set[int]:
    """Indices i whose canonical packet lies in the closure of ``received``."""
    packets = canonical.packets if isinstance(canonical, CanonicalBasisMessage) else canonical
    if not received:
        return set()
    g = closure(m, received)
    return {i for i, p in enumerate(packets) if contains(g, p)}
