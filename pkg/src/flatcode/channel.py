"""Operator channel on the lattice of flats and its two distances."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg as la
from .errors import RankOutOfRange, TooLarge
from .matroid import (
    Flat,
    MatroidSpec,
    _check_same,
    _make,
    _rows_tuple,
    closure,
    contains,
    empty_flat,
    ground_set,
    join,
    random_element,
    union_rank,
)
from .protocol import RANC, RLNC, SAF


@dataclass(frozen=True)
class FlatDistance:
    delta: int  # insertions: rk(f ∪ g) - rk(f)
    eps: int  # deletions: rk(f ∪ g) - rk(g)

    @property
    def d_L(self) -> int:
        return self.delta + self.eps

    @property
    def d_M(self) -> int:
        return max(self.delta, self.eps)


def distance(f: Flat, g: Flat) -> FlatDistance:
    """Insertions and deletions taking f to g along the union path."""
    _check_same(f, g)
    u = union_rank(f, g)
    return FlatDistance(u - f.rank, u - g.rank)


def lattice_distance(f: Flat, g: Flat) -> int:
    return distance(f, g).d_L


def modified_distance(f: Flat, g: Flat) -> int:
    return distance(f, g).d_M


# -- random moves on the lattice ---------------------------------------------------

def random_superflat(f: Flat, rng: np.random.Generator) -> Flat:
    """Adjoin a uniform element outside f and take the closure."""
    m = f.matroid
    if f.rank >= m.rank:
        raise RankOutOfRange("the whole ground set has no superflat")
    while True:
        e = random_element(m, rng)
        if f.rank == 0 or not contains(f, e):
            return join(f, closure(m, [e]))


def random_subflat(f: Flat, rng: np.random.Generator) -> Flat:
    """Uniform flat of rank rk(f) - 1 contained in f."""
    m = f.matroid
    if f.rank == 0:
        raise RankOutOfRange("the empty flat has no subflat")
    if f.rank == 1:
        return empty_flat(m)
    if m.kind is SAF:
        drop = int(rng.integers(f.rank))
        return _make(m, f.rows[:drop] + f.rows[drop + 1 :])
    F = m.field
    k = f.rank
    while True:
        c = F.random(rng, k)
        if not c.any():
            continue
        # for RANC the functional x -> x_0 cuts out the directions, not a flat
        if m.kind is RANC and not c[1:].any():
            continue
        break
    K = la.nullspace(F, c[None, :])
    sub = la.row_basis(F, la.matmul(F, K, f.matrix()))
    return _make(m, _rows_tuple(sub))


def apply_operator_channel(
    f: Flat, delta: int, eps: int, rng: np.random.Generator
) -> Flat:
    """delta random insertions followed by eps random deletions."""
    m = f.matroid
    if delta < 0 or eps < 0:
        raise ValueError("delta and eps must be non-negative")
    if f.rank + delta > m.rank:
        raise RankOutOfRange(f"rank {f.rank} + {delta} insertions exceeds {m.rank}")
    if f.rank + delta - eps < 0:
        raise RankOutOfRange(f"rank {f.rank} + {delta} - {eps} is negative")
    g = f
    for _ in range(delta):
        g = random_superflat(g, rng)
    for _ in range(eps):
        g = random_subflat(g, rng)
    return g


def corrupt_packets(
    m: MatroidSpec, packets, t: int, rng: np.random.Generator, loss: int = 0
) -> list[tuple]:
    """Drop ``loss`` packets, append t uniform random packets, shuffle."""
    packets = [tuple(p) for p in packets]
    if t < 0 or not 0 <= loss <= len(packets):
        raise ValueError("need t >= 0 and 0 <= loss <= len(packets)")
    if loss:
        keep = rng.choice(len(packets), size=len(packets) - loss, replace=False)
        packets = [packets[i] for i in sorted(keep)]
    out = packets + [random_element(m, rng) for _ in range(t)]
    order = rng.permutation(len(out))
    return [out[i] for i in order]


# -- exhaustive lattice (test oracle) --------------------------------------------

class FlatLattice:
    """All flats of a small matroid with the cover graph of the lattice."""

    def __init__(self, m: MatroidSpec, limit: int = 10000):
        self.matroid = m
        elements = ground_set(m)
        bottom = empty_flat(m)
        levels = [[bottom]]
        index = {bottom: 0}
        flats = [bottom]
        up: list[set[int]] = [set()]
        while True:
            nxt = []
            for f in levels[-1]:
                i = index[f]
                for e in elements:
                    if f.rank and contains(f, e):
                        continue
                    g = join(f, closure(m, [e]))
                    j = index.get(g)
                    if j is None:
                        j = len(flats)
                        index[g] = j
                        flats.append(g)
                        up.append(set())
                        nxt.append(g)
                        if len(flats) > limit:
                            raise TooLarge(f"more than {limit} flats")
                    up[i].add(j)
            if not nxt:
                break
            levels.append(nxt)
        self.flats = flats
        self.index = index
        self.levels = levels
        adj = [set(s) for s in up]
        for i, s in enumerate(up):
            for j in s:
                adj[j].add(i)
        self.adj = adj

    def __len__(self):
        return len(self.flats)

    def bfs(self, f: Flat) -> list[int]:
        """Shortest-path distances from f to every flat."""
        src = self.index[f]
        dist = [-1] * len(self.flats)
        dist[src] = 0
        queue = deque([src])
        while queue:
            i = queue.popleft()
            for j in self.adj[i]:
                if dist[j] < 0:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return dist

    def distance(self, f: Flat, g: Flat) -> int:
        return self.bfs(f)[self.index[g]]


@lru_cache(maxsize=16)
def flat_lattice(m: MatroidSpec, limit: int = 10000) -> FlatLattice:
    return FlatLattice(m, limit)


def lattice_bfs_distance(f: Flat, g: Flat, limit: int = 10000) -> int:
    """Shortest path between f and g in the cover graph (exhaustive)."""
    _check_same(f, g)
    m = f.matroid
    if m.q**m.n > 1 << 12:
        raise TooLarge("ground set too large to enumerate the lattice")
    return flat_lattice(m, limit).distance(f, g)
