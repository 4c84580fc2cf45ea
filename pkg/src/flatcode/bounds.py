"""Bounds on the size of matroid codes, and exact optima for tiny matroids.

A(M, k, d) is the largest set of rank-k flats with pairwise modified lattice
distance at least d.  ``code_bounds`` evaluates the closed forms for the affine
geometry A(q, n); ``exact_max_code`` solves the clique problem outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .analysis import flat_count, gaussian_binomial, kq_interval
from .errors import ParameterOutOfRange, TooLarge
from .matroid import (
    Flat,
    MatroidSpec,
    closure,
    contains,
    enumerate_flats,
    flat_counts,
    ground_set,
    is_subflat,
    union_rank,
)
from .protocol import RANC


@dataclass(frozen=True)
class BoundsReport:
    q: int
    n: int
    k: int
    d: int
    lower_lifted: int  # size of the affinely lifted Gabidulin code
    upper_kq: int  # the same power of q divided by K_q
    johnson_contraction: int  # q^(n-k+1) times a projective upper bound at rank k-1
    johnson_chain: int  # iterated restriction to hyperplanes
    singleton: int
    exact: int | None = None

    @property
    def upper(self) -> int:
        """Tightest of the upper bounds."""
        return min(self.upper_kq, self.johnson_contraction, self.johnson_chain, self.singleton)

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "lower_lifted": self.lower_lifted,
            "upper_kq": self.upper_kq,
            "johnson_contraction": self.johnson_contraction,
            "johnson_chain": self.johnson_chain,
            "singleton": self.singleton,
            "exact": self.exact,
        }


def floor_over_kq(q: int, numerator: int) -> int:
    """floor(numerator / K_q), refining the bracket on K_q until the floor is certain."""
    terms = 16
    while True:
        lo, hi = kq_interval(q, terms)
        a = math.floor(Fraction(numerator) / hi)
        b = math.floor(Fraction(numerator) / lo)
        if a == b:
            return a
        terms *= 2
        if terms > 1 << 14:
            raise ArithmeticError("could not separate numerator / K_q from an integer")


def _exponent(q_rows: int, q_cols: int, k: int, d: int) -> int:
    return min(q_rows * (k - d + 1), k * (q_cols - d + 1))


def projective_upper(q: int, n: int, k: int, d: int) -> int:
    """Upper bound on A(L(q, n), k, d): floor(K_q^-1 q^min{k(n-k-d+1), (n-k)(k-d+1)})."""
    if k < 0 or k > n:
        return 0
    if d <= 1:
        return gaussian_binomial(n, k, q)
    if d > min(k, n - k):
        return 1
    e = min(k * (n - k - d + 1), (n - k) * (k - d + 1))
    return floor_over_kq(q, q**e)


def johnson_chain(q: int, n: int, k: int, d: int) -> int:
    """Iterate A(A(q, m), k, d) <= ceil(q (q^m - 1)/(q^(m-k+1) - 1) A(A(q, m-1), k, d)).

    The innermost level m = k + d - 2 has d > m + 1 - k, hence A = 1.
    """
    val = 1
    for m in range(k + d - 1, n + 1):
        val = -((-q * (q**m - 1) * val) // (q ** (m - k + 1) - 1))
    return val


def code_bounds(q: int, n: int, k: int, d: int, exact: int | None = None) -> BoundsReport:
    """Lower and upper bounds on A(A(q, n), k, d)."""
    if q < 2 or n < 1:
        raise ParameterOutOfRange("need q >= 2 and n >= 1")
    if not 1 <= k <= n + 1 or d < 1:
        raise ParameterOutOfRange("need 1 <= k <= n + 1 and d >= 1")
    r = n + 1
    if d == 1:
        n_k = flat_count(RANC, q, n, k)
        return BoundsReport(q, n, k, d, n_k, n_k, n_k, n_k, n_k, exact)
    if d > min(k, r - k):
        return BoundsReport(q, n, k, d, 1, 1, 1, 1, 1, exact)
    e = min((n - k + 1) * (k - d + 1), k * (n - k - d + 2))
    lower = q**e
    upper = floor_over_kq(q, q**e)
    contraction = q ** (n - k + 1) * projective_upper(q, n, k - 1, d)
    chain = johnson_chain(q, n, k, d)
    # rank-(k+d-1) flats through a fixed rank-(d-1) flat
    singleton = gaussian_binomial(n - d + 2, k, q)
    return BoundsReport(q, n, k, d, lower, upper, contraction, chain, singleton, exact)


# -- exact optimum by maximum clique -----------------------------------------------

def distance_graph(flats: list[Flat], d: int) -> list[int]:
    """Adjacency bitsets: i ~ j when d_M(f_i, f_j) >= d (all flats of one rank)."""
    n = len(flats)
    adj = [0] * n
    for i in range(n):
        fi = flats[i]
        for j in range(i + 1, n):
            if union_rank(fi, flats[j]) - fi.rank >= d:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def max_clique(adj: list[int]) -> int:
    """Size of a maximum clique; branch and bound with a greedy colouring bound."""
    n = len(adj)
    if n == 0:
        return 0
    # relabel so that high-degree vertices get low bit positions
    order = sorted(range(n), key=lambda v: (-bin(adj[v]).count("1"), v))
    pos = {v: i for i, v in enumerate(order)}
    A = [0] * n
    for v in range(n):
        bits = adj[v]
        row = 0
        while bits:
            low = bits & -bits
            row |= 1 << pos[low.bit_length() - 1]
            bits ^= low
        A[pos[v]] = row
    best = 1

    def colour(P: int):
        out = []
        c = 0
        while P:
            c += 1
            avail = P
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                out.append((v, c))
                P ^= low
                avail &= ~low & ~A[v]
        return out

    def expand(P: int, size: int):
        nonlocal best
        for v, c in reversed(colour(P)):
            if size + c <= best:
                return
            newP = P & A[v]
            if newP:
                expand(newP, size + 1)
            elif size + 1 > best:
                best = size + 1
            P &= ~(1 << v)

    expand((1 << n) - 1, 0)
    return best


def exact_max_code(m: MatroidSpec, k: int, d: int, limit: int = 600) -> int:
    """A(m, k, d) by exhaustive clique search over the rank-k flats."""
    if not 0 <= k <= m.rank:
        raise ParameterOutOfRange(f"rank {k} outside [0, {m.rank}]")
    n_k = flat_counts(m, k)[0]
    if n_k > limit:
        raise TooLarge(f"{n_k} flats of rank {k} exceed the clique limit {limit}")
    if d <= 1:
        return n_k
    if d > min(k, m.rank - k):
        return 1
    return max_clique(distance_graph(enumerate_flats(m, k), d))


@dataclass(frozen=True)
class JohnsonOracle:
    """Enumerated ingredients of the two Johnson-type bounds."""

    n_1: int
    c_k: int
    n_hyper: int
    h_k: int
    a_contraction: int  # A(M/e, k-1, d)
    a_restriction: int  # A(M|h, k, d)

    @property
    def contraction_bound(self) -> int:
        return self.n_1 * self.a_contraction // self.c_k

    @property
    def restriction_bound(self) -> int:
        return self.n_hyper * self.a_restriction // self.h_k

    @property
    def bound(self) -> int:
        return min(self.contraction_bound, self.restriction_bound)


def johnson_oracle(m: MatroidSpec, k: int, d: int, limit: int = 5000) -> JohnsonOracle:
    """Evaluate both Johnson-type bounds by enumerating the lattice of m.

    The matroids here are homogeneous (their automorphisms act transitively on
    elements and on hyperplanes), so one element e and one hyperplane h stand
    for all of them.
    """
    r = m.rank
    if not 1 <= k <= r - 1:
        raise ParameterOutOfRange(f"need 1 <= k <= {r - 1}")
    elements = ground_set(m, limit)
    flats_k = enumerate_flats(m, k, limit)
    hyper = enumerate_flats(m, r - 1, limit)
    c_k = min(_flat_size(f, elements) for f in flats_k)
    h_k = min(sum(1 for h in hyper if is_subflat(f, h)) for f in flats_k)
    e = closure(m, [elements[0]])
    through_e = [f for f in flats_k if is_subflat(e, f)]
    inside_h = [f for f in flats_k if is_subflat(f, hyper[0])]
    a_con = _clique_or_convention(through_e, k - 1, r - 1, d)
    a_res = _clique_or_convention(inside_h, k, r - 1, d)
    return JohnsonOracle(len(elements), c_k, len(hyper), h_k, a_con, a_res)


def _flat_size(f: Flat, elements: list) -> int:
    return sum(1 for x in elements if contains(f, x))


def _clique_or_convention(flats: list[Flat], k: int, r: int, d: int) -> int:
    if d <= 1:
        return len(flats)
    if d > min(k, r - k):
        return 1
    return max_clique(distance_graph(flats, d))


def generic_johnson_oracle(m: MatroidSpec, k: int, d: int, limit: int = 5000) -> int:
    """min of the contraction and restriction Johnson bounds, fully enumerated."""
    return johnson_oracle(m, k, d, limit).bound
