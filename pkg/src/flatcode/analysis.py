"""Exact performance analytics for uniform reception of flat elements.

Every probability, expectation and delay is a :class:`fractions.Fraction`;
floats appear only in the rate (a logarithm) and in the throughput built on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ParameterOutOfRange, RankOutOfRange
from .protocol import RANC, RLNC, SAF, Protocol, matroid_rank

ExactProb = Fraction


# -- combinatorial primitives -----------------------------------------------

def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or n < 0 or k > n:
        return 0
    k = min(k, n - k)
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@lru_cache(maxsize=None)
def stirling2(r: int, l: int) -> int:
    """Stirling number of the second kind {r over l}."""
    if r < 0 or l < 0 or l > r:
        return 0
    if r == l:
        return 1
    if l == 0:
        return 0
    return l * stirling2(r - 1, l) + stirling2(r - 1, l - 1)


def kq_partial(q: int, terms: int) -> Fraction:
    """prod_{i=1}^{terms} (1 - q^-i) as an exact rational; always >= K_q."""
    p = Fraction(1)
    for i in range(1, terms + 1):
        p *= 1 - Fraction(1, q**i)
    return p


def kq_interval(q: int, terms: int) -> tuple[Fraction, Fraction]:
    """Rational bracket lo <= K_q <= hi from a truncated product.

    The tail satisfies prod_{i>N}(1 - q^-i) >= 1 - q^-N/(q-1).
    """
    hi = kq_partial(q, terms)
    lo = hi * (1 - Fraction(1, q**terms * (q - 1)))
    return lo, hi


def kq_constant(q: int, tolerance: float = 1e-15) -> float:
    """K_q = prod_{i>=1} (1 - q^-i), truncated once the tail is below tolerance."""
    if q < 2:
        raise ParameterOutOfRange("K_q needs q >= 2")
    if tolerance <= 0:
        raise ParameterOutOfRange("tolerance must be positive")
    prod = 1.0
    i = 0
    while True:
        i += 1
        prod *= 1.0 - q ** (-float(i))
        if q ** (-float(i)) / (q - 1) < tolerance:
            return prod


# -- flat counts --------------------------------------------------------------

def cardinality(kind, q: int, k: int) -> int:
    """C_k: number of elements in a flat of rank k."""
    kind = Protocol.parse(kind)
    if k < 0:
        raise RankOutOfRange(f"rank {k} is negative")
    if k == 0:
        return 0
    if kind is SAF:
        return k
    if kind is RLNC:
        return (q**k - 1) // (q - 1)
    return q ** (k - 1)


def flat_count(kind, q: int, n: int, k: int) -> int:
    """N_k: number of flats of rank k."""
    kind = Protocol.parse(kind)
    r = matroid_rank(kind, q, n)
    if not 0 <= k <= r:
        raise RankOutOfRange(f"rank {k} outside [0, {r}]")
    if k == 0:
        return 1
    if kind is SAF:
        return math.comb(q**n, k)
    if kind is RLNC:
        return gaussian_binomial(n, k, q)
    return q ** (n - k + 1) * gaussian_binomial(n, k - 1, q)


def cardinality_table(kind, q: int, k: int) -> list[int]:
    return [cardinality(kind, q, i) for i in range(k + 1)]


# -- rate, delay, throughput ---------------------------------------------------

@dataclass(frozen=True)
class Rate:
    n_k: int
    log_n_k: float  # log_q N_k
    rate: float


def log_q(x: int, q: int) -> float:
    return math.log(x) / math.log(q)


def matroid_rate(kind, q: int, n: int, k: int) -> Rate:
    kind = Protocol.parse(kind)
    if k < 1:
        raise RankOutOfRange("the rate needs k >= 1")
    nk = flat_count(kind, q, n, k)
    lg = log_q(nk, q)
    return Rate(nk, lg, lg / (n * k))


def rate_bounds(kind, q: int, n: int, k: int) -> tuple[float, float]:
    """(lower, upper) sandwich for the matroid rate.

    The SAF upper bound is non-strict; the RLNC and RANC upper bounds are strict.
    """
    kind = Protocol.parse(kind)
    if kind is SAF:
        return 1 - log_q(k, q) / n, 1 - (log_q(k, q) - 1 / math.log(q)) / n
    lk = math.log(kq_constant(q)) / math.log(q**k)
    if kind is RLNC:
        return 1 - k / n, 1 - (k + lk) / n
    return 1 - (k - 1) / n, 1 - (k - 1 + lk) / n


def average_delay(kind, q: int, k: int) -> Fraction:
    """Expected receptions until k independent elements: sum 1/(1 - C_i/C_k)."""
    if k < 1:
        raise ParameterOutOfRange("delay needs k >= 1")
    C = cardinality_table(kind, q, k)
    return sum((Fraction(C[k], C[k] - C[i]) for i in range(k)), Fraction(0))


def average_delay_closed(kind, q: int, k: int) -> Fraction:
    """Closed forms: k*H_k, and the two geometric sums for RLNC/RANC."""
    kind = Protocol.parse(kind)
    if k < 1:
        raise ParameterOutOfRange("delay needs k >= 1")
    if kind is SAF:
        return k * sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))
    if kind is RLNC:
        return k + sum(
            ((1 - Fraction(1, q ** (k - j))) / (q**j - 1) for j in range(1, k)),
            Fraction(0),
        )
    return k + sum((Fraction(1, q**j - 1) for j in range(1, k)), Fraction(0))


EULER_GAMMA = 0.5772156649015329


def delay_bounds(kind, q: int, k: int) -> tuple[float, float]:
    kind = Protocol.parse(kind)
    if kind is SAF:
        lo = k * (math.log(k) + EULER_GAMMA)
        return lo, lo + 0.5
    return float(k), k + q / (q - 1) ** 2


def throughput(kind, q: int, n: int, k: int) -> float:
    """T = k R / D."""
    rate = matroid_rate(kind, q, n, k).rate
    return k * rate / float(average_delay(kind, q, k))


# -- probability of independence -----------------------------------------------

_PI_ROWS: dict[tuple, list[list[Fraction]]] = {}


def _pi_rows(kind: Protocol, q: int, k: int, r: int) -> list[list[Fraction]]:
    key = (kind, q if kind is not SAF else 0, k)
    rows = _PI_ROWS.get(key)
    if rows is None:
        rows = [[Fraction(1)] + [Fraction(0)] * k]
        _PI_ROWS[key] = rows
    if len(rows) <= r:
        C = cardinality_table(kind, q, k)
        Ck = C[k]
        while len(rows) <= r:
            prev = rows[-1]
            new = [Fraction(0)] * (k + 1)
            for l in range(k):
                new[l + 1] = (1 - Fraction(C[l], Ck)) * prev[l] + Fraction(C[l + 1], Ck) * prev[l + 1]
            rows.append(new)
    return rows


def p_independent_distribution(kind, q: int, k: int, r: int) -> list[Fraction]:
    """[P_I(r, 0), ..., P_I(r, k)] from the one-step recursion."""
    kind = Protocol.parse(kind)
    if k < 1 or r < 0:
        raise ParameterOutOfRange("need k >= 1 and r >= 0")
    return list(_pi_rows(kind, q, k, r)[r])


def _pi_closed(kind: Protocol, q: int, k: int, r: int, l: int) -> Fraction:
    if l == 0:
        return Fraction(1 if r == 0 else 0)
    if l > k or l > r:
        return Fraction(0)
    if kind is SAF:
        return Fraction(math.factorial(k) * stirling2(r, l), k**r * math.factorial(k - l))
    if kind is RLNC:
        total = 0
        for s in range(r - l + 1):
            prod = 1
            for i in range(l):
                prod *= q ** (r - s) - q**i
            total += (-1) ** s * math.comb(r, s) * prod
        return Fraction(gaussian_binomial(k, l, q) * total, (q**k - 1) ** r)
    prod = 1
    for i in range(l - 1):
        prod *= q ** (r - 1) - q**i
    return Fraction(gaussian_binomial(k - 1, l - 1, q) * prod, q ** ((k - 1) * (r - 1)))


def saf_p_independent_alt(k: int, r: int, l: int) -> Fraction:
    """Second SAF form: C(k,l)/k^r sum_j (-1)^(l-j) C(l,j) j^r."""
    if l == 0:
        return Fraction(1 if r == 0 else 0)
    s = sum((-1) ** (l - j) * math.comb(l, j) * j**r for j in range(l + 1))
    return Fraction(math.comb(k, l) * s, k**r)


def p_independent(kind, q: int, k: int, r: int, l: int, method: str = "recursive") -> Fraction:
    """P_I(k; r, l): probability that r uniform receptions hold l independent elements."""
    kind = Protocol.parse(kind)
    if k < 1 or r < 0:
        raise ParameterOutOfRange("need k >= 1 and r >= 0")
    if l < 0 or l > k:
        return Fraction(0)
    if method == "recursive":
        return _pi_rows(kind, q, k, r)[r][l]
    if method == "closed":
        return _pi_closed(kind, q, k, r, l)
    raise ValueError(f"unknown method {method!r}")


def _moments(dist) -> tuple[Fraction, Fraction]:
    e = sum((i * p for i, p in enumerate(dist)), Fraction(0))
    e2 = sum((i * i * p for i, p in enumerate(dist)), Fraction(0))
    return e, e2 - e * e


def moments_independent(kind, q: int, k: int, r: int) -> tuple[Fraction, Fraction]:
    """(E_I, V_I) of the number of independent elements after r receptions."""
    return _moments(p_independent_distribution(kind, q, k, r))


def saf_moments_closed(k: int, r: int) -> tuple[Fraction, Fraction]:
    a = Fraction(k - 1, k) ** r
    b = Fraction(k - 2, k) ** r
    e = k * (1 - a)
    v = k * (a - b) + k * k * (b - a * a)
    return e, v


# -- partial decoding ----------------------------------------------------------

def _fg(kind: Protocol, q: int, k: int):
    if kind is SAF:
        return (lambda a, l: binomial(k - a, l - a)), (lambda l: binomial(k, l))
    if kind is RLNC:
        return (lambda a, l: gaussian_binomial(k - a, l - a, q)), (
            lambda l: gaussian_binomial(k, l, q)
        )

    def G(l):
        if l == 0:
            return 1  # the empty flat
        return q ** (k - l) * gaussian_binomial(k - 1, l - 1, q)

    def F(a, l):
        if a == 0:
            return G(l)
        return gaussian_binomial(k - a, l - a, q)

    return F, G


def p_decode(kind, q: int, k: int, l: int, d: int) -> Fraction:
    """P_D(k; l, d): a uniform rank-l subflat holds exactly d canonical basis elements."""
    kind = Protocol.parse(kind)
    if not (0 <= l <= k) or d < 0:
        raise ParameterOutOfRange("need 0 <= l <= k and d >= 0")
    if d > l:
        return Fraction(0)
    F, G = _fg(kind, q, k)
    s = sum(
        (-1) ** (a + d) * binomial(k - d, a - d) * F(a, l) for a in range(d, l + 1)
    )
    return Fraction(binomial(k, d) * s, G(l))


def moments_decode(kind, q: int, k: int, l: int) -> tuple[Fraction, Fraction]:
    """(E_D, V_D) from the first two binomial moments."""
    kind = Protocol.parse(kind)
    if not 0 <= l <= k:
        raise ParameterOutOfRange("need 0 <= l <= k")
    if l == 0:
        return Fraction(0), Fraction(0)
    F, G = _fg(kind, q, k)
    g = G(l)
    f1 = F(1, l)
    f2 = F(2, l) if l >= 2 else 0
    e = Fraction(k * f1, g)
    v = Fraction(k * ((k - 1) * f2 + f1), g) - e * e
    return e, v


def p_decode_distribution(kind, q: int, k: int, l: int) -> list[Fraction]:
    return [p_decode(kind, q, k, l, d) for d in range(k + 1)]


# -- total decoding ------------------------------------------------------------

def p_total_distribution(kind, q: int, k: int, r: int) -> list[Fraction]:
    pi = p_independent_distribution(kind, q, k, r)
    out = [Fraction(0)] * (k + 1)
    for l, pl in enumerate(pi):
        if pl:
            for d, pd in enumerate(p_decode_distribution(kind, q, k, l)):
                out[d] += pl * pd
    return out


def p_total(kind, q: int, k: int, r: int, d: int) -> Fraction:
    """P_T(k; r, d): d canonical elements decodable after r receptions."""
    if r < 0 or d < 0:
        raise ParameterOutOfRange("need r, d >= 0")
    if d > k:
        return Fraction(0)
    return p_total_distribution(kind, q, k, r)[d]


def moments_total(kind, q: int, k: int, r: int) -> tuple[Fraction, Fraction]:
    """(E_T, V_T) of the decodable count after r receptions."""
    return _moments(p_total_distribution(kind, q, k, r))


def expected_total(kind, q: int, k: int, r: int) -> Fraction:
    """E_T via E_T = sum_l P_I(r,l) E_D(l), cheaper than the full distribution."""
    pi = p_independent_distribution(kind, q, k, r)
    return sum((p * moments_decode(kind, q, k, l)[0] for l, p in enumerate(pi) if p), Fraction(0))
