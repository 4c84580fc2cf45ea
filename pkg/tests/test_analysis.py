import itertools
import math
from fractions import Fraction
from functools import lru_cache

import pytest

from flatcode import analysis as an
from flatcode.errors import ParameterOutOfRange, RankOutOfRange
from flatcode.matroid import (
    closure,
    contains,
    encode_message,
    enumerate_flats,
    flat_elements,
    is_subflat,
    matroid,
    payload_width,
    rank_of,
)
from flatcode.protocol import RANC, RLNC, SAF

KINDS = [SAF, RLNC, RANC]


# -- frozen oracle values --------------------------------------------------------------
# 10 * H_10 by hand; the RANC value is k + sum 1/(q^j - 1) evaluated once in exact arithmetic
SAF_DELAY_256_10 = Fraction(7381, 252)
RANC_DELAY_256_10_FLOAT = 10.00393688748774


def test_primitives():
    assert an.gaussian_binomial(5, 0, 3) == 1
    assert an.gaussian_binomial(4, 2, 2) == 35
    assert an.gaussian_binomial(3, 4, 2) == 0
    assert an.stirling2(6, 6) == 1
    assert an.stirling2(4, 2) == 7
    assert an.binomial(5, 7) == 0


def test_gaussian_binomial_counts_subspaces():
    for q, n in [(2, 4), (3, 3), (2, 5)]:
        m = matroid(RLNC, q, n)
        for k in range(n + 1):
            assert len(enumerate_flats(m, k)) == an.gaussian_binomial(n, k, q)


def _set_partitions(n, l):
    """Count partitions of an n-set into l blocks by restricted growth strings."""
    count = 0
    for rgs in itertools.product(range(l), repeat=n):
        if rgs[0] != 0:
            continue
        ok = all(rgs[i] <= max(rgs[:i]) + 1 for i in range(1, n))
        count += ok and max(rgs) == l - 1
    return count


def test_stirling_against_enumeration():
    for n in range(1, 8):
        for l in range(1, n + 1):
            assert an.stirling2(n, l) == _set_partitions(n, l)


def test_kq_constant():
    assert abs(an.kq_constant(2) - 0.288788095086602) < 1e-12
    assert an.kq_constant(2) < an.kq_constant(3) < an.kq_constant(4)
    assert abs(1 - an.kq_constant(1 << 16)) < 2**-15
    lo, hi = an.kq_interval(2, 64)
    assert lo <= Fraction(an.kq_constant(2)) <= hi + Fraction(1, 10**15)
    with pytest.raises(ParameterOutOfRange):
        an.kq_constant(1)


# -- rate ---------------------------------------------------------------------------

def test_rate_examples():
    r = an.matroid_rate(RLNC, 3, 5, 5)
    assert r.n_k == 1 and r.rate == 0
    r = an.matroid_rate(RANC, 2, 3, 2)
    assert r.n_k == 28 == len(enumerate_flats(matroid(RANC, 2, 3), 2))
    assert abs(r.rate - math.log2(28) / 6) < 1e-12
    assert round(r.rate, 4) == 0.8012
    with pytest.raises(RankOutOfRange):
        an.matroid_rate(RLNC, 2, 3, 4)


@pytest.mark.parametrize("kind", KINDS)
def test_rate_sandwich_grid(kind):
    for q in (2, 3, 4, 16, 256):
        kq_hi = an.kq_interval(q, 200)[1]
        for n in range(2, 21):
            for k in range(1, n + 1):
                if kind is SAF and k > 12:
                    continue
                rate = an.matroid_rate(kind, q, n, k)
                lo, hi = an.rate_bounds(kind, q, n, k)
                assert lo - 1e-12 <= rate.rate <= hi + 1e-12
                if kind is SAF:
                    continue
                # strict upper bound, exactly: N_k * K_q < q^e
                e = k * (n - k) if kind is RLNC else k * (n - k + 1)
                assert rate.n_k * kq_hi < q**e


# -- delay --------------------------------------------------------------------------

def _delay_oracle(m, k):
    """Expected receptions to reach rank k, by recursion over the flats actually reached."""
    pts = flat_elements(_canonical_flat(m, k))

    @lru_cache(maxsize=None)
    def expect(cur):
        if cur.rank == k:
            return Fraction(0)
        outside = [p for p in pts if not (cur.rank and contains(cur, p))]
        nxt = sum((expect(closure(m, list(_members(cur)) + [p])) for p in outside), Fraction(0))
        # E = 1 + (stay) E + sum_p E_p / |pts|
        return (1 + nxt / len(pts)) / Fraction(len(outside), len(pts))

    return expect(closure(m, []))


def _members(f):
    return f.rows if f.matroid.kind is SAF else flat_elements(f)


def _canonical_flat(m, k):
    if m.kind is SAF:
        pts = sorted(set(itertools.product(range(m.q), repeat=m.n)))[:k]
        return closure(m, pts)
    M = [[0] * payload_width(m, k) for _ in range(k)]
    return closure(m, encode_message(m, M).packets)


@pytest.mark.parametrize("kind,q,n,k", [
    (RANC, 2, 2, 2), (RANC, 2, 3, 3), (RANC, 3, 2, 3), (RLNC, 2, 3, 3), (RLNC, 3, 3, 2), (SAF, 2, 2, 3),
])
def test_delay_matches_state_space_oracle(kind, q, n, k):
    m = matroid(kind, q, n)
    assert an.average_delay(kind, q, k) == _delay_oracle(m, k)


def test_delay_examples():
    for kind in KINDS:
        assert an.average_delay(kind, 256, 1) == 1
    assert an.average_delay(RANC, 2, 2) == 3
    assert an.average_delay(SAF, 256, 10) == SAF_DELAY_256_10
    assert abs(float(SAF_DELAY_256_10) - 29.2897) < 1e-4
    d = an.average_delay(RANC, 256, 10)
    assert abs(float(d) - RANC_DELAY_256_10_FLOAT) < 1e-12
    assert round(float(d), 3) == 10.004


@pytest.mark.parametrize("kind", KINDS)
def test_delay_closed_forms(kind):
    for q in (2, 3, 4, 256):
        for k in range(1, 11):
            assert an.average_delay(kind, q, k) == an.average_delay_closed(kind, q, k)
            lo, hi = an.delay_bounds(kind, q, k)
            assert lo - 1e-9 <= float(an.average_delay(kind, q, k)) <= hi + 1e-9


def test_throughput():
    for kind in KINDS:
        assert an.throughput(kind, 4, 6, 1) == pytest.approx(an.matroid_rate(kind, 4, 6, 1).rate)
    gain = an.throughput(RANC, 256, 20, 10) - an.throughput(RLNC, 256, 20, 10)
    assert abs(gain - 1 / 20) < 0.1 / 20
    t = [an.throughput(kind, 256, 20, 10) for kind in KINDS]
    assert t[0] < t[1] < t[2]


# -- probability of independence ------------------------------------------------------

def _pi_enumeration(m, k, r):
    """Distribution of rank over all |f|^r reception sequences."""
    pts = flat_elements(_canonical_flat(m, k))
    counts = [0] * (k + 1)
    for seq in itertools.product(pts, repeat=r):
        counts[rank_of(m, seq)] += 1
    total = len(pts) ** r
    return [Fraction(c, total) for c in counts]


@pytest.mark.parametrize("kind,q,n,k,r", [
    (SAF, 2, 2, 3, 3), (SAF, 2, 3, 3, 4), (RLNC, 2, 3, 2, 2), (RLNC, 2, 3, 3, 3),
    (RLNC, 3, 3, 2, 3), (RANC, 2, 2, 2, 2), (RANC, 2, 3, 3, 4), (RANC, 3, 2, 3, 3),
])
def test_p_independent_matches_enumeration(kind, q, n, k, r):
    m = matroid(kind, q, n)
    dist = _pi_enumeration(m, k, r)
    assert an.p_independent_distribution(kind, q, k, r) == dist


def test_p_independent_examples():
    assert an.p_independent(SAF, 2, 3, 3, 3) == Fraction(2, 9)
    assert an.p_independent(RLNC, 2, 2, 2, 2) == Fraction(2, 3)
    assert an.p_independent(RANC, 2, 2, 2, 2) == Fraction(1, 2)
    assert an.p_independent(RLNC, 2, 3, 0, 0) == 1
    assert an.p_independent(RLNC, 2, 3, 4, 0) == 0
    assert an.p_independent(RLNC, 2, 3, 2, 3) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 256])
@pytest.mark.parametrize("kind", KINDS)
def test_recursive_equals_closed(kind, q):
    for k in range(1, 11):
        for r in range(0, 21):
            dist = an.p_independent_distribution(kind, q, k, r)
            assert sum(dist) == 1
            for l in range(k + 1):
                assert dist[l] == an.p_independent(kind, q, k, r, l, method="closed")
                if kind is SAF:
                    assert dist[l] == an.saf_p_independent_alt(k, r, l)


def test_minimum_delay_specials():
    for k in range(1, 11):
        p = an.p_independent(SAF, 2, k, k, k)
        assert p == Fraction(math.factorial(k), k**k)
        # Stirling's formula sandwich for k!/k^k
        s = math.sqrt(2 * math.pi * k) * math.exp(-k)
        assert s < float(p) <= s * math.exp(1 / (12 * k))
        for q in (2, 3, 256):
            kq_hi = an.kq_interval(q, 200)[1]
            assert an.p_independent(RLNC, q, k, k, k) > kq_hi
            assert an.p_independent(RANC, q, k, k, k) > kq_hi


# -- moments --------------------------------------------------------------------------

def test_moments_examples():
    assert an.moments_independent(SAF, 2, 2, 2)[0] == Fraction(3, 2)
    e, _ = an.moments_independent(SAF, 256, 10, 10)
    assert e == 10 * (1 - Fraction(9, 10) ** 10)
    assert abs(float(e) - 6.513) < 1e-3


def test_saf_moment_closed_forms():
    for k in range(1, 11):
        for r in range(0, 21):
            assert an.moments_independent(SAF, 2, k, r) == an.saf_moments_closed(k, r)


@pytest.mark.parametrize("kind", [RLNC, RANC])
def test_expectation_within_kq(kind):
    for q in (2, 3, 256):
        kq = an.kq_constant(q)
        for r in range(1, 31):
            e, _ = an.moments_independent(kind, q, 10, r)
            assert kq * min(r, 10) < e <= min(r, 10)


# -- partial decoding -------------------------------------------------------------------

def _pd_enumeration(m, k, l):
    """Distribution of canonical packets held by a uniform rank-l subflat of the canonical flat."""
    M = [[(i + j) % m.q for j in range(payload_width(m, k))] for i in range(k)]
    enc = encode_message(m, M) if m.kind is not SAF else None
    if m.kind is SAF:
        f = _canonical_flat(m, k)
        packets = f.rows
    else:
        f = closure(m, enc.packets)
        packets = enc.packets
    subs = [g for g in enumerate_flats(m, l) if is_subflat(g, f)]
    counts = [0] * (k + 1)
    for g in subs:
        counts[sum(1 for p in packets if g.rank and contains(g, p))] += 1
    return [Fraction(c, len(subs)) for c in counts]


@pytest.mark.parametrize("kind,q,n,k", [
    (SAF, 2, 2, 3), (RLNC, 2, 4, 3), (RLNC, 3, 3, 2), (RLNC, 2, 5, 3),
    (RANC, 2, 3, 3), (RANC, 3, 2, 3), (RANC, 2, 4, 3),
])
def test_p_decode_matches_enumeration(kind, q, n, k):
    m = matroid(kind, q, n)
    for l in range(0, k + 1):
        dist = _pd_enumeration(m, k, l)
        assert an.p_decode_distribution(kind, q, k, l) == dist
        e, v = an.moments_decode(kind, q, k, l)
        assert (e, v) == an._moments(dist)


def test_p_decode_examples():
    for k in range(1, 8):
        for l in range(k + 1):
            for d in range(l + 1):
                assert an.p_decode(SAF, 2, k, l, d) == (1 if d == l else 0)
    assert an.moments_decode(RLNC, 2, 3, 2)[0] == Fraction(9, 7)
    assert an.moments_decode(RANC, 256, 10, 9)[0] == Fraction(10, 256)
    with pytest.raises(ParameterOutOfRange):
        an.p_decode(RLNC, 2, 3, 4, 0)


@pytest.mark.parametrize("kind", KINDS)
def test_decode_distributions_sum_to_one(kind):
    for q in (2, 3, 256):
        for k in range(1, 9):
            for l in range(k + 1):
                assert sum(an.p_decode_distribution(kind, q, k, l)) == 1
            for r in range(0, 12):
                assert sum(an.p_total_distribution(kind, q, k, r)) == 1


def test_rlnc_expected_decode_closed_form():
    for q in (2, 3, 256):
        for k in range(1, 9):
            for l in range(1, k + 1):
                assert an.moments_decode(RLNC, q, k, l)[0] == Fraction(k * (q**l - 1), q**k - 1)


# -- total decoding ---------------------------------------------------------------------

def test_p_total():
    assert an.p_total(RANC, 2, 3, 4, 4) == 0
    for k in range(1, 9):
        for r in range(0, 15):
            assert an.moments_total(SAF, 2, k, r)[0] == an.moments_independent(SAF, 2, k, r)[0]
            for kind in (RLNC, RANC):
                assert an.expected_total(kind, 16, k, r) == an.moments_total(kind, 16, k, r)[0]
    for k in range(2, 11):
        for r in range(0, k):
            assert an.moments_total(RANC, 256, k, r)[0] <= k * Fraction(256) ** (r - k)
    assert an.moments_total(RANC, 256, 10, 9)[0] <= Fraction(10, 256)
