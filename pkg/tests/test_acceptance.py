"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; conftest prints them as a block at the end
of the run.  Standalone: ``python tests/test_acceptance.py``.
"""

import functools
import itertools
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from flatcode import analysis as an
from flatcode import linalg as la
from flatcode.bounds import code_bounds, exact_max_code
from flatcode.channel import distance, flat_lattice
from flatcode.codes.codec import ranc_codec
from flatcode.codes.gabidulin import gabidulin_code, gabidulin_encode, rank_distance
from flatcode.codes.lifting import affine_lift, affine_to_linear, linear_lift
from flatcode.harness.cli import main
from flatcode.harness.simulate import SimConfig, sim_butterfly, sim_codec, sim_decodable_curve, sim_delay, sim_independent_curve
from flatcode.matroid import closure, contains, enumerate_flats, flat_counts, matroid, meet, random_flat
from flatcode.protocol import RANC, RLNC, SAF

KINDS = (SAF, RLNC, RANC)
RESULTS: list[tuple[int, str, bool, str]] = []

# 10 * H_10 by hand, and k + sum_j 1/(q^j - 1) at q=256, k=10 evaluated once exactly
SAF_DELAY = Fraction(7381, 252)
RANC_DELAY_FLOAT = 10.00393688748774


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS.append((number, title, False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"))
                print(f"criterion {number:2d} FAIL  {title}")
                raise
            secs = time.perf_counter() - t0
            RESULTS.append((number, title, True, f"{secs:.1f}s"))
            print(f"criterion {number:2d} PASS  {title} ({secs:.1f}s)")

        return run

    return wrap


def within(row, se_key="exact_stderr", width=3.0):
    """Empirical mean within width standard errors; a zero SE demands equality."""
    exact = float(row["exact"])
    se = row[se_key]
    if se == 0:
        return row["mean"] == exact
    return abs(row["mean"] - exact) <= width * se


# -----------------------------------------------------------------------------

@criterion(1, "delay values exact and 10^5-trial Monte Carlo within 3 SE")
def test_criterion_01_delay_values():
    t0 = time.perf_counter()
    saf = an.average_delay(SAF, 256, 10)
    assert saf == SAF_DELAY and round(float(saf), 4) == 29.2897
    ranc = an.average_delay(RANC, 256, 10)
    assert isinstance(ranc, Fraction)
    assert abs(float(ranc) - RANC_DELAY_FLOAT) < 1e-12 and round(float(ranc), 3) == 10.004
    for kind in (SAF, RANC):
        row = sim_delay(SimConfig(kind, 256, 20, 10, trials=100_000, seed=1)).rows[0]
        assert row["exact"] == an.average_delay(kind, 256, 10)
        assert within(row, "stderr"), row
    assert time.perf_counter() - t0 < 60


@criterion(2, "recursive P_I equals the closed forms on the full grid")
def test_criterion_02_closed_form_equals_recursion():
    t0 = time.perf_counter()
    count = 0
    for kind in KINDS:
        for q in (2, 3, 4, 256):
            for k in range(1, 11):
                for r in range(0, 21):
                    for l in range(0, k + 1):
                        rec = an.p_independent(kind, q, k, r, l)
                        assert rec == an.p_independent(kind, q, k, r, l, method="closed"), (kind, q, k, r, l)
                        count += 1
    assert count == 3 * 4 * sum(21 * (k + 1) for k in range(1, 11))
    assert time.perf_counter() - t0 < 30


@criterion(3, "closed-form delays equal the generic cardinality-table sum")
def test_criterion_03_delay_closed_forms():
    for kind in KINDS:
        for q in (2, 3, 4, 256):
            for k in range(1, 11):
                C = an.cardinality_table(kind, q, k)
                generic = sum((Fraction(C[k], C[k] - C[i]) for i in range(k)), Fraction(0))
                assert an.average_delay_closed(kind, q, k) == generic == an.average_delay(kind, q, k)


@criterion(4, "partial-decoding anchors: SAF delta, 9/7 by enumeration, 10/256")
def test_criterion_04_partial_decoding_anchors():
    for q in (2, 256):
        for k in range(1, 11):
            for l in range(k + 1):
                for d in range(l + 1):
                    assert an.p_decode(SAF, q, k, l, d) == (1 if d == l else 0)
    # planes of GF(2)^3 through the origin, counting how many unit vectors each holds
    m = matroid(RLNC, 2, 3)
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    planes = enumerate_flats(m, 2)
    assert len(planes) == 7
    enumerated = Fraction(sum(sum(contains(f, e) for e in units) for f in planes), len(planes))
    assert enumerated == Fraction(9, 7) == an.moments_decode(RLNC, 2, 3, 2)[0]
    assert an.moments_decode(RANC, 256, 10, 9)[0] == Fraction(10, 256)


@criterion(5, "q=256 n=20 k=10 curves match exact E_I and E_T within 3 SE at r=1..30")
def test_criterion_05_curves():
    k = 10
    for kind in KINDS:
        cfg = SimConfig(kind, 256, 20, k, trials=100_000, seed=5, r_max=30)
        for fn in (sim_independent_curve, sim_decodable_curve):
            res = fn(cfg)
            assert [row["r"] for row in res.rows] == list(range(1, 31))
            bad = [row["r"] for row in res.rows if not within(row)]
            assert not bad, (kind, fn.__name__, bad)
    for r in range(1, 31):
        assert an.moments_independent(SAF, 256, k, r)[0] == k * (1 - (1 - Fraction(1, k)) ** r)


def _saf_flat(m, rng):
    pts = [tuple(int(x) for x in m.field.random(rng, m.n)) for _ in range(int(rng.integers(0, 5)))]
    return closure(m, pts)


@criterion(6, "distance layer: metric axioms, lattice BFS, parallel hyperplanes")
def test_criterion_06_distance_layer():
    rng = np.random.default_rng(6)
    for kind in KINDS:
        m = matroid(kind, 2, 3)
        flats = None if kind is SAF else [f for r in range(m.rank + 1) for f in enumerate_flats(m, r)]
        for _ in range(10_000):
            if flats is None:
                f, g, h = _saf_flat(m, rng), _saf_flat(m, rng), _saf_flat(m, rng)
            else:
                f, g, h = (flats[i] for i in rng.integers(0, len(flats), 3))
            dfg, dgh, dfh, dgf = distance(f, g), distance(g, h), distance(f, h), distance(g, f)
            assert (dfg.d_L, dfg.d_M) == (dgf.d_L, dgf.d_M)
            assert (dfg.d_L == 0) == (f == g) == (dfg.d_M == 0)
            assert dfh.d_L <= dfg.d_L + dgh.d_L
            assert dfh.d_M <= dfg.d_M + dgh.d_M
    for kind, q, n in [(RANC, 2, 3), (RLNC, 2, 4)]:
        lat = flat_lattice(matroid(kind, q, n))
        for f in lat.flats:
            dist = lat.bfs(f)
            assert all(dist[j] == distance(f, g).d_L for j, g in enumerate(lat.flats))
    for q, n in [(2, 3), (3, 4), (256, 5)]:
        m = matroid(RANC, q, n)
        frame = [tuple(int(i == j) for j in range(n)) for i in range(n - 1)] + [(0,) * n]
        h = closure(m, frame)
        g = closure(m, [p[:-1] + (1,) for p in frame])
        d = distance(h, g)
        cap = meet(h, g)
        assert d.d_L == 2
        assert h.rank + d.delta - cap.rank == n + 1
        assert h.rank + g.rank - 2 * cap.rank == 2 * n


def _rank_le1(F, rows, cols):
    """All rows x cols matrices of rank <= 1, as outer products."""
    vecs = lambda size: [np.array(v) for v in itertools.product(range(F.order), repeat=size) if any(v)]
    out = {tuple(map(tuple, la.zeros(rows, cols)))}
    for a in vecs(rows):
        for b in vecs(cols):
            out.add(tuple(map(tuple, la.matmul(F, a[:, None], b[None, :]))))
    return [np.array(E) for E in out]


@criterion(7, "codec 1000/1000 at t=1, exhaustive tiny decoder oracle, lifting isometries")
def test_criterion_07_codec():
    t0 = time.perf_counter()
    res = sim_codec(SimConfig(RANC, 256, 20, 10, trials=1000, seed=7, d=3, t=1))
    assert res.rows[0]["successes"] == 1000, res.meta["failures"][:5]
    assert res.meta["homogenisation_mismatches"] == 0

    # every word within rank distance t=1 of a codeword decodes to that codeword
    code = gabidulin_code(2, 4, 4, 3)
    F, E = code.base, code.ext
    assert code.capability == 1
    balls = _rank_le1(F, code.length, code.nu)
    assert len(balls) == 1 + 15 * 15
    seen = set()
    for u in itertools.product(range(E.order), repeat=code.dimension):
        C = gabidulin_encode(code, list(u))
        for err in balls:
            Y = la.add(F, C, err)
            seen.add(Y.tobytes())
            assert code.decode(Y) == list(u)
    assert len(seen) == E.order**code.dimension * len(balls)  # balls are disjoint

    rng = np.random.default_rng(7)
    for q, n, k in [(2, 5, 3), (256, 8, 4)]:
        m = matroid(RANC, q, n)
        Fq = m.field
        for _ in range(1000):
            M = la.random_matrix(Fq, k, n - k + 1, rng)
            N = la.random_matrix(Fq, k, n - k + 1, rng)
            if rng.random() < 0.5:  # bias towards small rank differences
                N = M.copy()
                N[int(rng.integers(k))] = la.random_matrix(Fq, 1, n - k + 1, rng)[0]
            f, g = affine_lift(m, M), affine_lift(m, N)
            assert distance(f, g).d_M == rank_distance(Fq, M, N)
            h = random_flat(m, int(rng.integers(1, n + 2)), rng)
            lf, lh = affine_to_linear(f, k), affine_to_linear(h, k)
            assert lf == linear_lift(matroid(RLNC, q, n + 1), M)
            assert (distance(f, h).d_L, distance(f, h).d_M) == (distance(lf, lh).d_L, distance(lf, lh).d_M)
    assert time.perf_counter() - t0 < 120


@criterion(8, "butterfly success matches (q-1)/q and (q-2)/q; RANC at q=2 is 0")
def test_criterion_08_butterfly():
    for q in (2, 16, 256):
        for kind, exact in ((RLNC, Fraction(q - 1, q)), (RANC, Fraction(q - 2, q))):
            row = sim_butterfly(kind, q, 10_000, 8).rows[0]
            assert row["exact"] == exact
            assert within(row), (kind, q, row)
    assert sim_butterfly(RANC, 2, 10_000, 9).rows[0]["successes"] == 0


@criterion(9, "bounds: L(2,4) optimum 5, ordering, lifted codes attain, ratio > K_q")
def test_criterion_09_bounds():
    assert exact_max_code(matroid(RLNC, 2, 4), 2, 2) == 5
    checked = 0
    for q, n in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)]:
        m = matroid(RANC, q, n)
        for k in range(1, n + 2):
            if flat_counts(m, k)[0] > 150:
                continue
            for d in range(1, n + 2):
                exact = exact_max_code(m, k, d)
                rep = code_bounds(q, n, k, d, exact)
                assert rep.lower_lifted <= exact <= rep.upper
                assert exact <= min(rep.upper_kq, rep.johnson_contraction, rep.johnson_chain, rep.singleton)
                checked += 1
    assert checked > 50
    for q, n, k, d in [(2, 3, 2, 2), (2, 4, 2, 2), (2, 5, 3, 3), (3, 3, 2, 2)]:
        codec = ranc_codec(q, n, k, d)
        flats = [
            closure(codec.matroid, codec.encode(list(u)))
            for u in itertools.product(range(codec.code.ext.order), repeat=codec.message_length)
        ]
        assert len(set(flats)) == code_bounds(q, n, k, d).lower_lifted
        assert min(distance(f, g).d_M for f, g in itertools.combinations(flats, 2)) == d
    for q in (2, 3, 4, 16, 256):
        hi = an.kq_interval(q, 200)[1]
        for n in range(2, 16):
            for k in range(2, n + 1):
                for d in range(2, min(k, n + 1 - k) + 1):
                    rep = code_bounds(q, n, k, d)
                    assert Fraction(rep.lower_lifted, rep.upper_kq) > hi


@criterion(10, "rate sandwich on the grid; throughput gain within 10% of 1/n")
def test_criterion_10_rate_and_throughput():
    for kind in KINDS:
        for q in (2, 3, 4, 16, 256):
            kq_hi = an.kq_interval(q, 200)[1]
            for n in range(2, 21):
                for k in range(1, n + 1):
                    if kind is SAF and k > 12:
                        continue
                    rate = an.matroid_rate(kind, q, n, k)
                    lo, hi = an.rate_bounds(kind, q, n, k)
                    assert lo - 1e-12 <= rate.rate <= hi + 1e-12
                    if kind is not SAF:
                        e = k * (n - k) if kind is RLNC else k * (n - k + 1)
                        assert rate.n_k * kq_hi < q**e
    gain = an.throughput(RANC, 256, 20, 10) - an.throughput(RLNC, 256, 20, 10)
    assert abs(gain - 1 / 20) <= 0.1 / 20


CLI_RUNS = [
    ["analyze", "rate", "--protocol", "ranc", "--q", "256", "--n", "20", "--k", "10"],
    ["analyze", "ptotal", "--protocol", "rlnc", "--q", "4", "--n", "8", "--k", "5", "--r", "6", "--format", "json"],
    ["simulate", "delay", "--protocol", "saf", "--q", "256", "--n", "20", "--k", "10", "--trials", "20000", "--seed", "3"],
    ["simulate", "independent", "--protocol", "rlnc", "--q", "4", "--n", "8", "--k", "5", "--trials", "9000", "--seed", "3"],
    ["simulate", "decodable", "--protocol", "ranc", "--q", "256", "--n", "20", "--k", "10", "--trials", "2000",
     "--seed", "3", "--format", "json"],
    ["simulate", "codec", "--protocol", "ranc", "--q", "16", "--n", "8", "--k", "4", "--t", "1", "--trials", "100", "--seed", "3"],
    ["simulate", "butterfly", "--protocol", "ranc", "--q", "16", "--trials", "3000", "--seed", "3"],
    ["codec", "roundtrip", "--q", "256", "--n", "20", "--k", "10", "--d", "3", "--t", "1", "--seed", "3"],
    ["bounds", "--q", "2", "--n", "4", "--k", "2", "--d", "2", "--exact"],
    ["summary", "--q", "256", "--n", "20", "--k", "10", "--format", "json"],
]


@criterion(11, "CLI output is byte-identical across repeated runs with the same seed")
def test_criterion_11_cli_determinism(capsys):
    for argv in CLI_RUNS:
        outs = []
        for _ in range(2):
            code = main(list(argv))
            outs.append((code, capsys.readouterr().out))
        assert outs[0] == outs[1], argv
        assert outs[0][0] == 0 and outs[0][1]
    # separate interpreters, so hash seeds and import order differ
    argv = CLI_RUNS[3]
    cmd = [sys.executable, "-m", "flatcode.harness.cli", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True, env={**os.environ, "PYTHONHASHSEED": "123"}).stdout
    main(list(argv))
    assert a == b == capsys.readouterr().out.encode()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
