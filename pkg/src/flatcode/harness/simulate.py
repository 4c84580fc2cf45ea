"""Monte Carlo simulations of reception, partial decoding, codecs and the butterfly.

Receptions are simulated in coordinates: an element of a rank-k flat is a
coefficient vector over a basis of the flat (uniform nonzero vector for RLNC,
affine weights summing to 1 for RANC, a basis index for SAF).  Rank and
decodability of a received set only depend on these coordinates.

Trials run in blocks of BLOCK; block b draws from a Philox stream keyed by
(seed, b), so the result does not depend on how blocks are scheduled.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import linalg as la
from ..analysis import average_delay, moments_independent, moments_total
from ..channel import corrupt_packets
from ..codes.codec import make_codec
from ..codes.lifting import affine_to_linear, extend_received
from ..errors import DecodeFailure, ParameterOutOfRange
from ..matroid import basis, closure, decode_message, field_for_order, matroid, sample_element
from ..protocol import RANC, RLNC, SAF, Protocol

BLOCK = 8192


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _blocks(trials: int):
    """(block index, block size) pairs covering the trials."""
    b = 0
    while trials > 0:
        size = min(BLOCK, trials)
        yield b, size
        trials -= size
        b += 1


@dataclass
class SimConfig:
    kind: Protocol
    q: int
    n: int
    k: int
    trials: int = 100_000
    seed: int = 0
    r_max: int = 30
    t: int = 0
    loss: int = 0
    d: int = 3

    def __post_init__(self):
        self.kind = Protocol.parse(self.kind)
        if self.trials < 1:
            raise ParameterOutOfRange("trials must be positive")
        if self.k < 1:
            raise ParameterOutOfRange("k must be positive")

    def as_dict(self) -> dict:
        return {
            "protocol": self.kind.value,
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "r_max": self.r_max,
            "t": self.t,
            "loss": self.loss,
            "d": self.d,
        }


@dataclass
class SimResult:
    rows: list[dict]
    trials: int
    seed: int
    wall_time: float = 0.0
    meta: dict = field(default_factory=dict)


class _Moments:
    """Running sum and sum of squares, merged block by block."""

    def __init__(self, size: int):
        self.s1 = np.zeros(size)
        self.s2 = np.zeros(size)
        self.count = 0

    def add(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=np.float64)
        self.s1 += x.sum(axis=0)
        self.s2 += (x * x).sum(axis=0)
        self.count += x.shape[0]

    def mean_var(self):
        n = self.count
        mean = self.s1 / n
        var = (self.s2 - n * mean * mean) / (n - 1) if n > 1 else np.zeros_like(mean)
        return mean, np.maximum(var, 0.0)


def _row(r, mean, var, trials, exact: Fraction | None, exact_var: Fraction | None) -> dict:
    row = {
        "r": r,
        "mean": float(mean),
        "var": float(var),
        "stderr": math.sqrt(var / trials),
        "exact": exact,
    }
    if exact_var is not None:
        row["exact_stderr"] = math.sqrt(float(exact_var) / trials)
    return row


# -- batched reception in coordinates ----------------------------------------------

def sample_coordinates(kind: Protocol, F, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` uniform elements of a rank-k flat as coefficient rows."""
    if kind is RLNC:
        v = F.random(rng, (size, k))
        zero = ~v.any(axis=1)
        while zero.any():
            v[zero] = F.random(rng, (int(zero.sum()), k))
            zero = ~v.any(axis=1)
        return v
    if kind is RANC:
        c = F.random(rng, (size, k - 1))
        first = F.vsub(np.ones(size, dtype=np.int64), F.vsum(c, axis=1)) if k > 1 else np.ones(size, dtype=np.int64)
        return np.hstack([first[:, None], c])
    idx = rng.integers(0, k, size=size)
    return np.eye(k, dtype=np.int64)[idx]


class BatchEchelon:
    """Row-reduced bases of many small subspaces of GF(q)^k, grown one vector at a time."""

    def __init__(self, F, batch: int, k: int):
        self.F = F
        self.k = k
        self.rows = np.zeros((batch, k, k), dtype=np.int64)  # row j has its pivot at j
        self.pivot = np.zeros((batch, k), dtype=bool)

    def insert(self, v: np.ndarray, active: np.ndarray | None = None) -> np.ndarray:
        """Add v[b] to subspace b; returns where the rank grew."""
        F, k = self.F, self.k
        v = v.copy()
        if active is not None:
            v[~active] = 0
        for c in range(k):
            hit = self.pivot[:, c] & (v[:, c] != 0)
            if hit.any():
                v[hit] = F.vsub(v[hit], F.vmul(v[hit, c][:, None], self.rows[hit, c]))
        grew = v.any(axis=1)
        if grew.any():
            idx = np.nonzero(grew)[0]
            w = v[idx]
            p = np.argmax(w != 0, axis=1)
            w = F.vmul(F.vinv(w[np.arange(len(idx)), p])[:, None], w)
            # clear column p in the other rows to stay fully reduced
            R = self.rows[idx]
            coef = R[np.arange(len(idx)), :, p]
            R = F.vsub(R, F.vmul(coef[:, :, None], w[:, None, :]))
            R[np.arange(len(idx)), p] = w
            self.rows[idx] = R
            self.pivot[idx, p] = True
        return grew

    def rank(self) -> np.ndarray:
        return self.pivot.sum(axis=1)

    def decodable(self) -> np.ndarray:
        """Number of unit vectors e_i in each subspace (a pivot row with no other entry)."""
        single = np.count_nonzero(self.rows, axis=2) == 1
        return (single & self.pivot).sum(axis=1)


def _saf_curves(k: int, size: int, r_max: int, rng) -> np.ndarray:
    """Distinct counts after each of r_max uniform draws from k elements."""
    idx = rng.integers(0, k, size=(size, r_max))
    seen = np.zeros((size, k), dtype=bool)
    out = np.zeros((size, r_max), dtype=np.int64)
    rows = np.arange(size)
    for r in range(r_max):
        seen[rows, idx[:, r]] = True
        out[:, r] = seen.sum(axis=1)
    return out


def _curves(cfg: SimConfig, decodable: bool) -> np.ndarray:
    """Stack of per-trial curves (trials × r_max) over all blocks, in block order."""
    F = field_for_order(cfg.q)
    parts = []
    for b, size in _blocks(cfg.trials):
        rng = block_rng(cfg.seed, b)
        if cfg.kind is SAF:
            # every received element of SAF is itself a canonical element
            parts.append(_saf_curves(cfg.k, size, cfg.r_max, rng))
            continue
        ech = BatchEchelon(F, size, cfg.k)
        out = np.zeros((size, cfg.r_max), dtype=np.int64)
        for r in range(cfg.r_max):
            ech.insert(sample_coordinates(cfg.kind, F, cfg.k, size, rng))
            out[:, r] = ech.decodable() if decodable else ech.rank()
        parts.append(out)
    return np.vstack(parts)


def _curve_result(cfg: SimConfig, decodable: bool) -> SimResult:
    t0 = time.perf_counter()
    acc = _Moments(cfg.r_max)
    acc.add(_curves(cfg, decodable))
    mean, var = acc.mean_var()
    moments = moments_total if decodable else moments_independent
    rows = []
    for r in range(1, cfg.r_max + 1):
        e, v = moments(cfg.kind, cfg.q, cfg.k, r)
        rows.append(_row(r, mean[r - 1], var[r - 1], cfg.trials, e, v))
    return SimResult(rows, cfg.trials, cfg.seed, time.perf_counter() - t0)


def sim_independent_curve(cfg: SimConfig) -> SimResult:
    """Empirical rank of the first r received elements, r = 1..r_max."""
    if cfg.r_max < 1:
        raise ParameterOutOfRange("r_max must be positive")
    return _curve_result(cfg, decodable=False)


def sim_decodable_curve(cfg: SimConfig) -> SimResult:
    """Empirical number of decodable canonical elements after r receptions."""
    if cfg.r_max < 1:
        raise ParameterOutOfRange("r_max must be positive")
    return _curve_result(cfg, decodable=True)


def _delays(cfg: SimConfig) -> np.ndarray:
    F = field_for_order(cfg.q)
    k = cfg.k
    parts = []
    for b, size in _blocks(cfg.trials):
        rng = block_rng(cfg.seed, b)
        delay = np.zeros(size, dtype=np.int64)
        if cfg.kind is SAF:
            seen = np.zeros((size, k), dtype=bool)
            rows = np.arange(size)
            active = np.ones(size, dtype=bool)
            while active.any():
                idx = rng.integers(0, k, size=size)
                seen[rows[active], idx[active]] = True
                delay += active
                active = seen.sum(axis=1) < k
            parts.append(delay)
            continue
        ech = BatchEchelon(F, size, k)
        active = np.ones(size, dtype=bool)
        while active.any():
            ech.insert(sample_coordinates(cfg.kind, F, k, size, rng), active)
            delay += active
            active = ech.rank() < k
        parts.append(delay)
    return np.concatenate(parts)


def sim_delay(cfg: SimConfig) -> SimResult:
    """Receptions needed to collect k independent elements."""
    t0 = time.perf_counter()
    x = _delays(cfg)
    acc = _Moments(1)
    acc.add(x[:, None])
    mean, var = acc.mean_var()
    row = _row(None, mean[0], var[0], cfg.trials, average_delay(cfg.kind, cfg.q, cfg.k), None)
    return SimResult([row], cfg.trials, cfg.seed, time.perf_counter() - t0)


# -- codec and butterfly ---------------------------------------------------------

def _success_row(successes: int, trials: int, exact: Fraction | None) -> dict:
    p = successes / trials
    row = {
        "successes": successes,
        "trials": trials,
        "mean": p,
        "var": p * (1 - p),
        "stderr": math.sqrt(p * (1 - p) / trials),
        "exact": exact,
    }
    if exact is not None:
        row["exact_stderr"] = math.sqrt(float(exact * (1 - exact)) / trials)
    return row


def generic_sample(f, k: int, rng: np.random.Generator) -> list[tuple]:
    """k uniform elements of the rank-k flat f, redrawn until they span it."""
    while True:
        pts = [sample_element(f, rng) for _ in range(k)]
        if closure(f.matroid, pts).rank == k:
            return pts


def sim_codec(cfg: SimConfig) -> SimResult:
    """Exact-recovery rate of the lifted Gabidulin codec.

    Each trial encodes a random message, draws k independent elements of the
    transmitted flat (uniform, conditioned on spanning it), drops ``loss`` of them, injects t uniform packets and
    decodes.  Failing trials are listed as (block, index) in the metadata.
    For RANC every trial also checks that homogenising the received flat
    through ``extend_received`` and through ``affine_to_linear`` agree.
    """
    t0 = time.perf_counter()
    if cfg.kind is SAF:
        raise ParameterOutOfRange("the codec simulation needs RLNC or RANC")
    codec = make_codec(cfg.kind, cfg.q, cfg.n, cfg.k, cfg.d)
    m = codec.matroid
    F = m.field
    ok = 0
    failures = []
    mismatches = 0
    for b, size in _blocks(cfg.trials):
        rng = block_rng(cfg.seed, b)
        for i in range(size):
            u = codec.random_message(rng)
            f = closure(m, codec.encode(u))
            recv = corrupt_packets(m, generic_sample(f, cfg.k, rng), cfg.t, rng, loss=cfg.loss)
            if cfg.kind is RANC and recv:
                g = closure(m, recv)
                if g.rank:
                    ext = extend_received(F, np.array(basis(g), dtype=np.int64), cfg.k)
                    lin = affine_to_linear(g, cfg.k)
                    if not la.same_rowspace(F, ext, lin.matrix()):
                        mismatches += 1
            try:
                good = codec.decode(recv) == u
            except DecodeFailure:
                good = False
            if good:
                ok += 1
            else:
                failures.append([b, i])
    row = _success_row(ok, cfg.trials, None)
    meta = {"failures": failures, "homogenisation_mismatches": mismatches}
    return SimResult([row], cfg.trials, cfg.seed, time.perf_counter() - t0, meta)


def butterfly_success_probability(kind, q: int) -> Fraction:
    kind = Protocol.parse(kind)
    if kind is RLNC:
        return Fraction(q - 1, q)
    if kind is RANC:
        return Fraction(q - 2, q)
    raise ParameterOutOfRange("the butterfly compares RLNC and RANC")


def butterfly_trial(kind: Protocol, q: int, rng: np.random.Generator, payload: int = 2) -> bool:
    """One use of the butterfly: both sinks must recover both messages."""
    F = field_for_order(q)
    w = payload
    msgs = F.random(rng, (2, w))
    m = matroid(kind, q, 2 + w - (1 if kind is RANC else 0))
    header = np.array([[1, 0], [0, 1]]) if kind is RLNC else np.array([[0], [1]])
    x, y = (np.concatenate([header[i], msgs[i]]) for i in range(2))
    a = int(rng.integers(q))
    if kind is RLNC:
        mixed = F.vadd(x, F.vmul(a, y))  # x + a y
    else:
        mixed = F.vadd(F.vmul(a, x), F.vmul(F.sub(1, a), y))  # a x + (1 - a) y
    for own in (x, y):
        pkts = [tuple(int(v) for v in own), tuple(int(v) for v in mixed)]
        try:
            got = decode_message(m, pkts, k=2)
        except DecodeFailure:
            return False
        if not np.array_equal(np.asarray(got), msgs):
            return False
    return True


def sim_butterfly(kind, q: int, trials: int, seed: int) -> SimResult:
    t0 = time.perf_counter()
    kind = Protocol.parse(kind)
    exact = butterfly_success_probability(kind, q)
    ok = 0
    for b, size in _blocks(trials):
        rng = block_rng(seed, b)
        ok += sum(butterfly_trial(kind, q, rng) for _ in range(size))
    return SimResult([_success_row(ok, trials, exact)], trials, seed, time.perf_counter() - t0)
