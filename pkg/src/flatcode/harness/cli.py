"""Command-line entry point: ``flatcode {analyze,simulate,bounds,codec,summary}``."""

from __future__ import annotations

import argparse
import os
import sys
from decimal import Decimal
from fractions import Fraction

from .. import analysis as an
from ..bounds import code_bounds, exact_max_code
from ..channel import corrupt_packets
from ..codes.codec import make_codec
from ..errors import DecodeFailure, FlatcodeError
from ..matroid import closure, matroid
from ..protocol import RANC, SAF, Protocol
from .output import render
from .simulate import (
    SimConfig,
    block_rng,
    generic_sample,
    sim_butterfly,
    sim_codec,
    sim_decodable_curve,
    sim_delay,
    sim_independent_curve,
)

EXIT_OK, EXIT_USAGE, EXIT_DECODE = 0, 2, 3


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("FLATCODE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"FLATCODE_SEED must be an integer, got {raw!r}") from None


def field_order(raw: str) -> int:
    """argparse type for q: a prime power."""
    q = int(raw)
    p = next((d for d in range(2, q + 1) if q % d == 0), 0)
    while p and q % p == 0:
        q //= p
    if p == 0 or q != 1:
        raise argparse.ArgumentTypeError(f"q must be a prime power, got {raw}")
    return int(raw)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for this command")


def _approx(x):
    """float(x), or a 12-digit decimal string when x is beyond float range."""
    try:
        return float(x)
    except OverflowError:
        return format(Decimal(x), ".12g")


def _frac_row(exact: Fraction, **extra) -> dict:
    return {**extra, "exact": exact, "value": float(exact)}


# -- analyze ---------------------------------------------------------------------

def cmd_analyze(args) -> tuple[list[dict], dict, int]:
    kind, q, n, k = args.protocol, args.q, args.n, args.k
    what = args.quantity
    base = {"protocol": kind.value, "q": q, "n": n, "k": k}
    if what == "rate":
        r = an.matroid_rate(kind, q, n, k)
        lo, hi = an.rate_bounds(kind, q, n, k)
        rows = [{**base, "N_k": r.n_k, "log_q_N_k": r.log_n_k, "rate": r.rate, "lower": lo, "upper": hi}]
    elif what == "delay":
        rows = [_frac_row(an.average_delay(kind, q, k), **base)]
    elif what == "throughput":
        rows = [{**base, "throughput": an.throughput(kind, q, n, k)}]
    elif what == "pind":
        _need(args, "r")
        ls = [args.l] if args.l is not None else range(0, k + 1)
        rows = [_frac_row(an.p_independent(kind, q, k, args.r, l), **base, r=args.r, l=l) for l in ls]
    elif what == "pdecode":
        _need(args, "l")
        ds = [args.d] if args.d is not None else range(0, args.l + 1)
        rows = [_frac_row(an.p_decode(kind, q, k, args.l, d), **base, l=args.l, d=d) for d in ds]
    else:  # ptotal
        _need(args, "r")
        ds = [args.d] if args.d is not None else range(0, k + 1)
        rows = [_frac_row(an.p_total(kind, q, k, args.r, d), **base, r=args.r, d=d) for d in ds]
    meta = {"command": f"analyze {what}", "config": base}
    return rows, meta, EXIT_OK


# -- simulate ----------------------------------------------------------------------

def cmd_simulate(args) -> tuple[list[dict], dict, int]:
    seed = args.seed if args.seed is not None else _default_seed()
    what = args.experiment
    if what == "butterfly":
        res = sim_butterfly(args.protocol, args.q, args.trials, seed)
        config = {"protocol": args.protocol.value, "q": args.q, "trials": args.trials}
        status = EXIT_OK
    else:
        _need(args, "n", "k")
        cfg = SimConfig(
            args.protocol, args.q, args.n, args.k, trials=args.trials, seed=seed,
            r_max=args.rmax, t=args.t, loss=args.loss, d=args.dist,
        )
        fn = {
            "delay": sim_delay,
            "independent": sim_independent_curve,
            "decodable": sim_decodable_curve,
            "codec": sim_codec,
        }[what]
        res = fn(cfg)
        config = cfg.as_dict()
        config.pop("seed")
        status = EXIT_DECODE if res.meta.get("failures") else EXIT_OK
    meta = {"command": f"simulate {what}", "config": config, "seed": seed, **res.meta}
    return res.rows, meta, status


# -- bounds ------------------------------------------------------------------------

def cmd_bounds(args) -> tuple[list[dict], dict, int]:
    exact = None
    if args.exact:
        exact = exact_max_code(matroid(RANC, args.q, args.n), args.k, args.d)
    rep = code_bounds(args.q, args.n, args.k, args.d, exact)
    meta = {"command": "bounds", "config": {"q": args.q, "n": args.n, "k": args.k, "d": args.d}}
    return [rep.as_dict()], meta, EXIT_OK


# -- codec -------------------------------------------------------------------------

def cmd_codec(args) -> tuple[list[dict], dict, int]:
    seed = args.seed if args.seed is not None else _default_seed()
    codec = make_codec(args.protocol, args.q, args.n, args.k, args.d)
    m = codec.matroid
    rng = block_rng(seed, 0)
    u = codec.random_message(rng)
    f = closure(m, codec.encode(u))
    recv = corrupt_packets(m, generic_sample(f, args.k, rng), args.t, rng, loss=args.loss)
    config = {
        "protocol": args.protocol.value, "q": args.q, "n": args.n,
        "k": args.k, "d": args.d, "t": args.t, "loss": args.loss,
    }
    row = {**config, "received": len(recv), "received_rank": closure(m, recv).rank}
    try:
        decoded = codec.decode(recv)
        row["recovered"] = decoded == u
        row["error"] = ""
    except DecodeFailure as exc:
        row["recovered"] = False
        row["error"] = str(exc)
    status = EXIT_OK if row["recovered"] else EXIT_DECODE
    return [row], {"command": "codec roundtrip", "config": config, "seed": seed}, status


# -- summary -----------------------------------------------------------------------

def summary_rows(q: int, n: int, k: int, r: int | None = None, l: int | None = None) -> list[dict]:
    """Summary quantities for the three protocols, exact where possible."""
    r = k if r is None else r
    l = k - 1 if l is None else l
    rows = []
    for kind in Protocol:
        rate = an.matroid_rate(kind, q, n, k)
        entries = [
            ("number_of_flats", rate.n_k, _approx(rate.n_k)),
            ("cardinality", an.cardinality(kind, q, k), None),
            ("rate", None, rate.rate),
            ("average_delay", an.average_delay(kind, q, k), None),
            ("throughput", None, an.throughput(kind, q, n, k)),
            (f"independent_elements_r{r}", an.moments_independent(kind, q, k, r)[0], None),
            (f"decodable_elements_l{l}", an.moments_decode(kind, q, k, l)[0], None),
        ]
        for name, exact, value in entries:
            if value is None:
                value = _approx(exact)
            rows.append({"parameter": name, "protocol": kind.value, "exact": exact, "value": value})
    return rows


def cmd_summary(args) -> tuple[list[dict], dict, int]:
    rows = summary_rows(args.q, args.n, args.k, args.r, args.l)
    meta = {"command": "summary", "config": {"q": args.q, "n": args.n, "k": args.k}}
    return rows, meta, EXIT_OK


# -- parser ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flatcode", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt = dict(choices=["csv", "json"], default="csv")

    a = sub.add_parser("analyze", help="exact analytic quantities")
    a.add_argument("quantity", choices=["rate", "delay", "throughput", "pind", "pdecode", "ptotal"])
    a.add_argument("--protocol", type=Protocol.parse, required=True)
    a.add_argument("--q", type=field_order, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--r", type=int)
    a.add_argument("--l", type=int)
    a.add_argument("--d", type=int)
    a.add_argument("--format", **fmt)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="Monte Carlo experiments")
    s.add_argument("experiment", choices=["delay", "independent", "decodable", "codec", "butterfly"])
    s.add_argument("--protocol", type=Protocol.parse, required=True)
    s.add_argument("--q", type=field_order, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--rmax", type=int, default=30)
    s.add_argument("--t", type=int, default=0)
    s.add_argument("--loss", type=int, default=0)
    s.add_argument("--dist", type=int, default=3, help="minimum rank distance d of the codec")
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="code-size bounds for the affine geometry")
    b.add_argument("--q", type=field_order, required=True)
    for name in ("n", "k", "d"):
        b.add_argument(f"--{name}", type=int, required=True)
    b.add_argument("--exact", action="store_true", help="add the clique-search optimum (tiny cases)")
    b.add_argument("--format", **fmt)
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("codec", help="lifted Gabidulin codec round trip")
    c.add_argument("action", choices=["roundtrip"])
    c.add_argument("--protocol", type=Protocol.parse, default=RANC)
    c.add_argument("--q", type=field_order, required=True)
    for name in ("n", "k", "d"):
        c.add_argument(f"--{name}", type=int, required=True)
    c.add_argument("--t", type=int, default=0)
    c.add_argument("--loss", type=int, default=0)
    c.add_argument("--seed", type=int)
    c.add_argument("--format", **fmt)
    c.set_defaults(func=cmd_codec)

    t = sub.add_parser("summary", help="summary table for SAF, RLNC and RANC")
    t.add_argument("--q", type=field_order, required=True)
    for name in ("n", "k"):
        t.add_argument(f"--{name}", type=int, required=True)
    t.add_argument("--r", type=int, help="receptions for the independent-elements row (default k)")
    t.add_argument("--l", type=int, help="subflat rank for the decodable row (default k-1)")
    t.add_argument("--format", **fmt)
    t.set_defaults(func=cmd_summary)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "protocol", None) is SAF and args.command in ("codec",):
            raise UsageError("codecs exist for RLNC and RANC only")
        rows, meta, status = args.func(args)
    except UsageError as exc:
        print(f"flatcode: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FlatcodeError, ValueError) as exc:
        print(f"flatcode: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(rows, meta, args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
