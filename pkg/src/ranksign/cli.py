"""Command-line front end.

Exit codes: 0 success / signature accepted, 1 signature rejected, 2 usage or
format error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import bounds_density as bd
from . import lrpc
from . import ranksign as rs
from . import security_estimator as se
from . import subspace_algebra as sa
from . import wire
from .errors import RankSignError
from .field_tower import get_field
from .params import PRESETS, parse_params

EXIT_OK, EXIT_REJECT, EXIT_ERROR = 0, 1, 2
ENV_SEED = "RANKSIGN_RNG_SEED"


class UsageError(Exception):
    pass


def _rng(args):
    seed = args.rng_seed
    if seed is None and os.environ.get(ENV_SEED):
        try:
            seed = int(os.environ[ENV_SEED], 0)
        except ValueError:
            raise UsageError(f"{ENV_SEED} must be an integer") from None
    return np.random.default_rng(seed)


def _emit(args, rows):
    out = sys.stdout
    if args.machine:
        for k, v in rows:
            out.write(f"{k}={v}\n")
    else:
        width = max((len(k) for k, _ in rows), default=0)
        for k, v in rows:
            out.write(f"{k.ljust(width)}  {v}\n")


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path, data: bytes):
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _message(args) -> bytes:
    if args.text is not None:
        return args.text.encode()
    if args.message is None:
        raise UsageError("give the message with --message FILE or --text STRING")
    if args.message == "-":
        return sys.stdin.buffer.read()
    return _read(args.message)


# -- scheme commands ------------------------------------------------------------

def cmd_keygen(args) -> int:
    p = parse_params(args.params)
    sk, pk = rs.keygen(p, _rng(args))
    prefix = args.out or "ranksign"
    _write(prefix + ".rkpk", wire.encode_public(pk))
    _write(prefix + ".rksk", wire.encode_secret(sk))
    _emit(args, [("params", p.describe()), ("public", prefix + ".rkpk"), ("secret", prefix + ".rksk")])
    return EXIT_OK


def cmd_sign(args) -> int:
    sk = wire.decode_secret(_read(args.key))
    pk = rs.PublicKey(sk.params, sk.ctx, rs.public_matrix(sk))
    msg = _message(args)
    sig, attempts = rs.sign_counted(sk, pk, msg, _rng(args))
    out = args.out or "signature.rksig"
    _write(out, wire.encode_signature(sig, pk))
    _emit(args, [("signature", out), ("attempts", attempts)])
    return EXIT_OK


def cmd_verify(args) -> int:
    pk = wire.decode_public(_read(args.pub))
    sig = wire.decode_signature(_read(args.sig), pk)
    ok = rs.verify(pk, _message(args), sig)
    _emit(args, [("result", "accept" if ok else "reject")])
    return EXIT_OK if ok else EXIT_REJECT


# -- analysis commands ------------------------------------------------------------

def cmd_estimate(args) -> int:
    rep = se.full_report(parse_params(args.params))
    _emit(args, rep.lines())
    return EXIT_OK


def cmd_bounds(args) -> int:
    p = parse_params(args.params)
    N, K = p.n + p.t_prime, p.k + p.t_prime
    rows = [("params", p.describe()),
            ("sphere_r", bd.sphere_size(p.n, p.m, p.q, p.r)),
            ("ball_r", bd.ball_size(p.n, p.m, p.q, p.r)),
            ("gvr", bd.gvr(p.n, p.k, p.m, p.q)),
            ("gvr_augmented", bd.gvr(N, K, p.m, p.q)),
            ("singleton", bd.singleton(p.n, p.k, p.m)),
            ("singleton_augmented", bd.singleton(N, K, p.m)),
            ("superspaces", bd.count_superspaces(p.m, p.q, p.t, p.r_prime)),
            ("density_exponent", bd.density_exponent(p)),
            ("density_estimate", float(bd.density_estimate(p)))]
    try:
        lo, hi = bd.tdecodable_bounds(p)
        rows += [("tdecodable_lower", lo), ("tdecodable_upper", hi)]
    except RankSignError as exc:
        rows.append(("tdecodable_bounds", f"n/a ({exc})"))
    if p.q ** (p.m * p.nk) <= bd.BRUTE_FORCE_LIMIT:
        rows += _brute_force_rows(p, _rng(args))
    _emit(args, rows)
    return EXIT_OK


def _brute_force_rows(p, rng):
    ctx = get_field(p.q, p.m)
    for _ in range(1000):
        Fb = lrpc.sample_f_basis(ctx, p.d, rng)
        T = sa.sample_subspace(ctx, p.t, rng)
        if all(bd.check_pair(ctx, Fb, T).values()):
            break
    else:
        return [("brute_force", "no admissible (F, T) pair found")]
    count = bd.brute_force_tdecodable(p, Fb, T)
    rows = [("brute_force_tdecodable", count), ("syndrome_space", p.q ** (p.m * p.nk)),
            ("brute_force_density", round(count / p.q ** (p.m * p.nk), 6))]
    try:
        lo, hi = bd.tdecodable_bounds(p)
        rows.append(("brute_force_within_bounds", lo <= count <= hi))
    except RankSignError:
        pass
    return rows


def cmd_density_experiment(args) -> int:
    p = parse_params(args.params)
    rng = _rng(args)
    trials = args.trials or 1000
    sk, pk = rs.keygen(p, rng)
    attempts = retried = 0
    for i in range(trials):
        _, a = rs.sign_counted(sk, pk, b"density %d" % i, rng)
        attempts += a
        retried += a > 1
    rows = [("params", p.describe()), ("signatures", trials), ("attempts", attempts),
            ("success_rate", round(trials / attempts, 6)),
            ("retry_fraction", round(retried / trials, 6)),
            ("failure_bound", round(2 / (p.q - 1), 6))]
    if p.q ** (p.m * p.nk) <= bd.BRUTE_FORCE_LIMIT:
        rows += _brute_force_rows(p, rng)
    _emit(args, rows)
    return EXIT_OK


def cmd_bench(args) -> int:
    p = parse_params(args.params)
    rng = _rng(args)
    trials = args.trials or 20
    get_field(p.q, p.m)
    t0 = time.perf_counter()
    keys = [rs.keygen(p, rng) for _ in range(max(1, trials // 10))]
    t1 = time.perf_counter()
    sk, pk = keys[0]
    sigs = [rs.sign(sk, pk, b"bench %d" % i, rng) for i in range(trials)]
    t2 = time.perf_counter()
    ok = all(rs.verify(pk, b"bench %d" % i, s) for i, s in enumerate(sigs))
    t3 = time.perf_counter()
    _emit(args, [("params", p.describe()),
                 ("keygen_ms", round(1000 * (t1 - t0) / len(keys), 3)),
                 ("sign_ms", round(1000 * (t2 - t1) / trials, 3)),
                 ("verify_ms", round(1000 * (t3 - t2) / trials, 3)),
                 ("sign_per_s", round(trials / (t2 - t1), 1)),
                 ("verify_per_s", round(trials / (t3 - t2), 1)),
                 ("all_verified", ok)])
    return EXIT_OK if ok else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rng-seed", type=lambda s: int(s, 0), default=None,
                        help=f"seed for the random generator (default: ${ENV_SEED}, else OS entropy)")
    common.add_argument("--machine", action="store_true", help="print stable key=value lines")

    withp = argparse.ArgumentParser(add_help=False)
    withp.add_argument("--params", default="table1-row2",
                       help="preset name (%s) or inline q=..,m=..,n=..,k=..,d=..,t=..,tp=..,rp=.."
                            % ", ".join(PRESETS))

    msg = argparse.ArgumentParser(add_help=False)
    msg.add_argument("--message", help="message file ('-' for stdin)")
    msg.add_argument("--text", help="message given inline")

    ap = argparse.ArgumentParser(prog="ranksign", description="rank-metric hash-and-sign signatures")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("keygen", parents=[common, withp], help="generate a key pair")
    s.add_argument("--out", help="output prefix for .rkpk/.rksk (default: ranksign)")
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("sign", parents=[common, msg], help="sign a message")
    s.add_argument("--key", required=True, help="secret key file (.rksk)")
    s.add_argument("--out", help="signature file (default: signature.rksig)")
    s.set_defaults(func=cmd_sign)

    s = sub.add_parser("verify", parents=[common, msg], help="verify a signature")
    s.add_argument("--pub", required=True, help="public key file (.rkpk)")
    s.add_argument("--sig", required=True, help="signature file (.rksig)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("estimate", parents=[common, withp], help="sizes and attack costs")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("bounds", parents=[common, withp], help="counting bounds and density")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("density-experiment", aliases=["density_experiment"], parents=[common, withp],
                       help="empirical signing success rate")
    s.add_argument("--trials", type=int, default=None)
    s.set_defaults(func=cmd_density_experiment)

    s = sub.add_parser("bench", parents=[common, withp], help="keygen/sign/verify timings")
    s.add_argument("--trials", type=int, default=None)
    s.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RankSignError) as exc:
        print(f"ranksign: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
