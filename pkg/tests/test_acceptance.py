"""Acceptance gate: one test per criterion, each prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
from scipy.stats import chi2_contingency

from conftest import record
from ranksign import bounds_density as bd
from ranksign import lrpc
from ranksign import ranksign as rs
from ranksign import security_estimator as se
from ranksign import subspace_algebra as sa
from ranksign import wire
from ranksign.errors import WireError
from ranksign.field_tower import get_field
from ranksign.matrix_ops import matmul
from ranksign.params import PRESETS, TABLE1_ROWS
from ranksign.rank_metric import rank_weight


def _mutate(data: bytes, rng) -> bytes:
    i = int(rng.integers(len(data)))
    delta = int(rng.integers(1, 256))
    return data[:i] + bytes([data[i] ^ delta]) + data[i + 1:]


def _rejects(pk, msg, sig_bytes) -> bool:
    try:
        sig = wire.decode_signature(sig_bytes, pk)
    except WireError:
        return True
    return not rs.verify(pk, msg, sig)


def _cycles(preset, count, rng):
    p = PRESETS[preset]
    failures = []
    for i in range(count):
        sk, pk = rs.keygen(p, rng)
        msg = rng.bytes(32)
        sig = rs.sign(sk, pk, msg, rng)
        blob = wire.encode_signature(sig, pk)
        if not rs.verify(pk, msg, wire.decode_signature(blob, pk)):
            failures.append((i, "honest signature rejected"))
        if rs.verify(pk, _mutate(msg, rng), sig):
            failures.append((i, "mutated message accepted"))
        if not _rejects(pk, msg, _mutate(blob, rng)):
            failures.append((i, "mutated signature accepted"))
    return failures


def test_criterion_01_round_trip():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    failures = _cycles("table1-row2", 1000, rng) + _cycles("toy-q3", 1000, rng)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    record(1, ok, f"2x1000 cycles, {len(failures)} failures, {elapsed:.1f}s (limit 60s)")
    assert not failures, failures[:5]
    assert elapsed < 60


def test_criterion_02_retry_fraction():
    rng = np.random.default_rng(2)
    p = PRESETS["table1-row2"]
    t0 = time.perf_counter()
    sk, pk = rs.keygen(p, rng)
    attempts = [rs.sign_counted(sk, pk, b"retry %d" % i, rng)[1] for i in range(1000)]
    elapsed = time.perf_counter() - t0
    frac = sum(a > 1 for a in attempts) / len(attempts)
    ok = frac <= 0.02 and elapsed < 120
    record(2, ok, f"retry fraction {frac:.4f} (limit 0.02, bound 2/255 = {2 / 255:.4f}), {elapsed:.1f}s")
    assert frac <= 0.02
    assert elapsed < 120


def test_criterion_03_bounds():
    t0 = time.perf_counter()
    problems = []
    if bd.gvr(16, 8, 18, 2**8) != 5:
        problems.append("gvr(16,8,18,256)")
    if bd.density_exponent(PRESETS["table1-row2"]) != 0:
        problems.append("density exponent row 2")
    for name in TABLE1_ROWS:
        p = PRESETS[name]
        got = bd.gvr(p.n + p.t_prime, p.k + p.t_prime, p.m, p.q)
        if got != se.TABLE1[name][0]:
            problems.append(f"{name} gvr {got} != {se.TABLE1[name][0]}")
    for q in (2, 3, 4):
        for n in range(1, 5):
            for m in range(1, 5):
                total = sum(bd.sphere_size(n, m, q, t) for t in range(min(n, m) + 1))
                if total != q ** (n * m):
                    problems.append(f"completeness q={q} n={n} m={m}")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 10
    record(3, ok, f"{len(problems)} mismatches {problems[:3]}, {elapsed:.2f}s")
    assert not problems
    assert elapsed < 10


def test_criterion_04_sizes():
    t0 = time.perf_counter()
    wrong = []
    for name in TABLE1_ROWS:
        pk_bits, sig_bits = se.sizes(PRESETS[name])
        want = se.TABLE1[name][2:4]
        if (pk_bits, sig_bits) != want:
            wrong.append(f"{name}: {pk_bits}/{sig_bits} vs {want[0]}/{want[1]}")
    elapsed = time.perf_counter() - t0
    ok = not wrong and elapsed < 1
    record(4, ok, "all 7 rows exact" if not wrong else "; ".join(wrong))
    assert not wrong, wrong


def test_criterion_05_estimator():
    t0 = time.perf_counter()
    wrong = []
    for name in TABLE1_ROWS:
        p = PRESETS[name]
        pub = dict(zip(se.TABLE1_COLUMNS, se.TABLE1[name]))
        if se.ds_attack_bits(p) != pub["ds"]:
            wrong.append(f"{name} ds {se.ds_attack_bits(p)} vs {pub['ds']}")
        for col, fn in (("dual", se.dual_attack_bits), ("da", se.direct_attack_bits)):
            got = fn(p)
            if abs(got - pub[col]) > 16:
                wrong.append(f"{name} {col} {got:.1f} vs {pub[col]}")
    elapsed = time.perf_counter() - t0
    ok = not wrong and elapsed < 5
    record(5, ok, "DS exact, Dual/DA within 16 bits" if not wrong else "; ".join(wrong))
    assert not wrong, wrong


def test_criterion_06_decodable_count():
    rng = np.random.default_rng(6)
    p = PRESETS["toy-q3"]
    ctx = get_field(p.q, p.m)
    t0 = time.perf_counter()
    while True:
        Fb = lrpc.sample_f_basis(ctx, p.d, rng)
        T = sa.sample_subspace(ctx, p.t, rng)
        if all(bd.check_pair(ctx, Fb, T).values()):
            break
    count = bd.brute_force_tdecodable(p, Fb, T)
    lo, hi = bd.tdecodable_bounds(p)
    E_T = bd.count_superspaces(p.m, p.q, p.t, p.r_prime)
    assert hi == E_T * 3**8 and lo == Fraction(1, 4) * E_T * 3**8
    elapsed = time.perf_counter() - t0
    ok = lo <= count <= hi and elapsed < 60
    record(6, ok, f"count {count} in [{float(lo):.0f}, {hi}], {elapsed:.1f}s")
    assert lo <= count <= hi
    assert elapsed < 60


def test_criterion_07_lemma2():
    rng = np.random.default_rng(7)
    trials = 10**5
    t0 = time.perf_counter()
    rate = bd.lemma2_monte_carlo(2, 1, 2, 8, 3, trials, rng)
    elapsed = time.perf_counter() - t0
    bound = float(bd.lemma2_bound(2, 1, 2, 8, 3))
    assert bd.lemma2_bound(2, 1, 2, 8, 3) == Fraction(729, 13122)
    limit = bound + 3 * math.sqrt(bound * (1 - bound) / trials)
    ok = rate <= limit and elapsed < 30
    record(7, ok, f"failure rate {rate:.5f} <= {limit:.5f}, {elapsed:.1f}s")
    assert rate <= limit
    assert elapsed < 30


def test_criterion_08_planted_decoding():
    rng = np.random.default_rng(8)
    p = PRESETS["table1-row2"]
    t0 = time.perf_counter()
    bad = 0
    code = lrpc.gen_code(p, rng)
    for i in range(1000):
        if i % 100 == 0:
            code = lrpc.gen_code(p, rng)
        T, E, e, s = lrpc.planted_instance(code, rng)
        res = lrpc.decode(code, T, s)
        bad += not (np.array_equal(res.e, e) and res.E == E)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    record(8, ok, f"{1000 - bad}/1000 planted instances recovered, {elapsed:.1f}s")
    assert bad == 0
    assert elapsed < 60


def _contingency_p(a, b):
    cats = sorted(set(a) | set(b))
    if len(cats) < 2:
        return 1.0
    table = np.array([[a.count(c) for c in cats], [b.count(c) for c in cats]])
    return chi2_contingency(table).pvalue


def test_criterion_09_simulator():
    rng = np.random.default_rng(9)
    p = PRESETS["toy-q16"]
    t0 = time.perf_counter()
    sk, pk = rs.keygen(p, rng)
    ctx = pk.ctx
    authentic, simulated = [], []
    broken = 0
    for i in range(1000):
        sig = rs.sign(sk, pk, b"sim %d" % i, rng)
        authentic.append(rs.signature_statistics(ctx, sig.e))
        e, y = rs.simulate_signature(pk, rng)
        broken += not (np.array_equal(matmul(ctx, pk.Hpub, e), y) and rank_weight(ctx, e) == p.r)
        simulated.append(rs.signature_statistics(ctx, e))
    pvals = [_contingency_p([s[i] for s in authentic], [s[i] for s in simulated]) for i in range(3)]
    elapsed = time.perf_counter() - t0
    ok = broken == 0 and min(pvals) > 0.01 and elapsed < 120
    record(9, ok, f"p-values {[round(float(x), 3) for x in pvals]}, {broken} malformed couples, {elapsed:.1f}s")
    assert broken == 0
    assert min(pvals) > 0.01
    assert elapsed < 120


def test_criterion_10_fuzz():
    rng = np.random.default_rng(10)
    p = PRESETS["toy-q3"]
    sk, pk = rs.keygen(p, rng)
    decoders = {
        "params": wire.decode_params,
        "public": wire.decode_public,
        "secret": wire.decode_secret,
        "signature": lambda b: wire.decode_signature(b, pk),
    }
    t0 = time.perf_counter()
    crashes = []
    for name, dec in decoders.items():
        for _ in range(10**5):
            blob = rng.bytes(int(rng.integers(0, 64)))
            try:
                dec(blob)
            except WireError:
                pass
            except Exception as exc:  # noqa: BLE001 - anything untyped is a finding
                crashes.append((name, blob, repr(exc)))
    elapsed = time.perf_counter() - t0
    ok = not crashes and elapsed < 60
    record(10, ok, f"4x10^5 random blobs, {len(crashes)} untyped errors, {elapsed:.1f}s")
    assert not crashes, crashes[:3]
    assert elapsed < 60
