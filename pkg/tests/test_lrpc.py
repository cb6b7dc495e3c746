import numpy as np
import pytest

from ranksign import bounds_density as bd
from ranksign import lrpc
from ranksign import matrix_ops as mo
from ranksign import subspace_algebra as sa
from ranksign.errors import DecodingFailure, InvalidParams
from ranksign.params import PRESETS, CodeParams


@pytest.fixture(scope="module")
def row2_code():
    return lrpc.gen_code(PRESETS["table1-row2"], np.random.default_rng(100))


def test_code_structure(row2_code):
    code = row2_code
    p, ctx = code.params, code.ctx
    assert np.array_equal(code.F[0], ctx.one())
    assert code.F_space.dim == p.d
    assert lrpc.mixing_dim(ctx, code.F) == 2 * p.d - 1
    assert sa.contains_all(code.F_space, code.H.reshape(-1, p.m))
    assert np.array_equal(mo.matmul(ctx.base, code.M, code.M_inv), mo.identity(ctx.base, p.n))


def test_formal_matrix_is_invertible(row2_code):
    code = row2_code
    p = code.params
    Hf = lrpc.build_formal_matrix(code)
    assert Hf.shape == (p.n * p.r, p.nk * p.r * p.d)
    assert mo.rank(code.ctx.base, Hf) == p.n * p.r


def test_formal_matrix_maps_coordinates(row2_code):
    code = row2_code
    p, ctx = code.params, code.ctx
    B = ctx.base
    rng = np.random.default_rng(1)
    E = sa.sample_subspace(ctx, p.r, rng)
    coef = B.random(rng, (p.n, p.r))
    e = B.sum(B.mul(coef[:, :, None], E.basis[None]), axis=1)
    s = lrpc.syndrome(code, e)
    prod = ctx.mul(code.F[:, None], E.basis[None]).reshape(p.d * p.r, p.m)
    sigma = sa.basis_coordinates(B, prod, s).reshape(p.nk * p.d, p.r)   # row i*d+u, col j
    unknowns = coef.T.reshape(-1)                                        # index j*n + l
    got = mo.matmul(B, unknowns, lrpc.build_formal_matrix(code))
    assert np.array_equal(got, sigma.T.reshape(-1))


def test_planted_instances_decode(row2_code):
    rng = np.random.default_rng(2)
    for _ in range(50):
        T, E, e, s = lrpc.planted_instance(row2_code, rng)
        res = lrpc.decode(row2_code, T, s)
        assert np.array_equal(res.e, e) and res.E == E
        assert sa.subspace_of(T, res.E)


@pytest.mark.parametrize("name", ["toy-q16", "table1-row4", "table1-row5"])
def test_planted_instances_other_presets(name):
    p = PRESETS[name]
    rng = np.random.default_rng(3)
    code = lrpc.gen_code(p, rng)
    assert code.pairwise == (p.r * (2 * p.d - 1) <= p.m)
    for _ in range(10):
        T, E, e, s = lrpc.planted_instance(code, rng)
        assert np.array_equal(lrpc.decode(code, T, s).e, e)


def test_failure_flags(row2_code):
    code = row2_code
    p, ctx = code.params, code.ctx
    rng = np.random.default_rng(4)
    T = sa.sample_subspace(ctx, p.t, rng)
    # zero syndrome: S = <FT> is too small
    ok, flags = lrpc.check_tdecodable(code, T, ctx.zeros((p.nk,)))
    assert not ok and flags == {"iii"}
    with pytest.raises(DecodingFailure) as info:
        lrpc.decode(code, T, ctx.zeros((p.nk,)))
    assert info.value.failed == {"iii"}
    # with only r - t fresh dimensions, T + E is a valid support
    E = sa.sample_subspace(ctx, p.r - p.t, rng)
    e = sa.sample_vector_in(E, p.n, rng)
    ok, got = lrpc.check_tdecodable(code, T, lrpc.syndrome(code, e))
    assert ok and got == sa.add(T, E)


def test_condition_ii_flag():
    # a syndrome space S of dimension rd whose pull-back is bigger than r
    p = PRESETS["toy-q2"]
    rng = np.random.default_rng(5)
    code = lrpc.gen_code(p, rng)
    ctx = code.ctx
    seen = set()
    for _ in range(400):
        T = sa.sample_subspace(ctx, p.t, rng)
        s = ctx.random(rng, (p.nk,))
        E, failed = lrpc.support_from_syndrome(ctx, code.F, T, s, p.r)
        seen |= failed
        if not failed:
            assert E.dim == p.r and sa.subspace_of(T, E)
    assert "iii" in seen and "ii" in seen


def test_random_syndromes_decode_to_rank_r(row2_code):
    code = row2_code
    p, ctx = code.params, code.ctx
    rng = np.random.default_rng(6)
    ok = 0
    for _ in range(100):
        T = sa.sample_subspace(ctx, p.t, rng)
        s = ctx.random(rng, (p.nk,))
        try:
            res = lrpc.decode(code, T, s)
        except DecodingFailure:
            continue
        ok += 1
        assert np.array_equal(lrpc.syndrome(code, res.e), s)
        assert sa.contains_all(res.E, res.e) and sa.subspace_of(T, res.E)
    assert ok >= 97


def test_syndrome_decoder_agrees_with_candidate_support():
    # on toy-q2 the decoder's test and the support enumeration classify syndromes identically
    p = PRESETS["toy-q2"]
    rng = np.random.default_rng(7)
    code = lrpc.gen_code(p, rng)
    ctx = code.ctx
    T = sa.sample_subspace(ctx, p.t, rng)
    valid = [E for E in bd.enumerate_superspaces(T, p.r) if bd.decodable_support(ctx, code.F, E)]
    for _ in range(200):
        E = valid[int(rng.integers(len(valid)))]
        e = sa.sample_vector_in(E, p.n, rng)
        s = lrpc.syndrome(code, e)
        ok, got = lrpc.check_tdecodable(code, T, s)
        if ok:
            assert got == E


def test_parameter_guards():
    rng = np.random.default_rng(8)
    rect = CodeParams(q=16, m=8, n=3, k=1, d=2, t=1, t_prime=1, r_prime=1)
    with pytest.raises(InvalidParams):
        lrpc.gen_code(rect, rng)
    code = lrpc.gen_code(rect, rng, allow_rectangular=True)
    assert code.M_inv is None
    T, E, e, s = lrpc.planted_instance(code, rng)
    assert np.array_equal(lrpc.decode(code, T, s).e, e)
    from ranksign.field_tower import get_field
    with pytest.raises(InvalidParams):
        lrpc.sample_f_basis(get_field(2, 4), 3, rng)
    code2 = lrpc.gen_code(PRESETS["toy-q3"], rng)
    with pytest.raises(ValueError):
        lrpc.decode(code2, sa.zero_space(code2.ctx), code2.ctx.zeros((2,)))
