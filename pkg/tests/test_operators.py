import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vilenkin.core import block, build_spec
from vilenkin.operators import (
    BlockIndex, all_blocks, atom_average, cond_expectation, delta_k, delta_kl,
    hardy_norm, lp_l2_norm, lp_norm, pointwise_l2, project, square_S, square_S_tilde,
)
from vilenkin.transform import FORWARD, INVERSE, character, fast_forward, fast_inverse, modulate

from conftest import cgauss


def test_project_keeps_interval(spec232, rng):
    F = cgauss(rng, 12)
    P = project(F, (3, 7))
    assert np.array_equal(P[3:7], F[3:7])
    assert not np.any(P[:3]) and not np.any(P[7:])
    assert np.array_equal(project(P, (3, 7)), P)


@pytest.mark.parametrize("p", [(2, 3, 2), (3, 4), (2, 2, 2, 2)])
def test_cond_expectation_is_atom_average(p, rng):
    s = build_spec(p)
    f = cgauss(rng, 5, s.N)
    F = fast_forward(f, s)
    for k in range(s.K + 1):
        got = fast_inverse(cond_expectation(F, k, s), s)
        assert np.max(np.abs(got - atom_average(f, k, s))) < 1e-12


def test_delta_bands(spec232, rng):
    F = cgauss(rng, 12)
    D2 = delta_k(F, 2, spec232)
    assert np.array_equal(np.flatnonzero(D2), np.arange(2, 6))
    assert np.array_equal(np.flatnonzero(delta_k(F, 0, spec232)), [0])
    D22 = delta_kl(F, BlockIndex(2, 2), spec232)
    assert np.array_equal(np.flatnonzero(D22), [4, 5])
    with pytest.raises(ValueError):
        delta_kl(F, BlockIndex(2, 3), spec232)
    with pytest.raises(ValueError):
        delta_k(F, 4, spec232)
    with pytest.raises(ValueError):
        cond_expectation(F, -1, spec232)


def test_all_blocks_count(spec232):
    assert len(all_blocks(spec232)) == sum(p - 1 for p in spec232.p)


@pytest.mark.parametrize("p", [(2, 3, 2), (3, 4, 3), (5, 5)])
def test_blocks_partition_bands(p, rng):
    s = build_spec(p)
    F = cgauss(rng, s.N)
    for k in range(1, s.K + 1):
        total = sum(delta_kl(F, BlockIndex(k, l), s) for l in range(1, s.p[k - 1]))
        assert np.array_equal(total, delta_k(F, k, s))
    assert np.array_equal(sum(delta_k(F, k, s) for k in range(s.K + 1)), F)


@pytest.mark.parametrize("p", [(2, 3, 2), (3, 4, 3)])
def test_block_as_modulated_expectation(p, rng):
    # Delta_{k,l} f = w_{l m_{k-1}} E_{k-1}[conj(w_{l m_{k-1}}) Delta_k f]
    s = build_spec(p)
    F = cgauss(rng, s.N)
    for b in all_blocks(s):
        n = b.l * s.m[b.k - 1]
        g = modulate(fast_inverse(delta_k(F, b.k, s), s), n, s, INVERSE)
        e = fast_inverse(cond_expectation(fast_forward(g, s), b.k - 1, s), s)
        rebuilt = modulate(e, n, s, FORWARD)
        assert np.max(np.abs(rebuilt - fast_inverse(delta_kl(F, b, s), s))) < 1e-12


def test_square_functions_examples(spec232):
    # a single character has S = S~ = 1 everywhere
    for n in range(12):
        F = fast_forward(character(n, spec232), spec232)
        assert np.allclose(square_S(F, spec232), 1)
        assert np.allclose(square_S_tilde(F, spec232), 1)
    # two characters in the same band but different blocks
    F = np.zeros(12, complex)
    F[2] = F[4] = 1
    assert np.allclose(square_S_tilde(F, spec232), np.sqrt(2))
    assert np.allclose(square_S(F, spec232), np.abs(fast_inverse(F, spec232)))


@pytest.mark.parametrize("p", [(2, 3, 2), (4, 3), (5, 5)])
def test_square_function_inequalities(p, rng):
    s = build_spec(p)
    bound = np.sqrt(s.M - 1)
    for _ in range(20):
        F = cgauss(rng, s.N)
        S, St = square_S(F, s), square_S_tilde(F, s)
        assert np.all(S <= bound * St * (1 + 1e-12))
        for k in range(s.K + 1):
            assert np.all(square_S(cond_expectation(F, k, s), s) <= S * (1 + 1e-12))
        # both square functions are isometric in L^2
        norm = lp_norm(fast_inverse(F, s), 2)
        assert lp_norm(S, 2) == pytest.approx(norm, rel=1e-10)
        assert lp_norm(St, 2) == pytest.approx(norm, rel=1e-10)


def test_walsh_square_functions_coincide(rng):
    s = build_spec((2, 2, 2, 2))
    F = cgauss(rng, 4, s.N)
    assert np.max(np.abs(square_S(F, s) - square_S_tilde(F, s))) < 1e-12


def test_family_square_function_sums_members(spec232, rng):
    F = cgauss(rng, 3, 12)
    fam = square_S(F, spec232) ** 2
    each = sum(square_S(F[i], spec232) ** 2 for i in range(3))
    assert np.allclose(fam, each)


def test_lp_norms():
    f = np.array([3.0, 4.0, 0.0, 0.0])
    assert lp_norm(f, 2) == pytest.approx(2.5)
    assert lp_norm(f, 1) == pytest.approx(1.75)
    assert lp_norm(np.ones(5), 0.5) == pytest.approx(1.0)
    assert lp_norm(f, 0.5) == pytest.approx(((np.sqrt(3) + 2) / 4) ** 2)
    for bad in (0, -1):
        with pytest.raises(ValueError):
            lp_norm(f, bad)


def test_lp_l2_and_hardy(spec232, rng):
    c = 1.5 - 2j
    F = np.zeros(12, complex)
    F[0] = c
    assert hardy_norm(F, 1.3, spec232) == pytest.approx(abs(c))
    fam = cgauss(rng, 3, 12)
    assert hardy_norm(fam, 2, spec232) == pytest.approx(lp_l2_norm(fam, 2, spec232), rel=1e-12)
    pw = pointwise_l2(fam, spec232)
    sig = fast_inverse(fam, spec232)
    assert np.allclose(pw, np.sqrt(np.sum(np.abs(sig) ** 2, axis=0)))
    for n in range(12):
        W = fast_forward(character(n, spec232), spec232)
        assert hardy_norm(W, 0.7, spec232) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [(2, 3, 2), (3, 3)])
def test_block_operators_localize_exhaustively(p, rng):
    s = build_spec(p)
    for k in range(1, s.K + 1):
        width = s.N // s.m[k - 1]
        for e in range(s.m[k - 1]):
            f = np.zeros(s.N, complex)
            f[e * width:(e + 1) * width] = cgauss(rng, width)
            F = fast_forward(f, s)
            for l in range(1, s.p[k - 1]):
                out = fast_inverse(delta_kl(F, BlockIndex(k, l), s), s)
                out[e * width:(e + 1) * width] = 0
                assert np.max(np.abs(out)) < 1e-12


def test_cond_expectation_contracts_at_exponent_two(spec232, rng):
    for _ in range(10):
        F = cgauss(rng, 12)
        base = lp_norm(fast_inverse(F, spec232), 2)
        for k in range(4):
            assert lp_norm(fast_inverse(cond_expectation(F, k, spec232), spec232), 2) <= base + 1e-12


def test_block_bounds_match_core(spec232):
    for b in all_blocks(spec232):
        r = block(b.k, b.l, spec232)
        assert b.bounds(spec232) == (r.start, r.stop)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.0, 2.0), st.integers(0, 2**32 - 1))
def test_conditional_expectation_contracts_lp(p, seed):
    # averaging is a contraction on L^p for p >= 1
    s = build_spec((2, 3, 2))
    f = cgauss(np.random.default_rng(seed), 12)
    for k in range(4):
        assert lp_norm(atom_average(f, k, s), p) <= lp_norm(f, p) * (1 + 1e-12)
