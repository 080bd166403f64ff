import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vilenkin import _fallback
from vilenkin.core import build_spec, dot_plus, dot_minus
from vilenkin.transform import (
    FORWARD, INVERSE, atom_digits, character, evaluate_character, fast_forward,
    fast_inverse, modulate, naive_forward, naive_inverse, _output_perm,
)

from conftest import cgauss

SPECS = [(2, 3, 2), (3, 3, 3), (2, 3, 4, 2), (5, 5), (2, 2, 2, 2), (7,), (4, 3)]


def rademacher_product(n, j, p):
    """w_n at the midpoint of atom j, built from r_i as products over segments."""
    N = int(np.prod(p))
    x = (j + 0.5) / N
    val, m_prev, n_rest = 1.0 + 0j, 1, n
    for pi in p:
        alpha = n_rest % pi
        n_rest //= pi
        m_i = m_prev * pi
        k = int(np.floor(x * m_i)) % pi  # index of the sub-segment at scale m_i
        val *= cmath.exp(2j * cmath.pi * k / pi) ** alpha
        m_prev = m_i
    return val


def fwht(x):
    """Radix-2 Walsh-Hadamard butterfly in natural (Hadamard) order."""
    x = np.array(x, dtype=complex)
    h = 1
    while h < len(x):
        for i in range(0, len(x), 2 * h):
            a, b = x[i:i + h].copy(), x[i + h:i + 2 * h].copy()
            x[i:i + h], x[i + h:i + 2 * h] = a + b, a - b
        h *= 2
    return x


def bitrev(n, bits):
    return int(format(n, f"0{bits}b")[::-1], 2)


@pytest.mark.parametrize("j,digits", [(0, (0, 0, 0)), (6, (1, 0, 0)), (11, (1, 2, 1))])
def test_atom_digits(spec232, j, digits):
    assert atom_digits(j, spec232) == digits
    stride = [spec232.N // spec232.m[i + 1] for i in range(3)]
    assert sum(a * s for a, s in zip(digits, stride)) == j


def test_character_examples():
    s = build_spec((2, 3, 2))
    assert np.allclose(character(0, s), 1)
    w1 = character(1, s)
    for j in range(s.N):
        assert w1[j] == pytest.approx(1 if atom_digits(j, s)[0] == 0 else -1)
    s3 = build_spec((3, 2))
    j = next(j for j in range(s3.N) if atom_digits(j, s3)[0] == 2)
    assert evaluate_character(1, j, s3) == pytest.approx(cmath.exp(4j * cmath.pi / 3))


@pytest.mark.parametrize("p", SPECS)
def test_character_matches_rademacher_products(p):
    s = build_spec(p)
    for n in range(s.N):
        w = character(n, s)
        ref = np.array([rademacher_product(n, j, p) for j in range(s.N)])
        assert np.max(np.abs(w - ref)) < 1e-12


@pytest.mark.parametrize("p", [(2, 3, 2), (3, 4), (2, 2, 2)])
def test_orthonormality_and_character_law(p):
    s = build_spec(p)
    W = np.array([character(n, s) for n in range(s.N)])
    assert np.max(np.abs(W @ W.conj().T / s.N - np.eye(s.N))) < 1e-12
    for k in range(s.N):
        for l in range(s.N):
            assert np.max(np.abs(W[k] * W[l] - W[dot_plus(k, l, s)])) < 1e-12


def test_naive_forward_examples(spec232, rng):
    c = 2.5 - 1j
    F = naive_forward(np.full(12, c), spec232)
    assert F[0] == pytest.approx(c)
    assert np.max(np.abs(F[1:])) < 1e-14
    for n in range(12):
        e = np.zeros(12)
        e[n] = 1
        assert np.max(np.abs(naive_forward(character(n, spec232), spec232) - e)) < 1e-12
    f = cgauss(rng, 12)
    assert np.sum(np.abs(naive_forward(f, spec232)) ** 2) == pytest.approx(np.mean(np.abs(f) ** 2), rel=1e-12)


@pytest.mark.parametrize("p", SPECS)
def test_fast_matches_naive(p, rng):
    s = build_spec(p)
    f = cgauss(rng, 100, s.N)
    ref = naive_forward(f, s)
    assert np.max(np.abs(fast_forward(f, s) - ref)) <= 1e-10 * np.max(np.abs(ref))
    assert np.max(np.abs(fast_inverse(ref, s) - naive_inverse(ref, s))) <= 1e-10 * np.max(np.abs(f))
    assert np.max(np.abs(fast_inverse(fast_forward(f, s), s) - f)) < 1e-10


def test_fast_on_basis_vectors(spec232):
    for n in range(12):
        w = character(n, spec232)
        assert np.max(np.abs(fast_forward(w, spec232) - naive_forward(w, spec232))) < 1e-12


def test_walsh_case_matches_hadamard_butterfly(rng):
    s = build_spec((2, 2, 2))
    f = cgauss(rng, 8)
    H = fwht(f) / 8
    # natural Hadamard order pairs bit i of n with bit i of j; this enumeration
    # pairs the least significant index digit with the coarsest atom digit
    expected = np.array([H[bitrev(n, 3)] for n in range(8)])
    assert np.max(np.abs(fast_forward(f, s) - expected)) < 1e-12


def test_inverse_examples(spec232):
    e0 = np.zeros(12, complex)
    e0[0] = 1
    assert np.allclose(fast_inverse(e0, spec232), 1)
    for n in range(12):
        e = np.zeros(12, complex)
        e[n] = 1
        assert np.max(np.abs(fast_inverse(e, spec232) - character(n, spec232))) < 1e-12


def test_length_mismatch(spec232):
    with pytest.raises(ValueError):
        fast_forward(np.zeros(11), spec232)
    with pytest.raises(ValueError):
        fast_inverse(np.zeros(13), spec232)


def test_modulate(spec232, rng):
    f = cgauss(rng, 12)
    assert np.array_equal(modulate(f, 0, spec232), f)
    for k in range(12):
        for n in range(12):
            got = modulate(character(k, spec232), n, spec232, FORWARD)
            assert np.max(np.abs(got - character(dot_plus(k, n, spec232), spec232))) < 1e-12
    F = fast_forward(f, spec232)
    for n in range(12):
        G = fast_forward(modulate(f, n, spec232, FORWARD), spec232)
        shifted = np.array([F[dot_minus(m, n, spec232)] for m in range(12)])
        assert np.max(np.abs(G - shifted)) < 1e-12
        back = modulate(modulate(f, n, spec232, FORWARD), n, spec232, INVERSE)
        assert np.max(np.abs(back - f)) < 1e-12
    with pytest.raises(ValueError):
        modulate(f, 1, spec232, "sideways")


def test_backends_agree(rng):
    kernel = pytest.importorskip("vilenkin._kernel")
    for p in SPECS + [(2,) * 10, (64, 2)]:
        s = build_spec(p)
        x = cgauss(rng, 3, s.N)
        args = (np.asarray(s.p), _output_perm(s))
        for inverse in (False, True):
            a = _fallback.vilenkin_transform(x, *args, inverse)
            b = kernel.vilenkin_transform(x, *args, inverse)
            assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))


def test_batch_shapes(spec232, rng):
    x = cgauss(rng, 2, 3, 12)
    out = fast_forward(x, spec232)
    assert out.shape == x.shape
    assert np.allclose(out[1, 2], fast_forward(x[1, 2], spec232))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_parseval_and_roundtrip_property(p, seed):
    s = build_spec(p)
    f = cgauss(np.random.default_rng(seed), s.N)
    F = fast_forward(f, s)
    assert np.sum(np.abs(F) ** 2) == pytest.approx(np.mean(np.abs(f) ** 2), rel=1e-10)
    assert np.max(np.abs(fast_inverse(F, s) - f)) < 1e-10
