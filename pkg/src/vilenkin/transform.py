"""Vilenkin characters on atoms and the fast/naive Vilenkin-Fourier transforms.

A Signal is a complex array of length m_K whose entry j is the value of an
F_K-measurable function on the atom [j/m_K, (j+1)/m_K). A Spectrum holds the
coefficients (f, w_n) for n < m_K, with the inner product taken as the mean
over atoms, so every w_n has unit L^2 norm. Both transforms act on the last
axis, so a 2-D array is a family of signals or spectra.
"""
from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from .core import SystemSpec, to_digits

if os.environ.get("VILENKIN_BACKEND", "").lower() == "numpy":
    from ._fallback import vilenkin_transform as _transform
    BACKEND = "numpy"
else:
    try:
        from ._kernel import vilenkin_transform as _transform
        BACKEND = "cython"
    except ImportError:
        from ._fallback import vilenkin_transform as _transform
        BACKEND = "numpy"

FORWARD = "forward"
INVERSE = "inverse"


def atom_digits(j: int, spec: SystemSpec) -> tuple[int, ...]:
    """Big-endian atom digits: j = sum(a_i * m_K / m_i), a_1 most significant."""
    j = int(j)
    if not 0 <= j < spec.N:
        raise ValueError(f"atom {j} outside [0, {spec.N})")
    out = []
    for i in range(spec.K):
        stride = spec.N // spec.m[i + 1]
        out.append((j // stride) % spec.p[i])
    return tuple(out)


@lru_cache(maxsize=64)
def _atom_digit_table(spec: SystemSpec) -> np.ndarray:
    j = np.arange(spec.N, dtype=np.int64)
    out = np.empty((spec.N, spec.K), dtype=np.int64)
    for i in range(spec.K):
        out[:, i] = (j // (spec.N // spec.m[i + 1])) % spec.p[i]
    return out


def _phase(n_digits: np.ndarray, a_digits: np.ndarray, spec: SystemSpec) -> np.ndarray:
    # w_n(j) = exp(2 pi i * sum(alpha_i * a_i / p_i)); reduce each term mod p_i first
    frac = np.zeros((n_digits.shape[0], a_digits.shape[0]))
    for i, pi in enumerate(spec.p):
        frac += np.multiply.outer(n_digits[:, i], a_digits[:, i]) % pi / pi
    return np.exp(2j * np.pi * (frac % 1.0))


def evaluate_character(n: int, j: int, spec: SystemSpec) -> complex:
    alpha = np.array(to_digits(n, spec), dtype=np.int64)
    a = np.array(atom_digits(j, spec), dtype=np.int64)
    return complex(_phase(alpha[None, :], a[None, :], spec)[0, 0])


def character(n: int, spec: SystemSpec) -> np.ndarray:
    """Signal of w_n on all atoms."""
    alpha = np.array(to_digits(n, spec), dtype=np.int64)
    return _phase(alpha[None, :], _atom_digit_table(spec), spec)[0]


def character_matrix(spec: SystemSpec) -> np.ndarray:
    """Dense (N, N) array W with W[n, j] = w_n(j)."""
    return _phase(spec.index_digits, _atom_digit_table(spec), spec)


def _check_length(x, spec: SystemSpec) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 0 or x.shape[-1] != spec.N:
        raise ValueError(f"expected last axis of length {spec.N}, got shape {x.shape}")
    return x


def naive_forward(f, spec: SystemSpec) -> np.ndarray:
    """O(N^2) analysis: coeffs[n] = mean_j f[j] * conj(w_n(j))."""
    f = _check_length(f, spec)
    return f @ character_matrix(spec).conj().T / spec.N


def naive_inverse(F, spec: SystemSpec) -> np.ndarray:
    F = _check_length(F, spec)
    return F @ character_matrix(spec)


@lru_cache(maxsize=64)
def _output_perm(spec: SystemSpec) -> np.ndarray:
    # index n (digits alpha_1.. little-endian) sits at sum(alpha_i * m_K/m_i)
    strides = np.array([spec.N // spec.m[i + 1] for i in range(spec.K)], dtype=np.int64)
    return spec.index_digits @ strides


def fast_forward(f, spec: SystemSpec) -> np.ndarray:
    f = _check_length(f, spec)
    return _transform(f, np.asarray(spec.p, dtype=np.int64), _output_perm(spec), False)


def fast_inverse(F, spec: SystemSpec) -> np.ndarray:
    """Synthesis sum_n F[n] * w_n(j); no 1/N factor."""
    F = _check_length(F, spec)
    return _transform(F, np.asarray(spec.p, dtype=np.int64), _output_perm(spec), True)


def modulate(f, n: int, spec: SystemSpec, direction: str = FORWARD) -> np.ndarray:
    """Multiply a Signal pointwise by w_n (forward) or by conj(w_n) (inverse)."""
    f = _check_length(f, spec)
    w = character(n, spec)
    if direction == FORWARD:
        return f * w
    if direction == INVERSE:
        return f * w.conj()
    raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}")
