"""Spectral projections, martingale/block differences, square functions, norms.

Operators take spectra (last axis of length m_K) and return spectra; only
square functions and norms go to signal space. A 2-D array of spectra is an
l^2-valued function, one row per component.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SystemSpec
from .transform import fast_inverse


@dataclass(frozen=True)
class BlockIndex:
    """delta_{k,l} = [l*m_{k-1}, (l+1)*m_{k-1}) with k >= 1, 1 <= l < p_k."""

    k: int
    l: int

    def bounds(self, spec: SystemSpec) -> tuple[int, int]:
        if not 1 <= self.k <= spec.K:
            raise ValueError(f"level {self.k} outside [1, {spec.K}]")
        if not 1 <= self.l < spec.p[self.k - 1]:
            raise ValueError(f"branch {self.l} outside [1, {spec.p[self.k - 1] - 1}]")
        w = spec.m[self.k - 1]
        return self.l * w, (self.l + 1) * w


def all_blocks(spec: SystemSpec) -> list[BlockIndex]:
    return [BlockIndex(k, l) for k in range(1, spec.K + 1) for l in range(1, spec.p[k - 1])]


def _mask(F, lo: int, hi: int) -> np.ndarray:
    F = np.asarray(F, dtype=np.complex128)
    out = np.zeros_like(F)
    out[..., lo:hi] = F[..., lo:hi]
    return out


def project(F, interval: tuple[int, int]) -> np.ndarray:
    """Keep coefficients with index in [a, b)."""
    a, b = interval
    return _mask(F, a, b)


def cond_expectation(F, k: int, spec: SystemSpec) -> np.ndarray:
    """E_k as truncation to indices below m_k."""
    if not 0 <= k <= spec.K:
        raise ValueError(f"level {k} outside [0, {spec.K}]")
    return _mask(F, 0, spec.m[k])


def delta_k(F, k: int, spec: SystemSpec) -> np.ndarray:
    if k == 0:
        return _mask(F, 0, 1)
    if not 1 <= k <= spec.K:
        raise ValueError(f"level {k} outside [0, {spec.K}]")
    return _mask(F, spec.m[k - 1], spec.m[k])


def delta_kl(F, block: BlockIndex, spec: SystemSpec) -> np.ndarray:
    lo, hi = block.bounds(spec)
    return _mask(F, lo, hi)


def _bands(spec: SystemSpec, fine: bool) -> list[tuple[int, int]]:
    if fine:
        return [(0, 1)] + [b.bounds(spec) for b in all_blocks(spec)]
    return [(0, 1)] + [(spec.m[k - 1], spec.m[k]) for k in range(1, spec.K + 1)]


def _square(fam, spec: SystemSpec, fine: bool) -> np.ndarray:
    fam = np.asarray(fam, dtype=np.complex128)
    fam = fam.reshape(-1, fam.shape[-1])
    bands = _bands(spec, fine)
    # one spectrum per (member, band), synthesized in a single batched call
    stack = np.zeros((fam.shape[0], len(bands), fam.shape[-1]), dtype=np.complex128)
    for i, (lo, hi) in enumerate(bands):
        stack[:, i, lo:hi] = fam[:, lo:hi]
    vals = fast_inverse(stack, spec)
    return np.sqrt(np.sum(vals.real**2 + vals.imag**2, axis=(0, 1)))


def square_S(fam, spec: SystemSpec) -> np.ndarray:
    """Martingale square function sqrt(sum_s sum_k |Delta_k f_s|^2) on atoms."""
    return _square(fam, spec, fine=False)


def square_S_tilde(fam, spec: SystemSpec) -> np.ndarray:
    """Block square function: Delta_0 plus every Delta_{k,l}."""
    return _square(fam, spec, fine=True)


def lp_norm(f, p: float) -> float:
    """Power mean ((1/N) sum |f|^p)^(1/p); a quasinorm when p < 1."""
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    a = np.abs(np.asarray(f))
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    return float(np.mean(a**p) ** (1.0 / p))


def pointwise_l2(fam, spec: SystemSpec) -> np.ndarray:
    fam = np.asarray(fam, dtype=np.complex128)
    vals = fast_inverse(fam.reshape(-1, fam.shape[-1]), spec)
    return np.sqrt(np.sum(vals.real**2 + vals.imag**2, axis=0))


def lp_l2_norm(fam, p: float, spec: SystemSpec) -> float:
    return lp_norm(pointwise_l2(fam, spec), p)


def hardy_norm(fam, p: float, spec: SystemSpec) -> float:
    """||S f||_p for an l^2-valued family of spectra."""
    return lp_norm(square_S(fam, spec), p)


def atom_average(f, k: int, spec: SystemSpec) -> np.ndarray:
    """Average a Signal over the atoms of F_k (time-domain E_k)."""
    f = np.asarray(f, dtype=np.complex128)
    width = spec.N // spec.m[k]
    means = f.reshape(f.shape[:-1] + (spec.m[k], width)).mean(axis=-1)
    return np.repeat(means, width, axis=-1)
