"""Mixed-radix indices and the digitwise group law on Z_+.

A bounded Vilenkin system is fixed by radices p_1, ..., p_K. An index n in
[0, m_K) is written as n = a_1 + a_2*m_1 + ... + a_K*m_{K-1}, with
m_l = p_1 * ... * p_l. Characters multiply by adding digits modulo p_i,
which is the ``dot_plus`` law below.

Every spec also carries one padding level with radix 2. Interval end points
equal to m_K need a nonzero digit at position K+1, and index arithmetic on
such values runs at that padded depth.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

MAX_RADIX = 64
PAD_RADIX = 2
_INT64_MAX = 2**63 - 1


class SpecError(ValueError):
    """Invalid radix sequence or depth."""


@dataclass(frozen=True)
class SystemSpec:
    p: tuple[int, ...]
    K: int
    m: tuple[int, ...] = field(repr=False)
    M: int = field(repr=False)

    @property
    def N(self) -> int:
        """Number of atoms (and of characters) at depth K."""
        return self.m[self.K]

    @property
    def work_p(self) -> tuple[int, ...]:
        return self.p + (PAD_RADIX,)

    @property
    def work_m(self) -> tuple[int, ...]:
        return self.m + (self.m[-1] * PAD_RADIX,)

    def padded(self) -> "SystemSpec":
        """The depth K+1 system with the padding radix made explicit."""
        return build_spec(self.work_p, self.K + 1)

    def describe(self) -> dict:
        return {"p": list(self.p), "K": self.K}

    @cached_property
    def index_digits(self) -> np.ndarray:
        """(N, K) array; row n holds the little-endian digits of n."""
        n = np.arange(self.N, dtype=np.int64)
        out = np.empty((self.N, self.K), dtype=np.int64)
        for i, pi in enumerate(self.p):
            out[:, i] = (n // self.m[i]) % pi
        return out


def build_spec(p: Sequence[int], K: int | None = None) -> SystemSpec:
    """Build a depth-``K`` system from radices ``p`` (first K are used)."""
    p = tuple(int(x) for x in p)
    if K is None:
        K = len(p)
    K = int(K)
    if K < 1:
        raise SpecError(f"depth must be >= 1, got {K}")
    if len(p) < K:
        raise SpecError(f"need {K} radices, got {len(p)}")
    p = p[:K]
    for i, pi in enumerate(p, start=1):
        if pi < 2:
            raise SpecError(f"radix p_{i} = {pi} is below 2")
    M = max(p)
    if M > MAX_RADIX:
        raise SpecError(f"radix bound {M} exceeds cap {MAX_RADIX}")
    m = [1]
    for pi in p:
        m.append(m[-1] * pi)
    # the padded level doubles m_K; keep that inside int64 too
    if m[-1] * PAD_RADIX > _INT64_MAX:
        raise SpecError(f"m_K = {m[-1]} overflows 64-bit indices")
    return SystemSpec(p=p, K=K, m=tuple(m), M=M)


def parse_spec(text: str) -> SystemSpec:
    """Parse a comma-separated radix list such as ``"2,3,2"``."""
    try:
        p = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise SpecError(f"malformed radix list {text!r}") from exc
    return build_spec(p)


def _depth(n: int, spec: SystemSpec, padded: bool) -> int:
    depth = spec.K + 1 if padded else spec.K
    bound = spec.work_m[depth]
    if not 0 <= n < bound:
        raise ValueError(f"index {n} outside [0, {bound})")
    return depth


def to_digits(n: int, spec: SystemSpec, padded: bool = False) -> tuple[int, ...]:
    """Little-endian (m)-radix digits of ``n``: n = sum(d[i] * m_i)."""
    n = int(n)
    depth = _depth(n, spec, padded)
    digits = []
    for pi in spec.work_p[:depth]:
        n, d = divmod(n, pi)
        digits.append(d)
    return tuple(digits)


def from_digits(digits: Sequence[int], spec: SystemSpec) -> int:
    if len(digits) > spec.K + 1:
        raise ValueError(f"too many digits: {len(digits)}")
    n = 0
    for i, d in enumerate(digits):
        pi = spec.work_p[i]
        if not 0 <= d < pi:
            raise ValueError(f"digit {d} at position {i + 1} outside [0, {pi})")
        n += int(d) * spec.work_m[i]
    return n


def _combine(k: int, l: int, spec: SystemSpec, sign: int) -> int:
    dk = to_digits(k, spec, padded=True)
    dl = to_digits(l, spec, padded=True)
    return from_digits(
        [(a + sign * b) % pi for a, b, pi in zip(dk, dl, spec.work_p)], spec
    )


def dot_plus(k: int, l: int, spec: SystemSpec) -> int:
    """Digitwise sum mod p_i; w_k * w_l = w_{k dot_plus l}."""
    return _combine(k, l, spec, 1)


def dot_neg(k: int, spec: SystemSpec) -> int:
    return from_digits(
        [(-a) % pi for a, pi in zip(to_digits(k, spec, padded=True), spec.work_p)],
        spec,
    )


def dot_minus(k: int, l: int, spec: SystemSpec) -> int:
    return _combine(k, l, spec, -1)


def dot_minus_array(values: np.ndarray, shift: int, spec: SystemSpec) -> np.ndarray:
    """Vectorized ``dot_minus(v, shift)`` over an integer array."""
    values = np.asarray(values, dtype=np.int64)
    sd = to_digits(shift, spec, padded=True)
    out = np.zeros_like(values)
    for i, pi in enumerate(spec.work_p):
        mi = spec.work_m[i]
        d = (values // mi) % pi
        out += ((d - sd[i]) % pi) * mi
    return out


def dot_plus_array(values: np.ndarray, shift: int, spec: SystemSpec) -> np.ndarray:
    return dot_minus_array(values, dot_neg(shift, spec), spec)


def block(k: int, l: int, spec: SystemSpec) -> range:
    """The index block [l*m_{k-1}, (l+1)*m_{k-1}) for 1 <= l < p_k.

    ``k`` may equal K+1, addressing the padded level.
    """
    if not 1 <= k <= spec.K + 1:
        raise ValueError(f"level {k} outside [1, {spec.K + 1}]")
    pk = spec.work_p[k - 1]
    if not 1 <= l < pk:
        raise ValueError(f"branch {l} outside [1, {pk - 1}]")
    w = spec.work_m[k - 1]
    return range(l * w, (l + 1) * w)
