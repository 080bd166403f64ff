"""Splitting an index interval [a, b) into a point and digit-aligned pieces.

With b = sum(beta_i * m_{i-1}), the interval [0, b) is the disjoint union of

    J_j = [sum_{i>j} beta_i m_{i-1},  sum_{i>j} beta_i m_{i-1} + beta_j m_{j-1})

and a falls in exactly one of them, J_t. Then

    [a, b) = {a}  u  Jt_1 u ... u Jt_t  u  J_1 u ... u J_{t-1}

where Jt_j collects the numbers that agree with a above digit j and exceed
it at digit j. Shifted by a (for {a} and Jt_j) or by b (for J_j) with
``dot_minus``, every piece becomes a union of blocks delta_{k,l} at a single
level, which makes each shifted piece the output of a block difference.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import SystemSpec, block, dot_minus_array, dot_plus_array, to_digits
from .operators import delta_k, _mask
from .transform import INVERSE, FORWARD, fast_forward, fast_inverse, modulate

SINGLETON = "singleton"
JTILDE = "jtilde"
J = "j"


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Piece:
    kind: str
    j: int
    lo: int
    hi: int
    shift: int
    level: int
    branches: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return self.hi <= self.lo

    @property
    def label(self) -> str:
        if self.kind == SINGLETON:
            return "{a}"
        return f"{'J~' if self.kind == JTILDE else 'J'}_{self.j}"

    def indices(self) -> np.ndarray:
        return np.arange(self.lo, max(self.lo, self.hi), dtype=np.int64)


@dataclass
class Decomposition:
    a: int
    b: int
    t: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    pieces: list[Piece] = field(default_factory=list)

    def tilde(self, j: int) -> Piece:
        return next(p for p in self.pieces if p.kind in (SINGLETON, JTILDE) and p.j == j)

    def plain(self, j: int) -> Piece:
        return next(p for p in self.pieces if p.kind == J and p.j == j)

    def nonempty(self) -> list[Piece]:
        return [p for p in self.pieces if not p.empty]


def _check_interval(a: int, b: int, spec: SystemSpec) -> None:
    if not (0 <= a < b <= spec.N):
        raise DecompositionError(f"need 0 <= a < b <= {spec.N}, got [{a}, {b})")


def decompose_interval(a: int, b: int, spec: SystemSpec) -> Decomposition:
    a, b = int(a), int(b)
    _check_interval(a, b, spec)
    D = spec.K + 1
    p, m = spec.work_p, spec.work_m
    beta = to_digits(b, spec, padded=True)
    alpha = to_digits(a, spec, padded=True)

    def head(digits, j):
        # value of the digits strictly above position j (1-based)
        return sum(digits[i] * m[i] for i in range(j, D))

    t = None
    for j in range(1, D + 1):
        lo = head(beta, j)
        if lo <= a < lo + beta[j - 1] * m[j - 1]:
            t = j
            break
    assert t is not None, "J_j ranges cover [0, b)"

    pieces = [Piece(SINGLETON, 0, a, a + 1, a, 0, ())]
    for j in range(1, t + 1):
        base = head(alpha, j)
        top = p[j - 1] if j < t else beta[t - 1]
        lo = base + (alpha[j - 1] + 1) * m[j - 1]
        hi = base + top * m[j - 1]
        branches = tuple(range(1, top - alpha[j - 1]))
        pieces.append(Piece(JTILDE, j, lo, max(lo, hi), a, j, branches))
    for j in range(1, t):
        lo = head(beta, j)
        hi = lo + beta[j - 1] * m[j - 1]
        branches = tuple(range(p[j - 1] - beta[j - 1], p[j - 1]))
        pieces.append(Piece(J, j, lo, hi, b, j, branches))
    return Decomposition(a, b, t, alpha, beta, pieces)


def block_union(level: int, branches: Sequence[int], spec: SystemSpec) -> set[int]:
    out: set[int] = set()
    for l in branches:
        out.update(block(level, l, spec))
    return out


def shifted_blocks(piece: Piece, spec: SystemSpec) -> tuple[int, tuple[int, ...]]:
    """Check that ``piece`` minus its shift is exactly its block union."""
    image = set(dot_minus_array(piece.indices(), piece.shift, spec).tolist())
    if piece.kind == SINGLETON:
        expected = {0}
    else:
        expected = block_union(piece.level, piece.branches, spec)
    if image != expected:
        raise DecompositionError(
            f"{piece.label}: shifted image {sorted(image)} != blocks {sorted(expected)}"
        )
    return piece.level, piece.branches


def _support_check(F, a: int, b: int) -> np.ndarray:
    F = np.asarray(F, dtype=np.complex128)
    outside = np.ones(F.shape[-1], dtype=bool)
    outside[a:b] = False
    if np.any(F[..., outside] != 0):
        raise DecompositionError(f"spectrum not supported in [{a}, {b})")
    return F


def split_function(F, a: int, b: int, spec: SystemSpec):
    """Project F onto the pieces: returns ([ft_0..ft_t], [f_1..f_{t-1}])."""
    F = _support_check(F, a, b)
    dec = decompose_interval(a, b, spec)
    tilde = [_mask(F, dec.tilde(j).lo, dec.tilde(j).hi) for j in range(dec.t + 1)]
    plain = [_mask(F, dec.plain(j).lo, dec.plain(j).hi) for j in range(1, dec.t)]
    return tilde, plain


def working_spec(b: int, spec: SystemSpec) -> SystemSpec:
    """Depth needed to modulate by w_b: the padded system when b = m_K."""
    return spec.padded() if b >= spec.N else spec


def lift(F, spec: SystemSpec, work: SystemSpec) -> np.ndarray:
    """Embed spectra of ``spec`` into the (possibly deeper) system ``work``."""
    F = np.asarray(F, dtype=np.complex128)
    if work.N == spec.N:
        return F
    out = np.zeros(F.shape[:-1] + (work.N,), dtype=np.complex128)
    out[..., : spec.N] = F
    return out


def demodulate(F, n: int, spec: SystemSpec) -> np.ndarray:
    """Spectrum of conj(w_n) * f, computed through signal space."""
    return fast_forward(modulate(fast_inverse(F, spec), n, spec, INVERSE), spec)


def verify_identities(F, a: int, b: int, spec: SystemSpec) -> dict[str, float]:
    """Max-abs residuals of the five block identities for the split of F."""
    F = _support_check(F, a, b)
    dec = decompose_interval(a, b, spec)
    t = dec.t
    W = working_spec(b, spec)
    F = lift(F, spec, W)
    tilde, plain = split_function(F[: spec.N], a, b, spec)
    tilde = [lift(x, spec, W) for x in tilde]
    plain = [lift(x, spec, W) for x in plain]

    g_t = demodulate(F, a, W)
    g = demodulate(F, b, W)
    zero = np.zeros(W.N, dtype=np.complex128)

    def res(x, y):
        return float(np.max(np.abs(x - y), initial=0.0))

    def blocks(G, k, ls):
        out = zero.copy()
        for l in ls:
            r = block(k, l, W)
            out[r.start:r.stop] += G[r.start:r.stop]
        return out

    beta_t, alpha_t = dec.beta[t - 1], dec.alpha[t - 1]
    r1 = max(res(demodulate(tilde[j], a, W), delta_k(g_t, j, W)) for j in range(t))
    r2 = res(demodulate(tilde[t], a, W), blocks(g_t, t, range(1, beta_t - alpha_t)))
    r3 = res(demodulate(sum(plain, zero), a, W), blocks(g_t, t, [beta_t - alpha_t]))
    r4 = max((res(demodulate(plain[j - 1], b, W), delta_k(g, j, W)) for j in range(1, t)),
             default=0.0)
    r5 = res(demodulate(sum(tilde, zero), b, W), delta_k(g, t, W))
    return {"i": r1, "ii": r2, "iii": r3, "iv": r4, "v": r5}


@dataclass(frozen=True)
class GTerm:
    """One summand family w_shift * Delta_{level,l} h for l in branches."""

    h: np.ndarray
    shift: int
    level: int
    branches: tuple[int, ...]


def g_targets(terms: Sequence[GTerm], spec: SystemSpec) -> list[set[int]]:
    out = []
    for term in terms:
        if not 0 <= term.shift < spec.N:
            raise DecompositionError(f"shift {term.shift} outside [0, {spec.N})")
        for l in term.branches:
            out.append(set(dot_plus_array(np.array(block(term.level, l, spec)), term.shift, spec).tolist()))
    return out


def apply_G(terms: Sequence[GTerm], spec: SystemSpec) -> np.ndarray:
    """Spectrum of sum over terms and branches of w_shift * Delta_{k,l} h."""
    targets = g_targets(terms, spec)
    seen: set[int] = set()
    for tg in targets:
        if seen & tg:
            raise DecompositionError("shifted blocks overlap")
        seen |= tg
    total = np.zeros(spec.N, dtype=np.complex128)
    for term in terms:
        if term.level > spec.K:
            raise DecompositionError(f"level {term.level} outside [1, {spec.K}]")
        piece = np.zeros(spec.N, dtype=np.complex128)
        for l in term.branches:
            r = block(term.level, l, spec)
            piece[r.start:r.stop] += np.asarray(term.h)[r.start:r.stop]
        total += modulate(fast_inverse(piece, spec), term.shift, spec, FORWARD)
    return fast_forward(total, spec)


def _span(lo: int, hi: int) -> str:
    if hi < lo:
        return "-"
    return str(lo) if lo == hi else f"[{lo},{hi}]"


def _table_row(dec: Decomposition, piece: Piece, spec: SystemSpec, width: int) -> list[str]:
    p = spec.work_p
    if piece.kind == SINGLETON:
        return [str(d) for d in reversed(dec.alpha[:width])]
    j = piece.j
    src = dec.beta if piece.kind == J else dec.alpha
    row = []
    for pos in range(width, 0, -1):
        if pos > j:
            row.append(str(src[pos - 1]))
        elif pos == j:
            if piece.kind == J:
                row.append(_span(0, dec.beta[j - 1] - 1))
            elif j < dec.t:
                row.append(_span(dec.alpha[j - 1] + 1, p[j - 1] - 1))
            else:
                row.append(_span(dec.alpha[j - 1] + 1, dec.beta[j - 1] - 1))
        else:
            row.append("*")
    return row


def _shifted_row(piece: Piece, width: int) -> list[str]:
    if piece.kind == SINGLETON:
        return ["0"] * width
    row = []
    for pos in range(width, 0, -1):
        if pos > piece.j:
            row.append("0")
        elif pos == piece.j:
            row.append(_span(piece.branches[0], piece.branches[-1]) if piece.branches else "-")
        else:
            row.append("*")
    return row


def format_decomposition(dec: Decomposition, spec: SystemSpec, show_empty: bool = False) -> str:
    """Text rendering in (m)-radix column notation, most significant digit left."""
    width = max(i + 1 for i, d in enumerate(dec.beta) if d) if any(dec.beta) else 1
    header = " ".join(f"m_{i}" for i in range(width - 1, -1, -1))
    lines = [
        f"interval [{dec.a}, {dec.b})  p={list(spec.p)}  t={dec.t}",
        f"  b ~ ({header} / {' '.join(str(d) for d in reversed(dec.beta[:width]))})",
        f"  a ~ ({header} / {' '.join(str(d) for d in reversed(dec.alpha[:width]))})",
    ]
    for piece in dec.pieces:
        if piece.empty and not show_empty:
            continue
        rng = "empty" if piece.empty else _span(piece.lo, piece.hi - 1)
        who = "a" if piece.shift == dec.a and piece.kind != J else "b"
        blocks = "{0}" if piece.kind == SINGLETON else (
            f"k={piece.level} L={{{','.join(map(str, piece.branches))}}}"
        )
        lines.append(
            f"  {piece.label:<6} {rng:<10} ({header} / {' '.join(_table_row(dec, piece, spec, width))})"
            f"  -{who}: ({' '.join(_shifted_row(piece, width))})  {blocks}"
        )
    return "\n".join(lines)


def decomposition_to_dict(dec: Decomposition) -> dict:
    return {
        "a": dec.a,
        "b": dec.b,
        "t": dec.t,
        "alpha": list(dec.alpha),
        "beta": list(dec.beta),
        "pieces": [
            {
                "kind": pc.kind,
                "j": pc.j,
                "range": None if pc.empty else [pc.lo, pc.hi],
                "shift": pc.shift,
                "level": pc.level,
                "branches": list(pc.branches),
            }
            for pc in dec.pieces
        ],
    }
