"""Property suites behind ``vilenkin verify``.

Each suite returns a SuiteResult; exhaustive sweeps run when m_K is at most
``limit`` and fall back to seeded random samples otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import SystemSpec, block, dot_minus_array
from .decomposition import (
    DecompositionError, GTerm, SINGLETON, apply_G, decompose_interval,
    shifted_blocks, verify_identities,
)
from .harness import gen_g_configuration
from .operators import BlockIndex, all_blocks, delta_k, delta_kl, lp_norm, square_S, square_S_tilde
from .transform import character_matrix, fast_forward, fast_inverse, naive_forward

TOL = 1e-10
EXACT_TOL = 1e-12


@dataclass
class SuiteResult:
    name: str
    ok: bool
    checked: int
    worst: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" {self.detail}" if self.detail else ""
        return f"{status} {self.name:<14} checked={self.checked} worst={self.worst:.3g}{extra}"


def _cplx(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def dot_plus_table(spec: SystemSpec) -> np.ndarray:
    """T[k, l] = k dot_plus l for all k, l < m_K."""
    d = spec.index_digits
    p = np.array(spec.p)
    m = np.array(spec.m[:-1])
    return ((d[:, None, :] + d[None, :, :]) % p) @ m


def suite_transform(spec, rng, limit, forward: Callable = fast_forward, samples: int = 20):
    f = _cplx(rng, samples, spec.N)
    ref = naive_forward(f, spec)
    got = forward(f, spec)
    scale = np.max(np.abs(ref))
    err = float(np.max(np.abs(got - ref)) / scale)
    rt = float(np.max(np.abs(fast_inverse(got, spec) - f)) / np.max(np.abs(f)))
    worst = max(err, rt)
    return SuiteResult("transform", worst < TOL, samples, worst)


def suite_orthonormality(spec, rng, limit):
    if spec.N > limit:
        idx = rng.choice(spec.N, size=min(spec.N, 64), replace=False)
    else:
        idx = np.arange(spec.N)
    W = character_matrix(spec)[idx]
    gram = W @ W.conj().T / spec.N
    err = float(np.max(np.abs(gram - np.eye(len(idx)))))
    return SuiteResult("orthonormality", err < EXACT_TOL, len(idx) ** 2, err)


def suite_group_law(spec, rng, limit):
    n = min(spec.N, limit)
    T = dot_plus_table(spec)
    idx = np.arange(spec.N) if spec.N <= limit else np.sort(rng.choice(spec.N, size=n, replace=False))
    sub = T[np.ix_(idx, idx)]
    problems = []
    if not np.array_equal(T[:, 0], np.arange(spec.N)):
        problems.append("identity")
    if not np.array_equal(sub, sub.T):
        problems.append("commutativity")
    if not np.all((T == 0).sum(axis=1) == 1):
        problems.append("inverse")
    # associativity on the sample: (k+l)+j == k+(l+j)
    left = T[T[np.ix_(idx, idx)][:, :, None], idx[None, None, :]]
    right = T[idx[:, None, None], T[np.ix_(idx, idx)][None, :, :]]
    if not np.array_equal(left, right):
        problems.append("associativity")
    W = character_matrix(spec)
    worst = 0.0
    for k in idx:
        worst = max(worst, float(np.max(np.abs(W[k][None, :] * W[idx] - W[T[k, idx]]))))
    if worst > EXACT_TOL:
        problems.append("character law")
    for k in range(1, spec.K + 1):
        for l in range(1, spec.p[k - 1]):
            r = np.array(block(k, l, spec))
            shifted = dot_minus_array(r, l * spec.m[k - 1], spec)
            if not np.array_equal(np.sort(shifted), np.arange(spec.m[k - 1])):
                problems.append(f"block shift k={k} l={l}")
    return SuiteResult("group_law", not problems, len(idx) ** 3, worst, ",".join(problems))


def suite_lemma2(spec, rng, limit):
    worst, checked = 0.0, 0
    for k in range(1, spec.K + 1):
        width = spec.N // spec.m[k - 1]
        atoms = range(spec.m[k - 1]) if spec.N <= limit else rng.choice(spec.m[k - 1], size=min(8, spec.m[k - 1]), replace=False)
        for e in atoms:
            sig = np.zeros(spec.N, dtype=np.complex128)
            sig[e * width:(e + 1) * width] = _cplx(rng, width)
            F = fast_forward(sig, spec)
            for l in range(1, spec.p[k - 1]):
                out = fast_inverse(delta_kl(F, BlockIndex(k, l), spec), spec)
                out[e * width:(e + 1) * width] = 0
                worst = max(worst, float(np.max(np.abs(out))))
                checked += 1
    return SuiteResult("lemma2", worst < EXACT_TOL, checked, worst)


def suite_partition(spec, rng, limit, samples: int = 10):
    F = _cplx(rng, samples, spec.N)
    total = delta_k(F, 0, spec)
    for b in all_blocks(spec):
        total = total + delta_kl(F, b, spec)
    coarse = sum(delta_k(F, k, spec) for k in range(spec.K + 1))
    ok = np.array_equal(total, F) and np.array_equal(coarse, F)
    return SuiteResult("partition", ok, samples)


def _intervals(spec, rng, limit, samples):
    if spec.N <= limit:
        return [(a, b) for a in range(spec.N) for b in range(a + 1, spec.N + 1)]
    out = set()
    while len(out) < samples:
        a, b = sorted(rng.choice(spec.N + 1, size=2, replace=False))
        out.add((int(a), int(b)))
    return sorted(out)


def check_decomposition(a, b, spec) -> list[str]:
    """Brute-force checks of one decomposition; returns the failures."""
    dec = decompose_interval(a, b, spec)
    problems = []
    seen: set[int] = set()
    for pc in dec.pieces:
        r = set(range(pc.lo, pc.hi))
        if seen & r:
            problems.append(f"[{a},{b}) overlap at {pc.label}")
        seen |= r
        if pc.empty:
            continue
        try:
            shifted_blocks(pc, spec)
        except DecompositionError as exc:
            problems.append(str(exc))
    if seen != set(range(a, b)):
        problems.append(f"[{a},{b}) union mismatch")
    if len(dec.pieces) > 2 * spec.K + 2:
        problems.append(f"[{a},{b}) too many pieces")
    if sum(pc.kind == SINGLETON for pc in dec.pieces) != 1:
        problems.append(f"[{a},{b}) singleton count")
    return problems


def suite_decomposition(spec, rng, limit, samples: int = 500):
    problems = []
    ivs = _intervals(spec, rng, limit, samples)
    for a, b in ivs:
        problems += check_decomposition(a, b, spec)
    return SuiteResult("decomposition", not problems, len(ivs), 0.0, "; ".join(problems[:3]))


def suite_identities(spec, rng, limit, samples: int = 500):
    worst = 0.0
    ivs = _intervals(spec, rng, limit, samples)
    for a, b in ivs:
        F = np.zeros(spec.N, dtype=np.complex128)
        F[a:b] = _cplx(rng, b - a)
        worst = max(worst, max(verify_identities(F, a, b, spec).values()))
    return SuiteResult("identities", worst < TOL, len(ivs), worst)


def g_energy_error(terms, spec) -> float:
    G = apply_G(terms, spec)
    lhs = lp_norm(fast_inverse(G, spec), 2) ** 2
    rhs = 0.0
    for term in terms:
        for l in term.branches:
            r = block(term.level, l, spec)
            rhs += float(np.sum(np.abs(term.h[r.start:r.stop]) ** 2))
    return abs(lhs - rhs) / max(rhs, 1.0)


def overlap_rejected(spec) -> bool:
    h = np.ones(spec.N, dtype=np.complex128)
    t = GTerm(h, 0, 1, (1,))
    try:
        apply_G([t, t], spec)
    except DecompositionError:
        return True
    return False


def suite_g_operator(spec, rng, limit, samples: int = 50):
    worst = 0.0
    for _ in range(samples):
        terms = gen_g_configuration(rng, spec)
        worst = max(worst, g_energy_error(terms, spec))
    rejected = overlap_rejected(spec)
    return SuiteResult("g_operator", worst < EXACT_TOL and rejected, samples, worst,
                       "" if rejected else "overlap accepted")


def suite_lemma1(spec, rng, limit, samples: int = 50):
    worst, violations = 0.0, 0
    bound = np.sqrt(spec.M - 1)
    for _ in range(samples):
        F = _cplx(rng, spec.N)
        st, s = square_S_tilde(F, spec), square_S(F, spec)
        worst = max(worst, abs(lp_norm(st, 2) / lp_norm(fast_inverse(F, spec), 2) - 1))
        violations += int(np.any(s > bound * st * (1 + EXACT_TOL)))
    return SuiteResult("lemma1", worst < TOL and violations == 0, samples, worst,
                       f"violations={violations}" if violations else "")


SUITES = {
    "transform": suite_transform,
    "orthonormality": suite_orthonormality,
    "group_law": suite_group_law,
    "lemma2": suite_lemma2,
    "partition": suite_partition,
    "decomposition": suite_decomposition,
    "identities": suite_identities,
    "g_operator": suite_g_operator,
    "lemma1": suite_lemma1,
}


def corrupted_forward(f, spec):
    """Fault-injection hook: a transform that is wrong in one coefficient."""
    out = fast_forward(f, spec)
    out[..., -1] += 1.0
    return out


def run_suites(spec: SystemSpec, seed: int = 0, limit: int = 144,
               names=None, fault: str | None = None) -> list[SuiteResult]:
    results = []
    for i, (name, fn) in enumerate(SUITES.items()):
        if names and name not in names:
            continue
        rng = np.random.default_rng([seed, i])
        if name == "transform" and fault == "transform":
            results.append(fn(spec, rng, limit, forward=corrupted_forward))
        else:
            results.append(fn(spec, rng, limit))
    return results
