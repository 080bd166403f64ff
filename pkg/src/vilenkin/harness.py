"""Random families of band-limited polynomials and empirical ratio estimates.

Ratios measured here:

* ``rdf``: ||sum_s f_s||_p / ||(sum_s |f_s|^2)^{1/2}||_p for spectra in
  disjoint intervals;
* ``theorem2``: ||sum_s f_s||_p over the sum of the Hardy norms of the
  families {conj(w_{a_s}) f_s} and {conj(w_{b_s}) f_s};
* ``lemma1``: ||S~ f||_p / ||f||_p and ||S f||_p / ||f||_p.

The reported numbers are observed maxima only. No theoretical constant is
asserted anywhere.
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .core import SystemSpec, build_spec
from .decomposition import lift, working_spec
from .operators import hardy_norm, lp_norm, pointwise_l2, square_S, square_S_tilde
from .transform import character, fast_forward, fast_inverse

RDF_EXPONENTS = (1.01, 1.1, 1.25, 1.5, 1.75, 2.0)
THEOREM2_EXPONENTS = (0.5, 0.75, 1.0) + RDF_EXPONENTS
DISTRIBUTIONS = ("gaussian", "unimodular")
KINDS = ("rdf", "theorem2", "lemma1")
QUANTILES = (0.5, 0.9, 0.99)


class HarnessError(ValueError):
    pass


@dataclass
class TrialConfig:
    p: list[int]
    K: int | None = None
    kind: str = "rdf"
    exponents: list[float] | None = None
    count_range: list[int] | None = None
    dist: str = "gaussian"
    scale: float = 1.0
    trials: int = 1000
    seed: int = 0
    adversarial: bool = False
    refine_iters: int = 100
    restarts: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise HarnessError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.dist not in DISTRIBUTIONS:
            raise HarnessError(f"dist must be one of {DISTRIBUTIONS}, got {self.dist!r}")
        if self.exponents is None:
            self.exponents = list(THEOREM2_EXPONENTS if self.kind == "theorem2" else RDF_EXPONENTS)
        self.exponents = [float(x) for x in self.exponents]
        for x in self.exponents:
            if not 0 < x <= 2:
                raise HarnessError(f"exponent {x} outside (0, 2]")
        if self.trials < 1:
            raise HarnessError("trials must be >= 1")
        if self.count_range is not None:
            lo, hi = self.count_range
            if not 1 <= lo <= hi:
                raise HarnessError(f"bad count_range {self.count_range}")
            self.count_range = [int(lo), int(hi)]

    @property
    def spec(self) -> SystemSpec:
        return build_spec(self.p, self.K)

    def counts(self) -> tuple[int, int]:
        if self.count_range is not None:
            return tuple(self.count_range)
        return 1, max(1, self.spec.N // 2)

    @classmethod
    def from_dict(cls, d: dict) -> "TrialConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise HarnessError(f"unknown config fields: {sorted(extra)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrialReport:
    kind: str
    spec: dict
    seed: int
    config: dict
    stats: dict = field(default_factory=dict)
    properties: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_dict(self, runtime: bool = True) -> dict:
        d = asdict(self)
        if not runtime:
            d.pop("runtime")
        return d

    def to_json(self, runtime: bool = True) -> str:
        return json.dumps(self.to_dict(runtime), indent=2, sort_keys=True)


# -- generation ---------------------------------------------------------------

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_interval_family(seed, spec: SystemSpec, count: int) -> list[tuple[int, int]]:
    """``count`` disjoint nonempty intervals [a, b) inside [0, m_K]."""
    if count < 1:
        raise HarnessError("count must be >= 1")
    if count > spec.N // 2:
        raise HarnessError(f"cannot place {count} intervals in [0, {spec.N})")
    pts = np.sort(_rng(seed).choice(spec.N + 1, size=2 * count, replace=False))
    return [(int(pts[2 * i]), int(pts[2 * i + 1])) for i in range(count)]


def gen_polynomial_family(seed, intervals, spec: SystemSpec, dist: str = "gaussian",
                          scale: float = 1.0) -> np.ndarray:
    """One spectrum per interval, nonzero only inside its interval."""
    rng = _rng(seed)
    fam = np.zeros((len(intervals), spec.N), dtype=np.complex128)
    for s, (a, b) in enumerate(intervals):
        n = b - a
        if dist == "gaussian":
            z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
            fam[s, a:b] = scale * z
        elif dist == "unimodular":
            phase = rng.uniform(0.0, 2 * np.pi, size=n)
            fam[s, a:b] = np.exp(1j * phase)
        else:
            raise HarnessError(f"unknown distribution {dist!r}")
    return fam


def intervals_disjoint(intervals) -> bool:
    seen: set[int] = set()
    for a, b in intervals:
        r = set(range(a, b))
        if not r or seen & r:
            return False
        seen |= r
    return True


def supports_ok(fam, intervals) -> bool:
    fam = np.asarray(fam)
    for s, (a, b) in enumerate(intervals):
        outside = np.ones(fam.shape[-1], dtype=bool)
        outside[a:b] = False
        if np.any(fam[s, outside] != 0):
            return False
    return True


# -- ratios -------------------------------------------------------------------

def rdf_ratio(fam, p: float, spec: SystemSpec) -> float:
    fam = np.atleast_2d(np.asarray(fam, dtype=np.complex128))
    den = lp_norm(pointwise_l2(fam, spec), p)
    if den == 0:
        raise HarnessError("zero family")
    return lp_norm(fast_inverse(fam.sum(axis=0), spec), p) / den


def _modulated_family(fam, shifts, spec: SystemSpec, work: SystemSpec) -> np.ndarray:
    sig = fast_inverse(lift(fam, spec, work), work)
    for s, n in enumerate(shifts):
        sig[s] *= character(n, work).conj()
    return fast_forward(sig, work)


def theorem2_ratio(fam, intervals, p: float, spec: SystemSpec) -> float:
    fam = np.atleast_2d(np.asarray(fam, dtype=np.complex128))
    if not np.any(fam):
        raise HarnessError("zero family")
    work = working_spec(max(b for _, b in intervals), spec)
    num = lp_norm(fast_inverse(fam.sum(axis=0), spec), p)
    ga = _modulated_family(fam, [a for a, _ in intervals], spec, work)
    gb = _modulated_family(fam, [b for _, b in intervals], spec, work)
    return num / (hardy_norm(ga, p, work) + hardy_norm(gb, p, work))


def lemma1_ratios(f, p: float, spec: SystemSpec) -> tuple[float, float]:
    """(||S~ f||_p / ||f||_p, ||S f||_p / ||f||_p) for a spectrum or family."""
    base = lp_norm(pointwise_l2(f, spec), p)
    if base == 0:
        raise HarnessError("zero function")
    return lp_norm(square_S_tilde(f, spec), p) / base, lp_norm(square_S(f, spec), p) / base


def _ratio(kind: str, fam, intervals, p: float, spec: SystemSpec) -> float:
    if kind == "rdf":
        return rdf_ratio(fam, p, spec)
    return theorem2_ratio(fam, intervals, p, spec)


# -- replayable instances ------------------------------------------------------

def instance_digest(kind: str, spec: SystemSpec, p: float, intervals, fam, ratio: float) -> dict:
    fam = np.asarray(fam)
    coeffs = [[[float(z.real), float(z.imag)] for z in row] for row in fam]
    blob = {
        "kind": kind,
        "spec": spec.describe(),
        "exponent": p,
        "intervals": [list(iv) for iv in intervals],
        "coeffs": coeffs,
        "ratio": ratio,
    }
    blob["sha256"] = hashlib.sha256(
        json.dumps({k: blob[k] for k in ("kind", "spec", "exponent", "intervals", "coeffs")},
                   sort_keys=True).encode()
    ).hexdigest()
    return blob


def replay(digest: dict) -> float:
    spec = build_spec(digest["spec"]["p"], digest["spec"]["K"])
    fam = np.array([[complex(re, im) for re, im in row] for row in digest["coeffs"]])
    intervals = [tuple(iv) for iv in digest["intervals"]]
    return _ratio(digest["kind"], fam, intervals, float(digest["exponent"]), spec)


# -- sweeps -------------------------------------------------------------------

def _summary(values) -> dict:
    v = np.asarray(values, dtype=float)
    q = np.quantile(v, QUANTILES)
    return {
        "max": float(v.max()),
        "mean": float(v.mean()),
        "min": float(v.min()),
        **{f"q{int(round(100 * x))}": float(y) for x, y in zip(QUANTILES, q)},
        "trials": int(v.size),
    }


def _hill_climb(kind, fam, intervals, p, spec, rng, iters):
    """Random single-coefficient perturbations, kept when the ratio grows."""
    fam = fam.copy()
    best = _ratio(kind, fam, intervals, p, spec)
    coords = [(s, n) for s, (a, b) in enumerate(intervals) for n in range(a, b)]
    rms = np.sqrt(np.mean(np.abs(fam[fam != 0]) ** 2)) if np.any(fam) else 1.0
    step = 0.5 * rms
    for _ in range(iters):
        s, n = coords[rng.integers(len(coords))]
        old = fam[s, n]
        fam[s, n] = old + step * complex(rng.standard_normal(), rng.standard_normal())
        if not np.any(fam):
            fam[s, n] = old
            continue
        r = _ratio(kind, fam, intervals, p, spec)
        if r > best:
            best = r
        else:
            fam[s, n] = old
    return best, fam


def estimate_constant(config: TrialConfig) -> TrialReport:
    """Max of the rdf or theorem2 ratio over random families, per exponent."""
    if config.kind == "lemma1":
        return lemma1_sweep(config)
    t0 = time.perf_counter()
    spec = config.spec
    lo, hi = config.counts()
    hi = min(hi, spec.N // 2)
    report = TrialReport(config.kind, spec.describe(), config.seed, config.to_dict())
    checks = {"disjoint": [0, 0], "support": [0, 0]}
    streams = np.random.SeedSequence(config.seed).spawn(len(config.exponents))
    for p, ss in zip(config.exponents, streams):
        rng = np.random.default_rng(ss)
        ratios = []
        worst = None
        for _ in range(config.trials):
            count = int(rng.integers(lo, hi + 1))
            intervals = gen_interval_family(rng, spec, count)
            fam = gen_polynomial_family(rng, intervals, spec, config.dist, config.scale)
            ok_d, ok_s = intervals_disjoint(intervals), supports_ok(fam, intervals)
            checks["disjoint"][0 if ok_d else 1] += 1
            checks["support"][0 if ok_s else 1] += 1
            if not (ok_d and ok_s):
                raise HarnessError("generated instance failed its oracles")
            if not np.any(fam):
                continue
            r = _ratio(config.kind, fam, intervals, p, spec)
            ratios.append(r)
            if worst is None or r > worst[0]:
                worst = (r, intervals, fam)
        if not ratios:
            raise HarnessError("every generated family was zero")
        entry = _summary(ratios)
        best_r, best_iv, best_fam = worst
        if config.adversarial and config.refine_iters > 0:
            # restarts from the top instances seen in this sweep
            refined = (best_r, best_iv, best_fam)
            starts = [worst]
            extra = max(0, config.restarts - 1)
            for _ in range(extra):
                count = int(rng.integers(lo, hi + 1))
                iv = gen_interval_family(rng, spec, count)
                starts.append((None, iv, gen_polynomial_family(rng, iv, spec, config.dist, config.scale)))
            per = max(1, config.refine_iters // len(starts))
            for _, iv, fam in starts:
                if not np.any(fam):
                    continue
                r, f2 = _hill_climb(config.kind, fam, iv, p, spec, rng, per)
                if r > refined[0]:
                    refined = (r, iv, f2)
            best_r, best_iv, best_fam = refined
            entry["refined_max"] = float(best_r)
        entry["worst"] = instance_digest(config.kind, spec, p, best_iv, best_fam, float(best_r))
        report.stats[f"{p:g}"] = entry
    report.properties = {k: {"pass": v[0], "fail": v[1]} for k, v in checks.items()}
    report.runtime = time.perf_counter() - t0
    return report


def lemma1_sweep(config: TrialConfig) -> TrialReport:
    """Distribution of the S~ and S ratios over random full-band spectra."""
    t0 = time.perf_counter()
    spec = config.spec
    report = TrialReport("lemma1", spec.describe(), config.seed, config.to_dict())
    bound = np.sqrt(spec.M - 1)
    pointwise = [0, 0]
    streams = np.random.SeedSequence(config.seed).spawn(len(config.exponents))
    for p, ss in zip(config.exponents, streams):
        rng = np.random.default_rng(ss)
        st, sm = [], []
        for _ in range(config.trials):
            f = gen_polynomial_family(rng, [(0, spec.N)], spec, config.dist, config.scale)[0]
            if not np.any(f):
                continue
            tilde, plain = square_S_tilde(f, spec), square_S(f, spec)
            # Cauchy-Schwarz over at most M-1 blocks per level
            ok = np.all(plain <= bound * tilde * (1 + 1e-12))
            pointwise[0 if ok else 1] += 1
            base = lp_norm(fast_inverse(f, spec), p)
            st.append(lp_norm(tilde, p) / base)
            sm.append(lp_norm(plain, p) / base)
        if not st:
            raise HarnessError("every generated function was zero")
        report.stats[f"{p:g}"] = {"S_tilde": _summary(st), "S": _summary(sm)}
    report.properties = {"pointwise_S_le_sqrtM1_S_tilde": {"pass": pointwise[0], "fail": pointwise[1]}}
    report.runtime = time.perf_counter() - t0
    return report


def merge_maxima(reports: Sequence[TrialReport]) -> dict:
    """Per-exponent maxima across reports; independent of report order."""
    out: dict[str, float] = {}
    for rep in reports:
        for key, entry in rep.stats.items():
            m = entry.get("refined_max", entry["max"]) if "max" in entry else entry["S_tilde"]["max"]
            out[key] = max(out.get(key, -np.inf), m)
    return out


def gen_g_configuration(seed, spec: SystemSpec, max_terms: int = 4, attempts: int = 50):
    """Random admissible terms for ``apply_G``: shifted blocks pairwise disjoint."""
    from .decomposition import GTerm, g_targets

    rng = _rng(seed)
    terms: list = []
    used: set[int] = set()
    for _ in range(attempts):
        if len(terms) >= max_terms:
            break
        k = int(rng.integers(1, spec.K + 1))
        pk = spec.p[k - 1]
        size = int(rng.integers(1, pk))
        branches = tuple(sorted(int(x) for x in rng.choice(np.arange(1, pk), size=size, replace=False)))
        shift = int(rng.integers(0, spec.N))
        h = (rng.standard_normal(spec.N) + 1j * rng.standard_normal(spec.N)) / np.sqrt(2)
        term = GTerm(h, shift, k, branches)
        tg = set().union(*g_targets([term], spec))
        if tg & used:
            continue
        used |= tg
        terms.append(term)
    return terms
