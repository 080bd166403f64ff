"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import transform as tr
from .core import SpecError, build_spec, parse_spec
from .decomposition import (
    DecompositionError, decompose_interval, decomposition_to_dict, format_decomposition,
)
from .harness import HarnessError, TrialConfig, estimate_constant, replay
from .suites import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _manifest(cmd: str, args, spec=None, seed=None) -> dict:
    return {
        "subcommand": cmd,
        "seed": seed,
        "spec": spec.describe() if spec is not None else None,
        "format": getattr(args, "format", "json"),
    }


# -- signal / spectrum files -----------------------------------------------------

def read_array_file(path: str):
    """Load ``{"header": {"p": [...], "K": K, ...}, "data": [[re, im], ...]}``."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
        header = doc["header"]
        spec = build_spec(header["p"], header.get("K"))
        data = np.array([complex(re, im) for re, im in doc["data"]], dtype=np.complex128)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed array file {path}: {exc}") from exc
    return header, spec, data


def array_document(values, spec, kind: str, manifest: dict) -> dict:
    return {
        "header": {"p": list(spec.p), "K": spec.K, "kind": kind},
        "manifest": manifest,
        "data": [[float(z.real), float(z.imag)] for z in np.asarray(values)],
    }


# -- subcommands ------------------------------------------------------------------

def cmd_transform(args) -> int:
    header, spec, data = read_array_file(args.input)
    if args.spec and parse_spec(args.spec) != spec:
        raise UsageError(f"--spec {args.spec} disagrees with file header p={list(spec.p)}")
    if data.size != spec.N:
        raise UsageError(f"length {data.size} != m_K = {spec.N}")
    if args.direction == "forward":
        result, kind = tr.fast_forward(data, spec), "spectrum"
        oracle = tr.naive_forward
    else:
        result, kind = tr.fast_inverse(data, spec), "signal"
        oracle = tr.naive_inverse
    status = EXIT_OK
    check = None
    if args.check:
        ref = oracle(data, spec)
        err = float(np.max(np.abs(result - ref)) / max(np.max(np.abs(ref)), 1e-300))
        check = {"naive_rel_err": err, "ok": err < 1e-10}
        if not check["ok"]:
            status = EXIT_FAIL
        print(f"check: backend={tr.BACKEND} rel_err={err:.3g} {'ok' if check['ok'] else 'FAILED'}",
              file=sys.stderr)
    doc = array_document(result, spec, kind, _manifest("transform", args, spec))
    if check is not None:
        doc["check"] = check
    _emit(json.dumps(doc), args.out)
    return status


def cmd_decompose(args) -> int:
    spec = parse_spec(args.spec)
    if args.a >= args.b:
        raise UsageError(f"need a < b, got a={args.a} b={args.b}")
    try:
        dec = decompose_interval(args.a, args.b, spec)
    except DecompositionError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        doc = {"manifest": _manifest("decompose", args, spec), **decomposition_to_dict(dec)}
        _emit(json.dumps(doc, indent=2), args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["kind", "j", "lo", "hi", "shift", "level", "branches"])
        for pc in dec.pieces:
            w.writerow([pc.kind, pc.j, pc.lo, pc.hi, pc.shift, pc.level,
                        " ".join(map(str, pc.branches))])
        _emit(buf.getvalue().rstrip("\n"), args.out)
    else:
        _emit(format_decomposition(dec, spec, show_empty=args.show_empty), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = parse_spec(args.spec)
    if args.suite:
        unknown = set(args.suite) - set(SUITES)
        if unknown:
            raise UsageError(f"unknown suites: {sorted(unknown)}")
    t0 = time.perf_counter()
    results = run_suites(spec, seed=args.seed, limit=args.limit, names=args.suite,
                         fault=args.inject_fault)
    ok = all(r.ok for r in results)
    if args.format == "json":
        doc = {
            "manifest": _manifest("verify", args, spec, args.seed),
            "ok": ok,
            "suites": [vars(r) for r in results],
            "runtime": time.perf_counter() - t0,
        }
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        lines = [f"spec p={list(spec.p)} seed={args.seed} limit={args.limit}"]
        lines += [r.line() for r in results]
        failed = [r.name for r in results if not r.ok]
        lines.append("all suites passed" if ok else f"failed suites: {', '.join(failed)}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _load_config(args) -> TrialConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    elif args.spec:
        raw = {"p": list(parse_spec(args.spec).p)}
    else:
        raise UsageError("estimate needs a CONFIG file or --spec")
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.p is not None:
        raw["exponents"] = args.p
    if args.trials is not None:
        raw["trials"] = args.trials
    if args.kind is not None:
        raw["kind"] = args.kind
    if args.adversarial:
        raw["adversarial"] = True
    try:
        return TrialConfig.from_dict(raw)
    except TypeError as exc:
        raise UsageError(f"bad config: {exc}") from exc


def report_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    cols = ["max", "mean", "min", "q50", "q90", "q99", "trials"]
    if report.kind == "lemma1":
        w.writerow(["exponent", "operator"] + cols)
        for key, entry in report.stats.items():
            for op in ("S_tilde", "S"):
                w.writerow([key, op] + [entry[op][c] for c in cols])
    else:
        w.writerow(["exponent"] + cols + ["refined_max"])
        for key, entry in report.stats.items():
            w.writerow([key] + [entry[c] for c in cols] + [entry.get("refined_max", "")])
    return buf.getvalue().rstrip("\n")


def report_text(report) -> str:
    lines = [f"{report.kind} spec={report.spec} seed={report.seed} runtime={report.runtime:.2f}s"]
    for key, entry in report.stats.items():
        if report.kind == "lemma1":
            lines.append(f"  p={key:<6} S~ ratio in [{entry['S_tilde']['min']:.6f}, "
                         f"{entry['S_tilde']['max']:.6f}]  S ratio in [{entry['S']['min']:.6f}, "
                         f"{entry['S']['max']:.6f}]")
        else:
            extra = f" refined={entry['refined_max']:.6f}" if "refined_max" in entry else ""
            lines.append(f"  p={key:<6} max={entry['max']:.6f} mean={entry['mean']:.6f}{extra}")
    for name, counts in report.properties.items():
        lines.append(f"  {name}: pass={counts['pass']} fail={counts['fail']}")
    return "\n".join(lines)


def _digests(doc: dict) -> list[dict]:
    if "coeffs" in doc:
        return [doc]
    out = [entry["worst"] for entry in doc.get("stats", {}).values() if "worst" in entry]
    if not out:
        raise UsageError("replay file holds no instance digest")
    return out


def cmd_estimate(args) -> int:
    if args.replay:
        try:
            with open(args.replay) as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {args.replay}: {exc}") from exc
        rows, ok = [], True
        for d in _digests(doc):
            got = replay(d)
            same = got == d["ratio"]
            ok &= same
            rows.append({"sha256": d.get("sha256"), "exponent": d["exponent"],
                         "stored": d["ratio"], "replayed": got, "identical": same})
        _emit(json.dumps({"manifest": _manifest("estimate", args), "replay": rows}, indent=2),
              args.out)
        return EXIT_OK if ok else EXIT_FAIL
    config = _load_config(args)
    report = estimate_constant(config)
    if args.format == "csv":
        text = report_csv(report)
    elif args.format == "text":
        text = report_text(report)
    else:
        text = report.to_json()
    _emit(text, args.out)
    fails = sum(v["fail"] for v in report.properties.values())
    return EXIT_OK if fails == 0 else EXIT_FAIL


def cmd_bench(args) -> int:
    from .bench import run_benchmark

    spec = parse_spec(args.spec)
    rows = run_benchmark(spec, batch=args.batch, repeat=args.repeat)
    if args.format == "json":
        _emit(json.dumps({"manifest": _manifest("bench", args, spec), "rows": rows}, indent=2),
              args.out)
    else:
        lines = [f"spec p={list(spec.p)} N={spec.N} batch={args.batch}"]
        for r in rows:
            lines.append(f"  {r['backend']:<8} {r['op']:<8} {r['seconds'] * 1e3:9.3f} ms")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vilenkin", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("transform", help="fast Vilenkin-Fourier transform of a JSON array file")
    p.add_argument("input")
    p.add_argument("--spec", help="expected radices, e.g. 2,3,2")
    p.add_argument("--direction", choices=["forward", "inverse"], default="forward")
    p.add_argument("--check", action="store_true", help="compare with the O(N^2) oracle")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("decompose", help="split [a, b) into its digit pieces")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--spec", required=True)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--show-empty", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=144,
                   help="largest m_K swept exhaustively (default 144)")
    p.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    p.add_argument("--inject-fault", choices=["transform"], help=argparse.SUPPRESS)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("estimate", help="empirical ratio maxima from a TrialConfig")
    p.add_argument("config", nargs="?")
    p.add_argument("--spec")
    p.add_argument("--seed", type=int)
    p.add_argument("--p", type=float, action="append", help="exponent (repeatable)")
    p.add_argument("--trials", type=int)
    p.add_argument("--kind", choices=["rdf", "theorem2", "lemma1"])
    p.add_argument("--adversarial", action="store_true")
    p.add_argument("--replay", metavar="FILE", help="recompute stored worst instances")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="time compiled vs numpy transform backends")
    p.add_argument("--spec", default="2,3,4,5,2,3,2,3")
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError, HarnessError, DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
