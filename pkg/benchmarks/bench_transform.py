"""Compare the compiled and numpy transform backends across sizes.

    python benchmarks/bench_transform.py
"""
import sys

from vilenkin.bench import available_backends, run_benchmark
from vilenkin.core import build_spec

SPECS = [
    (2, 3, 2, 3),
    (2,) * 10,
    (3, 4, 5, 3, 4),
    (2, 3, 4, 5, 2, 3, 2, 3),
    (2,) * 16,
    (4, 4, 4, 4, 4, 4, 4),
]


def main():
    print(f"backends: {', '.join(available_backends())}")
    print(f"{'p':<26}{'N':>8}{'batch':>7}  {'op':<8}" +
          "".join(f"{name:>12}" for name in available_backends()) + "   speedup  rel_diff")
    for p in SPECS:
        spec = build_spec(p)
        batch = max(1, 4096 // spec.N)
        rows = run_benchmark(spec, batch=batch, repeat=15)
        for op in ("forward", "inverse"):
            times = {r["backend"]: r["seconds"] for r in rows if r["op"] == op}
            speed = times["numpy"] / times["cython"] if "cython" in times else float("nan")
            diff = next((r["max_rel_diff"] for r in rows if r["op"] == op and "max_rel_diff" in r),
                        float("nan"))
            print(f"{str(p):<26}{spec.N:>8}{batch:>7}  {op:<8}" +
                  "".join(f"{t * 1e3:10.3f}ms" for t in times.values()) +
                  f"{speed:9.2f}x{diff:10.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
