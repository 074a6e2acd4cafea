"""Compare the compiled and pure-Python kernels on the P_n codeword ladder.

    python3 benchmarks/bench_backends.py [--samples 30] [--seed 0] [--ladder 256,512,1024,2048]

Prints one row per (backend, n) and the compiled speedup per rung.
"""
from __future__ import annotations

import argparse

from polyrecon import kernels
from polyrecon.bench import DEFAULT_LADDER, adjacent_ratios, run_bench


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n", 1)[0])
    ap.add_argument("--samples", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ladder", default=",".join(map(str, DEFAULT_LADDER)))
    args = ap.parse_args()
    ladder = [int(v) for v in args.ladder.split(",")]

    backends = ["python"] + (["compiled"] if kernels.compiled_backend is not None else [])
    table = {b: run_bench(ladder, args.samples, args.seed, b) for b in backends}

    print("backend,n,median_ms,p95_ms,backtracks")
    for b, rows in table.items():
        for r in rows:
            print(f"{b},{r.csv()}")
    for b, rows in table.items():
        print(f"# {b} adjacent median ratios: " + " ".join(f"{x:.2f}" for x in adjacent_ratios(rows)))
    if "compiled" in table:
        sp = [p.median_ms / c.median_ms for p, c in zip(table["python"], table["compiled"])]
        print("# compiled speedup: " + " ".join(f"n={n}:{s:.1f}x" for n, s in zip(ladder, sp)))


if __name__ == "__main__":
    main()
