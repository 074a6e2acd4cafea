"""Wall-clock scaling benchmark over random ``P_n`` codewords."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .codes import random_sr
from .field import make_ctx
from .reconstruct import reconstruct_grid

DEFAULT_LADDER = (256, 512, 1024, 2048)


@dataclass
class BenchRow:
    n: int
    median_ms: float
    p95_ms: float
    backtracks: int
    backend: str

    def csv(self) -> str:
        return f"{self.n},{self.median_ms:.3f},{self.p95_ms:.3f},{self.backtracks}"


def sample_codewords(n: int, count: int, seed: int) -> list[str]:
    """``count`` words of ``P_n`` (reversed ``S_R(n)`` words), seeded per rung."""
    rng = random.Random(f"{seed}:{n}")
    return [random_sr(n, rng)[::-1] for _ in range(count)]


def bench_rung(n: int, samples: int = 50, seed: int = 0, backend: str | None = None, warmup: int = 3) -> BenchRow:
    """Time the search on ``samples`` codewords of length ``n``.

    The F grid is built before the clock starts; only reconstruction from F
    is timed.
    """
    kern = kernels.get_backend(backend)
    ctx = make_ctx(n)
    words = sample_codewords(n, samples, seed)
    grids = [kern.f_grid(np.frombuffer(w.encode(), dtype=np.uint8) - ord("0")) for w in words]
    for g in grids[:warmup]:
        reconstruct_grid(g, ctx, backend=kern.BACKEND)
    times = []
    back = 0
    for w, g in zip(words, grids):
        t0 = time.perf_counter()
        rep = reconstruct_grid(g, ctx, backend=kern.BACKEND)
        times.append((time.perf_counter() - t0) * 1e3)
        if rep.results != [w]:
            raise RuntimeError(f"codeword of length {n} did not decode to itself")
        back += rep.backtracks
    return BenchRow(n, float(np.median(times)), float(np.percentile(times, 95)), back, kern.BACKEND)


def run_bench(ladder=DEFAULT_LADDER, samples: int = 50, seed: int = 0, backend: str | None = None) -> list[BenchRow]:
    return [bench_rung(n, samples, seed, backend) for n in ladder]


def adjacent_ratios(rows: list[BenchRow]) -> list[float]:
    return [b.median_ms / a.median_ms for a, b in zip(rows, rows[1:])]


def to_csv(rows: list[BenchRow]) -> str:
    return "\n".join(["n,median_ms,p95_ms,backtracks"] + [r.csv() for r in rows]) + "\n"
