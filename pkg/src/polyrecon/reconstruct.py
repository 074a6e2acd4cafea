"""Reconstruction of strings from ``F = P_s * P_s^*``.

The search fixes the gap string from both ends inward: step ``j`` finds
``(a_j, a_{d-j})`` from the degree and the value at ``y = 1`` of the
residual polynomial ``f_j``, and keeps a candidate only if it also matches
``f_j`` at ``lam`` and ``lam^-1`` in the prime field.  When two candidates
survive (a pause) the type-1 candidate, the one that reads ``a_j`` off the
degree, is explored first.  Every emitted string is checked by recomputing
its full ``F``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .field import FieldCtx, geo_sum, make_ctx
from .poly import BiPoly, f_from_multiset, multiset_poly
from .strings import (
    CompositionMultiset,
    MalformedInput,
    gap_decode,
    gap_encode,
    is_restricted,
)


class ReconstructionError(ValueError):
    """F is not the polynomial of any string that begins with 1 and ends with 0."""


@dataclass(frozen=True)
class Pause:
    step: int
    first: tuple[int, int]
    second: tuple[int, int]


@dataclass
class ReconReport:
    results: list[str]
    n: int
    d: int
    a_d: int
    q: int
    nodes: int = 0
    branch_points: int = 0
    dead_ends: int = 0
    backtracks: int = 0
    pauses: list[Pause] = field(default_factory=list)
    trace: list[tuple[int, int, int, bool, bool]] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return not self.results

    def trace_lines(self) -> list[str]:
        lines = []
        for j, aj, adj, pause, back in self.trace:
            extra = (" pause" if pause else "") + (" backtrack" if back else "")
            lines.append(f"{j} {aj} {adj}{extra}")
        return lines


def recover_params(F: BiPoly) -> tuple[int, int, int]:
    """``(d, a_d, n)`` read off F: weight, trailing zero run and length."""
    fx1 = F.at_y1()
    if not fx1:
        raise ReconstructionError("F is zero")
    deg = max(fx1)
    if deg % 2:
        raise ReconstructionError(f"deg F(x,1) = {deg} is odd")
    if (F.degx + F.degy) % 2:
        raise ReconstructionError("degx(F) + degy(F) is odd")
    d = deg // 2
    a_d = fx1.get(0, 0) - 1
    if a_d < 1:
        raise ReconstructionError(f"F(0,1) = {a_d + 1} < 2: string cannot end with 0")
    n = (F.degx + F.degy) // 2
    if d < 1 or d >= n:
        raise ReconstructionError(f"weight d={d} impossible for a string starting with 1 and ending with 0")
    if a_d > n - d:
        raise ReconstructionError(f"trailing zero run {a_d} exceeds the {n - d} zeros available")
    return d, a_d, n


def _grid_for(F: BiPoly, d: int, n: int) -> np.ndarray:
    if F.degx != 2 * d or F.degy != 2 * (n - d):
        raise ReconstructionError("F's degree box does not match the recovered weight")
    return F.to_grid()


def reconstruct(
    F: BiPoly,
    ctx: FieldCtx | None = None,
    *,
    first_only: bool = False,
    trace: bool = False,
    backend: str | None = None,
) -> ReconReport:
    """All strings ``s`` with ``s_1 = 1``, ``s_n = 0`` and ``F_s = F``."""
    d, a_d, n = recover_params(F)
    if ctx is None:
        ctx = make_ctx(n)
    if ctx.size < 2 * n + 3:
        raise ValueError(f"field context too small for n={n}")
    grid = _grid_for(F, d, n)
    return _run(grid, n, d, a_d, ctx, first_only, trace, kernels.get_backend(backend))


def reconstruct_grid(
    grid,
    ctx: FieldCtx | None = None,
    *,
    first_only: bool = False,
    trace: bool = False,
    backend: str | None = None,
) -> ReconReport:
    """Same as :func:`reconstruct` for F given as a dense coefficient grid.

    ``grid[i, k]`` is the coefficient of ``x^i y^k``; the shape must be
    ``(2d + 1, 2(n - d) + 1)``.
    """
    grid = np.ascontiguousarray(grid, dtype=np.int64)
    rows, cols = grid.shape
    if rows % 2 == 0 or cols % 2 == 0:
        raise ReconstructionError(f"grid shape {grid.shape} is not (2d+1, 2(n-d)+1)")
    d = (rows - 1) // 2
    n = d + (cols - 1) // 2
    a_d = int(grid[0].sum()) - 1
    if d < 1 or d >= n or not 1 <= a_d <= n - d:
        raise ReconstructionError("grid does not describe a string that begins with 1 and ends with 0")
    if ctx is None:
        ctx = make_ctx(n)
    return _run(grid, n, d, a_d, ctx, first_only, trace, kernels.get_backend(backend))


def _run(grid, n, d, a_d, ctx, first_only, trace, kern) -> ReconReport:
    res, stats, pauses, tr = kern.search(
        grid, n, d, a_d, ctx.q, ctx.pow_table, ctx.inv_pow_table, ctx.cum, ctx.inv_cum,
        first_only, trace,
    )
    nodes, bp, dead, back = stats
    return ReconReport(
        results=sorted(gap_decode(g) for g in res),
        n=n, d=d, a_d=a_d, q=ctx.q,
        nodes=nodes, branch_points=bp, dead_ends=dead, backtracks=back,
        pauses=[Pause(j, tuple(p1), tuple(p2)) for j, p1, p2 in pauses],
        trace=[tuple(t) for t in tr],
    )


def reconstruct_string(s: str, ctx: FieldCtx | None = None, **kw) -> ReconReport:
    """Reconstruct from the F of a known string (computed by the grid kernel)."""
    if not is_restricted(s):
        raise ValueError("string must begin with 1 and end with 0")
    n = len(s)
    kern = kernels.get_backend(kw.pop("backend", None))
    bits = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
    grid = kern.f_grid(bits)
    d = s.count("1")
    a_d = n - 1 - s.rindex("1")
    if ctx is None:
        ctx = make_ctx(n)
    return _run(grid, n, d, a_d, ctx, kw.pop("first_only", False), kw.pop("trace", False), kern)


def reconstruct_multiset(ms: CompositionMultiset, ctx: FieldCtx | None = None, **kw) -> ReconReport:
    ms.validate()
    return reconstruct(f_from_multiset(multiset_poly(ms), ms.n), ctx, **kw)


def decode_words(words, ctx: FieldCtx, backend: str | None = None) -> np.ndarray:
    """Batch decode equal-length restricted strings; see ``decode_batch`` for columns."""
    words = list(words)
    if not words:
        return np.zeros((0, 7), dtype=np.int64)
    n = len(words[0])
    mat = np.frombuffer("".join(words).encode(), dtype=np.uint8).reshape(len(words), n) - ord("0")
    kern = kernels.get_backend(backend)
    return kern.decode_batch(mat, ctx.q, ctx.pow_table, ctx.inv_pow_table, ctx.cum, ctx.inv_cum)


# ---- per-step quantities, used by tests and the path probe ----------------

def fj_point_values(F: BiPoly, gaps: tuple[int, ...], j: int, ctx: FieldCtx):
    """``(deg f_j, f_j(1), f_j(lam), f_j(lam^-1))`` with the true history of ``gaps``.

    Only ``a_1..a_{j-1}`` and ``a_{d-j+1}..a_d`` of ``gaps`` are read.
    """
    d = len(gaps) - 1
    q = ctx.q
    lo = [sum(gaps[: k]) for k in range(j + 1)]            # lo[k] = g_0^{k-1}
    hi = [sum(gaps[d - m + 1 :]) for m in range(j + 1)]     # hi[m] = g_{d-m+1}^d
    row = F.x_slice(j)
    f1 = sum(row.values())
    fl = sum(c * int(ctx.pow_table[e]) for e, c in row.items()) % q
    fli = sum(c * int(ctx.inv_pow_table[e]) for e, c in row.items()) % q
    g: dict[int, int] = {}
    for e, c in row.items():
        for shift, w in ((0, 1), (1, -2), (2, 1)):
            g[e + shift] = g.get(e + shift, 0) + w * c
    for k in range(1, j):
        m = j - k
        la, lb = gaps[k] + 1, gaps[d - m] + 1
        e = lo[k] + hi[m]
        f1 -= la * lb
        fl -= geo_sum(ctx, lo[k], la) * geo_sum(ctx, hi[m], lb)
        fli -= geo_sum(ctx, lo[k], la, True) * geo_sum(ctx, hi[m], lb, True)
        for ex, w in ((e, -1), (e + la, 1), (e + lb, 1), (e + la + lb, -1)):
            g[ex] = g.get(ex, 0) + w
    top = max((e for e, c in g.items() if c), default=None)
    deg = None if top is None else top - 2
    return deg, f1, fl % q, fli % q


def candidate_pairs(deg: int, f1: int, g_lo: int, g_hi: int, a_d: int) -> list[tuple[int, int]]:
    """The (up to two) non-negative ``(a_j, a_{d-j})`` pairs implied by ``deg f_j`` and ``f_j(1)``.

    The first pair assumes the ``alpha_j beta_0`` term carries the degree,
    the second that ``beta_j`` does.
    """
    out = []
    aj = deg - g_lo - a_d
    out.append((aj, f1 - 1 - (a_d + 1) * (aj + 1)))
    adj = deg - g_hi
    num = f1 - 1 - adj
    if num % (a_d + 1) == 0:
        out.append((num // (a_d + 1) - 1, adj))
    seen = []
    for p in out:
        if p[0] >= 0 and p[1] >= 0 and p not in seen:
            seen.append(p)
    return seen


def validate_pair(pair, g_lo: int, g_hi: int, a_d: int, ctx: FieldCtx, fl: int, fli: int) -> bool:
    """Check ``f_j = alpha_0 beta_j + alpha_j beta_0`` at ``lam`` and ``lam^-1``."""
    aj, adj = pair
    q = ctx.q
    for inv, target in ((False, fl), (True, fli)):
        lhs = geo_sum(ctx, g_hi, adj + 1, inv) + geo_sum(ctx, g_lo, aj + 1, inv) * geo_sum(ctx, 0, a_d + 1, inv)
        if lhs % q != target:
            return False
    return True


def probe_path(s: str, ctx: FieldCtx | None = None) -> list[tuple[int, list[tuple[int, int]]]]:
    """Validated candidate pairs at every step along the true path of ``s``.

    Returns ``[(j, validated_pairs), ...]`` for ``0 < j < d/2``.  Used to
    compare observed pauses with :func:`pause_profile`.
    """
    from .poly import f_of

    n = len(s)
    ctx = ctx or make_ctx(n)
    gaps = gap_encode(s)
    d = len(gaps) - 1
    a_d = gaps[d]
    F = f_of(s)
    out = []
    j = 1
    while 2 * j < d:
        deg, f1, fl, fli = fj_point_values(F, gaps, j, ctx)
        g_lo = sum(gaps[:j])
        g_hi = sum(gaps[d - j + 1 :])
        valid = [
            p for p in candidate_pairs(deg, f1, g_lo, g_hi, a_d)
            if validate_pair(p, g_lo, g_hi, a_d, ctx, fl, fli)
        ]
        out.append((j, valid))
        j += 1
    return out


def pauses_on_path(rep: ReconReport, s: str) -> list[int]:
    """Steps at which the search paused while following the true history of ``s``.

    Needs a report produced with ``trace=True``.  A node at depth ``j`` lies
    on the path of ``s`` when the pairs assigned at depths ``1..j-1`` are the
    true ones; its first trace entry carries the pause flag.
    """
    gaps = gap_encode(s)
    d = len(gaps) - 1
    true = [(gaps[j], gaps[d - j]) for j in range(1, (d - 1) // 2 + 1)]
    path: list[tuple[int, int]] = []
    seen: dict[int, bool] = {}
    for j, aj, adj, pause, back in rep.trace:
        del path[j - 1 :]
        if not back and j not in seen and path == true[: j - 1]:
            seen[j] = pause
        path.append((aj, adj))
    return sorted(j for j, p in seen.items() if p)


def pause_profile(s: str) -> list[tuple[int, str]]:
    """Steps ``0 < j < d/2`` at which the search on ``s`` must pause, read off ``A(s)``.

    ``'type1'``: ``g_0^j - g_{d-j}^d = 1`` and ``a_j >= 1``.
    ``'type2'``: ``g_{d-j}^d - g_0^j = a_d + 1`` and ``a_{d-j} >= a_d + 1``.
    The two cannot hold at the same step.
    """
    if not is_restricted(s):
        raise ValueError("pause profile is defined for strings beginning with 1 and ending with 0")
    a = gap_encode(s)
    d = len(a) - 1
    out = []
    lo = 0
    hi = a[d]
    j = 1
    while 2 * j < d:
        lo += a[j]
        hi += a[d - j]
        if lo - hi == 1 and a[j] >= 1:
            out.append((j, "type1"))
        elif hi - lo == a[d] + 1 and a[d - j] >= a[d] + 1:
            out.append((j, "type2"))
        j += 1
    return out


def l_s_of(s: str) -> int:
    """Number of ``i < n/2`` with equal-weight length-i prefix and suffix and ``s_{i+1} != s_{n-i}``."""
    n = len(s)
    pre = suf = 0
    count = 0
    i = 1
    while 2 * i < n:
        pre += s[i - 1] == "1"
        suf += s[n - i] == "1"
        if pre == suf and s[i] != s[n - 1 - i]:
            count += 1
        i += 1
    return count
