"""Pure-Python kernels.

Same contract as the compiled ``_kernels`` extension; used when the
extension is not built or when ``POLYRECON_PURE=1`` is set.  The search
state lives in per-depth arrays so a saved branch is just ``(j, pair)``.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def f_grid(bits) -> np.ndarray:
    """Dense grid of ``P_s * P_s^*`` for a 0/1 byte array.

    Entry ``[d + w_i - w_k, (n-d) + z_i - z_k]`` collects every pair of
    prefixes ``(i, k)``.
    """
    b = np.asarray(bits, dtype=np.int64)
    n = len(b)
    w = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(b, out=w[1:])
    d = int(w[-1])
    z = np.arange(n + 1, dtype=np.int64) - w
    ny = 2 * (n - d) + 1
    xs = (d + w[:, None] - w[None, :]).ravel()
    ys = ((n - d) + z[:, None] - z[None, :]).ravel()
    flat = np.bincount(xs * ny + ys, minlength=(2 * d + 1) * ny)
    return flat.astype(np.int64).reshape(2 * d + 1, ny)


def _matches_grid(bits: np.ndarray, grid: np.ndarray) -> bool:
    """True iff ``f_grid(bits)`` equals ``grid``, without building the grid.

    Cell ``(d + o, (n-d) + z)`` counts substrings with ``o`` ones and ``z``
    zeros; the mirrored cell holds the same count, the centre holds ``n + 1``
    and cells with mixed signs are empty.
    """
    n = len(bits)
    w = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(bits, out=w[1:])
    d = int(w[-1])
    Z = n - d
    if grid.shape != (2 * d + 1, 2 * Z + 1):
        return False
    quad = np.zeros((d + 1, Z + 1), dtype=np.int64)
    quad[0, 0] = n + 1
    for dl in range(1, n + 1):
        cnt = np.bincount(w[dl:] - w[:-dl])
        ones = np.flatnonzero(cnt)
        quad[ones, dl - ones] = cnt[ones]
    return (
        np.array_equal(grid[d:, Z:], quad)
        and np.array_equal(grid[d::-1, Z::-1], quad)
        and not grid[:d, Z + 1 :].any()
        and not grid[d + 1 :, :Z].any()
    )


def _gaps_to_bits(gaps) -> np.ndarray:
    n = sum(gaps) + len(gaps) - 1
    out = np.zeros(n, dtype=np.uint8)
    pos = 0
    for g in gaps[:-1]:
        pos += g
        out[pos] = 1
        pos += 1
    return out


def _has_type2(gaps) -> bool:
    d = len(gaps) - 1
    ad = gaps[d]
    lo = 0
    hi = ad
    j = 1
    while 2 * j < d:
        lo += gaps[j]
        hi += gaps[d - j]
        if hi - lo == ad + 1 and gaps[d - j] >= ad + 1:
            return True
        j += 1
    return False


def search(grid, n, d, a_d, q, pw, ipw, cum, inv_cum, first_only=False, want_trace=False):
    """Depth-first search over gap assignments consistent with ``grid``.

    Returns ``(results, stats, pauses, trace)`` where ``results`` is a list
    of gap tuples and ``stats = (nodes, branch_points, dead_ends, backtracks)``.
    A pause is a node where two pairs pass the field checks; it becomes a
    branch point only if both pairs also fit the remaining gap budget.
    ``pauses`` holds ``(j, first_pair, second_pair)`` per pause and
    ``trace`` holds ``(j, a_j, a_{d-j}, pause, backtrack)`` per assignment.
    """
    grid = np.asarray(grid, dtype=np.int64)
    J = (d - 1) // 2
    room = n - d
    Y = grid.shape[1] - 1
    ad1 = a_d + 1
    if not 1 <= a_d <= room:
        return [], (0, 0, 1, 1), [], []

    rows = grid[: J + 1]
    r1 = rows.sum(axis=1).tolist()
    rl = ((rows % q) @ pw[: Y + 1] % q).tolist()
    rli = ((rows % q) @ ipw[: Y + 1] % q).tolist()
    # (1 - y)^2 r_j(y), one row per step.  Only the first room+1 columns of
    # a valid F row are nonzero; anything else fails the final verification.
    R = room + 1
    rows2 = np.zeros((J + 1, Y + 3), dtype=np.int64)
    rows2[:, :R] += rows[:, :R]
    rows2[:, 1 : R + 1] -= 2 * rows[:, :R]
    rows2[:, 2 : R + 2] += rows[:, :R]

    size = J + 2
    lo_off = np.zeros(size + 1, dtype=np.int64)
    hi_off = np.zeros(size + 1, dtype=np.int64)
    La = np.zeros(size, dtype=np.int64)
    Lb = np.zeros(size, dtype=np.int64)
    al = np.zeros(size, dtype=np.int64)
    ali = np.zeros(size, dtype=np.int64)
    bl = np.zeros(size, dtype=np.int64)
    bli = np.zeros(size, dtype=np.int64)
    La[0] = 1
    al[0] = ali[0] = 1
    Lb[0] = ad1
    beta0 = int(cum[ad1] - cum[0]) % q
    beta0i = int(inv_cum[ad1] - inv_cum[0]) % q
    bl[0], bli[0] = beta0, beta0i
    hi_off[1] = a_d

    def geo(start, length):
        return int(cum[start + length] - cum[start]) % q

    def geoi(start, length):
        return int(inv_cum[start + length] - inv_cum[start]) % q

    def assign(j, pair):
        aj, adj = pair
        La[j] = aj + 1
        Lb[j] = adj + 1
        g_lo = int(lo_off[j])
        g_hi = int(hi_off[j])
        al[j] = geo(g_lo, aj + 1)
        ali[j] = geoi(g_lo, aj + 1)
        bl[j] = geo(g_hi, adj + 1)
        bli[j] = geoi(g_hi, adj + 1)
        lo_off[j + 1] = g_lo + aj
        hi_off[j + 1] = g_hi + adj

    def candidates(j):
        if j > 1:
            ks = slice(1, j)
            ms = slice(j - 1, 0, -1)
            f1 = r1[j] - int(np.dot(La[ks], Lb[ms]))
            fl = (rl[j] - int(((al[ks] * bl[ms]) % q).sum())) % q
            fli = (rli[j] - int(((ali[ks] * bli[ms]) % q).sum())) % q
            e = lo_off[ks] + hi_off[ms]
            la, lb = La[ks], Lb[ms]
            idx = np.concatenate((e, e + la, e + lb, e + la + lb))
            ones = np.ones(j - 1)
            wts = np.concatenate((ones, -ones, -ones, ones))
            g = rows2[j] - np.rint(np.bincount(idx, weights=wts, minlength=Y + 3)).astype(np.int64)
        else:
            f1, fl, fli = r1[j], rl[j], rli[j]
            g = rows2[j]
        nz = np.flatnonzero(g)
        if len(nz) == 0 or g[nz[-1]] < 0:
            return [], []
        deg = int(nz[-1]) - 2
        g_lo = int(lo_off[j])
        g_hi = int(hi_off[j])
        pairs = []
        aj = deg - g_lo - a_d
        pairs.append((aj, f1 - 1 - ad1 * (aj + 1)))
        adj = deg - g_hi
        num = f1 - 1 - adj
        if num % ad1 == 0:
            pairs.append((num // ad1 - 1, adj))
        valid = []
        for aj, adj in pairs:
            if aj < 0 or adj < 0 or (aj, adj) in valid:
                continue
            if (geo(g_hi, adj + 1) + geo(g_lo, aj + 1) * beta0) % q != fl:
                continue
            if (geoi(g_hi, adj + 1) + geoi(g_lo, aj + 1) * beta0i) % q != fli:
                continue
            valid.append((aj, adj))
        return valid, [p for p in valid if g_lo + g_hi + p[0] + p[1] <= room]

    def close():
        total = int(lo_off[J + 1] + hi_off[J + 1])
        gaps = [0] * (d + 1)
        for k in range(1, J + 1):
            gaps[k] = int(La[k]) - 1
        for m in range(J + 1):
            gaps[d - m] = int(Lb[m]) - 1
        if d % 2:
            if total != room:
                return None
        else:
            mid = room - total
            if mid < 0:
                return None
            gaps[d // 2] = mid
        if not _matches_grid(_gaps_to_bits(gaps), grid):
            return None
        return tuple(gaps)

    results = []
    pauses = []
    trace = []
    nodes = branch_points = dead_ends = backtracks = 0
    stack = []
    j = 1
    while True:
        if j > J:
            found = close()
            if found is not None:
                results.append(found)
                if first_only:
                    break
            else:
                dead_ends += 1
                if not results:
                    backtracks += 1
        else:
            nodes += 1
            valid, cands = candidates(j)
            if len(valid) == 2:
                pauses.append((j, valid[0], valid[1]))
            if cands:
                if len(cands) == 2:
                    branch_points += 1
                    stack.append((j, cands[1]))
                assign(j, cands[0])
                if want_trace:
                    trace.append((j, cands[0][0], cands[0][1], len(valid) == 2, False))
                j += 1
                continue
            dead_ends += 1
            if not results:
                backtracks += 1
        if not stack:
            break
        j, pair = stack.pop()
        assign(j, pair)
        if want_trace:
            trace.append((j, pair[0], pair[1], False, True))
        j += 1
    return results, (nodes, branch_points, dead_ends, backtracks), pauses, trace


def decode_batch(words, q, pw, ipw, cum, inv_cum):
    """Decode every row of a 0/1 matrix from its own F grid.

    Returns an ``int64`` array with columns ``(n_results, self_found,
    backtracks, dead_ends, branch_points, has_type2, first_is_self)``.
    ``first_is_self`` is what a codebook decoder that stops at the first
    verified string would return.
    """
    words = np.asarray(words, dtype=np.uint8)
    n = words.shape[1]
    out = np.zeros((words.shape[0], 7), dtype=np.int64)
    for r, bits in enumerate(words):
        grid = f_grid(bits)
        d = int(bits.sum())
        gaps = [len(run) for run in "".join(map(str, bits.tolist())).split("1")]
        a_d = gaps[-1]
        res, stats, _, _ = search(grid, n, d, a_d, q, pw, ipw, cum, inv_cum)
        own = tuple(gaps)
        out[r] = (len(res), own in res, stats[3], stats[2], stats[1], _has_type2(gaps), bool(res) and res[0] == own)
    return out
