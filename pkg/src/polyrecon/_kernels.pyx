# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: F grid, reconstruction search, batch decoding.

Contract identical to ``polyrecon._fallback``.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset, memcpy

cnp.import_array()

ctypedef long long i64

BACKEND = "compiled"


cdef inline i64 _mod(i64 x, i64 q) nogil:
    x %= q
    return x + q if x < 0 else x


cdef void _fill_grid(const unsigned char* bits, int n, i64* out, int* w, int* z) nogil:
    # out must hold (2d+1) * (2(n-d)+1) zeroed cells.  Substrings of one
    # length all land on a single anti-diagonal, so walking by length keeps
    # the writes local; each count also goes to the mirrored cell.
    cdef int i, dl, d, ny
    cdef i64 base, base2, centre
    w[0] = 0
    z[0] = 0
    for i in range(n):
        w[i + 1] = w[i] + bits[i]
        z[i + 1] = z[i] + 1 - bits[i]
    d = w[n]
    ny = 2 * (n - d) + 1
    centre = <i64>d * ny + (n - d)
    out[centre] += n + 1
    for dl in range(1, n + 1):
        base = centre + dl
        for i in range(dl, n + 1):
            # ones in s[i-dl:i] moves the cell up one row and left one column
            base2 = base + <i64>(w[i] - w[i - dl]) * (ny - 1)
            out[base2] += 1
            out[2 * centre - base2] += 1


def f_grid(bits):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, mode="c"] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int n = b.shape[0]
    cdef int d = int(b.sum())
    out = np.zeros((2 * d + 1, 2 * (n - d) + 1), dtype=np.int64)
    cdef i64[:, ::1] ov = out
    cdef int* w = <int*>malloc((n + 1) * sizeof(int))
    cdef int* z = <int*>malloc((n + 1) * sizeof(int))
    try:
        _fill_grid(&b[0] if n else NULL, n, &ov[0, 0], w, z)
    finally:
        free(w)
        free(z)
    return out


cdef struct Ctx:
    int n, d, a_d, J, Y, room
    i64 q
    const i64* grid        # (2d+1) x (Y+1), row-major
    const i64* cum
    const i64* icum
    i64* r1
    i64* rl
    i64* rli
    i64* g                 # scratch, Y+3
    i64* lo_off
    i64* hi_off
    i64* La
    i64* Lb
    i64* al
    i64* ali
    i64* bl
    i64* bli
    i64 beta0, beta0i
    int* stack_j
    i64* stack_a
    i64* stack_b
    i64* gaps
    unsigned char* bits
    int* quad              # (d+1) x (n-d+1) substring counts by (ones, zeros)
    int* w
    int* z


cdef inline i64 _geo(Ctx* c, i64 start, i64 length) nogil:
    return _mod(c.cum[start + length] - c.cum[start], c.q)


cdef inline i64 _geoi(Ctx* c, i64 start, i64 length) nogil:
    return _mod(c.icum[start + length] - c.icum[start], c.q)


cdef void _assign(Ctx* c, int j, i64 aj, i64 adj) nogil:
    cdef i64 g_lo = c.lo_off[j]
    cdef i64 g_hi = c.hi_off[j]
    c.La[j] = aj + 1
    c.Lb[j] = adj + 1
    c.al[j] = _geo(c, g_lo, aj + 1)
    c.ali[j] = _geoi(c, g_lo, aj + 1)
    c.bl[j] = _geo(c, g_hi, adj + 1)
    c.bli[j] = _geoi(c, g_hi, adj + 1)
    c.lo_off[j + 1] = g_lo + aj
    c.hi_off[j + 1] = g_hi + adj


cdef int _candidates(Ctx* c, int j, i64* pa, i64* pb, int* nvalid) nogil:
    """Fill pa/pb with validated pairs; return how many also fit the gap budget.

    Feasible pairs come first in pa/pb (order preserved); ``nvalid`` gets the
    number of field-validated pairs.
    """
    cdef int k, m, W = c.Y + 3, top, nv = 0, nf = 0, t
    cdef i64 f1, fl, fli, e, la, lb, deg, g_lo, g_hi, aj, adj, num, ad1 = c.a_d + 1
    cdef i64 ca[2]
    cdef i64 cb[2]
    cdef int nc = 0
    cdef i64 vals[2]
    cdef i64 valb[2]
    cdef i64* g = c.g
    cdef const i64* row = c.grid + j * (c.Y + 1)
    cdef int R = c.room + 1
    # (1 - y)^2 r_j(y) over the first R columns; in a valid F the rest of
    # row j is zero, and anything else is caught by the final verification
    g[0] = row[0]
    g[1] = row[1] - 2 * row[0]          # R >= 2 because a_d >= 1
    for k in range(2, R):
        g[k] = row[k] - 2 * row[k - 1] + row[k - 2]
    g[R] = row[R - 2] - 2 * row[R - 1]
    g[R + 1] = row[R - 1]
    memset(g + R + 2, 0, (W - R - 2) * sizeof(i64))
    f1 = c.r1[j]
    fl = c.rl[j]
    fli = c.rli[j]
    for k in range(1, j):
        m = j - k
        la = c.La[k]
        lb = c.Lb[m]
        f1 -= la * lb
        fl = _mod(fl - c.al[k] * c.bl[m], c.q)
        fli = _mod(fli - c.ali[k] * c.bli[m], c.q)
        e = c.lo_off[k] + c.hi_off[m]
        g[e] -= 1
        g[e + la] += 1
        g[e + lb] += 1
        g[e + la + lb] -= 1
    top = W - 1
    while top >= 0 and g[top] == 0:
        top -= 1
    nvalid[0] = 0
    if top < 0 or g[top] < 0:
        return 0
    deg = top - 2
    g_lo = c.lo_off[j]
    g_hi = c.hi_off[j]
    aj = deg - g_lo - c.a_d
    ca[0] = aj
    cb[0] = f1 - 1 - ad1 * (aj + 1)
    nc = 1
    adj = deg - g_hi
    num = f1 - 1 - adj
    if _mod(num, ad1) == 0:
        # floor division, num may be negative
        ca[1] = (num - _mod(num, ad1)) / ad1 - 1
        cb[1] = adj
        nc = 2
    for t in range(nc):
        aj = ca[t]
        adj = cb[t]
        if aj < 0 or adj < 0:
            continue
        if nv == 1 and vals[0] == aj and valb[0] == adj:
            continue
        if _mod(_geo(c, g_hi, adj + 1) + _geo(c, g_lo, aj + 1) * c.beta0, c.q) != fl:
            continue
        if _mod(_geoi(c, g_hi, adj + 1) + _geoi(c, g_lo, aj + 1) * c.beta0i, c.q) != fli:
            continue
        vals[nv] = aj
        valb[nv] = adj
        nv += 1
    nvalid[0] = nv
    for t in range(nv):
        pa[t] = vals[t]
        pb[t] = valb[t]
    for t in range(nv):
        if g_lo + g_hi + vals[t] + valb[t] <= c.room:
            pa[2 + nf] = vals[t]
            pb[2 + nf] = valb[t]
            nf += 1
    return nf


cdef bint _close(Ctx* c) nogil:
    cdef int k, m, d = c.d, J = c.J, pos, i, n = c.n
    cdef i64 total = c.lo_off[J + 1] + c.hi_off[J + 1], mid
    for k in range(d + 1):
        c.gaps[k] = 0
    for k in range(1, J + 1):
        c.gaps[k] = c.La[k] - 1
    for m in range(J + 1):
        c.gaps[d - m] = c.Lb[m] - 1
    if d % 2:
        if total != c.room:
            return False
    else:
        mid = c.room - total
        if mid < 0:
            return False
        c.gaps[d / 2] = mid
    memset(c.bits, 0, n)
    pos = 0
    for k in range(d):
        pos += c.gaps[k]
        c.bits[pos] = 1
        pos += 1
    return _verify(c)


cdef bint _verify(Ctx* c) nogil:
    # Compare F of c.bits with c.grid.  Cell (d + o, (n-d) + z) of F counts
    # substrings with o ones and z zeros, the mirrored cell holds the same
    # count, the centre holds n + 1 and mixed-sign cells are empty.
    cdef int n = c.n, d = c.d, Z = n - d, ny = 2 * Z + 1, QZ = Z + 1
    cdef int i, dl, o, zz, r, k
    cdef i64 v, expect
    cdef int* w = c.w
    cdef const i64* row
    w[0] = 0
    for i in range(n):
        w[i + 1] = w[i] + c.bits[i]
    if w[n] != d:
        return False
    memset(c.quad, 0, (d + 1) * QZ * sizeof(int))
    c.quad[0] = n + 1
    for dl in range(1, n + 1):
        for i in range(dl, n + 1):
            o = w[i] - w[i - dl]
            c.quad[o * QZ + dl - o] += 1
    for r in range(2 * d + 1):
        o = r - d
        row = c.grid + <i64>r * ny
        for k in range(ny):
            zz = k - Z
            if o >= 0 and zz >= 0:
                expect = c.quad[o * QZ + zz]
            elif o <= 0 and zz <= 0:
                expect = c.quad[-o * QZ - zz]
            else:
                expect = 0
            if row[k] != expect:
                return False
    return True


cdef object _run(Ctx* c, bint first_only, object results, object pauses, object trace,
                 i64* stats):
    """DFS; appends gap tuples to ``results`` and, when not None, pauses/trace."""
    cdef int j = 1, sp = 0, nf, nv, J = c.J, d = c.d
    cdef i64 pa[4]
    cdef i64 pb[4]
    cdef i64 nodes = 0, bps = 0, dead = 0, back = 0, nres = 0
    cdef bint ok
    while True:
        if j > J:
            ok = _close(c)
            if ok:
                nres += 1
                if results is not None:
                    results.append(tuple([c.gaps[k] for k in range(d + 1)]))
                if first_only:
                    break
            else:
                dead += 1
                if nres == 0:
                    back += 1
        else:
            nodes += 1
            nf = _candidates(c, j, pa, pb, &nv)
            if nv == 2 and pauses is not None:
                pauses.append((j, (pa[0], pb[0]), (pa[1], pb[1])))
            if nf > 0:
                if nf == 2:
                    bps += 1
                    c.stack_j[sp] = j
                    c.stack_a[sp] = pa[3]
                    c.stack_b[sp] = pb[3]
                    sp += 1
                _assign(c, j, pa[2], pb[2])
                if trace is not None:
                    trace.append((j, pa[2], pb[2], nv == 2, False))
                j += 1
                continue
            dead += 1
            if nres == 0:
                back += 1
        if sp == 0:
            break
        sp -= 1
        j = c.stack_j[sp]
        _assign(c, j, c.stack_a[sp], c.stack_b[sp])
        if trace is not None:
            trace.append((j, c.stack_a[sp], c.stack_b[sp], False, True))
        j += 1
    stats[0] = nodes
    stats[1] = bps
    stats[2] = dead
    stats[3] = back
    stats[4] = nres


cdef void _alloc(Ctx* c, int n, int d, int a_d, i64 q, const i64* grid,
                 const i64* pw, const i64* ipw, const i64* cum, const i64* icum):
    cdef int J = (d - 1) / 2, Y = 2 * (n - d), W = Y + 3, j, k, size = J + 2
    cdef i64 v
    c.n = n
    c.d = d
    c.a_d = a_d
    c.J = J
    c.Y = Y
    c.room = n - d
    c.q = q
    c.grid = grid
    c.cum = cum
    c.icum = icum
    c.r1 = <i64*>calloc(J + 1, sizeof(i64))
    c.rl = <i64*>calloc(J + 1, sizeof(i64))
    c.rli = <i64*>calloc(J + 1, sizeof(i64))
    c.g = <i64*>calloc(W, sizeof(i64))
    c.lo_off = <i64*>calloc(size + 1, sizeof(i64))
    c.hi_off = <i64*>calloc(size + 1, sizeof(i64))
    c.La = <i64*>calloc(size, sizeof(i64))
    c.Lb = <i64*>calloc(size, sizeof(i64))
    c.al = <i64*>calloc(size, sizeof(i64))
    c.ali = <i64*>calloc(size, sizeof(i64))
    c.bl = <i64*>calloc(size, sizeof(i64))
    c.bli = <i64*>calloc(size, sizeof(i64))
    c.stack_j = <int*>calloc(size, sizeof(int))
    c.stack_a = <i64*>calloc(size, sizeof(i64))
    c.stack_b = <i64*>calloc(size, sizeof(i64))
    c.gaps = <i64*>calloc(d + 1, sizeof(i64))
    c.bits = <unsigned char*>calloc(n + 1, 1)
    c.quad = <int*>calloc((d + 1) * (n - d + 1), sizeof(int))
    c.w = <int*>calloc(n + 1, sizeof(int))
    c.z = <int*>calloc(n + 1, sizeof(int))
    for j in range(J + 1):
        for k in range(Y + 1):
            v = grid[j * (Y + 1) + k]
            if v == 0:
                continue
            c.r1[j] += v
            c.rl[j] = (c.rl[j] + _mod(v, q) * pw[k]) % q
            c.rli[j] = (c.rli[j] + _mod(v, q) * ipw[k]) % q
    c.La[0] = 1
    c.al[0] = 1
    c.ali[0] = 1
    c.Lb[0] = a_d + 1
    c.beta0 = _mod(cum[a_d + 1] - cum[0], q)
    c.beta0i = _mod(icum[a_d + 1] - icum[0], q)
    c.bl[0] = c.beta0
    c.bli[0] = c.beta0i
    c.hi_off[1] = a_d


cdef void _release(Ctx* c):
    free(c.r1); free(c.rl); free(c.rli); free(c.g)
    free(c.lo_off); free(c.hi_off); free(c.La); free(c.Lb)
    free(c.al); free(c.ali); free(c.bl); free(c.bli)
    free(c.stack_j); free(c.stack_a); free(c.stack_b)
    free(c.gaps); free(c.bits); free(c.quad); free(c.w); free(c.z)


def search(grid, int n, int d, int a_d, i64 q, pw, ipw, cum, inv_cum,
           bint first_only=False, bint want_trace=False):
    cdef i64[:, ::1] gv = np.ascontiguousarray(grid, dtype=np.int64)
    cdef i64[::1] pwv = np.ascontiguousarray(pw, dtype=np.int64)
    cdef i64[::1] ipwv = np.ascontiguousarray(ipw, dtype=np.int64)
    cdef i64[::1] cv = np.ascontiguousarray(cum, dtype=np.int64)
    cdef i64[::1] icv = np.ascontiguousarray(inv_cum, dtype=np.int64)
    if gv.shape[0] != 2 * d + 1 or gv.shape[1] != 2 * (n - d) + 1:
        raise ValueError("grid shape does not match (n, d)")
    if cv.shape[0] < n - d + 2 or pwv.shape[0] < gv.shape[1]:
        raise ValueError("field tables too small")
    if not 1 <= a_d <= n - d:
        return [], (0, 0, 1, 1), [], []
    cdef Ctx c
    cdef i64 stats[5]
    results = []
    pauses = []
    trace = [] if want_trace else None
    _alloc(&c, n, d, a_d, q, &gv[0, 0], &pwv[0], &ipwv[0], &cv[0], &icv[0])
    try:
        _run(&c, first_only, results, pauses, trace, stats)
    finally:
        _release(&c)
    return results, (stats[0], stats[1], stats[2], stats[3]), pauses, (trace or [])


cdef bint _has_type2(const i64* gaps, int d) nogil:
    cdef i64 ad = gaps[d], lo = 0, hi = gaps[d]
    cdef int j = 1
    while 2 * j < d:
        lo += gaps[j]
        hi += gaps[d - j]
        if hi - lo == ad + 1 and gaps[d - j] >= ad + 1:
            return True
        j += 1
    return False


def decode_batch(words, i64 q, pw, ipw, cum, inv_cum):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] mat = np.ascontiguousarray(words, dtype=np.uint8)
    cdef i64[::1] pwv = np.ascontiguousarray(pw, dtype=np.int64)
    cdef i64[::1] ipwv = np.ascontiguousarray(ipw, dtype=np.int64)
    cdef i64[::1] cv = np.ascontiguousarray(cum, dtype=np.int64)
    cdef i64[::1] icv = np.ascontiguousarray(inv_cum, dtype=np.int64)
    cdef int N = mat.shape[0], n = mat.shape[1], r, i, d, a_d, k, pos
    out = np.zeros((N, 7), dtype=np.int64)
    cdef i64[:, ::1] ov = out
    cdef Ctx c
    cdef i64 stats[5]
    cdef i64* grid = <i64*>malloc((n + 1) * (2 * n + 1) * sizeof(i64))
    cdef i64* mygaps = <i64*>malloc((n + 1) * sizeof(i64))
    cdef int* w = <int*>malloc((n + 1) * sizeof(int))
    cdef int* z = <int*>malloc((n + 1) * sizeof(int))
    cdef bint same, first
    results = []
    try:
        for r in range(N):
            d = 0
            for i in range(n):
                d += mat[r, i]
            if d < 1 or mat[r, 0] != 1 or mat[r, n - 1] != 0:
                raise ValueError(f"row {r} does not begin with 1 and end with 0")
            memset(grid, 0, (2 * d + 1) * (2 * (n - d) + 1) * sizeof(i64))
            _fill_grid(&mat[r, 0], n, grid, w, z)
            # own gap string
            k = 0
            mygaps[0] = 0
            for i in range(n):
                if mat[r, i]:
                    k += 1
                    mygaps[k] = 0
                else:
                    mygaps[k] += 1
            a_d = mygaps[d]
            _alloc(&c, n, d, a_d, q, grid, &pwv[0], &ipwv[0], &cv[0], &icv[0])
            del results[:]
            try:
                _run(&c, False, results, None, None, stats)
            finally:
                _release(&c)
            same = False
            first = False
            for idx, res in enumerate(results):
                if all(res[k] == mygaps[k] for k in range(d + 1)):
                    same = True
                    first = idx == 0
            ov[r, 0] = stats[4]
            ov[r, 1] = same
            ov[r, 2] = stats[3]
            ov[r, 3] = stats[2]
            ov[r, 4] = stats[1]
            ov[r, 5] = _has_type2(mygaps, d)
            ov[r, 6] = first
    finally:
        free(grid)
        free(mygaps)
        free(w)
        free(z)
    return out
