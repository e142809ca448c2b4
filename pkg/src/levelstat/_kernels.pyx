# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the functions in ``levelstat._fallback``.

Same names, same signatures, same floating-point summation order.
"""

from libc.math cimport exp, log, INFINITY
ctypedef long double ldouble
cdef extern from "<cmath>":
    long double expl(long double) nogil
    long double logl(long double) nogil
from libcpp.vector cimport vector

import numpy as np

BACKEND = "cython"


cdef inline Py_ssize_t _upper_d(const double* row, Py_ssize_t n, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if row[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _upper_l(const long* row, Py_ssize_t n, long x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if row[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef void _insert_d(vector[vector[double]]& rows, double x) noexcept nogil:
    cdef size_t r = 0
    cdef Py_ssize_t k, ln
    cdef double y
    while r < rows.size():
        ln = rows[r].size()
        k = _upper_d(rows[r].data(), ln, x)
        if k == ln:
            rows[r].push_back(x)
            return
        y = rows[r][k]
        rows[r][k] = x
        x = y
        r += 1
    rows.push_back(vector[double](1, x))


cdef void _shape_l(const long* vals, Py_ssize_t n, vector[vector[long]]& rows,
                   Py_ssize_t* nrows) noexcept nogil:
    # row insertion reusing row buffers; rows beyond nrows[0] are stale
    cdef Py_ssize_t used = 0, r, k, ln, i
    cdef long x, y
    for i in range(n):
        x = vals[i]
        r = 0
        while True:
            if r == used:
                if <size_t>used == rows.size():
                    rows.push_back(vector[long]())
                rows[used].clear()
                rows[used].push_back(x)
                used += 1
                break
            ln = rows[r].size()
            k = _upper_l(rows[r].data(), ln, x)
            if k == ln:
                rows[r].push_back(x)
                break
            y = rows[r][k]
            rows[r][k] = x
            x = y
            r += 1
    nrows[0] = used


def shape_of(values):
    cdef const double[:] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef vector[vector[double]] rows
    cdef Py_ssize_t i, n = v.shape[0]
    with nogil:
        for i in range(n):
            _insert_d(rows, v[i])
    out = np.empty(rows.size(), dtype=np.int64)
    cdef long long[:] o = out
    for i in range(<Py_ssize_t>rows.size()):
        o[i] = rows[i].size()
    return out


def insertion_rows(values):
    cdef const double[:] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef vector[vector[double]] rows
    cdef Py_ssize_t i, j, n = v.shape[0]
    with nogil:
        for i in range(n):
            _insert_d(rows, v[i])
    result = []
    cdef double[:] o
    for i in range(<Py_ssize_t>rows.size()):
        arr = np.empty(rows[i].size(), dtype=np.float64)
        o = arr
        for j in range(<Py_ssize_t>rows[i].size()):
            o[j] = rows[i][j]
        result.append(arr)
    return result


def rsk_pq(perm):
    cdef const long long[:] v = np.ascontiguousarray(perm, dtype=np.int64)
    cdef vector[vector[long]] p_rows, q_rows
    cdef Py_ssize_t i, k, ln, n = v.shape[0]
    cdef size_t r
    cdef long x, y
    for i in range(n):
        x = v[i]
        r = 0
        while True:
            if r == p_rows.size():
                p_rows.push_back(vector[long](1, x))
                q_rows.push_back(vector[long](1, i + 1))
                break
            ln = p_rows[r].size()
            k = _upper_l(p_rows[r].data(), ln, x)
            if k == ln:
                p_rows[r].push_back(x)
                q_rows[r].push_back(i + 1)
                break
            y = p_rows[r][k]
            p_rows[r][k] = x
            x = y
            r += 1
    return [list(row) for row in p_rows], [list(row) for row in q_rows]


cdef long _reverse_bump(long* rows, Py_ssize_t* lens, Py_ssize_t stride,
                        Py_ssize_t r) noexcept nogil:
    cdef long x, y
    cdef long* row
    cdef Py_ssize_t s, lo, hi, mid
    lens[r] -= 1
    x = rows[r * stride + lens[r]]
    s = r - 1
    while s >= 0:
        row = rows + s * stride
        # largest entry < x
        lo = 0
        hi = lens[s]
        while lo < hi:
            mid = (lo + hi) >> 1
            if row[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        y = row[lo - 1]
        row[lo - 1] = x
        x = y
        s -= 1
    return x


cdef void _fill_rows(const long long* p_word, Py_ssize_t n, long* rows,
                     Py_ssize_t* lens) noexcept nogil:
    cdef Py_ssize_t v, r
    for r in range(n):
        lens[r] = 0
    for v in range(n):
        r = p_word[v]
        rows[r * n + lens[r]] = v + 1
        lens[r] += 1


def inverse_rsk_words(p_word, q_word):
    cdef const long long[:] pw = np.ascontiguousarray(p_word, dtype=np.int64)
    cdef const long long[:] qw = np.ascontiguousarray(q_word, dtype=np.int64)
    cdef Py_ssize_t n = pw.shape[0], i
    out = np.empty(n, dtype=np.int64)
    if n == 0:
        return out
    cdef long long[:] o = out
    cdef vector[long] rows = vector[long](n * n)
    cdef vector[Py_ssize_t] lens = vector[Py_ssize_t](n)
    _fill_rows(&pw[0], n, rows.data(), lens.data())
    for i in range(n - 1, -1, -1):
        o[i] = _reverse_bump(rows.data(), lens.data(), n, qw[i])
    return out


cdef double _hook_sum(const long* parts, Py_ssize_t m, vector[long]& conj,
                      vector[long]& hist) noexcept nogil:
    cdef Py_ssize_t i, j, top
    cdef long p
    cdef double total = 0.0
    if m == 0:
        return 0.0
    top = parts[0] + m
    if <Py_ssize_t>conj.size() < parts[0]:
        conj.resize(parts[0])
    if <Py_ssize_t>hist.size() < top:
        hist.resize(top)
    for j in range(parts[0]):
        conj[j] = 0
    for j in range(top):
        hist[j] = 0
    for i in range(m):
        for j in range(parts[i]):
            conj[j] += 1
    for i in range(m):
        p = parts[i]
        for j in range(p):
            hist[p - j + conj[j] - i - 1] += 1
    for j in range(2, top):
        if hist[j]:
            total += hist[j] * log(<double>j)
    return total


def hook_log_sum(shape):
    cdef vector[long] parts
    for p in shape:
        parts.push_back(p)
    cdef vector[long] conj, hist
    if parts.size() == 0:
        return 0.0
    return _hook_sum(parts.data(), parts.size(), conj, hist)


def checkerboard_chain(perm, a, pos_i, pos_j, log_u, long stride):
    cdef long long[:] st = perm
    cdef const double[:, :] am = np.ascontiguousarray(a, dtype=np.float64)
    cdef const long long[:] ii = np.ascontiguousarray(pos_i, dtype=np.int64)
    cdef const long long[:] jj = np.ascontiguousarray(pos_j, dtype=np.int64)
    cdef const double[:] lu = np.ascontiguousarray(log_u, dtype=np.float64)
    cdef Py_ssize_t n = st.shape[0], total = ii.shape[0]
    cdef Py_ssize_t m = total // stride
    out = np.empty((m, n), dtype=np.int64)
    cdef long long[:, :] o = out
    cdef Py_ssize_t k, i, j, c, row = 0
    cdef long long pi, pj
    cdef double delta
    cdef long accepted = 0
    with nogil:
        for k in range(total):
            i = ii[k]
            j = jj[k]
            if i != j:
                pi = st[i]
                pj = st[j]
                delta = am[i, pj] + am[j, pi] - am[i, pi] - am[j, pj]
                if lu[k] < delta:
                    st[i] = pj
                    st[j] = pi
                    accepted += 1
            if (k + 1) % stride == 0:
                for c in range(n):
                    o[row, c] = st[c]
                row += 1
    return out, accepted


cdef double _perm_h(const long* vals, Py_ssize_t n, vector[vector[long]]& rows,
                    vector[long]& shape, vector[long]& conj,
                    vector[long]& hist) noexcept nogil:
    cdef Py_ssize_t nrows, r
    _shape_l(vals, n, rows, &nrows)
    shape.resize(nrows)
    for r in range(nrows):
        shape[r] = rows[r].size()
    return _hook_sum(shape.data(), nrows, conj, hist)


def exp_family_chain(perm, double t, pos_i, pos_j, log_u, long stride):
    cdef long long[:] st = perm
    cdef const long long[:] ii = np.ascontiguousarray(pos_i, dtype=np.int64)
    cdef const long long[:] jj = np.ascontiguousarray(pos_j, dtype=np.int64)
    cdef const double[:] lu = np.ascontiguousarray(log_u, dtype=np.float64)
    cdef Py_ssize_t n = st.shape[0], total = ii.shape[0]
    cdef Py_ssize_t m = total // stride
    out = np.empty((m, n), dtype=np.int64)
    cdef long long[:, :] o = out
    cdef vector[long] state = vector[long](n)
    cdef vector[vector[long]] rows
    cdef vector[long] shape, conj, hist
    cdef Py_ssize_t k, i, j, c, row = 0
    cdef long tmp
    cdef double h, h_new
    cdef long accepted = 0
    for c in range(n):
        state[c] = st[c]
    with nogil:
        h = _perm_h(state.data(), n, rows, shape, conj, hist)
        for k in range(total):
            i = ii[k]
            j = jj[k]
            if i != j:
                tmp = state[i]
                state[i] = state[j]
                state[j] = tmp
                h_new = _perm_h(state.data(), n, rows, shape, conj, hist)
                if lu[k] < 2.0 * t * (h_new - h):
                    h = h_new
                    accepted += 1
                else:
                    tmp = state[i]
                    state[i] = state[j]
                    state[j] = tmp
            if (k + 1) % stride == 0:
                for c in range(n):
                    o[row, c] = state[c]
                row += 1
    for c in range(n):
        st[c] = state[c]
    return out, accepted


def syt_pair_prefix_counts(words):
    cdef const long long[:, :] w = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t f = w.shape[0], n = w.shape[1]
    if n > 24:
        raise ValueError("prefix table limited to n <= 24")
    counts = np.zeros((1 << n, n), dtype=np.int64)
    cdef long long[:, :] cnt = counts
    cdef vector[long] rows = vector[long](n * n)
    cdef vector[Py_ssize_t] lens = vector[Py_ssize_t](n)
    cdef vector[long] perm = vector[long](n)
    cdef Py_ssize_t a, b, i
    cdef long g, v
    if f == 0 or n == 0:
        return counts
    with nogil:
        for a in range(f):
            for b in range(f):
                _fill_rows(&w[a, 0], n, rows.data(), lens.data())
                for i in range(n - 1, -1, -1):
                    perm[i] = _reverse_bump(rows.data(), lens.data(), n, w[b, i])
                g = 0
                for i in range(n):
                    v = perm[i] - 1
                    cnt[g, v] += 1
                    g |= (<long>1) << v
    return counts


def best_corner_move(shape):
    cdef vector[long] parts
    for p in shape:
        parts.push_back(p)
    cdef Py_ssize_t m = parts.size()
    if m == 0:
        return (INFINITY, -1, -1)
    cdef vector[long] conj = vector[long](parts[0], 0)
    cdef Py_ssize_t i, j, r, c, a, b, ia, ib
    for i in range(m):
        for j in range(parts[i]):
            conj[j] += 1
    cdef Py_ssize_t maxh = parts[0] + m + 2
    cdef vector[double] lg = vector[double](maxh + 1)
    for i in range(1, maxh + 1):
        lg[i] = log(<double>i)
    cdef vector[Py_ssize_t] rem_rows, add_rows
    cdef vector[double] rem_d, add_d
    cdef long h
    cdef double d
    with nogil:
        for i in range(m):
            if i == m - 1 or parts[i] > parts[i + 1]:
                c = parts[i] - 1
                d = 0.0
                for j in range(c):
                    h = parts[i] - j + conj[j] - i - 1
                    d += lg[h - 1] - lg[h]
                for r in range(i):
                    h = parts[r] - c + conj[c] - r - 1
                    d += lg[h - 1] - lg[h]
                rem_rows.push_back(i)
                rem_d.push_back(d)
        for i in range(m + 1):
            if i == 0 or i == m or parts[i - 1] > parts[i]:
                c = parts[i] if i < m else 0
                d = 0.0
                for j in range(c):
                    h = parts[i] - j + conj[j] - i - 1
                    d += lg[h + 1] - lg[h]
                for r in range(i):
                    h = parts[r] - c + conj[c] - r - 1
                    d += lg[h + 1] - lg[h]
                add_rows.push_back(i)
                add_d.push_back(d)
    cdef double best = INFINITY
    cdef Py_ssize_t best_a = -1, best_b = -1
    cdef long after_prev, cur, ca, cb
    with nogil:
        for ia in range(<Py_ssize_t>rem_rows.size()):
            a = rem_rows[ia]
            for ib in range(<Py_ssize_t>add_rows.size()):
                b = add_rows[ib]
                if b == a:
                    continue
                cur = parts[b] if b < m else 0
                if b > 0:
                    after_prev = parts[b - 1] - (1 if b - 1 == a else 0)
                    if after_prev <= cur:
                        continue
                d = rem_d[ia] + add_d[ib]
                if a < b:
                    cb = cur
                    if cb < parts[a] - 1:
                        h = parts[a] - cb + conj[cb] - a - 1
                        d -= lg[h - 1] + lg[h + 1] - 2.0 * lg[h]
                elif b < a:
                    ca = parts[a] - 1
                    if ca < parts[b]:
                        h = parts[b] - ca + conj[ca] - b - 1
                        d -= lg[h - 1] + lg[h + 1] - 2.0 * lg[h]
                if d < best:
                    best = d
                    best_a = a
                    best_b = b
    return (best, best_a, best_b)


cdef struct _Scan:
    long m
    long n
    double* lnd
    double* lnfact
    double* F
    long stride
    double lnfact_n
    double lp_lo
    double bin_width
    long nbins
    long double* hist
    long double s0
    long double s1
    long double s2
    long long count
    long* l
    int collect
    double c_lo
    double c_hi
    long double below
    long long count_below
    vector[long]* c_parts
    vector[long]* c_offsets
    vector[double]* c_lp


cdef void _scan_leaf(_Scan* sc, double s) noexcept nogil:
    cdef double lp = -sc.lnfact_n - 2.0 * s
    cdef double p = exp(-lp)
    cdef long b
    sc.s0 += p
    sc.s1 += p * lp
    sc.s2 += p * lp * lp
    sc.count += 1
    cdef long i
    if sc.collect:
        if lp < sc.c_lo:
            sc.below += p
            sc.count_below += 1
        elif lp < sc.c_hi:
            for i in range(sc.m):
                sc.c_parts.push_back(sc.l[sc.m - 1 - i] - (sc.m - 1 - i))
            sc.c_offsets.push_back(sc.c_parts.size())
            sc.c_lp.push_back(lp)
    if sc.nbins > 0:
        b = <long>((lp - sc.lp_lo) / sc.bin_width)
        if b < 0:
            b = 0
        elif b >= sc.nbins:
            b = sc.nbins - 1
        sc.hist[b] += p


cdef void _scan_dfs(_Scan* sc, long k, long rem, long prev, double s) noexcept nogil:
    # choose the k-th smallest beta number (strictly increasing, all >= 1);
    # F row k holds sum_{i<k} ln(v - l_i) for every v > prev that can occur
    cdef long j = sc.m - k - 1
    cdef long hi, x, y, v, vmax
    cdef double c
    cdef double* F = sc.F + k * sc.stride
    cdef double* G
    if j == 0:
        if rem > prev:
            sc.l[k] = rem
            _scan_leaf(sc, s - sc.lnfact[rem] + F[rem])
        return
    hi = (rem - j * (j + 1) // 2) // (j + 1)
    if j == 1:
        for x in range(prev + 1, hi + 1):
            y = rem - x
            sc.l[k] = x
            sc.l[k + 1] = y
            _scan_leaf(sc, s - sc.lnfact[x] - sc.lnfact[y] + F[x] + F[y] + sc.lnd[y - x])
        return
    G = F + sc.stride
    for x in range(prev + 1, hi + 1):
        c = s - sc.lnfact[x] + F[x]
        vmax = rem - x - (j - 1) * (x + 1) - (j - 1) * (j - 2) // 2
        for v in range(x + 1, vmax + 1):
            G[v] = F[v] + sc.lnd[v - x]
        sc.l[k] = x
        _scan_dfs(sc, k + 1, rem - x, x, c)


cdef _run_scan(_Scan* sc, long n, double lp_lo, double lp_hi, long nbins):
    cdef long top = 2 * n + 2
    cdef vector[double] lnd = vector[double](top + 1)
    cdef vector[double] lnfact = vector[double](top + 1)
    cdef vector[double] F = vector[double]((n + 1) * (top + 1), 0.0)
    cdef vector[long] l = vector[long](n + 1)
    cdef vector[ldouble] hist = vector[ldouble](nbins if nbins > 0 else 1)
    cdef long i, m
    cdef long double acc = 0
    for i in range(1, top + 1):
        lnd[i] = log(<double>i)
        acc += logl(<long double>i)
        lnfact[i] = <double>acc
    sc.n = n
    sc.lnd = lnd.data()
    sc.lnfact = lnfact.data()
    sc.F = F.data()
    sc.stride = top + 1
    sc.l = l.data()
    sc.lnfact_n = lnfact[n]
    sc.lp_lo = lp_lo
    sc.bin_width = (lp_hi - lp_lo) / nbins if nbins > 0 else 1.0
    sc.nbins = nbins
    sc.hist = hist.data()
    sc.s0 = 0
    sc.s1 = 0
    sc.s2 = 0
    sc.count = 0
    sc.below = 0
    sc.count_below = 0
    with nogil:
        for m in range(1, n + 1):
            sc.m = m
            _scan_dfs(sc, 0, n + m * (m - 1) // 2, 0, 0.0)
    h = np.empty(max(nbins, 0), dtype=np.float64)
    cdef double[:] hv = h
    for i in range(nbins):
        hv[i] = <double>hist[i]
    return h


def plancherel_scan(long n, double lp_lo=0.0, double lp_hi=1.0, long nbins=0):
    """Stream every partition of n through its beta-number form.

    Returns (count, sum p, sum p*LP, sum p*LP^2, mass histogram over
    ``nbins`` equal LP bins on [lp_lo, lp_hi), clamped at both ends).
    """
    cdef _Scan sc
    sc.collect = 0
    h = _run_scan(&sc, n, lp_lo, lp_hi, nbins)
    return sc.count, <double>sc.s0, <double>sc.s1, <double>sc.s2, h


def plancherel_collect(long n, double lo, double hi):
    """Shapes with LP in [lo, hi), plus the mass and count of shapes with LP < lo.

    Returns (mass_below, count_below, list of part tuples, LP array); shape
    order follows the scan, not reverse-lexicographic order.
    """
    cdef _Scan sc
    cdef vector[long] parts, offsets
    cdef vector[double] lps
    sc.collect = 1
    sc.c_lo = lo
    sc.c_hi = hi
    sc.c_parts = &parts
    sc.c_offsets = &offsets
    sc.c_lp = &lps
    offsets.push_back(0)
    _run_scan(&sc, n, 0.0, 1.0, 0)
    shapes = []
    cdef Py_ssize_t i
    for i in range(<Py_ssize_t>lps.size()):
        shapes.append(tuple(parts[j] for j in range(offsets[i], offsets[i + 1])))
    out = np.empty(lps.size(), dtype=np.float64)
    cdef double[:] ov = out
    for i in range(<Py_ssize_t>lps.size()):
        ov[i] = lps[i]
    return <double>sc.below, sc.count_below, shapes, out
