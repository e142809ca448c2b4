"""Pure-Python implementations of the hot kernels.

Every function here has a twin with the same name and signature in the
compiled ``_kernels`` extension.  Both are deterministic functions of their
inputs; randomness is always drawn by the caller and passed in as arrays, so
the two backends produce identical output for identical input.
"""

from bisect import bisect_left, bisect_right
from math import log

import numpy as np

BACKEND = "python"


def _insert_rows(rows, x):
    for row in rows:
        k = bisect_right(row, x)
        if k == len(row):
            row.append(x)
            return
        row[k], x = x, row[k]
    rows.append([x])


def shape_of(values):
    rows = []
    for x in np.asarray(values, dtype=np.float64).tolist():
        _insert_rows(rows, x)
    return np.array([len(r) for r in rows], dtype=np.int64)


def insertion_rows(values):
    rows = []
    for x in np.asarray(values, dtype=np.float64).tolist():
        _insert_rows(rows, x)
    return [np.array(r, dtype=np.float64) for r in rows]


def rsk_pq(perm):
    """Row insertion of ``perm`` (values 1..n); returns (P rows, Q rows)."""
    p_rows = []
    q_rows = []
    for step, x in enumerate(np.asarray(perm, dtype=np.int64).tolist(), start=1):
        r = 0
        while True:
            if r == len(p_rows):
                p_rows.append([x])
                q_rows.append([step])
                break
            row = p_rows[r]
            k = bisect_right(row, x)
            if k == len(row):
                row.append(x)
                q_rows[r].append(step)
                break
            row[k], x = x, row[k]
            r += 1
    return p_rows, q_rows


def _reverse_bump(p_rows, r):
    x = p_rows[r].pop()
    for s in range(r - 1, -1, -1):
        row = p_rows[s]
        k = bisect_left(row, x) - 1
        row[k], x = x, row[k]
    return x


def inverse_rsk_words(p_word, q_word):
    """Invert RSK for tableaux given as row words (row index of each entry).

    ``p_word[v-1]`` is the row holding value v in P, ``q_word[i-1]`` the row
    holding arrival i in Q.  Rows are 0-based.
    """
    p_word = np.asarray(p_word, dtype=np.int64).tolist()
    q_word = np.asarray(q_word, dtype=np.int64).tolist()
    n = len(p_word)
    p_rows = [[] for _ in range(max(p_word, default=-1) + 1)]
    for v, r in enumerate(p_word, start=1):
        p_rows[r].append(v)
    perm = [0] * n
    for i in range(n - 1, -1, -1):
        perm[i] = _reverse_bump(p_rows, q_word[i])
    return np.array(perm, dtype=np.int64)


def _hook_histogram_sum(parts):
    # sum of ln(hook) accumulated in ascending hook order, so that shapes with
    # equal hook multisets (e.g. conjugates) give bit-identical results
    m = len(parts)
    if m == 0:
        return 0.0
    conj = [0] * parts[0]
    for p in parts:
        for j in range(p):
            conj[j] += 1
    hist = [0] * (parts[0] + m)
    for i, p in enumerate(parts):
        for j in range(p):
            hist[p - j + conj[j] - i - 1] += 1
    total = 0.0
    for k in range(2, len(hist)):
        if hist[k]:
            total += hist[k] * log(k)
    return total


def hook_log_sum(shape):
    return _hook_histogram_sum(np.asarray(shape, dtype=np.int64).tolist())


def checkerboard_chain(perm, a, pos_i, pos_j, log_u, stride):
    """Metropolis transposition chain for log P(pi) = sum_i a[i, pi(i)].

    ``perm`` holds 0-based images and is updated in place.  Proposal k swaps
    positions pos_i[k], pos_j[k] and is accepted iff log_u[k] < log ratio.
    The state is recorded after every ``stride`` proposals.
    """
    n = len(perm)
    m = len(pos_i) // stride
    out = np.empty((m, n), dtype=np.int64)
    state = perm.tolist()
    arows = np.asarray(a, dtype=np.float64).tolist()
    accepted = 0
    row = 0
    for k in range(len(pos_i)):
        i = int(pos_i[k])
        j = int(pos_j[k])
        if i != j:
            pi, pj = state[i], state[j]
            delta = arows[i][pj] + arows[j][pi] - arows[i][pi] - arows[j][pj]
            if log_u[k] < delta:
                state[i], state[j] = pj, pi
                accepted += 1
        if (k + 1) % stride == 0:
            out[row] = state
            row += 1
    perm[:] = state
    return out, accepted


def exp_family_chain(perm, t, pos_i, pos_j, log_u, stride):
    """Metropolis transposition chain for P(pi) proportional to exp(t * LP).

    LP = 2H - ln n!, so the log ratio is 2t(H' - H); ``perm`` is 0-based.
    """
    n = len(perm)
    m = len(pos_i) // stride
    out = np.empty((m, n), dtype=np.int64)
    state = perm.tolist()
    h = hook_log_sum(shape_of(state))
    accepted = 0
    row = 0
    for k in range(len(pos_i)):
        i = int(pos_i[k])
        j = int(pos_j[k])
        if i != j:
            state[i], state[j] = state[j], state[i]
            h_new = hook_log_sum(shape_of(state))
            if log_u[k] < 2.0 * t * (h_new - h):
                h = h_new
                accepted += 1
            else:
                state[i], state[j] = state[j], state[i]
        if (k + 1) % stride == 0:
            out[row] = state
            row += 1
    perm[:] = state
    return out, accepted


def syt_pair_prefix_counts(words):
    """Prefix-transition counts over all permutations with a given RSK shape.

    ``words`` is an (f, n) array of row words of every SYT of one shape.  For
    each (P, Q) pair the permutation is rebuilt by reverse bumping and, for
    every prefix set G (bitmask) and next value j, counts[G, j] is bumped.
    """
    words = np.asarray(words, dtype=np.int64)
    f, n = words.shape
    counts = np.zeros((1 << n, n), dtype=np.int64)
    lists = words.tolist()
    for p_word in lists:
        for q_word in lists:
            perm = inverse_rsk_words(p_word, q_word).tolist()
            g = 0
            for v in perm:
                counts[g, v - 1] += 1
                g |= 1 << (v - 1)
    return counts


def _move_deltas(parts):
    m = len(parts)
    conj = [0] * parts[0]
    for p in parts:
        for j in range(p):
            conj[j] += 1

    def hook(i, j):
        return parts[i] - j + conj[j] - i - 1

    removes = []
    for i in range(m):
        if i == m - 1 or parts[i] > parts[i + 1]:
            c = parts[i] - 1
            d = 0.0
            for j in range(c):
                h = hook(i, j)
                d += log(h - 1) - log(h)
            for r in range(i):
                h = hook(r, c)
                d += log(h - 1) - log(h)
            removes.append((i, d))
    adds = []
    for i in range(m + 1):
        if i == 0 or (i < m and parts[i - 1] > parts[i]) or i == m:
            c = parts[i] if i < m else 0
            d = 0.0
            for j in range(c):
                h = hook(i, j)
                d += log(h + 1) - log(h)
            for r in range(i):
                h = hook(r, c)
                d += log(h + 1) - log(h)
            adds.append((i, d))
    return removes, adds, hook


def best_corner_move(shape):
    """Best single-cell move (remove one corner, add one cell) for H.

    Returns (delta_h, remove_row, add_row) with 0-based rows; remove_row is
    -1 when no move is available.
    """
    parts = np.asarray(shape, dtype=np.int64).tolist()
    m = len(parts)
    removes, adds, hook = _move_deltas(parts)
    best = (np.inf, -1, -1)
    for a, dr in removes:
        after = parts[:]
        after[a] -= 1
        for b, da in adds:
            if b == a:
                continue
            cur = after[b] if b < m else 0
            if b > 0 and after[b - 1] <= cur:
                continue
            if b == m and after[m - 1] == 0:
                continue
            d = dr + da
            # the one cell touched by both halves keeps its hook
            if a < b:
                cb = parts[b] if b < m else 0
                if cb < parts[a] - 1:
                    h = hook(a, cb)
                    d -= log(h - 1) + log(h + 1) - 2.0 * log(h)
            elif b < a:
                ca = parts[a] - 1
                if ca < parts[b]:
                    h = hook(b, ca)
                    d -= log(h - 1) + log(h + 1) - 2.0 * log(h)
            if d < best[0]:
                best = (d, a, b)
    return best


def _beta_scan(n, leaf):
    # partitions of n as strictly increasing beta numbers l_0 < ... < l_{m-1},
    # l_i >= 1, sum = n + m(m-1)/2; ln f - ln n! = sum_{i<j} ln(l_j - l_i) - sum ln l_i!
    top = 2 * n + 2
    lnd = [0.0] + [log(i) for i in range(1, top + 1)]
    lnfact = [0.0]
    acc = 0.0
    for i in range(1, top + 1):
        acc += log(i)
        lnfact.append(acc)
    lnfact_n = lnfact[n]

    def dfs(m, chosen, rem, prev, s):
        j = m - len(chosen) - 1
        if j < 0:
            return
        hi = rem if j == 0 else (rem - j * (j + 1) // 2) // (j + 1)
        for x in range(prev + 1, hi + 1):
            if j == 0 and x != rem:
                continue
            c = s - lnfact[x] + sum(lnd[x - b] for b in chosen)
            chosen.append(x)
            if j == 0:
                lp = -lnfact_n - 2.0 * c
                parts = tuple(chosen[m - 1 - i] - (m - 1 - i) for i in range(m))
                leaf(lp, parts)
            else:
                dfs(m, chosen, rem - x, x, c)
            chosen.pop()

    for m in range(1, n + 1):
        dfs(m, [], n + m * (m - 1) // 2, 0, 0.0)


def plancherel_scan(n, lp_lo=0.0, lp_hi=1.0, nbins=0):
    acc = {"count": 0, "s0": 0.0, "s1": 0.0, "s2": 0.0}
    hist = np.zeros(max(nbins, 0))
    width = (lp_hi - lp_lo) / nbins if nbins > 0 else 1.0

    def leaf(lp, parts):
        p = np.exp(-lp)
        acc["count"] += 1
        acc["s0"] += p
        acc["s1"] += p * lp
        acc["s2"] += p * lp * lp
        if nbins > 0:
            b = min(max(int((lp - lp_lo) / width), 0), nbins - 1)
            hist[b] += p

    _beta_scan(n, leaf)
    return acc["count"], acc["s0"], acc["s1"], acc["s2"], hist


def plancherel_collect(n, lo, hi):
    below = [0.0, 0]
    shapes = []
    lps = []

    def leaf(lp, parts):
        if lp < lo:
            below[0] += np.exp(-lp)
            below[1] += 1
        elif lp < hi:
            shapes.append(parts)
            lps.append(lp)

    _beta_scan(n, leaf)
    return below[0], below[1], shapes, np.array(lps, dtype=np.float64)
