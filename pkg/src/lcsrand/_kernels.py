"""Numba kernels for the hot paths.

Everything here is deliberately loop-and-array code: the suffix
automaton uses a dense ``(states, sigma)`` transition table, which is
the layout that makes streaming a 2**20-symbol query take a fraction of
a second instead of minutes.  All kernels are pure functions of their
arguments, so results are bit-stable across runs and worker processes.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def lcs_stream(y, x, sigma):
    """Longest substring of ``x`` that occurs in ``y``.

    Builds the suffix automaton of ``y`` (online construction, dense
    transition table), then streams ``x`` through it keeping the length
    of the longest suffix of ``x[:i+1]`` that is a substring of ``y``.

    Returns ``(best_len, best_end)`` where ``best_end`` is the smallest
    end index in ``x`` achieving ``best_len`` (so the leftmost maximal
    match in ``x`` starts at ``best_end - best_len + 1``).
    """
    n = y.shape[0]
    cap = 2 * n + 5
    nxt = np.full((cap, sigma), -1, dtype=np.int32)
    link = np.empty(cap, dtype=np.int32)
    length = np.zeros(cap, dtype=np.int32)
    link[0] = -1
    size = 1
    last = 0
    for i in range(n):
        c = y[i]
        cur = size
        size += 1
        length[cur] = length[last] + 1
        link[cur] = -1
        p = last
        while p != -1 and nxt[p, c] == -1:
            nxt[p, c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = nxt[p, c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = size
                size += 1
                length[clone] = length[p] + 1
                link[clone] = link[q]
                for s in range(sigma):
                    nxt[clone, s] = nxt[q, s]
                while p != -1 and nxt[p, c] == q:
                    nxt[p, c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur

    best = 0
    best_end = -1
    v = 0
    cur_len = 0
    for i in range(x.shape[0]):
        c = x[i]
        while v != 0 and nxt[v, c] == -1:
            v = link[v]
            cur_len = length[v]
        if nxt[v, c] != -1:
            v = nxt[v, c]
            cur_len += 1
        if cur_len > best:
            best = cur_len
            best_end = i
    return best, best_end


@njit(cache=True)
def find_first(hay, needle):
    """First occurrence of ``needle`` in ``hay`` (KMP), or -1."""
    m = needle.shape[0]
    if m == 0:
        return 0
    fail = np.zeros(m, dtype=np.int32)
    k = 0
    for i in range(1, m):
        while k > 0 and needle[i] != needle[k]:
            k = fail[k - 1]
        if needle[i] == needle[k]:
            k += 1
        fail[i] = k
    k = 0
    for i in range(hay.shape[0]):
        while k > 0 and hay[i] != needle[k]:
            k = fail[k - 1]
        if hay[i] == needle[k]:
            k += 1
        if k == m:
            return i - m + 1
    return -1


@njit(cache=True)
def markov_paths(cum_init, cum_rows, u, out):
    """Fill ``out`` (R, L) with Markov chain paths.

    ``u`` is an (R, L) block of uniforms; column 0 is inverted through
    ``cum_init`` (the initial distribution's cumulative sums), later
    columns through the cumulative transition row of the previous state.
    """
    rows, length = out.shape
    s = cum_init.shape[0]
    for r in range(rows):
        a = np.searchsorted(cum_init, u[r, 0], side="right")
        if a >= s:
            a = s - 1
        out[r, 0] = a
        for t in range(1, length):
            a = np.searchsorted(cum_rows[out[r, t - 1]], u[r, t], side="right")
            if a >= s:
                a = s - 1
            out[r, t] = a
