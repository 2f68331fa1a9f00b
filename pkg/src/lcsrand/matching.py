"""Exact longest-common-substring statistics.

M_n(x, y) is the length of the longest word occurring as a substring of
both length-n prefixes.  The fast path builds a suffix automaton of one
prefix and streams the other through it (O(n * sigma) time and memory);
the oracle path scans all diagonals of the comparison matrix (O(n^2))
and shares no code with the automaton.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import find_first, lcs_stream
from .errors import DegenerateLadder, EmptyInput, LengthMismatch, TooLarge

_BRUTE_MAX = 4096
# dense transition-table budget: states * sigma * 4 bytes
_TABLE_BYTES_MAX = 1 << 31


@dataclass(frozen=True)
class MatchResult:
    """Longest match ``length`` with the leftmost witness occurrence.

    ``x[x_pos : x_pos + length] == y[y_pos : y_pos + length]``; among all
    maximal matches, ``x_pos`` is minimal, and ``y_pos`` is the first
    occurrence of that witness word in ``y``.
    """

    length: int
    x_pos: int
    y_pos: int


@dataclass(frozen=True)
class MatchCurve:
    """M_n evaluated along a ladder of prefix lengths."""

    ladder: tuple
    values: tuple


def _coerce(seq, name):
    a = np.asarray(seq)
    if a.ndim != 1:
        raise LengthMismatch(f"{name} must be 1-dimensional")
    if a.size == 0:
        raise EmptyInput(f"{name} is empty")
    if not np.issubdtype(a.dtype, np.integer):
        raise LengthMismatch(f"{name} must contain integer symbols")
    if a.min() < 0:
        raise LengthMismatch(f"{name} contains negative symbols")
    return np.ascontiguousarray(a, dtype=np.int32)


def _lcs_dict(y, x):
    """Pure-python suffix automaton with dict transitions.

    Fallback for alphabets too large for a dense table; same streaming
    logic as the kernel, used only when the dense path would not fit.
    """
    nxt = [{}]
    link = [-1]
    length = [0]
    last = 0
    for c in y:
        c = int(c)
        cur = len(nxt)
        nxt.append({})
        length.append(length[last] + 1)
        link.append(-1)
        p = last
        while p != -1 and c not in nxt[p]:
            nxt[p][c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = nxt[p][c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(nxt)
                nxt.append(dict(nxt[q]))
                length.append(length[p] + 1)
                link.append(link[q])
                while p != -1 and nxt[p].get(c) == q:
                    nxt[p][c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    best = 0
    best_end = -1
    v = 0
    cur_len = 0
    for i, c in enumerate(x):
        c = int(c)
        while v != 0 and c not in nxt[v]:
            v = link[v]
            cur_len = length[v]
        if c in nxt[v]:
            v = nxt[v][c]
            cur_len += 1
        if cur_len > best:
            best = cur_len
            best_end = i
    return best, best_end


def lcs_exact(x, y):
    """Exact M_n for equal-length sequences, with witness positions.

    The witness is canonical: the leftmost maximal match in ``x``, and
    for that word, its first occurrence in ``y``.
    """
    xa = _coerce(x, "x")
    ya = _coerce(y, "y")
    if xa.size != ya.size:
        raise LengthMismatch(f"|x| = {xa.size} but |y| = {ya.size}")
    sigma = int(max(xa.max(), ya.max())) + 1
    if (2 * ya.size + 5) * sigma * 4 <= _TABLE_BYTES_MAX:
        m, end = lcs_stream(ya, xa, sigma)
    else:
        m, end = _lcs_dict(ya, xa)
    if m == 0:
        return MatchResult(length=0, x_pos=0, y_pos=0)
    i = int(end) - int(m) + 1
    j = int(find_first(ya, xa[i : i + m]))
    return MatchResult(length=int(m), x_pos=i, y_pos=j)


def _longest_true_run(eq):
    padded = np.concatenate(([False], eq, [False]))
    d = np.diff(padded.astype(np.int8))
    starts = np.flatnonzero(d == 1)
    if starts.size == 0:
        return 0
    ends = np.flatnonzero(d == -1)
    return int((ends - starts).max())


def lcs_bruteforce(x, y):
    """Oracle M_n by exhaustive diagonal scan; lengths capped at 4096.

    Deliberately shares nothing with the automaton path (plain numpy,
    O(n^2)): the longest common substring is the longest run of
    equalities along some diagonal of the comparison matrix.  Diagonals
    are visited in order of decreasing overlap so the scan can stop as
    soon as no remaining diagonal could beat the best run found.
    """
    xa = _coerce(x, "x")
    ya = _coerce(y, "y")
    if xa.size != ya.size:
        raise LengthMismatch(f"|x| = {xa.size} but |y| = {ya.size}")
    n = int(xa.size)
    if n > _BRUTE_MAX:
        raise TooLarge(f"brute force capped at n = {_BRUTE_MAX}")
    best = 0
    for k in range(2 * n - 1):
        # interleave d = 0, +1, -1, +2, -2, ... (overlap descending)
        d = (k + 1) // 2 if k % 2 else -(k // 2)
        overlap = n - abs(d)
        if overlap <= best:
            break
        if d >= 0:
            eq = xa[d:] == ya[: n - d]
        else:
            eq = xa[: n + d] == ya[-d:]
        best = max(best, _longest_true_run(eq))
    return best


def match_curve(x, y, ladder):
    """M_n along ``ladder`` (strictly increasing prefix lengths)."""
    xa = _coerce(x, "x")
    ya = _coerce(y, "y")
    if xa.size != ya.size:
        raise LengthMismatch(f"|x| = {xa.size} but |y| = {ya.size}")
    rungs = [int(n) for n in ladder]
    if not rungs:
        raise DegenerateLadder("ladder is empty")
    if any(b <= a for a, b in zip(rungs, rungs[1:])):
        raise DegenerateLadder("ladder must be strictly increasing")
    if rungs[0] < 1 or rungs[-1] > xa.size:
        raise DegenerateLadder(
            f"ladder must stay within [1, {xa.size}]"
        )
    values = tuple(lcs_exact(xa[:n], ya[:n]).length for n in rungs)
    return MatchCurve(ladder=tuple(rungs), values=values)
