"""Compiled inner loops. Syndromes are uint64 bitmasks, one row per H column."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _is_zero(s):
    for w in range(s.shape[0]):
        if s[w] != 0:
            return False
    return True


@njit(cache=True, nogil=True)
def ordered_search(s0, cols, offsets, indices, limit_first, limit_total, want_pair):
    """Walk the pattern list until one (or two) zero syndromes appear.

    ``cols[j]`` is the H column of the j-th least reliable bit. Queries stop at
    ``limit_first`` while no codeword is known, and at ``limit_total`` once one
    is. Returns ``(first, second, queries)`` with -1 for "not found".
    """
    nw = s0.shape[0]
    s = np.empty(nw, dtype=np.uint64)
    first = -1
    second = -1
    limit = limit_first
    q = 0
    while q < limit:
        for w in range(nw):
            s[w] = s0[w]
        for t in range(offsets[q], offsets[q + 1]):
            j = indices[t]
            for w in range(nw):
                s[w] ^= cols[j, w]
        q += 1
        if _is_zero(s):
            if first < 0:
                first = q - 1
                if not want_pair:
                    break
                limit = limit_total
            else:
                second = q - 1
                break
    return first, second, q


@njit(cache=True, nogil=True)
def ordered_search_1w(s0, cols, offsets, indices, limit_first, limit_total, want_pair):
    """Single-word specialisation of ``ordered_search`` (n - k <= 64)."""
    first = -1
    second = -1
    limit = limit_first
    q = 0
    while q < limit:
        s = s0
        for t in range(offsets[q], offsets[q + 1]):
            s ^= cols[indices[t]]
        q += 1
        if s == 0:
            if first < 0:
                first = q - 1
                if not want_pair:
                    break
                limit = limit_total
            else:
                second = q - 1
                break
    return first, second, q


@njit(cache=True, nogil=True)
def hamming_order_search(s0, cols, max_hw, flips):
    """GRANDAB: all flip sets by ascending size, lexicographic within a size.

    On success the flip set is written to ``flips`` and its size returned;
    otherwise returns -1. The second value is the number of queries.
    """
    n = cols.shape[0]
    nw = s0.shape[0]
    s = np.empty(nw, dtype=np.uint64)
    idx = np.empty(max(max_hw, 1), dtype=np.int64)
    q = 0
    for h in range(0, min(max_hw, n) + 1):
        for i in range(h):
            idx[i] = i
        while True:
            for w in range(nw):
                s[w] = s0[w]
            for i in range(h):
                for w in range(nw):
                    s[w] ^= cols[idx[i], w]
            q += 1
            if _is_zero(s):
                for i in range(h):
                    flips[i] = idx[i]
                return h, q
            i = h - 1
            while i >= 0 and idx[i] == n - h + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, h):
                idx[j] = idx[j - 1] + 1
    return -1, q
