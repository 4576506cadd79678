"""Compiled inner loops for distance certification.

Columns are packed into uint64 words: ``syn[j]`` is the syndrome of a
single-qubit error on qubit ``j`` and ``lg[j]`` its pairing with the
opposite logical basis.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _cmp(a, b):
    for i in range(a.shape[0]):
        if a[i] < b[i]:
            return -1
        if a[i] > b[i]:
            return 1
    return 0


@njit(cache=True)
def _is_zero(a):
    for i in range(a.shape[0]):
        if a[i] != 0:
            return False
    return True


@njit(cache=True)
def _differs(a, b):
    for i in range(a.shape[0]):
        if a[i] != b[i]:
            return True
    return False


@njit(cache=True)
def _lower_bound(srt_syn, srt_idx, key, min_idx):
    """First position p with (srt_syn[p], srt_idx[p]) >= (key, min_idx)."""
    lo = 0
    hi = srt_syn.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        c = _cmp(srt_syn[mid], key)
        if c < 0 or (c == 0 and srt_idx[mid] < min_idx):
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def search_weight(syn, lg, srt_syn, srt_idx, w, fix_first, out):
    """Look for a weight-``w`` support with zero syndrome and nonzero pairing.

    Supports are index sets i_0 < ... < i_{w-1}; with ``fix_first`` set,
    i_0 is pinned to column 0.  The last index comes from a binary search
    of the sorted syndromes, so the work is one lookup per (w-1)-prefix.
    Returns (found, prefixes visited); the lexicographically smallest
    support is written to ``out``.
    """
    n = syn.shape[0]
    ws = syn.shape[1]
    wl = lg.shape[1]
    visited = 0
    if w == 1:
        last = 1 if fix_first else n
        for j in range(last):
            if _is_zero(syn[j]) and not _is_zero(lg[j]):
                out[0] = j
                return True, n
        return False, n
    acc_s = np.zeros((w, ws), dtype=np.uint64)
    acc_l = np.zeros((w, wl), dtype=np.uint64)
    idx = np.zeros(w, dtype=np.int64)
    d = 0
    idx[0] = 0
    while True:
        # advance position d to a valid index or backtrack
        limit = n - (w - 1 - d)  # leave room for the remaining indices
        if idx[d] >= limit or (fix_first and d == 0 and idx[0] > 0):
            if d == 0:
                break
            d -= 1
            idx[d] += 1
            continue
        j = idx[d]
        if d == 0:
            for t in range(ws):
                acc_s[0, t] = syn[j, t]
            for t in range(wl):
                acc_l[0, t] = lg[j, t]
        else:
            for t in range(ws):
                acc_s[d, t] = acc_s[d - 1, t] ^ syn[j, t]
            for t in range(wl):
                acc_l[d, t] = acc_l[d - 1, t] ^ lg[j, t]
        if d == w - 2:
            visited += 1
            p = _lower_bound(srt_syn, srt_idx, acc_s[d], j + 1)
            while p < n and _cmp(srt_syn[p], acc_s[d]) == 0:
                c = srt_idx[p]
                if _differs(lg[c], acc_l[d]):
                    for t in range(w - 1):
                        out[t] = idx[t]
                    out[w - 1] = c
                    return True, visited
                p += 1
            idx[d] += 1
        else:
            d += 1
            idx[d] = idx[d - 1] + 1
    return False, visited


@njit(cache=True)
def coset_min(basis_bits, basis_sig, out_coeffs):
    """Minimum weight over all kernel vectors with a nonzero logical signature.

    Walks the 2^dim combinations in Gray-code order; writes the combination
    mask of the first minimiser to ``out_coeffs[0]``.
    """
    dim = basis_bits.shape[0]
    nw = basis_bits.shape[1]
    nl = basis_sig.shape[1]
    acc = np.zeros(nw, dtype=np.uint64)
    sig = np.zeros(nl, dtype=np.uint64)
    best = -1
    mask = np.int64(0)
    total = np.int64(1) << dim
    for i in range(1, total):
        flip = 0
        v = i
        while (v & 1) == 0:
            v >>= 1
            flip += 1
        mask ^= np.int64(1) << flip
        for t in range(nw):
            acc[t] ^= basis_bits[flip, t]
        nz = False
        for t in range(nl):
            sig[t] ^= basis_sig[flip, t]
            if sig[t] != 0:
                nz = True
        if not nz:
            continue
        wt = 0
        for t in range(nw):
            wt += popcount64(acc[t])
        if best < 0 or wt < best:
            best = wt
            out_coeffs[0] = mask
    return best
