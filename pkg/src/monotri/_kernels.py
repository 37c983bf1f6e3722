"""Array kernels over monotone triangles stored as ``(N, n+1)`` uint16 row masks.

Each kernel has a numba implementation and a pure-numpy one.  The numba path
is used when numba imports and ``MONOTRI_NO_NUMBA`` is unset or "0"; both
paths are always importable so tests and benchmarks can compare them.
"""
from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from monotri.core import asm_count, leq_lace

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("MONOTRI_NO_NUMBA", "0") in ("", "0")


ROW_DTYPE = np.uint16


# ------------------------------------------------------------ lookup tables

@lru_cache(maxsize=None)
def successor_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR table: for each mask, the (k+1)-subsets interlacing it, ascending."""
    size = 1 << n
    by_card: list[list[int]] = [[] for _ in range(n + 1)]
    for mask in range(size):
        by_card[mask.bit_count()].append(mask)
    offsets = np.zeros(size + 1, dtype=np.int64)
    targets: list[int] = []
    lists = [[] for _ in range(size)]
    for mask in range(size):
        k = mask.bit_count()
        if k < n:
            lists[mask] = [b for b in by_card[k + 1] if leq_lace(mask, b)]
    for mask in range(size):
        offsets[mask + 1] = offsets[mask] + len(lists[mask])
        targets.extend(lists[mask])
    return offsets, np.asarray(targets, dtype=np.int64)


@lru_cache(maxsize=None)
def element_table(n: int) -> np.ndarray:
    """``table[mask, p]`` is the (p+1)-th smallest element, 0-padded."""
    size = 1 << n
    table = np.zeros((size, max(n, 1)), dtype=np.int64)
    for mask in range(size):
        p = 0
        for i in range(n):
            if mask >> i & 1:
                table[mask, p] = i + 1
                p += 1
    return table


def pack_keys(rows: np.ndarray, n: int) -> np.ndarray:
    """Pack interior rows into one uint64 per triangle, order-preserving."""
    keys = np.zeros(rows.shape[0], dtype=np.uint64)
    for m in range(1, n):
        keys = (keys << np.uint64(n)) | rows[:, m].astype(np.uint64)
    return keys


# ------------------------------------------------------------- enumeration

@njit(cache=True)
def _enumerate_nb(n, offsets, targets, total):
    out = np.empty((total, n + 1), dtype=np.uint16)
    row = np.zeros(n + 1, dtype=np.int64)
    pos = np.zeros(n + 1, dtype=np.int64)
    end = np.zeros(n + 1, dtype=np.int64)
    count = 0
    if n == 0:
        out[0, 0] = 0
        return out
    pos[1] = offsets[0]
    end[1] = offsets[1]
    m = 1
    while m >= 1:
        if pos[m] < end[m]:
            row[m] = targets[pos[m]]
            pos[m] += 1
            if m == n:
                for c in range(n + 1):
                    out[count, c] = row[c]
                count += 1
            else:
                m += 1
                pos[m] = offsets[row[m - 1]]
                end[m] = offsets[row[m - 1] + 1]
        else:
            m -= 1
    return out


def _expand_np(partial: np.ndarray, offsets: np.ndarray, targets: np.ndarray) -> np.ndarray:
    last = partial[:, -1].astype(np.int64)
    starts = offsets[last]
    counts = offsets[last + 1] - starts
    total = int(counts.sum())
    rep = np.repeat(partial, counts, axis=0)
    first = np.repeat(np.cumsum(counts) - counts, counts)
    idx = np.repeat(starts, counts) + (np.arange(total) - first)
    nxt = targets[idx].astype(ROW_DTYPE)
    return np.concatenate([rep, nxt[:, None]], axis=1)


def _enumerate_np(n: int, offsets, targets) -> np.ndarray:
    partial = np.zeros((1, 1), dtype=ROW_DTYPE)
    for _ in range(n):
        partial = _expand_np(partial, offsets, targets)
    return partial


def enumerate_rows(n: int, use_numba: bool | None = None) -> np.ndarray:
    """All of MT_n as an ``(|MT_n|, n+1)`` array in canonical order."""
    if n > 15:
        raise ValueError("array kernels support n <= 15")
    offsets, targets = successor_table(n)
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        return _enumerate_nb(n, offsets, targets, asm_count(n))
    return _enumerate_np(n, offsets, targets)


# ------------------------------------------------------------ h_min images

@njit(cache=True)
def _hmin_mask(prev, nxt):
    # h_p = max(i_{p-1}, j_p) with i_0 = 0; walks both sets in increasing order.
    out = 0
    iprev = 0
    a = prev
    b = nxt
    while b:
        j = 0
        while not (b >> j) & 1:
            j += 1
        b &= b - 1
        h = j + 1
        if iprev > h:
            h = iprev
        out |= 1 << (h - 1)
        if a:
            i = 0
            while not (a >> i) & 1:
                i += 1
            a &= a - 1
            iprev = i + 1
        else:
            # prev exhausted: k+1 entries emitted
            break
    return out


@njit(cache=True)
def _pi_images_nb(rows, n):
    total = rows.shape[0]
    out = np.empty((total, max(n - 1, 0)), dtype=np.uint16)
    for t in range(total):
        for i in range(1, n):
            out[t, i - 1] = _hmin_mask(np.int64(rows[t, i - 1]), np.int64(rows[t, i + 1]))
    return out


def _pi_images_np(rows: np.ndarray, n: int) -> np.ndarray:
    table = element_table(n)
    out = np.empty((rows.shape[0], max(n - 1, 0)), dtype=ROW_DTYPE)
    for i in range(1, n):
        prev = table[rows[:, i - 1].astype(np.int64), : i - 1]
        nxt = table[rows[:, i + 1].astype(np.int64), :i]
        shifted = np.concatenate([np.zeros((rows.shape[0], 1), np.int64), prev], axis=1)
        h = np.maximum(shifted, nxt)
        out[:, i - 1] = np.sum(np.left_shift(1, h - 1), axis=1).astype(ROW_DTYPE)
    return out


def pi_images(rows: np.ndarray, n: int, use_numba: bool | None = None) -> np.ndarray:
    """Column ``i-1`` holds row ``i`` of ``T x pi_i`` for every triangle."""
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        return _pi_images_nb(rows, n)
    return _pi_images_np(rows, n)


def descent_masks(rows: np.ndarray, n: int, use_numba: bool | None = None) -> np.ndarray:
    """Bit ``k-1`` is set iff ``k`` is a descent of the triangle."""
    images = pi_images(rows, n, use_numba)
    masks = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(1, n):
        masks |= (images[:, i - 1] != rows[:, i]).astype(np.int64) << (i - 1)
    return masks


# ------------------------------------------------- streaming descent counts

@njit(cache=True)
def _descent_histogram_nb(n, offsets, targets):
    hist = np.zeros(1 << max(n - 1, 0), dtype=np.int64)
    if n == 0:
        hist[0] = 1
        return hist
    row = np.zeros(n + 1, dtype=np.int64)
    pos = np.zeros(n + 1, dtype=np.int64)
    end = np.zeros(n + 1, dtype=np.int64)
    des = np.zeros(n + 1, dtype=np.int64)
    pos[1] = offsets[0]
    end[1] = offsets[1]
    m = 1
    while m >= 1:
        if pos[m] < end[m]:
            row[m] = targets[pos[m]]
            pos[m] += 1
            d = des[m - 1]
            # row m fixes whether m-1 is a descent
            if m >= 2 and _hmin_mask(row[m - 2], row[m]) != row[m - 1]:
                d |= 1 << (m - 2)
            des[m] = d
            if m == n:
                hist[d] += 1
            else:
                m += 1
                pos[m] = offsets[row[m - 1]]
                end[m] = offsets[row[m - 1] + 1]
        else:
            m -= 1
    return hist


def _descent_histogram_np(n: int, offsets, targets, chunk: int = 20000) -> np.ndarray:
    hist = np.zeros(1 << max(n - 1, 0), dtype=np.int64)
    split = max(n // 2, 0)
    partial = np.zeros((1, 1), dtype=ROW_DTYPE)
    for _ in range(split):
        partial = _expand_np(partial, offsets, targets)
    for start in range(0, partial.shape[0], chunk):
        block = partial[start:start + chunk]
        for _ in range(n - split):
            block = _expand_np(block, offsets, targets)
        hist += np.bincount(descent_masks(block, n, use_numba=False), minlength=hist.size)
    return hist


def descent_histogram(n: int, use_numba: bool | None = None) -> np.ndarray:
    """Counts of triangles per descent mask, without materializing MT_n."""
    offsets, targets = successor_table(n)
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        return _descent_histogram_nb(n, offsets, targets)
    return _descent_histogram_np(n, offsets, targets)


# --------------------------------------------------------- shelling sweep

@njit(cache=True)
def _shelling_nb(rows):
    total, width = rows.shape
    for j in range(1, total):
        reach = 0
        for k in range(j):
            diff = 0
            cnt = 0
            for c in range(width):
                if rows[k, c] != rows[j, c]:
                    diff = c
                    cnt += 1
            if cnt == 1:
                reach |= 1 << diff
        for i in range(j):
            ok = False
            for c in range(width):
                if rows[i, c] != rows[j, c] and (reach >> c) & 1:
                    ok = True
                    break
            if not ok:
                return i, j
    return -1, -1


def _shelling_np(rows: np.ndarray) -> tuple[int, int]:
    weights = (1 << np.arange(rows.shape[1], dtype=np.int64))
    for j in range(1, rows.shape[0]):
        diff = rows[:j] != rows[j]
        single = diff.sum(axis=1) == 1
        reach = int(np.bitwise_or.reduce(diff[single] @ weights)) if single.any() else 0
        ok = (diff @ weights) & reach
        bad = np.flatnonzero(ok == 0)
        if bad.size:
            return int(bad[0]), j
    return -1, -1


def shelling_failure(rows: np.ndarray, use_numba: bool | None = None) -> tuple[int, int]:
    """First ``(i, j)`` with no codimension-one witness, or ``(-1, -1)``."""
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        i, j = _shelling_nb(np.ascontiguousarray(rows))
        return int(i), int(j)
    return _shelling_np(rows)
