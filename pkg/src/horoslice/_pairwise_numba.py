"""Numba-jitted pairwise-distance kernels (default backend).

Same contract as _pairwise_numpy; the pair loop is compiled and parallel
over rows, with a two-pass count/fill scheme so edge order stays row-major
and deterministic for any thread count.
"""

from __future__ import annotations

import math

import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _pair_dist_sq(coords, kinds, offs, widths, i, j):
    d2 = 0.0
    for f in range(kinds.shape[0]):
        off = offs[f]
        if kinds[f] == 0:
            for c in range(off, off + widths[f]):
                diff = coords[i, c] - coords[j, c]
                d2 += diff * diff
        else:
            dre = coords[i, off] - coords[j, off]
            dim = coords[i, off + 1] - coords[j, off + 1]
            u = (dre * dre + dim * dim) / (2.0 * coords[i, off + 1]
                                           * coords[j, off + 1])
            d = math.log1p(u + math.sqrt(u * (2.0 + u)))
            d2 += d * d
    return d2


@numba.njit(cache=True, parallel=True)
def _count_in_radius(coords, kinds, offs, widths, eps2):
    n = coords.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    for i in numba.prange(n):
        c = 0
        for j in range(i + 1, n):
            if _pair_dist_sq(coords, kinds, offs, widths, i, j) <= eps2:
                c += 1
        counts[i] = c
    return counts


@numba.njit(cache=True, parallel=True)
def _fill_in_radius(coords, kinds, offs, widths, eps2, starts, ii, jj, ww):
    n = coords.shape[0]
    for i in numba.prange(n):
        pos = starts[i]
        for j in range(i + 1, n):
            d2 = _pair_dist_sq(coords, kinds, offs, widths, i, j)
            if d2 <= eps2:
                ii[pos] = i
                jj[pos] = j
                ww[pos] = math.sqrt(d2)
                pos += 1


def radius_edges(coords: np.ndarray, kinds: np.ndarray, offs: np.ndarray,
                 widths: np.ndarray, eps: float):
    """All pairs i < j with product distance <= eps, in row-major order."""
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    eps2 = float(eps) * float(eps)
    counts = _count_in_radius(coords, kinds, offs, widths, eps2)
    starts = np.zeros(coords.shape[0], dtype=np.int64)
    np.cumsum(counts[:-1], out=starts[1:])
    total = int(starts[-1] + counts[-1]) if coords.shape[0] else 0
    ii = np.empty(total, dtype=np.int64)
    jj = np.empty(total, dtype=np.int64)
    ww = np.empty(total, dtype=np.float64)
    _fill_in_radius(coords, kinds, offs, widths, eps2, starts, ii, jj, ww)
    return ii, jj, ww


@numba.njit(cache=True, parallel=True)
def _pair_dists_jit(coords, kinds, offs, widths, ii, jj):
    out = np.empty(ii.shape[0], dtype=np.float64)
    for k in numba.prange(ii.shape[0]):
        out[k] = math.sqrt(_pair_dist_sq(coords, kinds, offs, widths,
                                         ii[k], jj[k]))
    return out


def pair_dists(coords: np.ndarray, kinds: np.ndarray, offs: np.ndarray,
               widths: np.ndarray, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    return _pair_dists_jit(coords, kinds, offs, widths,
                           np.asarray(ii, np.int64), np.asarray(jj, np.int64))
