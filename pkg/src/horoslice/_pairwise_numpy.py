"""Pure-numpy pairwise-distance kernels (fallback backend).

Coordinates are packed row-per-node; the column layout is a sequence of
factor blocks, each either a Euclidean block (kind 0, any width; geodesic
line parameters are width-1 Euclidean blocks) or a hyperbolic-plane block
(kind 1, columns re/im).  Works in row blocks to bound memory.
"""

from __future__ import annotations

import numpy as np

BLOCK = 256


def _block_dist_sq(coords: np.ndarray, kinds, offs, widths,
                   lo: int, hi: int) -> np.ndarray:
    """Squared product distances between rows [lo:hi] and all rows."""
    n = coords.shape[0]
    d2 = np.zeros((hi - lo, n))
    for kind, off, width in zip(kinds, offs, widths):
        if kind == 0:
            for c in range(off, off + width):
                diff = coords[lo:hi, c, None] - coords[None, :, c]
                d2 += diff * diff
        else:
            dre = coords[lo:hi, off, None] - coords[None, :, off]
            dim = coords[lo:hi, off + 1, None] - coords[None, :, off + 1]
            u = (dre * dre + dim * dim) / (2.0 * coords[lo:hi, off + 1, None]
                                           * coords[None, :, off + 1])
            d = np.log1p(u + np.sqrt(u * (2.0 + u)))
            d2 += d * d
    return d2


def radius_edges(coords: np.ndarray, kinds: np.ndarray, offs: np.ndarray,
                 widths: np.ndarray, eps: float):
    """All pairs i < j with product distance <= eps, in row-major order."""
    n = coords.shape[0]
    eps2 = eps * eps
    out_i, out_j, out_w = [], [], []
    for lo in range(0, n, BLOCK):
        hi = min(lo + BLOCK, n)
        d2 = _block_dist_sq(coords, kinds, offs, widths, lo, hi)
        cols = np.arange(n)[None, :]
        rows = np.arange(lo, hi)[:, None]
        mask = (cols > rows) & (d2 <= eps2)
        ii, jj = np.nonzero(mask)
        out_i.append(ii + lo)
        out_j.append(jj)
        out_w.append(np.sqrt(d2[ii, jj]))
    return (np.concatenate(out_i), np.concatenate(out_j),
            np.concatenate(out_w))


def pair_dists(coords: np.ndarray, kinds: np.ndarray, offs: np.ndarray,
               widths: np.ndarray, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    """Product distances for an explicit list of index pairs."""
    d2 = np.zeros(len(ii), dtype=float)
    a = coords[ii]
    b = coords[jj]
    for kind, off, width in zip(kinds, offs, widths):
        if kind == 0:
            diff = a[:, off:off + width] - b[:, off:off + width]
            d2 += np.sum(diff * diff, axis=1)
        else:
            dre = a[:, off] - b[:, off]
            dim = a[:, off + 1] - b[:, off + 1]
            u = (dre * dre + dim * dim) / (2.0 * a[:, off + 1] * b[:, off + 1])
            d = np.log1p(u + np.sqrt(u * (2.0 + u)))
            d2 += d * d
    return np.sqrt(d2)
