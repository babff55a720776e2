"""Vectorized numpy fallback for the contractivity-ratio grid scan.

Mirrors ``_gridscan.pyx`` operation for operation (same grid points, same
elementwise IEEE arithmetic, same first-maximum tie-breaking in row-major
order), so both lanes return bit-identical results.
"""

from __future__ import annotations

import math

import numpy as np

# rows are chunked so a block stays ~tens of MB even for 10^4-point grids
_BLOCK_CELLS = 4_000_000


def _mean_values(kind: int, param: float, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if kind == 0:
        return (X + Y) * 0.5
    if kind == 1:
        return np.sqrt(X * Y)
    if kind == 2:
        return np.minimum(X, Y) + (X - Y) * (X - Y) * 0.5
    if kind == 3:
        return np.broadcast_to(X, np.broadcast_shapes(X.shape, Y.shape))
    if kind == 4:
        return np.broadcast_to(Y, np.broadcast_shapes(X.shape, Y.shape))
    if kind == 5:
        return np.full(np.broadcast_shapes(X.shape, Y.shape), param)
    raise ValueError(f"unknown mean code {kind}")


def grid_scan(kind: int, param: float, a: float, b: float, step: float,
              excluded: float):
    """Return (max_ratio, argmax_x, argmax_y, evaluated_pairs)."""
    m = int(math.floor((b - a) / step + 1e-9)) + 1
    xs = a + np.arange(m, dtype=np.float64) * step
    best = -1.0
    bi = bj = -1
    count = 0
    rows = max(1, _BLOCK_CELLS // m)
    for lo in range(0, m, rows):
        X = xs[lo : lo + rows, None]
        Y = xs[None, :]
        D = np.abs(X - Y)
        P = _mean_values(kind, param, X, Y)
        R = np.maximum(np.abs(X - P), np.abs(Y - P))
        live = D > excluded
        count += int(live.sum())
        ratios = np.where(live, R / np.where(live, D, 1.0), -np.inf)
        k = int(np.argmax(ratios))
        val = float(ratios.flat[k])
        if val > best:
            best = val
            bi = lo + k // m
            bj = k % m
    if bi < 0:
        return -1.0, 0.0, 0.0, 0
    return best, float(xs[bi]), float(xs[bj]), count
