"""Particle storage plus tent-function deposition and gather.

Deposition and gather share the same first-order tent weights, which is
what makes the discrete deposit/gather pair adjoint:

    sum_p w_p v_p . E(x_p)  ==  |h| sum_h E_h . j_h(x_p, v_p).

A ``TentStencil`` caches the flat node indices and corner weights for one
set of positions, so a deposit and a gather at the same points reuse them.
Accumulation runs over particles in index order (np.bincount), optionally
split into ``n_chunks`` contiguous blocks reduced in a fixed order, so
results are bit-reproducible for a given chunk count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .grid import Grid, VectorGrid


def shape_tent(z, h: float):
    """First-order tent weight max(0, 1 - |z|/h)."""
    if h <= 0:
        raise ValueError("spacing h must be positive")
    return np.maximum(0.0, 1.0 - np.abs(z) / h)


def wrap_coordinate(x, length: float):
    """Map positions into [0, length); idempotent, safe at the seam."""
    out = np.remainder(x, length)
    if np.ndim(out) == 0:
        return 0.0 if out >= length else float(out)
    # np.remainder can round up to exactly `length` for tiny negative inputs.
    seam = out >= length
    if seam.any():
        out[seam] = 0.0
    return out


@dataclass
class ParticleSet:
    """Structure-of-arrays particle state with one common weight."""

    x: np.ndarray
    y: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    w: float

    def __post_init__(self) -> None:
        n = self.x.size
        if n == 0:
            raise ValueError("particle set must not be empty")
        for name in ("y", "vx", "vy"):
            if getattr(self, name).size != n:
                raise ValueError("particle arrays must have equal length")

    @property
    def n(self) -> int:
        return self.x.size


class TentStencil(NamedTuple):
    """Flat indices (4, n) and tent weights (4, n) of the 2x2 node patches."""

    idx: np.ndarray
    weights: np.ndarray


def tent_stencil(grid: Grid, x, y) -> TentStencil:
    # Positions are expected wrapped (nonnegative), so truncation is floor.
    fx = np.asarray(x) / grid.dx
    fy = np.asarray(y) / grid.dy
    ix0 = fx.astype(np.intp)
    iy0 = fy.astype(np.intp)
    tx = fx - ix0
    ty = fy - iy0
    ix0 %= grid.nx
    iy0 %= grid.ny
    ix1 = ix0 + 1
    ix1[ix1 == grid.nx] = 0
    iy1 = iy0 + 1
    iy1[iy1 == grid.ny] = 0

    n = fx.size
    idx = np.empty((4, n), dtype=np.intp)
    idx[0] = ix0 * grid.ny + iy0
    idx[1] = ix1 * grid.ny + iy0
    idx[2] = ix0 * grid.ny + iy1
    idx[3] = ix1 * grid.ny + iy1
    weights = np.empty((4, n))
    wx0 = 1.0 - tx
    wy0 = 1.0 - ty
    weights[0] = wx0 * wy0
    weights[1] = tx * wy0
    weights[2] = wx0 * ty
    weights[3] = tx * ty
    return TentStencil(idx=idx, weights=weights)


def _accumulate(stencil: TentStencil, vals: np.ndarray, n_bins: int,
                n_chunks: int) -> np.ndarray:
    contrib = stencil.weights * vals
    if n_chunks <= 1:
        return np.bincount(stencil.idx.ravel(), weights=contrib.ravel(),
                           minlength=n_bins)
    total = np.zeros(n_bins)
    for idx, val in zip(np.array_split(stencil.idx, n_chunks, axis=1),
                        np.array_split(contrib, n_chunks, axis=1)):
        total += np.bincount(idx.ravel(), weights=val.ravel(), minlength=n_bins)
    return total


def deposit_charge(grid: Grid, x, y, w: float, n_chunks: int = 1,
                   stencil: TentStencil | None = None) -> np.ndarray:
    """rho_h = (1/|h|) sum_p w S(x_h - x_p); |h| sum_h rho_h = w N_p."""
    st = tent_stencil(grid, x, y) if stencil is None else stencil
    acc = _accumulate(st, np.broadcast_to(w, st.idx.shape[1:]), grid.nx * grid.ny,
                      n_chunks)
    return acc.reshape(grid.nx, grid.ny) / grid.cell_volume


def deposit_current(grid: Grid, x, y, vx, vy, w: float, n_chunks: int = 1,
                    stencil: TentStencil | None = None) -> VectorGrid:
    """j_h = (1/|h|) sum_p w v_p S(x_h - x_p) for the supplied (x, v) pair."""
    st = tent_stencil(grid, x, y) if stencil is None else stencil
    n_bins = grid.nx * grid.ny
    jx = _accumulate(st, w * np.asarray(vx), n_bins, n_chunks)
    jy = _accumulate(st, w * np.asarray(vy), n_bins, n_chunks)
    return VectorGrid(jx.reshape(grid.nx, grid.ny) / grid.cell_volume,
                      jy.reshape(grid.nx, grid.ny) / grid.cell_volume)


def gather_scalar(grid: Grid, f: np.ndarray, x=None, y=None,
                  stencil: TentStencil | None = None) -> np.ndarray:
    """Interpolate a nodal field to particles with the same tent weights."""
    if f.shape != grid.shape:
        raise ValueError(f"field shape {f.shape} does not match grid {grid.shape}")
    st = tent_stencil(grid, x, y) if stencil is None else stencil
    return np.einsum("cn,cn->n", f.ravel()[st.idx], st.weights)


def gather_vector(grid: Grid, field: VectorGrid, x=None, y=None,
                  stencil: TentStencil | None = None) -> tuple[np.ndarray, np.ndarray]:
    st = tent_stencil(grid, x, y) if stencil is None else stencil
    return (gather_scalar(grid, field.x, stencil=st),
            gather_scalar(grid, field.y, stencil=st))
