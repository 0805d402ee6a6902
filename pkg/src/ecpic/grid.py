"""Uniform periodic 2D grid and FFT-based differential operators.

Fields live on the nodes x_i = i*dx, y_j = j*dy and are stored as real
arrays of shape (nx, ny) with x along axis 0.  First-derivative operators
zero the Nyquist mode, which makes the 1D differentiation matrix exactly
antisymmetric; the Laplacian keeps the full -|k|^2 symbol so that
``inverse_laplacian`` is its exact inverse on zero-mean fields.  The two
conventions agree on any field whose Nyquist modes vanish, which the
binomial filter guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np


class VectorGrid(NamedTuple):
    """Two-component nodal vector field (x and y components)."""

    x: np.ndarray
    y: np.ndarray


def _mode_numbers(n: int) -> np.ndarray:
    # Integer mode numbers in FFT order; Nyquist (index n//2, even n) is -n/2.
    return np.fft.fftfreq(n, d=1.0 / n)


def _validate_cells(n: int, name: str) -> None:
    # A single cell makes the axis spectrally inert (k = 0 only); otherwise
    # require an even count >= 4 so a Nyquist mode exists for the filter.
    if n == 1:
        return
    if n < 4 or n % 2 != 0:
        raise ValueError(f"{name} must be 1 or an even integer >= 4, got {n}")


@dataclass(frozen=True)
class Grid:
    """Periodic box [0, lx) x [0, ly) with nx * ny cells."""

    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self) -> None:
        _validate_cells(self.nx, "nx")
        _validate_cells(self.ny, "ny")
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError("box lengths must be positive")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @cached_property
    def x_nodes(self) -> np.ndarray:
        return np.arange(self.nx) * self.dx

    @cached_property
    def y_nodes(self) -> np.ndarray:
        return np.arange(self.ny) * self.dy

    @cached_property
    def kx(self) -> np.ndarray:
        """Signed wavenumbers 2*pi*mode/lx, Nyquist at index nx//2."""
        return _mode_numbers(self.nx) * (2.0 * np.pi / self.lx)

    @cached_property
    def ky(self) -> np.ndarray:
        return _mode_numbers(self.ny) * (2.0 * np.pi / self.ly)

    @cached_property
    def kx_deriv(self) -> np.ndarray:
        """First-derivative wavenumbers: kx with the Nyquist entry zeroed."""
        k = self.kx.copy()
        if self.nx % 2 == 0:
            k[self.nx // 2] = 0.0
        return k

    @cached_property
    def ky_deriv(self) -> np.ndarray:
        k = self.ky.copy()
        if self.ny % 2 == 0:
            k[self.ny // 2] = 0.0
        return k

    @cached_property
    def k_squared(self) -> np.ndarray:
        """Full |k|^2 table (Nyquist included), shape (nx, ny)."""
        return self.kx[:, None] ** 2 + self.ky[None, :] ** 2

    @cached_property
    def filter_transfer(self) -> np.ndarray:
        """Binomial (1/4, 1/2, 1/4) transfer cos^2(kx dx/2) cos^2(ky dy/2)."""
        tx = np.cos(self.kx * self.dx / 2.0) ** 2
        ty = np.cos(self.ky * self.dy / 2.0) ** 2
        if self.nx % 2 == 0:
            tx[self.nx // 2] = 0.0
        if self.ny % 2 == 0:
            ty[self.ny // 2] = 0.0
        return tx[:, None] * ty[None, :]


def check_shape(grid: Grid, f: np.ndarray) -> None:
    if f.shape != grid.shape:
        raise ValueError(f"field shape {f.shape} does not match grid {grid.shape}")


def gradient(grid: Grid, f: np.ndarray) -> VectorGrid:
    """Spectral gradient; Nyquist modes of the result are zero."""
    check_shape(grid, f)
    fh = np.fft.fft2(f)
    gx = np.fft.ifft2(1j * grid.kx_deriv[:, None] * fh).real
    gy = np.fft.ifft2(1j * grid.ky_deriv[None, :] * fh).real
    return VectorGrid(gx, gy)


def divergence(grid: Grid, field: VectorGrid) -> np.ndarray:
    check_shape(grid, field.x)
    check_shape(grid, field.y)
    fxh = np.fft.fft2(field.x)
    fyh = np.fft.fft2(field.y)
    dh = 1j * grid.kx_deriv[:, None] * fxh + 1j * grid.ky_deriv[None, :] * fyh
    return np.fft.ifft2(dh).real


def curl_e(grid: Grid, e: VectorGrid) -> np.ndarray:
    """Out-of-plane curl of an in-plane field: dEy/dx - dEx/dy."""
    check_shape(grid, e.x)
    check_shape(grid, e.y)
    exh = np.fft.fft2(e.x)
    eyh = np.fft.fft2(e.y)
    ch = 1j * grid.kx_deriv[:, None] * eyh - 1j * grid.ky_deriv[None, :] * exh
    return np.fft.ifft2(ch).real


def curl_b(grid: Grid, bz: np.ndarray) -> VectorGrid:
    """In-plane curl of an out-of-plane field: (dBz/dy, -dBz/dx)."""
    check_shape(grid, bz)
    bh = np.fft.fft2(bz)
    cx = np.fft.ifft2(1j * grid.ky_deriv[None, :] * bh).real
    cy = np.fft.ifft2(-1j * grid.kx_deriv[:, None] * bh).real
    return VectorGrid(cx, cy)


def laplacian(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Spectral Laplacian with the full -|k|^2 symbol (Nyquist kept)."""
    check_shape(grid, f)
    fh = np.fft.fft2(f)
    return np.fft.ifft2(-grid.k_squared * fh).real


def inverse_laplacian(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Solve laplacian(u) = f - mean(f) with the zero-mean gauge."""
    check_shape(grid, f)
    fh = np.fft.fft2(f)
    k2 = grid.k_squared.copy()
    k2[0, 0] = 1.0
    uh = fh / (-k2)
    uh[0, 0] = 0.0
    return np.fft.ifft2(uh).real


def binomial_filter(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Per-dimension (1/4, 1/2, 1/4) smoothing; zeroes the Nyquist modes."""
    check_shape(grid, f)
    fh = np.fft.fft2(f)
    return np.fft.ifft2(grid.filter_transfer * fh).real


def binomial_filter_vector(grid: Grid, field: VectorGrid) -> VectorGrid:
    return VectorGrid(binomial_filter(grid, field.x), binomial_filter(grid, field.y))
