"""Spectral field solves: Poisson and Ampere potential updates for the
electrostatic schemes, and three Maxwell updates (Crank-Nicolson, leapfrog,
PSATD) for the electromagnetic ones.

The Crank-Nicolson system diagonalizes per Fourier mode, so the "linearly
implicit" solve is a closed-form 3x3 elimination with no solver tolerance.
PSATD evolves each mode analytically with the current frozen over the step;
its time-averaged electric field is the exact integral of that solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (Grid, VectorGrid, check_shape, curl_b, curl_e, divergence,
                   inverse_laplacian)


@dataclass
class FieldState:
    """Nodal fields; phi is carried by electrostatic schemes, bz by
    electromagnetic ones (the leapfrog scheme stores B at the trailing half
    step there)."""

    ex: np.ndarray
    ey: np.ndarray
    bz: np.ndarray | None = None
    phi: np.ndarray | None = None

    @property
    def e(self) -> VectorGrid:
        return VectorGrid(self.ex, self.ey)


def poisson_solve(grid: Grid, rho: np.ndarray) -> np.ndarray:
    """phi with -laplacian(phi) = rho - 1, zero-mean gauge."""
    return inverse_laplacian(grid, -(rho - 1.0))


def ampere_update(grid: Grid, phi: np.ndarray, j: VectorGrid, dt: float) -> np.ndarray:
    """Advance laplacian(phi) by dt * div(j); pass dt/2 for half steps."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return phi + dt * inverse_laplacian(grid, divergence(grid, j))


# ---------------------------------------------------------------------------
# Crank-Nicolson Maxwell
# ---------------------------------------------------------------------------

def cn_maxwell_step(grid: Grid, fields: FieldState, j: VectorGrid, dt: float,
                    c: float) -> FieldState:
    """Time-centered Maxwell update solved exactly per Fourier mode.

    E' = E + dt (c^2 curl B_half - j), Bz' = Bz - dt curl E_half with the
    half-step fields exact averages; vacuum modes conserve |E|^2 + c^2|B|^2.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    check_shape(grid, fields.bz)
    exh = np.fft.fft2(fields.ex)
    eyh = np.fft.fft2(fields.ey)
    bzh = np.fft.fft2(fields.bz)
    jxh = np.fft.fft2(j.x)
    jyh = np.fft.fft2(j.y)

    ikx = 1j * grid.kx_deriv[:, None]
    iky = 1j * grid.ky_deriv[None, :]
    ax = 0.5 * dt * c * c * ikx
    ay = 0.5 * dt * c * c * iky
    bx = 0.5 * dt * ikx
    by = 0.5 * dt * iky

    r1 = exh + ay * bzh - dt * jxh
    r2 = eyh - ax * bzh - dt * jyh
    r3 = bzh + by * exh - bx * eyh

    denom = 1.0 + (0.5 * dt * c) ** 2 * (grid.kx_deriv[:, None] ** 2
                                         + grid.ky_deriv[None, :] ** 2)
    bz_new = (r3 + by * r1 - bx * r2) / denom
    ex_new = r1 + ay * bz_new
    ey_new = r2 - ax * bz_new

    return FieldState(ex=np.fft.ifft2(ex_new).real,
                      ey=np.fft.ifft2(ey_new).real,
                      bz=np.fft.ifft2(bz_new).real)


# ---------------------------------------------------------------------------
# Leapfrog Maxwell (spectral curls; B staggered by half a step)
# ---------------------------------------------------------------------------

def faraday_update(grid: Grid, bz: np.ndarray, e: VectorGrid, dt: float) -> np.ndarray:
    return bz - dt * curl_e(grid, e)


def maxwell_e_update(grid: Grid, e: VectorGrid, bz: np.ndarray, j: VectorGrid,
                     dt: float, c: float) -> VectorGrid:
    cb = curl_b(grid, bz)
    return VectorGrid(e.x + dt * (c * c * cb.x - j.x),
                      e.y + dt * (c * c * cb.y - j.y))


def leapfrog_maxwell_step(grid: Grid, bz_half: np.ndarray, e: VectorGrid,
                          j: VectorGrid, dt: float, c: float):
    """B^{n+1/2} = B^{n-1/2} - dt curl E^n, then the full E update."""
    bz_next = faraday_update(grid, bz_half, e, dt)
    e_next = maxwell_e_update(grid, e, bz_next, j, dt, c)
    return bz_next, e_next


def leapfrog_initial_bz_half(grid: Grid, bz0: np.ndarray, e0: VectorGrid,
                             dt: float) -> np.ndarray:
    """Backward Faraday half step: B^{-1/2} = B^0 + (dt/2) curl E^0."""
    return bz0 + 0.5 * dt * curl_e(grid, e0)


# ---------------------------------------------------------------------------
# PSATD
# ---------------------------------------------------------------------------

@dataclass
class PsatdCoefficients:
    """Per-mode propagator tables for a given (c, tau).

    ``zero_mode`` marks modes with |k| = 0 under the derivative convention;
    those use the analytic limit E' = E - tau j, B' = B.
    """

    c: float
    tau: float
    k: np.ndarray
    khat_x: np.ndarray
    khat_y: np.ndarray
    cos_kct: np.ndarray
    sin_kct: np.ndarray
    zero_mode: np.ndarray


def make_psatd_coefficients(grid: Grid, c: float, tau: float) -> PsatdCoefficients:
    if tau <= 0:
        raise ValueError("tau must be positive")
    if c <= 0:
        raise ValueError("c must be positive")
    kx = grid.kx_deriv[:, None]
    ky = grid.ky_deriv[None, :]
    k = np.sqrt(kx * kx + ky * ky) + np.zeros(grid.shape)
    zero = k == 0.0
    k_safe = np.where(zero, 1.0, k)
    khat_x = np.where(zero, 0.0, kx / k_safe)
    khat_y = np.where(zero, 0.0, ky / k_safe)
    return PsatdCoefficients(c=c, tau=tau, k=k, khat_x=khat_x, khat_y=khat_y,
                             cos_kct=np.cos(k * c * tau),
                             sin_kct=np.sin(k * c * tau),
                             zero_mode=zero)


def psatd_step(grid: Grid, fields: FieldState, j: VectorGrid, tau: float,
               c: float) -> FieldState:
    """Exact per-mode evolution over tau with the current frozen."""
    check_shape(grid, fields.bz)
    co = make_psatd_coefficients(grid, c, tau)
    exh = np.fft.fft2(fields.ex)
    eyh = np.fft.fft2(fields.ey)
    bzh = np.fft.fft2(fields.bz)
    jxh = np.fft.fft2(j.x)
    jyh = np.fft.fft2(j.y)

    C, S = co.cos_kct, co.sin_kct
    khx, khy = co.khat_x, co.khat_y
    k_safe = np.where(co.zero_mode, 1.0, co.k)
    s_kc = S / (k_safe * c)

    kdot_e = khx * exh + khy * eyh
    kdot_j = khx * jxh + khy * jyh
    cross_e = khx * eyh - khy * exh        # (khat x E)_z
    cross_j = khx * jyh - khy * jxh

    ex_new = (C * exh + 1j * S * c * khy * bzh - s_kc * jxh
              + (1.0 - C) * khx * kdot_e + khx * kdot_j * (s_kc - tau))
    ey_new = (C * eyh - 1j * S * c * khx * bzh - s_kc * jyh
              + (1.0 - C) * khy * kdot_e + khy * kdot_j * (s_kc - tau))
    bz_new = C * bzh - 1j * (S / c) * cross_e + 1j * ((1.0 - C) / (k_safe * c * c)) * cross_j

    ex_new = np.where(co.zero_mode, exh - tau * jxh, ex_new)
    ey_new = np.where(co.zero_mode, eyh - tau * jyh, ey_new)
    bz_new = np.where(co.zero_mode, bzh, bz_new)

    return FieldState(ex=np.fft.ifft2(ex_new).real,
                      ey=np.fft.ifft2(ey_new).real,
                      bz=np.fft.ifft2(bz_new).real)


def psatd_time_averaged_e(grid: Grid, fields: FieldState, j: VectorGrid,
                          dt: float, c: float) -> VectorGrid:
    """(1/dt) * integral of E(t) over the step, from the same frozen-j flow.

    Satisfies the discrete work identity
    dt sum_h <E> . j = -(1/2) sum_h (|E'|^2 + c^2|B'|^2 - |E|^2 - c^2|B|^2).
    """
    check_shape(grid, fields.bz)
    co = make_psatd_coefficients(grid, c, dt)
    exh = np.fft.fft2(fields.ex)
    eyh = np.fft.fft2(fields.ey)
    bzh = np.fft.fft2(fields.bz)
    jxh = np.fft.fft2(j.x)
    jyh = np.fft.fft2(j.y)

    C, S = co.cos_kct, co.sin_kct
    khx, khy = co.khat_x, co.khat_y
    k_safe = np.where(co.zero_mode, 1.0, co.k)
    s_avg = S / (k_safe * c * dt)                    # mean of cos(k c t)
    c_avg = (1.0 - C) / (k_safe * c * dt)            # mean of sin(k c t), scaled 1/c
    j_avg = (1.0 - C) / (k_safe ** 2 * c * c * dt)

    kdot_e = khx * exh + khy * eyh
    kdot_j = khx * jxh + khy * jyh

    ex_avg = (s_avg * exh + 1j * c_avg * khy * bzh - j_avg * jxh
              + (1.0 - s_avg) * khx * kdot_e + khx * kdot_j * (j_avg - 0.5 * dt))
    ey_avg = (s_avg * eyh - 1j * c_avg * khx * bzh - j_avg * jyh
              + (1.0 - s_avg) * khy * kdot_e + khy * kdot_j * (j_avg - 0.5 * dt))

    ex_avg = np.where(co.zero_mode, exh - 0.5 * dt * jxh, ex_avg)
    ey_avg = np.where(co.zero_mode, eyh - 0.5 * dt * jyh, ey_avg)

    return VectorGrid(np.fft.ifft2(ex_avg).real, np.fft.ifft2(ey_avg).real)
