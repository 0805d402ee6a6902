"""Per-particle kernels: drifts, linearly-implicit magnetic kicks, the
symmetric Boris step, and the energy-correction factor Gamma.

Everything is 2D2V: the magnetic field has only a z-component, so the
implicit v x B rotation reduces to a closed-form 2x2 solve and the schemes
stay effectively explicit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, VectorGrid
from .particles import gather_scalar, gather_vector, wrap_coordinate

# ||v_dagger|| below this is treated as degenerate and falls back to Gamma = 1.
DEGENERATE_SPEED = 1e-300


@dataclass
class GammaResult:
    """Correction factors and the mask of particles that fell back to 1."""

    gamma: np.ndarray
    fallback: np.ndarray


def half_drift(x, y, vx, vy, dt: float, lx: float, ly: float):
    """x + (dt/2) v, wrapped into the periodic box."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return (wrap_coordinate(x + 0.5 * dt * vx, lx),
            wrap_coordinate(y + 0.5 * dt * vy, ly))


def implicit_half_velocity(vx, vy, ex, ey, bz, dt: float):
    """Solve v* = v + (dt/2)(E + v* x Bz zhat) in closed form.

    With a = dt*Bz/2 and u = v + (dt/2)E the 2x2 system inverts to
    v*_x = (u_x + a u_y)/(1 + a^2), v*_y = (u_y - a u_x)/(1 + a^2).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    a = 0.5 * dt * bz
    ux = vx + 0.5 * dt * ex
    uy = vy + 0.5 * dt * ey
    den = 1.0 + a * a
    return (ux + a * uy) / den, (uy - a * ux) / den


def gamma_factor(vnx, vny, vsx, vsy, vdx, vdy) -> GammaResult:
    """Velocity rescaling enforcing the per-particle energy constraint.

    Gamma = sqrt(||v_n||^2 + 2 v* . (v_dagger - v_n)) / ||v_dagger||, so that
    ||Gamma v_dagger||^2 - ||v_n||^2 = 2 v* . (v_dagger - v_n).  A negative
    radicand (or a degenerate ||v_dagger||) falls back to Gamma = 1.
    """
    radicand = (vnx * vnx + vny * vny
                + 2.0 * (vsx * (vdx - vnx) + vsy * (vdy - vny)))
    norm_d = np.sqrt(vdx * vdx + vdy * vdy)
    fallback = (radicand < 0.0) | (norm_d < DEGENERATE_SPEED)
    safe_norm = np.where(fallback, 1.0, norm_d)
    gamma = np.where(fallback, 1.0, np.sqrt(np.maximum(radicand, 0.0)) / safe_norm)
    return GammaResult(gamma=gamma, fallback=fallback)


def boris_velocity_update(vx, vy, ex, ey, bz, dt: float):
    """Full kick v' = v + dt (E + v_half x B) with v_half = (v + v')/2."""
    hx, hy = implicit_half_velocity(vx, vy, ex, ey, bz, dt)
    return 2.0 * hx - vx, 2.0 * hy - vy


def boris_step(grid: Grid, x, y, vx, vy, e_field: VectorGrid, bz_field, dt: float):
    """Symmetric Boris push against prescribed nodal fields.

    Half drift, gather E and Bz at the midpoint position, linearly-implicit
    kick, half drift with the updated velocity.  ||v|| is invariant when the
    gathered E vanishes.
    """
    xs, ys = half_drift(x, y, vx, vy, dt, grid.lx, grid.ly)
    ex, ey = gather_vector(grid, e_field, xs, ys)
    bz = gather_scalar(grid, bz_field, xs, ys) if bz_field is not None else 0.0
    vx1, vy1 = boris_velocity_update(vx, vy, ex, ey, bz, dt)
    x1 = wrap_coordinate(xs + 0.5 * dt * vx1, grid.lx)
    y1 = wrap_coordinate(ys + 0.5 * dt * vy1, grid.ly)
    return x1, y1, vx1, vy1
