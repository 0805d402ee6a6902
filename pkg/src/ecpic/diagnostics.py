"""Energy accounting, conservation metrics, and series post-processing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field_solvers import FieldState
from .grid import Grid, VectorGrid, divergence
from .particles import ParticleSet


@dataclass
class DiagnosticsRecord:
    """One per-step row of the diagnostics table."""

    step: int
    t: float
    ke: float
    ee: float
    be: float
    te: float
    delta: float
    n_fallback: int
    gauss_residual: float
    max_gamma_dev: float

    CSV_HEADER = "step,t,ke,ee,be,te,delta,n_fallback,gauss_residual,max_gamma_dev"

    def csv_row(self) -> str:
        return (f"{self.step},{self.t:.17g},{self.ke:.17g},{self.ee:.17g},"
                f"{self.be:.17g},{self.te:.17g},{self.delta:.17g},"
                f"{self.n_fallback},{self.gauss_residual:.17g},{self.max_gamma_dev:.17g}")


def kinetic_energy(particles: ParticleSet) -> float:
    """(1/2) w sum_p ||v_p||^2."""
    return 0.5 * particles.w * float(np.sum(particles.vx ** 2 + particles.vy ** 2))


def electric_energy(grid: Grid, ex: np.ndarray, ey: np.ndarray) -> float:
    return 0.5 * grid.cell_volume * float(np.sum(ex * ex + ey * ey))


def magnetic_energy(grid: Grid, bz: np.ndarray, c: float) -> float:
    return 0.5 * c * c * grid.cell_volume * float(np.sum(bz * bz))


def leapfrog_magnetic_energy(grid: Grid, bz_lo: np.ndarray, bz_hi: np.ndarray,
                             c: float) -> float:
    """Nonstandard W_B = (c^2/2) |h| sum B^{n-1/2} B^{n+1/2}; this product
    form is what the staggered scheme conserves exactly."""
    return 0.5 * c * c * grid.cell_volume * float(np.sum(bz_lo * bz_hi))


def field_energy(grid: Grid, fields: FieldState, c: float, scheme,
                 bz_ahead: np.ndarray | None = None) -> tuple[float, float]:
    """(electric, magnetic) potential energy for the given scheme kind.

    The leapfrog kind needs the magnetic field at both adjacent half steps;
    pass the leading one as ``bz_ahead``.
    """
    from .integrators import SchemeKind

    ee = electric_energy(grid, fields.ex, fields.ey)
    if not SchemeKind(scheme).is_electromagnetic:
        return ee, 0.0
    if SchemeKind(scheme) is SchemeKind.EMEC_LF:
        if bz_ahead is None:
            raise ValueError("leapfrog magnetic energy needs bz_ahead")
        return ee, leapfrog_magnetic_energy(grid, fields.bz, bz_ahead, c)
    return ee, magnetic_energy(grid, fields.bz, c)


def fractional_delta(te_history) -> np.ndarray:
    """delta^n = (TE^n - min_k TE^k) / TE^0 over the supplied history."""
    te = np.asarray(te_history, dtype=float)
    if te.size == 0:
        raise ValueError("empty total-energy history")
    if te[0] == 0.0:
        raise ValueError("initial total energy is zero")
    return (te - te.min()) / te[0]


def gauss_residual(grid: Grid, e: VectorGrid, rho: np.ndarray) -> float:
    """||div E - (rho - 1)||_2 / ||rho||_2, a charge-consistency monitor."""
    res = divergence(grid, e) - (rho - 1.0)
    norm = float(np.sqrt(np.sum(rho * rho)))
    if norm == 0.0:
        return float(np.sqrt(np.sum(res * res)))
    return float(np.sqrt(np.sum(res * res))) / norm


# ---------------------------------------------------------------------------
# Series fitting (instability growth / damping rates)
# ---------------------------------------------------------------------------

def fit_log_slope(t, y, t_min=None, t_max=None) -> float:
    """Least-squares slope of ln(y) vs t over [t_min, t_max]."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = np.isfinite(y) & (y > 0)
    if t_min is not None:
        mask &= t >= t_min
    if t_max is not None:
        mask &= t <= t_max
    if mask.sum() < 2:
        raise ValueError("not enough samples in the fit window")
    return float(np.polyfit(t[mask], np.log(y[mask]), 1)[0])


def local_maxima(y) -> np.ndarray:
    """Indices of strict interior local maxima of a 1D series."""
    y = np.asarray(y, dtype=float)
    if y.size < 3:
        return np.array([], dtype=int)
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    return np.nonzero(inner)[0] + 1


def fit_peak_log_slope(t, y, t_min=None, t_max=None) -> float:
    """Slope of ln(y) through the local maxima of y (envelope fit).

    Oscillatory energy traces (Landau damping, two-stream growth) are fit on
    their peak envelope to suppress the oscillation at twice the mode
    frequency.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    idx = local_maxima(y)
    if idx.size < 2:
        return fit_log_slope(t, y, t_min, t_max)
    return fit_log_slope(t[idx], y[idx], t_min, t_max)
