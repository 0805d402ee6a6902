"""Full time-step orchestration for each scheme.

Each stepper composes drift, deposition, field solve, gather, and the
Gamma-corrected velocity update in the exact order the energy proofs
require.  Two current depositions appear in the corrected schemes:
j^{n,*} from (x*, v^n) drives the half-step field solve, and
j^{*,n+1/2} from (x^{n+1/2}, v*) drives the full-step solve; the midpoint
x^{n+1/2} is the exact mean of x^n and the unwrapped x^{n+1}.

When the binomial filter is enabled it is applied symmetrically: deposited
currents are filtered before the field solve and nodal fields are filtered
before gathering, so deposit/gather adjointness holds with the filtered
effective shape and energy conservation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .field_solvers import (FieldState, ampere_update, cn_maxwell_step,
                            faraday_update, leapfrog_initial_bz_half,
                            maxwell_e_update, poisson_solve, psatd_step,
                            psatd_time_averaged_e)
from .grid import (Grid, VectorGrid, binomial_filter, binomial_filter_vector,
                   curl_e, gradient)
from .particles import (ParticleSet, deposit_charge, deposit_current,
                        gather_scalar, gather_vector, tent_stencil,
                        wrap_coordinate)
from .pushers import (boris_velocity_update, gamma_factor, half_drift,
                      implicit_half_velocity)


class SchemeKind(Enum):
    BORIS_ES = "boris_es"
    ESEC1 = "esec1"
    ESEC2 = "esec2"
    EMEC_CN = "emec_cn"
    EMEC_LF = "emec_lf"
    EMEC_PSATD = "emec_psatd"

    @property
    def is_electromagnetic(self) -> bool:
        return self in (SchemeKind.EMEC_CN, SchemeKind.EMEC_LF, SchemeKind.EMEC_PSATD)

    @property
    def is_energy_conserving(self) -> bool:
        return self is not SchemeKind.BORIS_ES


@dataclass
class StepStats:
    """Scheme-health counters for one step."""

    n_fallback: int = 0
    max_gamma_dev: float = 0.0


def _neg_gradient(grid: Grid, phi: np.ndarray) -> VectorGrid:
    g = gradient(grid, phi)
    return VectorGrid(-g.x, -g.y)


class _StepperBase:
    def __init__(self, grid: Grid, dt: float, filter_enabled: bool = True,
                 n_chunks: int = 1):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.grid = grid
        self.dt = dt
        self.filter_enabled = filter_enabled
        self.n_chunks = n_chunks

    def _filt(self, f: np.ndarray) -> np.ndarray:
        return binomial_filter(self.grid, f) if self.filter_enabled else f

    def _filt_vec(self, f: VectorGrid) -> VectorGrid:
        return binomial_filter_vector(self.grid, f) if self.filter_enabled else f

    def _advance_positions(self, x, y, vsx, vsy):
        """Full-step positions and their exact midpoint, both wrapped."""
        g, dt = self.grid, self.dt
        x1u = x + dt * vsx
        y1u = y + dt * vsy
        xh = wrap_coordinate(0.5 * (x + x1u), g.lx)
        yh = wrap_coordinate(0.5 * (y + y1u), g.ly)
        return (wrap_coordinate(x1u, g.lx), wrap_coordinate(y1u, g.ly), xh, yh)

    def _apply_gamma(self, vnx, vny, vsx, vsy, vdx, vdy):
        res = gamma_factor(vnx, vny, vsx, vsy, vdx, vdy)
        applied = np.abs(res.gamma[~res.fallback] - 1.0)
        stats = StepStats(n_fallback=int(res.fallback.sum()),
                          max_gamma_dev=float(applied.max()) if applied.size else 0.0)
        return res.gamma * vdx, res.gamma * vdy, stats


class _ElectrostaticStepper(_StepperBase):
    """Shared plumbing for the Vlasov-Ampere/Poisson schemes.

    ``external_bz`` is an imposed out-of-plane magnetic field: None, a
    scalar, or a callable (x, y) -> Bz.  The scenario problems run with
    B = 0; the field exists so the magnetic zero-work property is testable.
    """

    def __init__(self, grid, dt, filter_enabled=True, external_bz=None, n_chunks=1):
        super().__init__(grid, dt, filter_enabled, n_chunks)
        self.external_bz = external_bz

    def _bz_at(self, x, y):
        if self.external_bz is None:
            return 0.0
        if callable(self.external_bz):
            return self.external_bz(x, y)
        return float(self.external_bz)


class BorisReferenceStepper(_ElectrostaticStepper):
    """Standard explicit PIC: per-step Poisson solve + symmetric Boris push.

    Only the deposited charge density is filtered, matching common practice
    for the reference scheme; no energy correction is applied.
    """

    scheme = SchemeKind.BORIS_ES

    def step(self, particles: ParticleSet, fields: FieldState):
        g, dt, w = self.grid, self.dt, particles.w
        xs, ys = half_drift(particles.x, particles.y, particles.vx, particles.vy,
                            dt, g.lx, g.ly)
        star = tent_stencil(g, xs, ys)
        rho = self._filt(deposit_charge(g, xs, ys, w, self.n_chunks, stencil=star))
        phi = poisson_solve(g, rho)
        e = _neg_gradient(g, phi)
        exp, eyp = gather_vector(g, e, stencil=star)
        bzp = self._bz_at(xs, ys)
        vx1, vy1 = boris_velocity_update(particles.vx, particles.vy, exp, eyp, bzp, dt)
        x1 = wrap_coordinate(xs + 0.5 * dt * vx1, g.lx)
        y1 = wrap_coordinate(ys + 0.5 * dt * vy1, g.ly)
        return (ParticleSet(x1, y1, vx1, vy1, w),
                FieldState(ex=e.x, ey=e.y, phi=phi), StepStats())


class Esec1Stepper(_ElectrostaticStepper):
    """Energy-conserving Ampere scheme, single field solve per step."""

    scheme = SchemeKind.ESEC1

    def step(self, particles: ParticleSet, fields: FieldState):
        g, dt, w = self.grid, self.dt, particles.w
        x, y, vx, vy = particles.x, particles.y, particles.vx, particles.vy

        xs, ys = half_drift(x, y, vx, vy, dt, g.lx, g.ly)
        star = tent_stencil(g, xs, ys)
        exs, eys = gather_vector(g, self._filt_vec(fields.e), stencil=star)
        bz_star = self._bz_at(xs, ys)
        vsx, vsy = implicit_half_velocity(vx, vy, exs, eys, bz_star, dt)

        x1, y1, xh, yh = self._advance_positions(x, y, vsx, vsy)
        mid = tent_stencil(g, xh, yh)
        j = self._filt_vec(deposit_current(g, xh, yh, vsx, vsy, w,
                                           self.n_chunks, stencil=mid))
        phi1 = ampere_update(g, fields.phi, j, dt)
        e1 = _neg_gradient(g, phi1)

        e_half = VectorGrid(0.5 * (fields.ex + e1.x), 0.5 * (fields.ey + e1.y))
        exh, eyh = gather_vector(g, self._filt_vec(e_half), stencil=mid)
        vdx = vx + dt * (exh + vsy * bz_star)
        vdy = vy + dt * (eyh - vsx * bz_star)
        vx1, vy1, stats = self._apply_gamma(vx, vy, vsx, vsy, vdx, vdy)
        return (ParticleSet(x1, y1, vx1, vy1, w),
                FieldState(ex=e1.x, ey=e1.y, phi=phi1), stats)


class Esec2Stepper(_ElectrostaticStepper):
    """ESEC1 plus a half-step Ampere solve feeding the v* update, which
    tightens Gamma from 1 + O(dt^3) to 1 + O(dt^4)."""

    scheme = SchemeKind.ESEC2

    def step(self, particles: ParticleSet, fields: FieldState):
        g, dt, w = self.grid, self.dt, particles.w
        x, y, vx, vy = particles.x, particles.y, particles.vx, particles.vy

        xs, ys = half_drift(x, y, vx, vy, dt, g.lx, g.ly)
        star = tent_stencil(g, xs, ys)
        j_ns = self._filt_vec(deposit_current(g, xs, ys, vx, vy, w,
                                              self.n_chunks, stencil=star))
        phi_star = ampere_update(g, fields.phi, j_ns, 0.5 * dt)
        e_star = _neg_gradient(g, phi_star)
        exs, eys = gather_vector(g, self._filt_vec(e_star), stencil=star)
        bz_star = self._bz_at(xs, ys)
        vsx, vsy = implicit_half_velocity(vx, vy, exs, eys, bz_star, dt)

        x1, y1, xh, yh = self._advance_positions(x, y, vsx, vsy)
        mid = tent_stencil(g, xh, yh)
        j = self._filt_vec(deposit_current(g, xh, yh, vsx, vsy, w,
                                           self.n_chunks, stencil=mid))
        phi1 = ampere_update(g, fields.phi, j, dt)
        e1 = _neg_gradient(g, phi1)

        e_half = VectorGrid(0.5 * (fields.ex + e1.x), 0.5 * (fields.ey + e1.y))
        exh, eyh = gather_vector(g, self._filt_vec(e_half), stencil=mid)
        bz_mid = self._bz_at(xh, yh)
        vdx = vx + dt * (exh + vsy * bz_mid)
        vdy = vy + dt * (eyh - vsx * bz_mid)
        vx1, vy1, stats = self._apply_gamma(vx, vy, vsx, vsy, vdx, vdy)
        return (ParticleSet(x1, y1, vx1, vy1, w),
                FieldState(ex=e1.x, ey=e1.y, phi=phi1), stats)


class _ElectromagneticStepper(_StepperBase):
    def __init__(self, grid, dt, c: float, filter_enabled=True, n_chunks=1):
        super().__init__(grid, dt, filter_enabled, n_chunks)
        if c <= 0:
            raise ValueError("c must be positive")
        self.c = c

    def _star_velocity(self, particles, e_star: VectorGrid, bz_star, star_stencil):
        exs, eys = gather_vector(self.grid, self._filt_vec(e_star), stencil=star_stencil)
        bzs = gather_scalar(self.grid, self._filt(bz_star), stencil=star_stencil)
        return implicit_half_velocity(particles.vx, particles.vy, exs, eys, bzs, self.dt)

    def _finish_velocity(self, particles, vsx, vsy, e_for_dagger: VectorGrid,
                         bz_for_dagger: np.ndarray, mid_stencil):
        g, dt = self.grid, self.dt
        exh, eyh = gather_vector(g, self._filt_vec(e_for_dagger), stencil=mid_stencil)
        bzh = gather_scalar(g, self._filt(bz_for_dagger), stencil=mid_stencil)
        vdx = particles.vx + dt * (exh + vsy * bzh)
        vdy = particles.vy + dt * (eyh - vsx * bzh)
        return self._apply_gamma(particles.vx, particles.vy, vsx, vsy, vdx, vdy)


class EmecCnStepper(_ElectromagneticStepper):
    """Electromagnetic scheme with the linearly-implicit (Crank-Nicolson)
    Maxwell solve; the half-step fields come from an explicit Euler half."""

    scheme = SchemeKind.EMEC_CN

    def step(self, particles: ParticleSet, fields: FieldState):
        g, dt, c, w = self.grid, self.dt, self.c, particles.w
        x, y, vx, vy = particles.x, particles.y, particles.vx, particles.vy

        xs, ys = half_drift(x, y, vx, vy, dt, g.lx, g.ly)
        star = tent_stencil(g, xs, ys)
        j_ns = self._filt_vec(deposit_current(g, xs, ys, vx, vy, w,
                                              self.n_chunks, stencil=star))
        e_star = maxwell_e_update(g, fields.e, fields.bz, j_ns, 0.5 * dt, c)
        bz_star = fields.bz - 0.5 * dt * curl_e(g, fields.e)
        vsx, vsy = self._star_velocity(particles, e_star, bz_star, star)

        x1, y1, xh, yh = self._advance_positions(x, y, vsx, vsy)
        mid = tent_stencil(g, xh, yh)
        j = self._filt_vec(deposit_current(g, xh, yh, vsx, vsy, w,
                                           self.n_chunks, stencil=mid))
        new_fields = cn_maxwell_step(g, fields, j, dt, c)

        e_half = VectorGrid(0.5 * (fields.ex + new_fields.ex),
                            0.5 * (fields.ey + new_fields.ey))
        bz_half = 0.5 * (fields.bz + new_fields.bz)
        vx1, vy1, stats = self._finish_velocity(particles, vsx, vsy, e_half,
                                                bz_half, mid)
        return ParticleSet(x1, y1, vx1, vy1, w), new_fields, stats


class EmecLeapfrogStepper(_ElectromagneticStepper):
    """Electromagnetic scheme with the staggered (leapfrog) Maxwell solve.

    ``fields.bz`` stores B at the trailing half step; energy bookkeeping
    uses the nonstandard W_B built from adjacent half-step fields.
    """

    scheme = SchemeKind.EMEC_LF

    def step(self, particles: ParticleSet, fields: FieldState):
        g, dt, c, w = self.grid, self.dt, self.c, particles.w
        x, y, vx, vy = particles.x, particles.y, particles.vx, particles.vy

        xs, ys = half_drift(x, y, vx, vy, dt, g.lx, g.ly)
        star = tent_stencil(g, xs, ys)
        bz_next = faraday_update(g, fields.bz, fields.e, dt)
        j_ns = self._filt_vec(deposit_current(g, xs, ys, vx, vy, w,
                                              self.n_chunks, stencil=star))
        e_star = maxwell_e_update(g, fields.e, bz_next, j_ns, 0.5 * dt, c)
        vsx, vsy = self._star_velocity(particles, e_star, bz_next, star)

        x1, y1, xh, yh = self._advance_positions(x, y, vsx, vsy)
        mid = tent_stencil(g, xh, yh)
        j = self._filt_vec(deposit_current(g, xh, yh, vsx, vsy, w,
                                           self.n_chunks, stencil=mid))
        e1 = maxwell_e_update(g, fields.e, bz_next, j, dt, c)

        e_half = VectorGrid(0.5 * (fields.ex + e1.x), 0.5 * (fields.ey + e1.y))
        vx1, vy1, stats = self._finish_velocity(particles, vsx, vsy, e_half,
                                                bz_next, mid)
        return (ParticleSet(x1, y1, vx1, vy1, w),
                FieldState(ex=e1.x, ey=e1.y, bz=bz_next), stats)


class EmecPsatdStepper(_ElectromagneticStepper):
    """Electromagnetic scheme with the analytic per-mode Maxwell solve; the
    v_dagger update gathers the time-averaged E so the work integral is
    exact."""

    scheme = SchemeKind.EMEC_PSATD

    def step(self, particles: ParticleSet, fields: FieldState):
        g, dt, c, w = self.grid, self.dt, self.c, particles.w
        x, y, vx, vy = particles.x, particles.y, particles.vx, particles.vy

        xs, ys = half_drift(x, y, vx, vy, dt, g.lx, g.ly)
        star = tent_stencil(g, xs, ys)
        j_ns = self._filt_vec(deposit_current(g, xs, ys, vx, vy, w,
                                              self.n_chunks, stencil=star))
        half = psatd_step(g, fields, j_ns, 0.5 * dt, c)
        vsx, vsy = self._star_velocity(particles, half.e, half.bz, star)

        x1, y1, xh, yh = self._advance_positions(x, y, vsx, vsy)
        mid = tent_stencil(g, xh, yh)
        j = self._filt_vec(deposit_current(g, xh, yh, vsx, vsy, w,
                                           self.n_chunks, stencil=mid))
        new_fields = psatd_step(g, fields, j, dt, c)
        e_avg = psatd_time_averaged_e(g, fields, j, dt, c)
        bz_half = 0.5 * (fields.bz + new_fields.bz)

        vx1, vy1, stats = self._finish_velocity(particles, vsx, vsy, e_avg,
                                                bz_half, mid)
        return ParticleSet(x1, y1, vx1, vy1, w), new_fields, stats


_STEPPERS = {
    SchemeKind.BORIS_ES: BorisReferenceStepper,
    SchemeKind.ESEC1: Esec1Stepper,
    SchemeKind.ESEC2: Esec2Stepper,
    SchemeKind.EMEC_CN: EmecCnStepper,
    SchemeKind.EMEC_LF: EmecLeapfrogStepper,
    SchemeKind.EMEC_PSATD: EmecPsatdStepper,
}


def make_stepper(scheme: SchemeKind, grid: Grid, dt: float, c: float | None = None,
                 filter_enabled: bool = True, external_bz=None, n_chunks: int = 1):
    scheme = SchemeKind(scheme)
    if scheme.is_electromagnetic:
        if c is None:
            raise ValueError("electromagnetic schemes require c")
        if external_bz is not None:
            raise ValueError("external_bz applies to electrostatic schemes only")
        return _STEPPERS[scheme](grid, dt, c, filter_enabled, n_chunks)
    if c is not None:
        raise ValueError("electrostatic schemes do not take c")
    return _STEPPERS[scheme](grid, dt, filter_enabled, external_bz, n_chunks)


def initialize_fields(grid: Grid, particles: ParticleSet, scheme: SchemeKind,
                      dt: float, c: float | None = None,
                      bz0: np.ndarray | None = None, filter_enabled: bool = True,
                      n_chunks: int = 1) -> FieldState:
    """Self-consistent t=0 fields: E from the Poisson solve of the deposited
    charge (so Gauss's law holds initially), plus the scenario's Bz."""
    scheme = SchemeKind(scheme)
    rho = deposit_charge(grid, particles.x, particles.y, particles.w, n_chunks)
    if filter_enabled:
        rho = binomial_filter(grid, rho)
    phi = poisson_solve(grid, rho)
    e = _neg_gradient(grid, phi)
    if not scheme.is_electromagnetic:
        return FieldState(ex=e.x, ey=e.y, phi=phi)
    bz = np.zeros(grid.shape) if bz0 is None else np.array(bz0, dtype=float)
    if scheme is SchemeKind.EMEC_LF:
        bz = leapfrog_initial_bz_half(grid, bz, e, dt)
    return FieldState(ex=e.x, ey=e.y, bz=bz)
