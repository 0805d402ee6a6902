"""Initializers for the three benchmark problems and their linear-theory
rate oracles.

All quantities are dimensionless: lengths in Debye lengths, times in
inverse plasma frequencies, velocities in thermal speeds.  Particle weights
are w = lx*ly/N_p, which makes the mean deposited density exactly one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .grid import Grid
from .particles import ParticleSet


class ScenarioKind(Enum):
    LANDAU = "landau"
    TWO_STREAM = "two_stream"
    WEIBEL = "weibel"


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    nx: int
    ny: int
    lx: float
    ly: float
    n_c: int
    seed: int = 0
    alpha_x: float = 0.0
    alpha_y: float = 0.0
    v_b: float = 0.0           # two-stream beam speed
    beta: float = 0.0          # Weibel temperature parameter (exp(-v^2/beta))
    delta: float = 0.5         # Weibel beam mixture weight
    v0_1: float = 0.0          # Weibel +x drift
    v0_2: float = 0.0          # Weibel -x drift
    b: float = 0.0             # Weibel seed field amplitude
    k0: float = 0.0            # Weibel seed wavenumber
    quiet_start: bool = False

    def __post_init__(self) -> None:
        if self.n_c < 1:
            raise ValueError("n_c must be at least 1")
        for name in ("alpha_x", "alpha_y", "b"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.kind is ScenarioKind.WEIBEL and not self.quiet_start:
            raise ValueError("the Weibel scenario requires a quiet start")

    @property
    def n_particles(self) -> int:
        return self.nx * self.ny * self.n_c

    @property
    def weight(self) -> float:
        return self.lx * self.ly / self.n_particles

    def grid(self) -> Grid:
        return Grid(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly)


def landau_spec(nx: int = 32, ny: int = 32, box: float = 22.0, n_c: int = 500,
                alpha_x: float = 0.05, alpha_y: float = 0.05, seed: int = 0) -> ScenarioSpec:
    return ScenarioSpec(kind=ScenarioKind.LANDAU, nx=nx, ny=ny, lx=box, ly=box,
                        n_c=n_c, alpha_x=alpha_x, alpha_y=alpha_y, seed=seed)


def two_stream_spec(nx: int = 32, ny: int = 32, box: float = 32.0, n_c: int = 500,
                    alpha_x: float = 0.01, v_b: float = 3.5, seed: int = 0) -> ScenarioSpec:
    return ScenarioSpec(kind=ScenarioKind.TWO_STREAM, nx=nx, ny=ny, lx=box, ly=box,
                        n_c=n_c, alpha_x=alpha_x, v_b=v_b, seed=seed)


def weibel_run1_spec(ny: int = 32, n_c: int = 3200, beta: float = 0.01,
                     delta: float = 0.5, v0: float = 0.3, b: float = 0.001,
                     k0: float = 0.2, seed: int = 0) -> ScenarioSpec:
    # 1D2V case realized on an nx = 1 grid; lx is chosen to keep dx = dy.
    ly = 2.0 * math.pi / k0
    return ScenarioSpec(kind=ScenarioKind.WEIBEL, nx=1, ny=ny, lx=ly / ny, ly=ly,
                        n_c=n_c, beta=beta, delta=delta, v0_1=v0, v0_2=v0,
                        b=b, k0=k0, quiet_start=True, seed=seed)


def _sample_perturbed_coordinate(rng: np.random.Generator, n: int, alpha: float,
                                 length: float) -> np.ndarray:
    """Inverse-CDF samples from density (1 + alpha cos(2 pi x / L)) / L."""
    u = rng.random(n)
    x = length * u
    if alpha == 0.0:
        return x
    k = 2.0 * math.pi / length
    # Newton on F(x) = (x + (alpha/k) sin(kx)) / L - u; F' >= (1 - alpha)/L.
    for _ in range(100):
        f = (x + (alpha / k) * np.sin(k * x)) / length - u
        step = f * length / (1.0 + alpha * np.cos(k * x))
        x -= step
        if np.max(np.abs(step)) < 1e-14 * length:
            break
    return np.mod(x, length)


def init_landau(spec: ScenarioSpec) -> tuple[Grid, ParticleSet, None]:
    """Maxwellian with separable cosine density perturbations in x and y."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_particles
    x = _sample_perturbed_coordinate(rng, n, spec.alpha_x, spec.lx)
    y = _sample_perturbed_coordinate(rng, n, spec.alpha_y, spec.ly)
    vx = rng.standard_normal(n)
    vy = rng.standard_normal(n)
    return spec.grid(), ParticleSet(x, y, vx, vy, spec.weight), None


def init_two_stream(spec: ScenarioSpec) -> tuple[Grid, ParticleSet, None]:
    """Counter-streaming beams (+-v_b in x) with a density perturbation in x."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_particles
    x = _sample_perturbed_coordinate(rng, n, spec.alpha_x, spec.lx)
    y = rng.random(n) * spec.ly
    beam = rng.random(n) < 0.5
    vx = rng.standard_normal(n) + np.where(beam, spec.v_b, -spec.v_b)
    vy = rng.standard_normal(n)
    return spec.grid(), ParticleSet(x, y, vx, vy, spec.weight), None


def _quiet_lattice(spec: ScenarioSpec) -> tuple[np.ndarray, np.ndarray]:
    n = spec.n_particles
    if spec.nx == 1:
        y = (np.arange(n) + 0.5) * (spec.ly / n)
        x = np.full(n, 0.5 * spec.lx)
        return x, y
    # 2D lattice commensurate with the mesh: (nx*a) x (ny*b) with a*b = n_c.
    for a in range(int(math.isqrt(spec.n_c)), 0, -1):
        if spec.n_c % a == 0:
            mx, my = spec.nx * a, spec.ny * (spec.n_c // a)
            xs = (np.arange(mx) + 0.5) * (spec.lx / mx)
            ys = (np.arange(my) + 0.5) * (spec.ly / my)
            gx, gy = np.meshgrid(xs, ys, indexing="ij")
            return gx.ravel(), gy.ravel()
    raise ValueError("n_c admits no lattice factorization")


def init_weibel(spec: ScenarioSpec) -> tuple[Grid, ParticleSet, np.ndarray]:
    """Quiet-start bi-Maxwellian beams with a seeded Bz = b sin(k0 y).

    Positions sit on a deterministic uniform lattice (deposited density is
    exactly one at every node); velocities are sampled with per-component
    spread sqrt(beta/2) and drift +v0_1 / -v0_2 in x with mixture weights
    (delta, 1 - delta).
    """
    if not spec.quiet_start:
        raise ValueError("the Weibel scenario requires a quiet start")
    rng = np.random.default_rng(spec.seed)
    n = spec.n_particles
    x, y = _quiet_lattice(spec)
    sigma = math.sqrt(spec.beta / 2.0)
    beam = rng.random(n) < spec.delta
    vx = sigma * rng.standard_normal(n) + np.where(beam, spec.v0_1, -spec.v0_2)
    vy = sigma * rng.standard_normal(n)
    grid = spec.grid()
    bz0 = spec.b * np.sin(spec.k0 * grid.y_nodes)[None, :] * np.ones((grid.nx, 1))
    return grid, ParticleSet(x, y, vx, vy, spec.weight), bz0


def init_scenario(spec: ScenarioSpec):
    """Dispatch to the scenario initializer; returns (grid, particles, bz0)."""
    if spec.kind is ScenarioKind.LANDAU:
        return init_landau(spec)
    if spec.kind is ScenarioKind.TWO_STREAM:
        return init_two_stream(spec)
    return init_weibel(spec)


# ---------------------------------------------------------------------------
# Linear theory
# ---------------------------------------------------------------------------

def theory_landau_rate(k: float) -> tuple[float, float]:
    """(omega, gamma) for Landau damping at wavenumber k.

    Bohm-Gross frequency omega = sqrt(1 + 3 k^2) and damping rate
    gamma = sqrt(pi/2) (omega^2 / 2 k^3) exp(-omega^2 / 2 k^2).
    """
    if k <= 0:
        raise ValueError("k must be positive")
    omega_sq = 1.0 + 3.0 * k * k
    gamma = (math.sqrt(math.pi / 2.0) * omega_sq / (2.0 * k ** 3)
             * math.exp(-omega_sq / (2.0 * k * k)))
    return math.sqrt(omega_sq), gamma


def theory_two_stream_rate(k: float, v_b: float) -> float:
    """Growth rate from 1/(w + k v_b)^2 + 1/(w - k v_b)^2 = 1.

    With a = k v_b and u = w^2 the relation reduces to
    u^2 - 2(a^2 + 1) u + (a^4 - 2 a^2) = 0; a negative smaller root
    u_- = (a^2 + 1) - sqrt(4 a^2 + 1) gives gamma = sqrt(-u_-), otherwise
    the mode is stable.
    """
    if k <= 0 or v_b <= 0:
        raise ValueError("k and v_b must be positive")
    a_sq = (k * v_b) ** 2
    u_minus = (a_sq + 1.0) - math.sqrt(4.0 * a_sq + 1.0)
    return math.sqrt(-u_minus) if u_minus < 0.0 else 0.0


def scenario_theory_rate(spec: ScenarioSpec) -> float | None:
    """Field-amplitude rate gamma of the scenario's seeded mode (k = 2 pi / lx)."""
    if spec.kind is ScenarioKind.LANDAU:
        return theory_landau_rate(2.0 * math.pi / spec.lx)[1]
    if spec.kind is ScenarioKind.TWO_STREAM:
        return theory_two_stream_rate(2.0 * math.pi / spec.lx, spec.v_b)
    return None


def with_overrides(spec: ScenarioSpec, **kwargs) -> ScenarioSpec:
    return replace(spec, **kwargs)
