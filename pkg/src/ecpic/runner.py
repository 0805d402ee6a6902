"""Main time loop, diagnostics collection, and file outputs.

``simulate`` runs a configuration in memory; ``run`` adds the documented
outputs: ``diagnostics.csv`` (one row per step), ``run.json`` metadata
(including the linear-theory rate for the scenario, when one exists), and
optional per-field snapshot CSVs.  ``sweep_dt`` repeats a run over a list
of time steps at fixed physical duration and tabulates the maxima.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import RunConfig
from .diagnostics import (DiagnosticsRecord, electric_energy, fractional_delta,
                          gauss_residual, kinetic_energy, leapfrog_magnetic_energy,
                          magnetic_energy)
from .field_solvers import FieldState, faraday_update
from .grid import Grid, binomial_filter
from .integrators import SchemeKind, initialize_fields, make_stepper
from .particles import ParticleSet, deposit_charge
from .scenarios import init_scenario, scenario_theory_rate, theory_landau_rate


@dataclass
class RunResult:
    config: RunConfig
    grid: Grid
    records: list[DiagnosticsRecord]
    te_history: np.ndarray
    particles: ParticleSet
    fields: FieldState
    wall_time: float

    @property
    def max_delta(self) -> float:
        return max((r.delta for r in self.records), default=0.0)

    @property
    def total_fallbacks(self) -> int:
        return sum(r.n_fallback for r in self.records)

    @property
    def max_fallbacks_per_step(self) -> int:
        return max((r.n_fallback for r in self.records), default=0)

    @property
    def max_gamma_dev(self) -> float:
        return max((r.max_gamma_dev for r in self.records), default=0.0)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _energies(grid, particles, fields, config) -> tuple[float, float, float]:
    ke = kinetic_energy(particles)
    ee = electric_energy(grid, fields.ex, fields.ey)
    scheme = config.scheme
    if not scheme.is_electromagnetic:
        return ke, ee, 0.0
    if scheme is SchemeKind.EMEC_LF:
        # Stored bz is B^{n-1/2}; W_B pairs it with the next half-step field,
        # reproduced here by a lookahead Faraday update.
        bz_ahead = faraday_update(grid, fields.bz, fields.e, config.dt)
        return ke, ee, leapfrog_magnetic_energy(grid, fields.bz, bz_ahead, config.c)
    return ke, ee, magnetic_energy(grid, fields.bz, config.c)


def _gauss(grid, particles, fields, config) -> float:
    if config.scheme.is_electromagnetic:
        return 0.0
    rho = deposit_charge(grid, particles.x, particles.y, particles.w, config.n_workers)
    if config.filter_enabled:
        rho = binomial_filter(grid, rho)
    return gauss_residual(grid, fields.e, rho)


def simulate(config: RunConfig, snapshot_hook=None) -> RunResult:
    """Run the configured scheme; raises RuntimeError on non-finite energy."""
    start = time.perf_counter()
    grid, particles, bz0 = init_scenario(config.scenario)
    stepper = make_stepper(config.scheme, grid, config.dt, c=config.c,
                           filter_enabled=config.filter_enabled,
                           n_chunks=config.n_workers)
    fields = initialize_fields(grid, particles, config.scheme, config.dt,
                               c=config.c, bz0=bz0,
                               filter_enabled=config.filter_enabled,
                               n_chunks=config.n_workers)

    ke, ee, be = _energies(grid, particles, fields, config)
    te_history = [ke + ee + be]
    records: list[DiagnosticsRecord] = []
    if snapshot_hook is not None:
        snapshot_hook(0, fields)

    for step in range(1, config.n_steps + 1):
        particles, fields, stats = stepper.step(particles, fields)
        ke, ee, be = _energies(grid, particles, fields, config)
        te = ke + ee + be
        if not math.isfinite(te):
            raise RuntimeError(f"non-finite total energy at step {step}")
        te_history.append(te)
        records.append(DiagnosticsRecord(
            step=step, t=step * config.dt, ke=ke, ee=ee, be=be, te=te,
            delta=0.0, n_fallback=stats.n_fallback,
            gauss_residual=_gauss(grid, particles, fields, config),
            max_gamma_dev=stats.max_gamma_dev))
        if snapshot_hook is not None:
            snapshot_hook(step, fields)

    te_arr = np.array(te_history)
    deltas = fractional_delta(te_arr)
    for i, record in enumerate(records):
        record.delta = float(deltas[i + 1])

    return RunResult(config=config, grid=grid, records=records, te_history=te_arr,
                     particles=particles, fields=fields,
                     wall_time=time.perf_counter() - start)


def write_diagnostics_csv(path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(DiagnosticsRecord.CSV_HEADER + "\n")
        for record in records:
            fh.write(record.csv_row() + "\n")


def _run_metadata(config: RunConfig) -> dict:
    spec = config.scenario
    meta = {
        "scheme": config.scheme.value,
        "scenario": spec.kind.value,
        "dt": config.dt,
        "n_steps": config.n_steps,
        "seed": config.seed,
        "nx": spec.nx, "ny": spec.ny, "lx": spec.lx, "ly": spec.ly,
        "n_c": spec.n_c,
        "c": config.c,
        "filter": config.filter_enabled,
        "gamma_theory": scenario_theory_rate(spec),
        "omega_theory": None,
    }
    if spec.kind.value == "landau":
        meta["omega_theory"] = theory_landau_rate(2.0 * math.pi / spec.lx)[0]
    return meta


def _snapshot_writer(out_dir: Path, config: RunConfig):
    stride = config.snapshot_stride
    if stride <= 0:
        return None

    def hook(step: int, fields: FieldState) -> None:
        if step % stride != 0:
            return
        names = {"Ex": fields.ex, "Ey": fields.ey}
        if config.scheme.is_electromagnetic:
            names["Bz"] = fields.bz
        else:
            names["phi"] = fields.phi
        for name, values in names.items():
            np.savetxt(out_dir / f"{name}_{step}.csv", values, delimiter=",", fmt="%.17g")

    return hook


def run(config: RunConfig, quiet: bool = False) -> RunResult:
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = simulate(config, snapshot_hook=_snapshot_writer(out_dir, config))
    write_diagnostics_csv(out_dir / "diagnostics.csv", result.records)
    with open(out_dir / "run.json", "w", encoding="utf-8") as fh:
        json.dump(_run_metadata(config), fh, indent=2)
        fh.write("\n")
    if not quiet:
        print(f"{config.scheme.value} / {config.scenario.kind.value}: "
              f"{config.n_steps} steps, max delta = {result.max_delta:.3e}, "
              f"total fallbacks = {result.total_fallbacks}, "
              f"wall time = {result.wall_time:.2f} s")
    return result


@dataclass
class SweepRow:
    dt: float
    max_delta: float
    max_gamma_dev: float
    total_fallbacks: int


def sweep_dt(config: RunConfig, dts, quiet: bool = False) -> list[SweepRow]:
    """Rerun at each dt over the same physical duration dt * n_steps."""
    dts = list(dts)
    if len(dts) < 2:
        raise ValueError("sweep needs at least two dt values")
    duration = config.dt * config.n_steps
    rows = []
    for dt in dts:
        steps = max(1, round(duration / dt))
        sub = replace(config, dt=dt, n_steps=steps)
        result = simulate(sub)
        rows.append(SweepRow(dt=dt, max_delta=result.max_delta,
                             max_gamma_dev=result.max_gamma_dev,
                             total_fallbacks=result.total_fallbacks))
        if not quiet:
            print(f"dt = {dt:g}: steps = {steps}, max delta = {rows[-1].max_delta:.3e}, "
                  f"max |Gamma - 1| = {rows[-1].max_gamma_dev:.3e}, "
                  f"fallbacks = {rows[-1].total_fallbacks}")
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / f"sweep_{config.scheme.value}.csv", "w", encoding="utf-8") as fh:
        fh.write("dt,max_delta,max_gamma_dev,total_fallbacks\n")
        for row in rows:
            fh.write(f"{row.dt:.17g},{row.max_delta:.17g},"
                     f"{row.max_gamma_dev:.17g},{row.total_fallbacks}\n")
    return rows
