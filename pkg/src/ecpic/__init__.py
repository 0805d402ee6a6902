"""Energy-conserving explicit particle-in-cell schemes (2D2V, periodic,
pseudospectral fields)."""

from .config import ConfigError, RunConfig, load_config, parse_config
from .diagnostics import (DiagnosticsRecord, electric_energy, field_energy,
                          fractional_delta, gauss_residual, kinetic_energy,
                          leapfrog_magnetic_energy, magnetic_energy)
from .field_solvers import (FieldState, PsatdCoefficients, ampere_update,
                            cn_maxwell_step, faraday_update,
                            leapfrog_initial_bz_half, leapfrog_maxwell_step,
                            make_psatd_coefficients, maxwell_e_update,
                            poisson_solve, psatd_step, psatd_time_averaged_e)
from .grid import (Grid, VectorGrid, binomial_filter, binomial_filter_vector,
                   curl_b, curl_e, divergence, gradient, inverse_laplacian,
                   laplacian)
from .integrators import (SchemeKind, StepStats, initialize_fields, make_stepper)
from .particles import (ParticleSet, deposit_charge, deposit_current,
                        gather_scalar, gather_vector, shape_tent,
                        wrap_coordinate)
from .pushers import (GammaResult, boris_step, boris_velocity_update,
                      gamma_factor, half_drift, implicit_half_velocity)
from .runner import RunResult, run, simulate, sweep_dt
from .scenarios import (ScenarioKind, ScenarioSpec, init_landau, init_scenario,
                        init_two_stream, init_weibel, landau_spec,
                        scenario_theory_rate, theory_landau_rate,
                        theory_two_stream_rate, two_stream_spec,
                        weibel_run1_spec)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
