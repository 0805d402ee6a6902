"""Run configuration and the flat key = value config-file format."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .integrators import SchemeKind
from .scenarios import (ScenarioKind, ScenarioSpec, landau_spec,
                        two_stream_spec, weibel_run1_spec)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioSpec
    scheme: SchemeKind
    dt: float
    n_steps: int
    c: float | None = None
    filter_enabled: bool = True
    output_dir: str = "out"
    snapshot_stride: int = 0
    seed: int = 0
    n_workers: int = 1

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.n_steps < 1:
            raise ConfigError("steps must be at least 1")
        if self.snapshot_stride < 0:
            raise ConfigError("snapshot_stride must be nonnegative")
        if self.n_workers < 1:
            raise ConfigError("threads must be at least 1")
        if self.scheme.is_electromagnetic:
            if self.c is None:
                raise ConfigError("c is required for electromagnetic schemes")
            if self.c <= 0:
                raise ConfigError("c must be positive")
        elif self.c is not None:
            raise ConfigError("c is not accepted for electrostatic schemes")


_GLOBAL_KEYS = ("scenario", "scheme", "dt", "steps", "seed", "c", "filter",
                "snapshot_stride", "output", "threads")
_SCENARIO_KEYS = {
    ScenarioKind.LANDAU: ("nx", "ny", "box", "n_c", "alpha_x", "alpha_y"),
    ScenarioKind.TWO_STREAM: ("nx", "ny", "box", "n_c", "alpha_x", "v_b"),
    ScenarioKind.WEIBEL: ("ny", "n_c", "beta", "delta", "v0_1", "v0_2",
                          "b", "k0", "quiet_start"),
}
_ALL_KEYS = set(_GLOBAL_KEYS).union(*_SCENARIO_KEYS.values())


def _parse_lines(text: str) -> dict[str, tuple[str, int]]:
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        entries[key] = (value, lineno)
    return entries


def _convert(entries, key: str, conv, default=None):
    if key not in entries:
        return default
    value, lineno = entries[key]
    try:
        return conv(value)
    except (ValueError, KeyError):
        raise ConfigError(f"line {lineno}: invalid value {value!r} for {key!r}") from None


def _to_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(value)


def _build_scenario(entries, seed: int) -> ScenarioSpec:
    if "scenario" not in entries:
        raise ConfigError("missing required key 'scenario'")
    kind = _convert(entries, "scenario", lambda v: ScenarioKind(v.lower()))
    allowed = set(_SCENARIO_KEYS[kind]) | set(_GLOBAL_KEYS)
    for key, (_, lineno) in entries.items():
        if key not in allowed:
            raise ConfigError(
                f"line {lineno}: key {key!r} does not apply to scenario '{kind.value}'")

    def opt(key, conv, default):
        return _convert(entries, key, conv, default)

    if kind is ScenarioKind.LANDAU:
        return landau_spec(nx=opt("nx", int, 32), ny=opt("ny", int, 32),
                           box=opt("box", float, 22.0), n_c=opt("n_c", int, 500),
                           alpha_x=opt("alpha_x", float, 0.05),
                           alpha_y=opt("alpha_y", float, 0.05), seed=seed)
    if kind is ScenarioKind.TWO_STREAM:
        return two_stream_spec(nx=opt("nx", int, 32), ny=opt("ny", int, 32),
                               box=opt("box", float, 32.0), n_c=opt("n_c", int, 500),
                               alpha_x=opt("alpha_x", float, 0.01),
                               v_b=opt("v_b", float, 3.5), seed=seed)
    if not opt("quiet_start", _to_bool, True):
        raise ConfigError("the Weibel scenario requires quiet_start = true")
    spec = weibel_run1_spec(ny=opt("ny", int, 32), n_c=opt("n_c", int, 3200),
                            beta=opt("beta", float, 0.01), delta=opt("delta", float, 0.5),
                            b=opt("b", float, 0.001), k0=opt("k0", float, 0.2), seed=seed)
    return replace(spec, v0_1=opt("v0_1", float, 0.3), v0_2=opt("v0_2", float, 0.3))


def parse_config(text: str) -> RunConfig:
    entries = _parse_lines(text)
    for key in ("scheme", "dt", "steps"):
        if key not in entries:
            raise ConfigError(f"missing required key {key!r}")
    seed = _convert(entries, "seed", int, 0)
    scenario = _build_scenario(entries, seed)
    try:
        return RunConfig(
            scenario=scenario,
            scheme=_convert(entries, "scheme", lambda v: SchemeKind(v.lower())),
            dt=_convert(entries, "dt", float),
            n_steps=_convert(entries, "steps", int),
            c=_convert(entries, "c", float, None),
            filter_enabled=_convert(entries, "filter", _to_bool, True),
            output_dir=_convert(entries, "output", str, "out"),
            snapshot_stride=_convert(entries, "snapshot_stride", int, 0),
            seed=seed,
            n_workers=_convert(entries, "threads", int, 1),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def with_config_overrides(config: RunConfig, *, output_dir=None, seed=None,
                          scheme=None, dt=None, n_steps=None, n_workers=None) -> RunConfig:
    """Apply CLI overrides; a new seed also reseeds the scenario sampler."""
    changes = {}
    if output_dir is not None:
        changes["output_dir"] = output_dir
    if seed is not None:
        changes["seed"] = seed
        changes["scenario"] = replace(config.scenario, seed=seed)
    if scheme is not None:
        scheme = SchemeKind(scheme)
        changes["scheme"] = scheme
        if not scheme.is_electromagnetic and config.c is not None:
            changes["c"] = None
    if dt is not None:
        changes["dt"] = dt
    if n_steps is not None:
        changes["n_steps"] = n_steps
    if n_workers is not None:
        changes["n_workers"] = n_workers
    return replace(config, **changes)
