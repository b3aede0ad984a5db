"""Flat key=value run configuration with fail-closed parsing.

Unknown keys are errors: a silently ignored typo in a physics parameter
is worse than a rejected file.  Keys are grouped into blocks (system,
otoc, sampling, angles, dressing); a command validates only the blocks it
needs, so one file can drive every subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

HAMILTONIAN_KINDS = ("xy_chain",)
INITIAL_STATE_KINDS = ("all_up", "maximally_mixed")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class SystemConfig:
    n_sites: int
    hamiltonian: str
    initial_state: str


@dataclass(frozen=True)
class OtocConfig:
    site_i: int
    axis_a: str
    site_j: int
    axis_b: str
    t_start: float
    t_stop: float
    n_times: int

    def time_grid(self) -> np.ndarray:
        if self.n_times == 1:
            return np.array([self.t_start])
        return np.linspace(self.t_start, self.t_stop, self.n_times)


@dataclass(frozen=True)
class SamplingConfig:
    n_shots: int
    seed: int
    n_repeats: int = 100


@dataclass(frozen=True)
class AnglesConfig:
    theta1: float = math.pi / 2
    theta2: float = math.pi / 2
    theta3: float = math.pi / 2


@dataclass(frozen=True)
class DressingConfig:
    omega_laser: float
    delta_laser: float
    omega_microwave: float
    delta_microwave: float
    c6: float
    c3: float
    r_min: float
    r_max: float
    n_r: int
    microwave: bool


@dataclass(frozen=True)
class RunConfig:
    system: SystemConfig | None = None
    otoc: OtocConfig | None = None
    sampling: SamplingConfig | None = None
    angles: AnglesConfig | None = None
    dressing: DressingConfig | None = None


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "on", "yes", "1"):
        return True
    if lowered in ("false", "off", "no", "0"):
        return False
    raise ValueError(f"expected a boolean (on/off), got {raw!r}")


def _parse_axis(raw: str) -> str:
    if raw not in ("x", "y", "z"):
        raise ValueError(f"expected one of x, y, z, got {raw!r}")
    return raw


def _parse_choice(choices: tuple[str, ...]) -> Callable[[str], str]:
    def parse(raw: str) -> str:
        if raw not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}, got {raw!r}")
        return raw

    return parse


def _parse_seed(raw: str) -> int:
    value = int(raw)
    if not 0 <= value < 2**64:
        raise ValueError(f"seed {value} outside the unsigned 64-bit range")
    return value


# key -> (block, parser)
_SCHEMA: dict[str, tuple[str, Callable[[str], object]]] = {
    "n_sites": ("system", int),
    "hamiltonian": ("system", _parse_choice(HAMILTONIAN_KINDS)),
    "initial_state": ("system", _parse_choice(INITIAL_STATE_KINDS)),
    "site_i": ("otoc", int),
    "axis_a": ("otoc", _parse_axis),
    "site_j": ("otoc", int),
    "axis_b": ("otoc", _parse_axis),
    "t_start": ("otoc", float),
    "t_stop": ("otoc", float),
    "n_times": ("otoc", int),
    "n_shots": ("sampling", int),
    "seed": ("sampling", _parse_seed),
    "n_repeats": ("sampling", int),
    "theta1": ("angles", float),
    "theta2": ("angles", float),
    "theta3": ("angles", float),
    "omega_laser": ("dressing", float),
    "delta_laser": ("dressing", float),
    "omega_microwave": ("dressing", float),
    "delta_microwave": ("dressing", float),
    "c6": ("dressing", float),
    "c3": ("dressing", float),
    "r_min": ("dressing", float),
    "r_max": ("dressing", float),
    "n_r": ("dressing", int),
    "microwave": ("dressing", _parse_bool),
}

# keys with spec-stated defaults; everything else must be spelled out
_OPTIONAL = {"theta1", "theta2", "theta3", "n_repeats"}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Parse and cross-validate a flat key=value configuration."""
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key, raw_value = key.strip(), raw_value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(
                f"{source}:{lineno}: duplicate key {key!r} (first set on line {lines[key]})"
            )
        _, parser = _SCHEMA[key]
        try:
            values[key] = parser(raw_value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: field {key!r}: {exc}") from None
        lines[key] = lineno

    blocks: dict[str, dict[str, object]] = {}
    for key, value in values.items():
        blocks.setdefault(_SCHEMA[key][0], {})[key] = value

    def build(block: str, cls):
        present = blocks.get(block)
        if present is None:
            return None
        required = {
            k for k, (b, _) in _SCHEMA.items() if b == block and k not in _OPTIONAL
        }
        missing = sorted(required - set(present))
        if missing:
            raise ConfigError(
                f"{source}: {block} block is incomplete, missing: {', '.join(missing)}"
            )
        return cls(**present)

    config = RunConfig(
        system=build("system", SystemConfig),
        otoc=build("otoc", OtocConfig),
        sampling=build("sampling", SamplingConfig),
        angles=build("angles", AnglesConfig),
        dressing=build("dressing", DressingConfig),
    )
    _cross_validate(config, source)
    return config


def _cross_validate(config: RunConfig, source: str) -> None:
    def fail(message: str):
        raise ConfigError(f"{source}: {message}")

    if config.system is not None:
        if config.system.n_sites < 1:
            fail("n_sites must be >= 1")
        if config.system.hamiltonian == "xy_chain" and config.system.n_sites < 2:
            fail("xy_chain needs n_sites >= 2")
    if config.otoc is not None:
        if config.otoc.n_times < 1:
            fail("n_times must be >= 1")
        if config.otoc.n_times > 1 and not config.otoc.t_stop > config.otoc.t_start:
            fail("time grid must be strictly increasing (t_stop > t_start)")
        if config.system is not None:
            for field in ("site_i", "site_j"):
                site = getattr(config.otoc, field)
                if not 1 <= site <= config.system.n_sites:
                    fail(f"{field}={site} outside the register (n_sites={config.system.n_sites})")
    if config.sampling is not None:
        if config.sampling.n_shots < 1:
            fail("n_shots must be >= 1")
        if config.sampling.n_repeats < 1:
            fail("n_repeats must be >= 1")
    if config.dressing is not None:
        d = config.dressing
        if d.omega_laser < 0 or d.omega_microwave < 0:
            fail("Rabi frequencies must be nonnegative")
        if not 0 < d.r_min < d.r_max:
            fail("need 0 < r_min < r_max")
        if d.n_r < 2:
            fail("n_r must be >= 2")


def require(config: RunConfig, block: str, command: str):
    """Fetch a block, raising a command-specific error when absent."""
    value = getattr(config, block)
    if value is None:
        keys = sorted(k for k, (b, _) in _SCHEMA.items() if b == block and k not in _OPTIONAL)
        raise ConfigError(
            f"command {command!r} needs the {block} block (keys: {', '.join(keys)})"
        )
    return value
