"""Run configuration: a sectioned ``key = value`` file plus command-line overrides.

Example::

    [run]
    mode = sweep
    sweep_mode = cci
    workers = 2

    [model]
    gamma = -0.2
    n_particles = 5, 25
    grid_m = 256

    [solver]
    tol_grad = 1e-9

Every key is validated before anything is solved; unknown sections or keys
are an error.  ``gamma`` and ``n_particles`` accept comma-separated lists,
which only the ``sweep`` mode may use with more than one value.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .optimize import INIT_KINDS, SolveConfig

MODES = ("cci", "gp", "exact2", "fock", "sweep", "fig1", "fig2")
SWEEP_MODES = ("cci", "gp")
OUT_ENV = "CCI_RING_OUT"


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _float_list(text: str) -> tuple:
    return tuple(float(v) for v in _split(text))


def _int_list(text: str) -> tuple:
    return tuple(int(v) for v in _split(text))


def _split(text: str) -> list:
    items = [v.strip() for v in text.split(",")]
    if any(not v for v in items):
        raise ValueError(f"empty list entry in {text!r}")
    return items


# section -> key -> parser
SCHEMA = {
    "run": {"mode": str, "sweep_mode": str, "output_dir": str, "workers": int},
    "model": {"gamma": _float_list, "n_particles": _int_list, "grid_m": int},
    "exact": {"n_max": int, "fock_n_max": int, "extrapolation_n_max": int},
    "solver": {
        "max_iter": int, "tol_grad": float, "init": str, "kappa": float,
        "noise": float, "rng_seed": int, "recenter": _bool, "initial_step": float,
        "shrink": float, "armijo": float, "memory": int, "max_backtracks": int,
        "precondition": float,
    },
}


@dataclass(frozen=True)
class RunConfig:
    mode: str = "cci"
    gamma: tuple = (-0.2,)
    n_particles: tuple = (2,)
    grid_m: int = 256
    n_max: int = 64
    fock_n_max: int = 12
    extrapolation_n_max: int = 512
    sweep_mode: str = "cci"
    workers: int = 1
    output_dir: str | None = None
    solver: SolveConfig = field(default_factory=SolveConfig)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sweep_mode not in SWEEP_MODES:
            raise ConfigError(f"sweep_mode must be one of {SWEEP_MODES}")
        if not self.gamma or not self.n_particles:
            raise ConfigError("gamma and n_particles lists must be nonempty")
        for g in self.gamma:
            if g != g or abs(g) == float("inf"):
                raise ConfigError(f"gamma must be finite, got {g}")
        for n in self.n_particles:
            if n < 2:
                raise ConfigError(f"n_particles must be >= 2, got {n}")
        if self.mode != "sweep" and (len(self.gamma) > 1 or len(self.n_particles) > 1):
            raise ConfigError(f"value lists are only allowed in sweep mode, not {self.mode}")
        if self.grid_m < 8 or self.grid_m % 2:
            raise ConfigError(f"grid_m must be an even integer >= 8, got {self.grid_m}")
        if self.n_max < 8:
            raise ConfigError(f"n_max must be >= 8, got {self.n_max}")
        if self.extrapolation_n_max < 128:
            raise ConfigError("extrapolation_n_max must be >= 128 (five-level ladder)")
        if self.fock_n_max < 1:
            raise ConfigError(f"fock_n_max must be >= 1, got {self.fock_n_max}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.mode == "exact2" and self.n_particles[0] != 2:
            raise ConfigError("exact2 mode requires n_particles = 2")
        if self.mode == "fock" and not 2 <= self.n_particles[0] <= 4:
            raise ConfigError("fock mode requires 2 <= n_particles <= 4")

    @property
    def seed(self) -> int:
        return self.solver.rng_seed

    def resolved_output_dir(self) -> Path:
        if self.output_dir:
            return Path(self.output_dir)
        return Path(os.environ.get(OUT_ENV, "cci_ring_out")) / self.mode

    def flat(self) -> dict:
        """Flat ``config_*`` echo for the manifest."""
        out = {}
        for f in dataclasses.fields(self):
            if f.name in ("solver", "output_dir", "workers"):
                continue
            value = getattr(self, f.name)
            out[f"config_{f.name}"] = list(value) if isinstance(value, tuple) else value
        for f in dataclasses.fields(self.solver):
            out[f"config_solver_{f.name}"] = getattr(self.solver, f.name)
        return out


def _lookup(key: str) -> tuple:
    if "." in key:
        section, name = key.split(".", 1)
        if section in SCHEMA and name in SCHEMA[section]:
            return section, name
        raise ConfigError(f"unknown config key {key!r}")
    owners = [s for s, keys in SCHEMA.items() if key in keys]
    if len(owners) != 1:
        raise ConfigError(f"unknown config key {key!r}")
    return owners[0], key


def parse_config(text: str = "", overrides=(), mode: str | None = None,
                 seed: int | None = None, output_dir: str | None = None) -> RunConfig:
    """Build a validated RunConfig from file text, overrides and CLI values.

    Precedence, lowest first: defaults, file, ``overrides`` (``key=value`` or
    ``section.key=value``), then the explicit ``mode``/``seed``/``output_dir``.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    raw: dict = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key, value in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
            raw[(section, key)] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        raw[_lookup(key.strip())] = value.strip()

    values: dict = {}
    for (section, key), text_value in raw.items():
        try:
            values[(section, key)] = SCHEMA[section][key](text_value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {section}.{key}: {exc}") from exc
    if mode is not None:
        values[("run", "mode")] = mode
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        values[("solver", "rng_seed")] = seed
    if output_dir is not None:
        values[("run", "output_dir")] = output_dir

    solver_kwargs = {k: v for (s, k), v in values.items() if s == "solver"}
    if solver_kwargs.get("init", "bump") not in INIT_KINDS:
        raise ConfigError(f"solver.init must be one of {INIT_KINDS}")
    run_kwargs = {k: v for (s, k), v in values.items() if s != "solver"}
    return RunConfig(solver=SolveConfig(**solver_kwargs), **run_kwargs)


def load_config(path=None, **kwargs) -> RunConfig:
    text = Path(path).read_text() if path is not None else ""
    return parse_config(text, **kwargs)
