"""Experiment configuration: flat key = value files and their validation.

The format is deliberately dumb: UTF-8 text, one ``key = value`` pair per
line, ``#`` starts a comment, lists are comma-separated.  Every key has a
default, so an empty file (or no file at all) is a valid configuration.
Unknown keys are rejected instead of ignored; a silently skipped typo in
``delta_exponent`` would change the whole sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence

from .calibrated import OMEGA_THRESHOLD
from .errors import ConfigError

_MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated knobs shared by all CLI commands.

    table        path of the coefficient cache (created by the coeffs command)
    n            coefficient count used when (re)building the cache
    ms           window starts M for the mean-square sweep
    ks           denominators k for the mean-square sweep
    h_policy     twist rule; "unit" means h = 1, untwisted at k = 1
    delta_coeff  c in the window rule Delta = c k M^p
    delta_exponent  p in the window rule, admissible range (1/2, 1]
    rise_fraction   weight ramp width as a fraction of Delta
    node_budget  quadrature node ceiling per oscillatory integral
    out          output directory for CSV / JSON / SVG artifacts
    seed         RNG seed; fixing it pins every sampled x to the byte
    """

    table: str = "tau.cache"
    n: int = 1_000_000
    ms: tuple = (1.0e4, 3.0e4, 1.0e5, 3.0e5)
    ks: tuple = (1, 2, 3, 5, 7)
    h_policy: str = "unit"
    delta_coeff: float = 4.0
    delta_exponent: float = 0.55
    rise_fraction: float = 0.25
    node_budget: int = 2_000_000
    out: str = "out"
    seed: int = 20260815
    omega_delta: float = 1.0e3
    omega_windows: int = 100
    omega_threshold: float = OMEGA_THRESHOLD
    voronoi_ms: tuple = (1.0e4, 1.0e5)
    voronoi_ks: tuple = (1, 3, 5)
    voronoi_samples: int = 50

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n must be a positive count, got {self.n}")
        if not self.ms or any(m < 2.0 for m in self.ms):
            raise ConfigError(f"ms must be window starts >= 2, got {self.ms}")
        if not self.ks or any(k < 1 for k in self.ks):
            raise ConfigError(f"ks must be denominators >= 1, got {self.ks}")
        if self.h_policy != "unit":
            raise ConfigError(
                f"unknown h_policy {self.h_policy!r}; only 'unit' is defined"
            )
        if self.delta_coeff <= 0.0:
            raise ConfigError(f"delta_coeff must be > 0, got {self.delta_coeff}")
        if not 0.5 < self.delta_exponent <= 1.0:
            raise ConfigError(
                "delta_exponent must lie in (1/2, 1], got "
                f"{self.delta_exponent}"
            )
        if not 0.0 < self.rise_fraction <= 0.5:
            raise ConfigError(
                f"rise_fraction must lie in (0, 1/2], got {self.rise_fraction}"
            )
        if self.node_budget < 16:
            raise ConfigError(
                f"node_budget below one quadrature panel: {self.node_budget}"
            )
        if not 0 <= self.seed <= _MAX_SEED:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if self.omega_delta < 1.0:
            raise ConfigError(
                f"omega_delta must be >= 1, got {self.omega_delta}"
            )
        if self.omega_windows < 1:
            raise ConfigError(
                f"omega_windows must be >= 1, got {self.omega_windows}"
            )
        if self.omega_threshold <= 0.0:
            raise ConfigError(
                f"omega_threshold must be > 0, got {self.omega_threshold}"
            )
        if not self.voronoi_ms or any(m < 2.0 for m in self.voronoi_ms):
            raise ConfigError(f"voronoi_ms must be >= 2, got {self.voronoi_ms}")
        if not self.voronoi_ks or any(k < 1 for k in self.voronoi_ks):
            raise ConfigError(f"voronoi_ks must be >= 1, got {self.voronoi_ks}")
        if self.voronoi_samples < 1:
            raise ConfigError(
                f"voronoi_samples must be >= 1, got {self.voronoi_samples}"
            )


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _parse_float(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ConfigError(f"{key}: expected a finite number, got {text!r}")
    return value


def _parse_list(key: str, text: str, item):
    parts = [p.strip() for p in text.split(",")]
    if any(not p for p in parts):
        raise ConfigError(f"{key}: empty entry in list {text!r}")
    return tuple(item(key, p) for p in parts)


# key -> value parser; the dataclass does range validation afterwards
_SCHEMA = {
    "table": lambda k, v: v,
    "n": _parse_int,
    "ms": lambda k, v: _parse_list(k, v, _parse_float),
    "ks": lambda k, v: _parse_list(k, v, _parse_int),
    "h_policy": lambda k, v: v,
    "delta_coeff": _parse_float,
    "delta_exponent": _parse_float,
    "rise_fraction": _parse_float,
    "node_budget": _parse_int,
    "out": lambda k, v: v,
    "seed": _parse_int,
    "omega_delta": _parse_float,
    "omega_windows": _parse_int,
    "omega_threshold": _parse_float,
    "voronoi_ms": lambda k, v: _parse_list(k, v, _parse_float),
    "voronoi_ks": lambda k, v: _parse_list(k, v, _parse_int),
    "voronoi_samples": _parse_int,
}

assert set(_SCHEMA) == {f.name for f in fields(ExperimentConfig)}


def parse_config(path) -> ExperimentConfig:
    """Read a key = value file and return the validated configuration."""
    text = Path(path).read_text(encoding="utf-8")
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in overrides:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        overrides[key] = _SCHEMA[key](key, value)
    return ExperimentConfig(**overrides)


def load_config(path=None, **overrides) -> ExperimentConfig:
    """parse_config when a path is given, defaults otherwise, then apply
    keyword overrides (used for CLI flags); None overrides are ignored."""
    cfg = parse_config(path) if path is not None else ExperimentConfig()
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **cleaned) if cleaned else cfg


def config_lines(cfg: ExperimentConfig) -> Sequence[str]:
    """Render a configuration back to canonical key = value lines.

    The output directory is skipped: it says where artifacts land, not
    what was computed, and reports must not change bytes when it moves.
    """
    out = []
    for f in fields(ExperimentConfig):
        if f.name == "out":
            continue
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            rendered = ", ".join(_render_scalar(v) for v in value)
        else:
            rendered = _render_scalar(value)
        out.append(f"{f.name} = {rendered}")
    return out


def _render_scalar(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
