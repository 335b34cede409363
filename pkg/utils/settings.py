from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

from utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_GRID_RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)


@dataclass(frozen=True)
class Settings:
    """
    Numerical defaults shared by every module
    """

    # series arithmetic
    order: int = 64
    div_eps: float = 1e-12
    exp_const_tol: float = 1e-14
    eval_radius_cap: float = 0.999
    series_trust_radius: float = 0.7

    # operator evaluation
    singular_eps: float = 1e-12

    # certification grid
    grid_radii: tuple[float, ...] = DEFAULT_GRID_RADII
    grid_angles: int = 512
    grid_max_radius: float = 0.99

    # radius solver
    radius_cap: float = 0.999
    radius_step: float = 0.01
    bisection_tol: float = 1e-8
    scan_angles: int = 1024
    golden_tol: float = 1e-12
    theorem_margin: float = 0.01
    alert_tol: float = 1e-6

    # runs
    seed: int = 42
    samples: int = 100
    threads: int = 1
    radius_override: dict[str, float] = field(default_factory=dict)

    def replace(self, **changes) -> "Settings":
        return dataclasses.replace(self, **changes)


DEFAULT_SETTINGS = Settings()

_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(Settings)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind.startswith("tuple"):
            return tuple(float(part) for part in raw.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    raise ConfigError(f"{key!r} cannot be set from a config file")


def parse_config_text(text: str) -> dict:
    """
    Parse ``key = value`` lines into a dict of typed settings overrides
    """
    values: dict = {}
    overrides: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key.startswith("radius_override."):
            case = key.split(".", 1)[1]
            try:
                overrides[case] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad radius override {raw!r}") from exc
            continue
        if key not in _FIELD_TYPES or key == "radius_override":
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    if overrides:
        logger.warning("radius overrides active: %s", overrides)
        values["radius_override"] = overrides
    return values


def load_settings(path: str | Path | None = None, **flags) -> Settings:
    """
    Build settings from defaults, an optional config file, then flags.

    Flags whose value is None are treated as absent, so the file value (or the
    default) survives.
    """
    values: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        values.update(parse_config_text(text))
    for key, value in flags.items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown setting {key!r}")
        values[key] = value
    return DEFAULT_SETTINGS.replace(**values)
