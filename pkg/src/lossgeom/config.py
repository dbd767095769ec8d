"""Flat key=value run configuration.

Grammar: one ``key = value`` per line; blank lines and ``#`` comments are
skipped; inline ``# ...`` trails are allowed after the value. Reals accept
scientific notation, booleans accept true/false/yes/no/1/0. Unknown and
duplicate keys are errors (with line numbers), not warnings; missing keys
take the documented defaults (the reference model configuration and the
default sweep grid).

Recognized keys: the :class:`~lossgeom.params.ModelParams` fields
(n_examples, n_classes, n_weights, sigma_z, sigma_c, sigma_e, length_beta,
target_accuracy, seed, hyperplane_dim), the sweep block (sigma_z_min,
sigma_z_max, points, scale, gamma, sigma_z_ref, repeats, fixed_sigma_e),
output_dir and emit_svg.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .experiments import SweepSpec
from .params import ModelParams


class ConfigError(ValueError):
    """Configuration file rejected; message carries path and line number."""


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    sweep: SweepSpec
    fixed_sigma_e: bool = False
    output_dir: str = "out"
    emit_svg: bool = False


_INT_KEYS = {"n_examples", "n_classes", "n_weights", "seed", "hyperplane_dim",
             "points", "repeats"}
_FLOAT_KEYS = {"sigma_z", "sigma_c", "sigma_e", "length_beta", "target_accuracy",
               "sigma_z_min", "sigma_z_max", "gamma", "sigma_z_ref"}
_BOOL_KEYS = {"emit_svg", "fixed_sigma_e"}
_STR_KEYS = {"scale", "output_dir"}
_PARAM_KEYS = {f.name for f in fields(ModelParams)}
_SWEEP_KEYS = {f.name for f in fields(SweepSpec)}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS

_TRUE_WORDS = {"true", "yes", "1"}
_FALSE_WORDS = {"false", "no", "0"}


def _parse_value(key: str, raw: str, where: str) -> object:
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{where}: key '{key}' needs an integer, got {raw!r}")
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{where}: key '{key}' needs a real number, got {raw!r}")
    if key in _BOOL_KEYS:
        word = raw.lower()
        if word in _TRUE_WORDS:
            return True
        if word in _FALSE_WORDS:
            return False
        raise ConfigError(f"{where}: key '{key}' needs a boolean, got {raw!r}")
    return raw


def parse_config(path: str) -> RunConfig:
    """Parse and validate a config file; empty file means all defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()

    seen: dict[str, object] = {}
    for lineno, line in enumerate(lines, start=1):
        where = f"{path}:{lineno}"
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{where}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"{where}: unknown key '{key}'")
        if key in seen:
            raise ConfigError(f"{where}: duplicate key '{key}'")
        if not raw:
            raise ConfigError(f"{where}: key '{key}' has no value")
        seen[key] = _parse_value(key, raw, where)

    try:
        params = ModelParams(**{k: v for k, v in seen.items() if k in _PARAM_KEYS})
        sweep = SweepSpec(**{k: v for k, v in seen.items() if k in _SWEEP_KEYS})
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return RunConfig(
        params=params,
        sweep=sweep,
        fixed_sigma_e=bool(seen.get("fixed_sigma_e", False)),
        output_dir=str(seen.get("output_dir", "out")),
        emit_svg=bool(seen.get("emit_svg", False)),
    )
