"""
Shared plumbing for the CLI commands: config files and flag merging, grid
and distribution descriptors, process models and table output.
"""

import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import ValidationError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from distributions.catalog import centered, make_distribution
from models.distribution import DistributionSpec
from models.experiment import ExperimentConfig
from models.processes import AR1Model, BranchingModel, RegressionModel
from utils.errors import ConfigError, ParameterError

logger = structlog.get_logger(__name__)

GRID_FIELDS = ("x_grid", "t_grid", "a_grid")
DIST_FLAGS = ("p", "lam", "shape", "scale", "m", "sigma2", "value", "start")


class CommandResult(NamedTuple):
    status: int
    columns: Tuple[str, ...]
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any]


# Parsing

def parse_grid(field: str, text: Any, line: Optional[int] = None) -> List[float]:
    """'lo:hi:count' (inclusive, evenly spaced), a comma list or a single number"""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    if isinstance(text, (int, float)):
        return [float(text)]

    raw = str(text).strip()
    try:
        if raw.count(":") == 2:
            lo, hi, count = raw.split(":")
            count = int(count)
            if count < 1:
                raise ValueError(f"count must be >= 1, got {count}")
            return [float(v) for v in np.linspace(float(lo), float(hi), count)]
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(field, f"malformed grid {raw!r}: {e}", line) from e
    if not values:
        raise ConfigError(field, "grid must not be empty", line)
    return values


def parse_descriptor(text: str) -> Tuple[str, Dict[str, float]]:
    """'name' or 'name:key=value,key=value'"""
    name, _, rest = text.partition(":")
    params: Dict[str, float] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParameterError(f"Malformed distribution descriptor {text!r}", f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise ParameterError(f"Malformed distribution descriptor {text!r}", f"{key}={value!r} is not a number") from e
    return name.strip(), params


def law_from_descriptor(text: str, extra: Optional[Dict[str, float]] = None) -> DistributionSpec:
    name, params = parse_descriptor(text)
    return make_distribution(name, {**params, **(extra or {})})


def zero_mean(law: DistributionSpec):
    """The law itself when centered already, else its centered version"""
    return law if abs(law.mean) <= 1e-12 else centered(law)


# Config files and flags

def _line_of(text: Optional[str], key: str) -> Optional[int]:
    if not text:
        return None
    for number, line in enumerate(text.splitlines(), start=1):
        if key in line:
            return number
    return None


def load_config_file(path: str) -> Tuple[Dict[str, Any], str]:
    """Read a .json or .toml experiment file; keys mirror the flags"""
    file = Path(path)
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e}") from e

    try:
        if file.suffix.lower() == ".toml":
            values = tomllib.loads(text)
        else:
            values = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("config", e.msg, e.lineno) from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("config", str(e)) from e

    if not isinstance(values, dict):
        raise ConfigError("config", "top level must be a table of keys")
    values = {key.replace("-", "_"): value for key, value in values.items()}

    known = set(ExperimentConfig.model_fields)
    for key in values:
        if key not in known:
            raise ConfigError(key, "unknown config key", _line_of(text, key))
    return values, text


def build_config(command: str, flags: Dict[str, Any], config_path: Optional[str] = None) -> ExperimentConfig:
    """Config file values overridden by the flags that were given"""
    values: Dict[str, Any] = {}
    text: Optional[str] = None
    if config_path:
        values, text = load_config_file(config_path)

    dist_params = dict(values.pop("dist_params", {}) or {})
    for key in DIST_FLAGS:
        value = flags.pop(f"dist_{key}", None)
        if value is not None:
            dist_params[key] = value

    known = set(ExperimentConfig.model_fields)
    values.update({k: v for k, v in flags.items() if k in known and v is not None})
    values["command"] = command
    values["dist_params"] = dist_params

    for field in GRID_FIELDS:
        if field in values and values[field] is not None:
            values[field] = parse_grid(field, values[field], _line_of(text, field))

    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "config"
        raise ConfigError(field, error["msg"], _line_of(text, field.split(".")[0])) from e


# Process models

def build_model(config: ExperimentConfig):
    """RegressionModel, AR1Model or BranchingModel from the config"""
    try:
        if config.model == "ar1":
            return AR1Model(theta=config.theta, sigma2=config.sigma2, tau2=config.tau2, zero_start=config.zero_start)
        if config.model == "regression":
            return RegressionModel(
                theta=config.theta,
                regressor=law_from_descriptor(config.regressor),
                noise=zero_mean(law_from_descriptor(config.noise)),
                paired=config.paired,
            )
        if config.model == "galton-watson":
            return BranchingModel(
                offspring=law_from_descriptor(config.offspring),
                extinction_policy=config.extinction_policy,
            )
    except ValidationError as e:
        raise ConfigError("model", str(e.errors()[0]["msg"])) from e
    raise ConfigError("model", "choose one of regression, ar1, galton-watson")


def require_grid(config: ExperimentConfig, field: str) -> List[float]:
    grid = getattr(config, field)
    if not grid:
        raise ConfigError(field, "grid is required for this command")
    return grid


# Output

def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "" if value is None else str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(rows: Sequence[Dict[str, Any]], columns: Sequence[str], out: Optional[str], fmt: str) -> None:
    """CSV (RFC 4180, 17 significant digits) or newline-delimited JSON"""
    try:
        handle = open(out, "w", encoding="utf-8", newline="") if out else sys.stdout
    except OSError as e:
        raise ConfigError("out", f"cannot write {out}: {e}") from e

    try:
        if fmt == "json":
            for row in rows:
                record = {column: _json_value(row.get(column)) for column in columns}
                handle.write(json.dumps(record, allow_nan=False) + "\n")
        else:
            writer = csv.writer(handle)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(row.get(column)) for column in columns])
    finally:
        if out:
            handle.close()
    logger.info("table_written", rows=len(rows), out=out or "<stdout>", format=fmt)


__all__ = [
    "CommandResult",
    "DIST_FLAGS",
    "parse_grid",
    "parse_descriptor",
    "law_from_descriptor",
    "zero_mean",
    "load_config_file",
    "build_config",
    "build_model",
    "require_grid",
    "write_table",
]
