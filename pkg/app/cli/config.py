"""
Run configuration for the CLI: flags, optionally layered over a JSON file
whose keys mirror the flag names (``t-max`` or ``t_max``). Flags win.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from app.errors import ConfigError


FORMATS = ("csv", "json")

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "sr-geodesic": {"zeta": 0.0, "t_max": 2.0 * math.pi, "dt": 0.01, "twin": False, "format": "csv"},
    "riem-geodesic": {"t_max": 2.0 * math.pi, "dt": 0.01, "format": "csv"},
    "connect": {"tol": 1e-9, "format": "json"},
    "verify": {"format": "json"},
    "ray-scan": {"horizon": 50.0, "step": 0.25, "format": "csv"},
    "distance-probe": {"format": "json"},
}

# flags that are run plumbing rather than parameters
_PLUMBING = {"command", "config", "output", "format", "n", "handler"}


def parse_float_list(text: str) -> Tuple[float, ...]:
    """'0.6,0.8' -> (0.6, 0.8); locale independent."""
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [part for part in str(text).split(",") if part.strip()]
    try:
        values = tuple(float(item) for item in items)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Cannot parse {text!r} as a comma-separated list of numbers.") from exc
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"List {text!r} contains a non-finite number.")
    return values


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON object; OSError propagates (I/O failure), bad JSON is a ConfigError."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object.")
    return {str(key).replace("-", "_"): value for key, value in payload.items()}


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    values: Dict[str, Any] = field(default_factory=dict)
    output: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.n is not None and (not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1):
            raise ConfigError(f"--n must be a positive integer, got {self.n!r}.")
        if self.format not in FORMATS:
            raise ConfigError(f"--format must be one of {FORMATS}, got {self.format!r}.")

    def get(self, key: str, default: Any = None) -> Any:
        value = self.values.get(key)
        return default if value is None else value

    def require(self, key: str) -> Any:
        value = self.values.get(key)
        if value is None:
            flag = "--" + key.replace("_", "-")
            raise ConfigError(f"Missing {flag}; {self.command} requires it.")
        return value

    def float_list(self, key: str, required: bool = True) -> Optional[Tuple[float, ...]]:
        value = self.require(key) if required else self.values.get(key)
        return None if value is None else parse_float_list(value)

    def positive(self, key: str) -> float:
        try:
            value = float(self.require(key))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"--{key.replace('_', '-')} must be a number.") from exc
        if not (value > 0 and math.isfinite(value)):
            raise ConfigError(f"--{key.replace('_', '-')} must be positive, got {value!r}.")
        return value


def build_run_config(command: str, flags: Dict[str, Any]) -> RunConfig:
    """Merge defaults < config file < flags (flags that were not given are None)."""
    merged: Dict[str, Any] = dict(DEFAULTS.get(command, {}))
    config_path = flags.get("config")
    if config_path:
        merged.update({k: v for k, v in load_config_file(config_path).items() if v is not None})
    merged.update({k: v for k, v in flags.items() if v is not None})

    n = merged.pop("n", None)
    if n is not None and not isinstance(n, bool):
        try:
            n = int(n)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"--n must be a positive integer, got {n!r}.") from exc
    output = merged.pop("output", None)
    fmt = merged.pop("format", "csv")
    values = {k: v for k, v in merged.items() if k not in _PLUMBING}
    return RunConfig(command=command, n=n, values=values, output=output, format=fmt)
