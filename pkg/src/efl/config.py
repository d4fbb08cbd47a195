"""Run configuration with explicit precedence:
defaults < config file < environment (EFL_*) < command-line flags.

The config file is a flat key = value list (toml-like: comments with #,
optional quotes around strings) whose keys match the RunConfig field names.
After ``resolve`` every field is explicit; nothing downstream re-reads the
environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

__all__ = ["RunConfig", "resolve", "read_config_file", "DEFAULTS"]

_INT_FIELDS = {"working_digits", "trivial_cutoff", "zero_count", "seed"}


@dataclass(frozen=True)
class RunConfig:
    zeros_path: str | None = None
    zeros_url: str | None = None
    cache_dir: str = "~/.cache/efl"
    working_digits: int = 25
    trivial_cutoff: int = 2000
    zero_count: int = 10_000
    output_format: str = "json"
    seed: int = 20080914

    def __post_init__(self):
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be json or csv")
        if self.working_digits < 15:
            raise ValueError("working_digits must be >= 15")

    @property
    def cache_path(self) -> Path:
        return Path(os.path.expanduser(self.cache_dir))


DEFAULTS = RunConfig()


def _coerce(name: str, value: str):
    if name in _INT_FIELDS:
        return int(value)
    return value


def read_config_file(path: str | Path) -> dict:
    """Parse the flat key = value config format."""
    out: dict = {}
    known = {f.name for f in fields(RunConfig)}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip().strip('"').strip("'")
        if key not in known:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, val)
    return out


def env_overrides(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    out = {}
    for f in fields(RunConfig):
        env_name = "EFL_" + f.name.upper()
        if env_name in environ:
            out[f.name] = _coerce(f.name, environ[env_name])
    return out


def resolve(
    file_values: dict | None = None,
    env: dict | None = None,
    flag_values: dict | None = None,
) -> RunConfig:
    """Merge the four layers in precedence order; ``flag_values`` entries
    that are None mean "flag not given" and do not override."""
    merged = {f.name: getattr(DEFAULTS, f.name) for f in fields(RunConfig)}
    for layer in (file_values or {}, env if env is not None else env_overrides()):
        merged.update({k: v for k, v in layer.items() if v is not None})
    merged.update({k: v for k, v in (flag_values or {}).items() if v is not None})
    return RunConfig(**merged)
