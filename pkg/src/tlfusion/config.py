"""Run configuration: an INI-style file with sections, overridden by command-line flags.

Example::

    [field]
    backend = modp
    p = 2147483629
    seed = 0

    [params]
    z1 = 3
    z2 = -q*z1

    [run]
    format = json
    cache_dir = .tlfusion-cache
    radius = 12
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .scalars import DEFAULT_PRIMES, ConfigError, Field

FORMATS = ("json", "tsv")
BACKENDS = ("exact", "modp", "cyclotomic")


@dataclass
class RunConfig:
    backend: str = "modp"
    p: int | None = None
    seed: int = 0
    params: dict[str, str] = dc_field(default_factory=dict)
    format: str = "json"
    cache_dir: str | None = None
    radius: int | None = None
    extra: dict[str, str] = dc_field(default_factory=dict)

    def field(self) -> Field:
        if self.backend == "modp":
            f = Field.modp(self.p or DEFAULT_PRIMES[0], seed=self.seed)
        elif self.backend == "cyclotomic":
            if self.p is None:
                raise ConfigError("the cyclotomic backend needs p")
            f = Field.cyclotomic(self.p)
        elif self.backend == "exact":
            f = Field.exact()
        else:
            raise ConfigError(f"unknown backend {self.backend!r}")
        # bindings may refer to each other, so bind in file order
        for name, expr in self.params.items():
            f.bind(name, expr)
        return f

    def fingerprint(self) -> dict:
        return {"backend": self.backend, "p": self.p, "seed": self.seed, "params": dict(self.params)}


def _line_of(text: str, section: str, key: str) -> int | None:
    current = None
    for k, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
        elif current == section and "=" in s and s.split("=", 1)[0].strip() == key:
            return k
    return None


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    """Read ``path`` (if any) and apply ``overrides`` (flag values that are not None)."""
    cfg = RunConfig()
    if path:
        text = Path(path).read_text()
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text, source=path)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        for section in parser.sections():
            for key, value in parser.items(section):
                where = f"{path}:{_line_of(text, section, key)}"
                try:
                    _apply(cfg, section, key, value)
                except (ValueError, ConfigError) as exc:
                    raise ConfigError(f"{where}: {exc}") from exc
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "params":
            cfg.params.update(value)
        else:
            _apply(cfg, "run" if key not in ("backend", "p", "seed") else "field", key, value)
    return cfg


def _apply(cfg: RunConfig, section: str, key: str, value) -> None:
    if section == "params":
        cfg.params[key] = str(value)
    elif key == "backend":
        if value not in BACKENDS:
            raise ConfigError(f"backend must be one of {BACKENDS}, got {value!r}")
        cfg.backend = str(value)
    elif key in ("p", "seed", "radius"):
        try:
            setattr(cfg, key, int(value))
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    elif key == "format":
        if value not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {value!r}")
        cfg.format = str(value)
    elif key == "cache_dir":
        cfg.cache_dir = str(value)
    elif section in ("field", "run"):
        cfg.extra[key] = str(value)
    else:
        raise ConfigError(f"unknown section [{section}]")
