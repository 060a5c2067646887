"""Experiment configuration: a flat ``key = value`` text format.

Lines starting with ``#`` and blank lines are ignored. Lists are comma
separated. Unknown keys are rejected.

    experiment = thm43-nondemocracy
    seed = 7
    m_values = 32, 64, 128, 256
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str | None = None
    gap: str | None = None
    norm: str | None = None
    seed: int | None = None
    dim: int | None = None
    budget: int | None = None
    depth: int | None = None
    size_cap: int | None = None
    m_values: tuple[int, ...] | None = None
    alpha: float | None = None
    horizon: int | None = None
    out: str | None = None
    construction: str | None = None

    def merged(self, **overrides) -> "ExperimentConfig":
        """Copy with every non-None override applied."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def explicit(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)
                if getattr(self, f.name) is not None}


_TYPES = {
    "experiment": str, "gap": str, "norm": str, "out": str, "construction": str,
    "seed": int, "dim": int, "budget": int, "depth": int, "size_cap": int, "horizon": int,
    "alpha": float,
}


def _convert(key: str, raw: str):
    raw = raw.strip()
    try:
        if key == "m_values":
            return tuple(int(v) for v in raw.split(",") if v.strip())
        return _TYPES[key](raw)
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    values = {}
    known = {f.name for f in fields(ExperimentConfig)}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)
