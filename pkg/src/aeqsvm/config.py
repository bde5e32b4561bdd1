"""Run configuration: defaults, flat ``key = value`` files, flag overrides."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .gqae import MAX_COUNTING_QUBITS, MODES


@dataclass(frozen=True)
class RunConfig:
    gamma: float = 1.0  # convenience default, not a tuned value
    h: int = 10
    k: int = 52
    kappa_cap: float = 1e8
    epsilon: float = 0.01
    seed: int = 0
    mode: str = "modal"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not 1 <= self.h <= MAX_COUNTING_QUBITS:
            raise ValueError(f"h must be in [1, {MAX_COUNTING_QUBITS}], got {self.h}")
        if not 1 <= self.k <= 52:
            raise ValueError(f"k must be in [1, 52], got {self.k}")
        if not self.kappa_cap >= 1:
            raise ValueError(f"kappa_cap must be >= 1, got {self.kappa_cap}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    def as_dict(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"float": float, "int": int, "str": str}


def _cast(key: str, value: str):
    return _CASTS[_TYPES[key]](value)


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _cast(key, value)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def resolve(config_path=None, **flags) -> RunConfig:
    """Defaults, then the config file, then any flag that is not ``None``."""
    values = read_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in flags.items() if v is not None and k in _TYPES})
    return replace(RunConfig(), **values)
