"""Model parameters, validation, and the ``key = value`` config format."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping


class Culture(enum.IntEnum):
    """A scientific culture (the model's agent breed)."""

    BASIC = 0
    CLINICAL = 1

    @property
    def other(self) -> "Culture":
        return Culture.CLINICAL if self is Culture.BASIC else Culture.BASIC

    @property
    def tag(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Culture":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown culture tag {text!r}") from None


@dataclass(frozen=True)
class CultureParams:
    p_incumbent: float
    q_repeat: float
    mean_team_size: float
    team_size_jitter: int = 0

    @property
    def min_team_size(self) -> int:
        # fractional means split between floor and ceil, so floor is the low end
        return math.floor(self.mean_team_size) - self.team_size_jitter


@dataclass(frozen=True)
class ModelParams:
    per_culture: Mapping[Culture, CultureParams]
    mixing: float = 0.0
    mixing_jitter: float = 0.0
    team_culture_weight_basic: float = 0.5
    max_downtime: int = 40
    seed: int = 0

    def culture(self, culture: Culture) -> CultureParams:
        return self.per_culture[culture]

    def with_mixing(self, mixing: float) -> "ModelParams":
        return replace(self, mixing=mixing)

    def with_culture(self, culture: Culture, **changes) -> "ModelParams":
        per_culture = dict(self.per_culture)
        per_culture[culture] = replace(per_culture[culture], **changes)
        return replace(self, per_culture=per_culture)


@dataclass(frozen=True)
class Violation:
    field: str
    value: object
    constraint: str

    def __str__(self) -> str:
        return f"{self.field} = {self.value!r}: {self.constraint}"


class InvalidParams(ValueError):
    """Raised with every violated constraint, not only the first."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def _is_probability(x: object) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and 0.0 <= x <= 1.0


def check_params(params: ModelParams) -> list[Violation]:
    """Return all constraint violations of ``params`` (empty when valid)."""
    out: list[Violation] = []
    for culture in Culture:
        if culture not in params.per_culture:
            out.append(Violation(f"{culture.tag}.*", None, "missing culture entry"))
            continue
        cp = params.per_culture[culture]
        prefix = culture.tag
        if not _is_probability(cp.p_incumbent):
            out.append(Violation(f"{prefix}.p_incumbent", cp.p_incumbent, "p_incumbent out of [0,1]"))
        if not _is_probability(cp.q_repeat):
            out.append(Violation(f"{prefix}.q_repeat", cp.q_repeat, "q_repeat out of [0,1]"))
        size_ok = isinstance(cp.mean_team_size, (int, float)) and math.isfinite(cp.mean_team_size)
        jitter_ok = isinstance(cp.team_size_jitter, int) and cp.team_size_jitter >= 0
        if not size_ok or cp.mean_team_size < 2:
            out.append(Violation(f"{prefix}.mean_team_size", cp.mean_team_size, "mean_team_size below 2"))
        if not jitter_ok:
            out.append(Violation(f"{prefix}.team_size_jitter", cp.team_size_jitter,
                                 "team_size_jitter must be a non-negative integer"))
        if size_ok and jitter_ok and cp.mean_team_size >= 2 and cp.min_team_size < 2:
            out.append(Violation(f"{prefix}.team_size_jitter", cp.team_size_jitter,
                                 f"minimum drawn team size below 2 (got {cp.min_team_size})"))
    if not _is_probability(params.mixing):
        out.append(Violation("mixing", params.mixing, "mixing out of [0,1]"))
    if not (isinstance(params.mixing_jitter, (int, float)) and params.mixing_jitter >= 0):
        out.append(Violation("mixing_jitter", params.mixing_jitter, "mixing_jitter must be >= 0"))
    if not _is_probability(params.team_culture_weight_basic):
        out.append(Violation("team_culture_weight_basic", params.team_culture_weight_basic,
                             "team_culture_weight_basic out of [0,1]"))
    if not (isinstance(params.max_downtime, int) and params.max_downtime >= 1):
        out.append(Violation("max_downtime", params.max_downtime, "max_downtime must be an integer >= 1"))
    if not (isinstance(params.seed, int) and 0 <= params.seed < 2**64):
        out.append(Violation("seed", params.seed, "seed must be a 64-bit unsigned integer"))
    return out


def validate_params(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged, or raise :class:`InvalidParams`."""
    violations = check_params(params)
    if violations:
        raise InvalidParams(violations)
    return params


# -- config files -------------------------------------------------------------

_CULTURE_KEYS = ("p_incumbent", "q_repeat", "mean_team_size", "team_size_jitter")
_GLOBAL_KEYS = ("mixing", "mixing_jitter", "team_culture_weight_basic", "max_downtime", "seed")
CONFIG_KEYS: tuple[str, ...] = _GLOBAL_KEYS[:2] + tuple(
    f"{c.tag}.{k}" for c in Culture for k in _CULTURE_KEYS
) + _GLOBAL_KEYS[2:]

_INT_KEYS = {"max_downtime", "seed", "team_size_jitter"}


class ConfigError(ValueError):
    pass


def _convert(key: str, raw: str) -> float | int:
    leaf = key.rsplit(".", 1)[-1]
    try:
        if leaf in _INT_KEYS:
            return int(raw, 0)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as a number") from None


def parse_config_text(text: str, source: str = "<config>") -> dict[str, float | int]:
    """Parse ``key = value`` lines into a flat dict; unknown keys are errors."""
    values: dict[str, float | int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def apply_overrides(values: dict[str, float | int], overrides: Iterable[str]) -> dict[str, float | int]:
    """Apply ``key=value`` strings in order (last one wins for a repeated key)."""
    out = dict(values)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"override: unknown key {key!r}")
        out[key] = _convert(key, raw)
    return out


def params_from_values(values: Mapping[str, float | int], base: ModelParams | None = None) -> ModelParams:
    """Build params from flat config values, falling back to ``base`` (or built-in defaults)."""
    base = base or default_params()
    per_culture = {}
    for culture in Culture:
        cp = base.per_culture[culture]
        changes = {k: values[f"{culture.tag}.{k}"] for k in _CULTURE_KEYS if f"{culture.tag}.{k}" in values}
        per_culture[culture] = replace(cp, **changes)
    changes = {k: values[k] for k in _GLOBAL_KEYS if k in values}
    return replace(base, per_culture=per_culture, **changes)


def load_config(path: str | Path, overrides: Iterable[str] = ()) -> ModelParams:
    """Read a config file, apply overrides, and return (unvalidated) params."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    values = apply_overrides(parse_config_text(text, str(path)), overrides)
    return params_from_values(values)


def _fmt(value: float | int) -> str:
    return str(value) if isinstance(value, int) else repr(float(value))


def format_config(params: ModelParams, comments: Mapping[str, str] | None = None) -> str:
    """Serialize params in canonical key order; ``comments`` adds a trailing note per key."""
    comments = comments or {}
    lines = []
    for key in CONFIG_KEYS:
        if "." in key:
            tag, leaf = key.split(".")
            value = getattr(params.per_culture[Culture.parse(tag)], leaf)
        else:
            value = getattr(params, key)
        line = f"{key} = {_fmt(value)}"
        if key in comments:
            line += f"  # {comments[key]}"
        lines.append(line)
    return "\n".join(lines) + "\n"


# Empirical team profiles of the two departments; q_repeat is not observable
# from those statistics and stays at a neutral default.
INGER_PROFILE = {
    Culture.BASIC: CultureParams(p_incumbent=0.22, q_repeat=0.5, mean_team_size=7.48, team_size_jitter=1),
    Culture.CLINICAL: CultureParams(p_incumbent=0.45, q_repeat=0.5, mean_team_size=4.78, team_size_jitter=1),
}


def default_params(**changes) -> ModelParams:
    params = ModelParams(
        per_culture=dict(INGER_PROFILE),
        mixing=0.14,
        mixing_jitter=0.05,
        team_culture_weight_basic=0.3,
        max_downtime=40,
        seed=20180101,
    )
    return replace(params, **changes) if changes else params
