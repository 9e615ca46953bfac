"""Run configuration: defaults, ``key = value`` files and flag overrides."""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, fields

from .classifiers import KINDS
from .ex1 import AdjustConfig
from .ga import GaConfig
from .valuation import ValuationConfig

METHODS = ("shapley-ga", "shapley-exact", "chi2", "mi", "relief")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    method: str = "shapley-ga"
    mu: float = 1.0
    max_coalition_size: int = 20
    samples_per_size: int = 100
    population_size: int = 20
    top_k: int = 20
    seed: int = 0
    workers: int = 1
    fitness_floor: float = 1e-6
    adjustment_mode: str = "ex1"
    ex1_gamma: float = 0.5772
    ex1_min_block: int = 5
    inner_classifier: str = "logistic"
    inner_holdout_fraction: float = 0.25
    inner_folds: int = 0
    exact_ceiling: int = 16
    bins: int = 10
    relief_neighbors: int = 5
    relief_iterations: int = 200
    classifiers: tuple[str, ...] = KINDS
    folds: int = 5
    repeats: int = 2
    stratify: bool = True

    def validate(self) -> "RunConfig":
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, not {self.method!r}")
        for name in ("max_coalition_size", "samples_per_size", "population_size", "top_k",
                     "workers", "ex1_min_block", "exact_ceiling", "relief_neighbors",
                     "relief_iterations", "folds", "repeats"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.mu < 0:
            raise ConfigError("mu must be non-negative")
        unknown = [c for c in self.classifiers if c not in KINDS]
        if unknown or not self.classifiers:
            raise ConfigError(f"classifiers must be drawn from {KINDS}, got {list(self.classifiers)}")
        try:
            self.ga_config()
            self.adjust_config()
            self.valuation_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def ga_config(self) -> GaConfig:
        return GaConfig(self.population_size, self.samples_per_size, self.max_coalition_size,
                        self.seed, self.fitness_floor)

    def adjust_config(self) -> AdjustConfig:
        return AdjustConfig(self.adjustment_mode, self.ex1_gamma, self.ex1_min_block)

    def valuation_config(self) -> ValuationConfig:
        return ValuationConfig(self.mu, self.inner_classifier, self.inner_holdout_fraction,
                               self.inner_folds, self.seed)

    def method_label(self) -> str:
        if self.method.startswith("shapley"):
            return f"{self.method}(mu={self.mu:g})"
        return self.method

    def as_dict(self) -> dict:
        return asdict(self)


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _coerce(name: str, raw: str):
    default = getattr(RunConfig, name, None)
    if name == "classifiers":
        return tuple(p.strip() for p in raw.replace(";", ",").split(",") if p.strip())
    if isinstance(default, bool):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: {raw!r} is not a boolean")
    try:
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"{name}: {raw!r} is not a number") from None
    return raw.strip()


def read_config(path) -> dict:
    """Parse ``key = value`` lines (``#`` comments, optional ``[section]`` headers)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    out = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            name = key.strip().replace("-", "_")
            if name not in _FIELDS:
                raise ConfigError(f"{path}: unknown configuration key {key!r}")
            out[name] = _coerce(name, raw)
    return out


def build_config(path=None, **overrides) -> RunConfig:
    values = read_config(path) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values).validate()
