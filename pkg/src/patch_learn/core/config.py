"""
Configuration classes and enums for PatchLearn
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import yaml

from .exceptions import ConfigError

logger = logging.getLogger(__name__)


class LearnerKind(Enum):
    """Available base learners"""

    ANFIS = "anfis"
    POLYNOMIAL = "polynomial"
    TREE = "tree"
    ENSEMBLE = "ensemble"


class CandidateSource(Enum):
    """Where patch candidates come from"""

    RULE_PARTITIONS = "rule-partitions"
    EXPLICIT = "explicit"


class Combiner(Enum):
    """How ensemble members are combined"""

    AVERAGE = "average"
    BOOSTED_SUM = "boosted-sum"


class OutputFormat(Enum):
    """Report output formats"""

    CSV = "csv"
    JSON = "json"
    MARKDOWN = "markdown"


# Experiment id -> default maximum number of patches
DEFAULT_L_MAX: Dict[int, int] = {1: 2, 2: 2, 3: 5, 4: 2, 5: 3}

# Experiment id -> patch size below which a candidate is untrainable. The
# three-input experiments use one example per consequent coefficient
# ((M + 1) * 2^M = 32); elsewhere the patch learner decides.
DEFAULT_MIN_PATCH_EXAMPLES: Dict[int, int] = {3: 32, 5: 32}


@dataclass(frozen=True)
class AnfisConfig:
    """Settings for ANFIS training of a TSK system"""

    mfs_per_input: int = 2
    ridge_lambda: float = 1e-6
    premise_epochs: int = 50
    premise_step: float = 0.02

    def __post_init__(self):
        """Validate configuration after initialization"""
        if self.mfs_per_input < 2:
            raise ConfigError("mfs_per_input must be at least 2")
        if self.ridge_lambda < 0:
            raise ConfigError("ridge_lambda cannot be negative")
        if self.premise_epochs < 0:
            raise ConfigError("premise_epochs cannot be negative")
        if self.premise_step <= 0:
            raise ConfigError("premise_step must be positive")


@dataclass(frozen=True)
class PlConfig:
    """Settings for one patch learning run"""

    max_patches: int = 2
    alpha: float = 0.25
    min_patch_examples: Optional[int] = None
    candidate_source: CandidateSource = CandidateSource.RULE_PARTITIONS

    def __post_init__(self):
        """Validate configuration after initialization"""
        if self.max_patches < 0:
            raise ConfigError("max_patches cannot be negative")
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive")
        if self.min_patch_examples is not None and self.min_patch_examples < 1:
            raise ConfigError("min_patch_examples must be at least 1")

        # Ensure enum types
        if isinstance(self.candidate_source, str):
            object.__setattr__(
                self, "candidate_source", CandidateSource(self.candidate_source)
            )


@dataclass(frozen=True)
class BaselineConfig:
    """Settings for the Bagging and LSBoost comparison learners"""

    lsboost_shrinkage: float = 0.1
    tree_max_depth: int = 4
    tree_min_leaf: int = 5

    def __post_init__(self):
        """Validate configuration after initialization"""
        if not 0 <= self.lsboost_shrinkage <= 1:
            raise ConfigError("lsboost_shrinkage must lie in [0, 1]")
        if self.tree_max_depth < 0:
            raise ConfigError("tree_max_depth cannot be negative")
        if self.tree_min_leaf < 1:
            raise ConfigError("tree_min_leaf must be at least 1")


@dataclass(frozen=True)
class MackeyGlassConfig:
    """Integration and embedding settings for the Mackey-Glass series"""

    tau: float = 17.0
    x0: float = 1.2
    steps_per_unit: int = 10
    horizon: int = 1117
    lags: Tuple[int, ...] = (12, 6, 0)
    prediction_horizon: int = 6
    n_train: int = 617
    n_test: int = 500

    def __post_init__(self):
        """Validate configuration after initialization"""
        if not self.tau > 0:
            raise ConfigError("tau must be positive")
        if self.steps_per_unit < 1:
            raise ConfigError("steps_per_unit must be at least 1")
        delay_steps = self.steps_per_unit * self.tau
        if abs(delay_steps - round(delay_steps)) > 1e-9:
            raise ConfigError(
                f"steps_per_unit * tau = {delay_steps!r} must be an integer"
            )
        if self.horizon < 1:
            raise ConfigError("horizon must be at least 1")
        object.__setattr__(self, "lags", tuple(int(lag) for lag in self.lags))

    @property
    def delay_steps(self) -> int:
        return int(round(self.steps_per_unit * self.tau))


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration for one experiment run"""

    experiment_id: int
    l_max: Optional[int] = None
    alpha: float = 0.25
    mfs: int = 2
    seed: int = 0
    retrain_every: int = 1
    min_patch_examples: Optional[int] = None
    anfis: AnfisConfig = field(default_factory=AnfisConfig)
    baselines: BaselineConfig = field(default_factory=BaselineConfig)
    mackey_glass: MackeyGlassConfig = field(default_factory=MackeyGlassConfig)

    def __post_init__(self):
        """Validate configuration after initialization"""
        if self.experiment_id not in DEFAULT_L_MAX:
            raise ConfigError(
                f"Unknown experiment id {self.experiment_id}; "
                f"expected one of {sorted(DEFAULT_L_MAX)}"
            )
        if self.l_max is None:
            object.__setattr__(self, "l_max", DEFAULT_L_MAX[self.experiment_id])
        if self.min_patch_examples is None:
            object.__setattr__(
                self,
                "min_patch_examples",
                DEFAULT_MIN_PATCH_EXAMPLES.get(self.experiment_id),
            )
        if self.min_patch_examples is not None and self.min_patch_examples < 1:
            raise ConfigError("min_patch_examples must be at least 1")
        if self.l_max < 0:
            raise ConfigError("l_max cannot be negative")
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive")
        if self.retrain_every < 1:
            raise ConfigError("retrain_every must be at least 1")

        # The top-level mfs flag wins over the nested ANFIS setting
        if self.anfis.mfs_per_input != self.mfs:
            object.__setattr__(
                self, "anfis", dataclasses.replace(self.anfis, mfs_per_input=self.mfs)
            )

    def pl_config(self, max_patches: Optional[int] = None) -> PlConfig:
        """PL settings derived from this experiment"""
        return PlConfig(
            max_patches=self.l_max if max_patches is None else max_patches,
            alpha=self.alpha,
            min_patch_examples=self.min_patch_examples,
        )

    def with_overrides(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        """Return a new config with the given (possibly nested) values merged in"""
        return _merge_dataclass(self, overrides, path="")

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data echo of every resolved setting"""
        return _to_plain(dataclasses.asdict(self))


def load_overrides(path: Union[str, Path]) -> Dict[str, Any]:
    """Read an override mapping from a YAML file"""
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    with open(config_path, encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {config_path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{config_path} must contain a mapping at the top level")

    logger.debug(f"Loaded {len(data)} override(s) from {config_path}")
    return data


def _merge_dataclass(instance: Any, overrides: Mapping[str, Any], path: str) -> Any:
    """Merge a mapping into a (frozen) dataclass, recursing into nested configs"""
    known = {f.name: f for f in dataclasses.fields(instance)}
    changes: Dict[str, Any] = {}

    for key, value in overrides.items():
        name = key.replace("-", "_")
        if name not in known:
            raise ConfigError(f"Unknown config key '{path}{key}'")

        current = getattr(instance, name)
        if dataclasses.is_dataclass(current):
            if not isinstance(value, Mapping):
                raise ConfigError(f"Config key '{path}{key}' expects a mapping")
            changes[name] = _merge_dataclass(current, value, path=f"{path}{key}.")
        elif isinstance(current, tuple) and isinstance(value, list):
            changes[name] = tuple(value)
        else:
            changes[name] = value

    try:
        return dataclasses.replace(instance, **changes)
    except TypeError as e:
        raise ConfigError(f"Invalid override under '{path or '<root>'}': {e}") from e


def _to_plain(value: Any) -> Any:
    """Convert enums and tuples inside asdict() output into JSON-friendly data"""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_plain(v) for v in value]
    return value
