"""
Trained patch learning models and routing prediction
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..core.exceptions import ContractViolation
from ..fuzzy.partition import PatchBox
from ..learners.base_learner import BaseLearner, as_inputs


def loss(rmse: float, n_patches: int, alpha: float) -> float:
    """rmse * (L + 1) ** alpha"""
    if rmse < 0 or n_patches < 0 or not alpha > 0:
        raise ContractViolation(
            f"loss needs rmse >= 0, L >= 0, alpha > 0; got {rmse}, {n_patches}, {alpha}"
        )
    return float(rmse) * (n_patches + 1) ** alpha


@dataclass(frozen=True)
class Patch:
    """A recorded patch: its box, its trained learner and local error figures"""

    box: PatchBox
    learner: BaseLearner
    n_examples: int
    global_sse: float
    global_rmse: float
    local_rmse: float


@dataclass(frozen=True)
class StageRecord:
    """Training error after one PL step"""

    n_patches: int
    global_updated: bool
    rmse: float
    loss: float


def route(patches: Sequence[Patch], X: np.ndarray) -> np.ndarray:
    """Index of the first patch containing each row, -1 for the global model"""
    X = as_inputs(X)
    owner = np.full(X.shape[0], -1, dtype=int)
    for l, patch in enumerate(patches):
        claim = (owner == -1) & patch.box.contains(X)
        owner[claim] = l
    return owner


def route_predict(
    patches: Sequence[Patch], global_model: BaseLearner, X: np.ndarray
) -> np.ndarray:
    X = as_inputs(X)
    owner = route(patches, X)
    out = np.empty(X.shape[0])
    for l in range(-1, len(patches)):
        rows = np.flatnonzero(owner == l)
        if rows.size == 0:
            continue
        learner = global_model if l == -1 else patches[l].learner
        out[rows] = learner.predict(X[rows])
    return out


@dataclass(frozen=True)
class PlModel:
    """Updated global model plus an ordered collection of patch models"""

    patches: Tuple[Patch, ...]
    global_model: BaseLearner
    initial_global: BaseLearner
    alpha: float
    training_rmse: float
    loss: float
    global_update_skipped: bool = False
    stages: Tuple[StageRecord, ...] = ()
    skipped: Tuple[int, ...] = ()
    n_candidates: int = 0

    @property
    def n_patches(self) -> int:
        return len(self.patches)

    @property
    def n_inputs(self) -> int:
        return self.global_model.n_inputs

    @property
    def boxes(self) -> List[PatchBox]:
        return [patch.box for patch in self.patches]

    def predict(self, X: np.ndarray) -> np.ndarray:
        """First patch whose box contains x answers; otherwise the global model"""
        return route_predict(self.patches, self.global_model, X)

    def predict_one(self, x: Sequence[float]) -> float:
        return float(self.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def route(self, X: np.ndarray) -> np.ndarray:
        return route(self.patches, X)
