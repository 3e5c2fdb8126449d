"""
Ensemble baselines: Bagging over any learner and LSBoost over regression trees
"""

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..core.config import Combiner, LearnerKind
from ..core.exceptions import (
    ContractViolation,
    DegenerateRangeError,
    LearnerNotTrainable,
)
from .base_learner import BaseLearner, LearnerFactory, as_training_data
from .tree import TreeLearner

logger = logging.getLogger(__name__)

# rng, n -> row indices of one resample
Resampler = Callable[[np.random.Generator, int], np.ndarray]

MAX_RESAMPLE_ATTEMPTS = 5


def bootstrap(rng: np.random.Generator, n: int) -> np.ndarray:
    """n draws with replacement"""
    return rng.integers(0, n, size=n)


class EnsembleModel(BaseLearner):
    """Trained ensemble.

    average:     mean of the member predictions
    boosted-sum: initial + shrinkage * sum of the member predictions
    """

    kind = LearnerKind.ENSEMBLE

    def __init__(
        self,
        members: Sequence[BaseLearner],
        combiner: Combiner,
        shrinkage: float = 1.0,
        initial: float = 0.0,
        member_seeds: Sequence[int] = (),
    ):
        super().__init__()
        if not members:
            raise ContractViolation("An ensemble needs at least one member")
        widths = {member.n_inputs for member in members}
        if len(widths) != 1:
            raise ContractViolation(
                f"Members disagree on input width: {sorted(widths)}"
            )
        self.members: List[BaseLearner] = list(members)
        self.combiner = Combiner(combiner)
        self.shrinkage = float(shrinkage)
        self.initial = float(initial)
        self.member_seeds = tuple(int(s) for s in member_seeds)
        self.n_inputs = widths.pop()
        self.is_fitted = True

    def _fit(self, X: np.ndarray, y: np.ndarray):
        raise ContractViolation("Ensembles are built by bagging_train or lsboost_train")

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self.staged_predict(X)[-1]

    def staged_predict(self, X: np.ndarray) -> np.ndarray:
        """Row t holds the prediction of the first t+1 members"""
        outputs = np.vstack([member.predict(X) for member in self.members])
        running = np.cumsum(outputs, axis=0)
        if self.combiner is Combiner.AVERAGE:
            counts = np.arange(1, len(self.members) + 1)[:, None]
            return running / counts
        return self.initial + self.shrinkage * running

    def truncated(self, size: int) -> "EnsembleModel":
        """Ensemble of the first `size` members"""
        if not 1 <= size <= len(self.members):
            raise ContractViolation(
                f"Prefix size {size} outside [1, {len(self.members)}]"
            )
        return EnsembleModel(
            self.members[:size],
            self.combiner,
            self.shrinkage,
            self.initial,
            self.member_seeds[:size],
        )

    def __len__(self) -> int:
        return len(self.members)


def bagging_train(
    X: np.ndarray,
    y: np.ndarray,
    n_members: int,
    learner_factory: LearnerFactory,
    seed: int = 0,
    resampler: Optional[Resampler] = None,
) -> EnsembleModel:
    """Bootstrap aggregation with averaging.

    Member b draws its resamples from the b-th child of SeedSequence(seed), so
    the first B members of a larger ensemble are the B-member ensemble.
    An untrainable member is resampled, and dropped after
    MAX_RESAMPLE_ATTEMPTS failures.
    """
    if n_members < 1:
        raise ContractViolation(f"Bagging needs at least one member, got {n_members}")
    X, y = as_training_data(X, y)
    resampler = resampler or bootstrap
    children = np.random.SeedSequence(seed).spawn(n_members)

    members: List[BaseLearner] = []
    seeds: List[int] = []
    for b, child in enumerate(children):
        rng = np.random.default_rng(child)
        for attempt in range(1, MAX_RESAMPLE_ATTEMPTS + 1):
            rows = resampler(rng, y.size)
            learner = learner_factory()
            try:
                learner.fit(X[rows], y[rows])
            except (LearnerNotTrainable, DegenerateRangeError) as e:
                logger.debug(f"Bagging member {b} attempt {attempt} untrainable: {e}")
                continue
            members.append(learner)
            seeds.append(b)
            break
        else:
            logger.warning(
                f"Dropping bagging member {b} after "
                f"{MAX_RESAMPLE_ATTEMPTS} failed resamples"
            )

    if not members:
        raise LearnerNotTrainable("No bagging member could be trained")
    return EnsembleModel(members, Combiner.AVERAGE, member_seeds=seeds)


def lsboost_train(
    X: np.ndarray,
    y: np.ndarray,
    rounds: int,
    shrinkage: float = 0.1,
    max_depth: int = 4,
    min_leaf: int = 5,
) -> EnsembleModel:
    """Least-squares boosting: F_0 = mean(y), F_t = F_{t-1} + shrinkage * tree_t"""
    if rounds < 1:
        raise ContractViolation(f"LSBoost needs at least one round, got {rounds}")
    if shrinkage < 0:
        raise ContractViolation(f"Shrinkage must be non-negative, got {shrinkage}")
    X, y = as_training_data(X, y)
    initial = float(y.mean())
    current = np.full(y.size, initial)

    trees: List[BaseLearner] = []
    for t in range(rounds):
        tree = TreeLearner(max_depth, min_leaf).fit(X, y - current)
        current = current + shrinkage * tree.predict(X)
        trees.append(tree)
        logger.debug(
            f"LSBoost round {t + 1}/{rounds}: "
            f"train rmse {np.sqrt(np.mean((y - current) ** 2)):.6g}"
        )
    return EnsembleModel(
        trees, Combiner.BOOSTED_SUM, shrinkage=shrinkage, initial=initial
    )
