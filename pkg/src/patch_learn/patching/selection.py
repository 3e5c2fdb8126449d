"""
Choosing the number of patches by minimizing the complexity-penalized loss
"""

import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..core.config import PlConfig
from ..fuzzy.partition import PatchBox
from ..learners.base_learner import LearnerFactory, as_training_data
from .model import PlModel
from .patch_learner import PatchLearner, candidate_sse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepEntry:
    n_patches: int
    model: PlModel
    rmse: float
    loss: float
    seconds: float


@dataclass(frozen=True)
class SweepResult:
    best_l: int
    entries: List[SweepEntry]
    truncated: bool = False

    @property
    def best(self) -> SweepEntry:
        return self.entries[self.best_l]

    @property
    def losses(self) -> List[float]:
        return [entry.loss for entry in self.entries]


def best_index(losses: Sequence[float]) -> int:
    """Position of the smallest loss, earliest on ties"""
    return int(np.argmin(np.asarray(losses, dtype=float)))


def select_num_patches(
    X: np.ndarray,
    y: np.ndarray,
    config: PlConfig,
    global_factory: LearnerFactory,
    patch_factory: LearnerFactory,
    boxes: Optional[Sequence[PatchBox]] = None,
) -> SweepResult:
    """Train PL models for L = 0..L_max and keep the one with the smallest loss.

    With rule-partition candidates the last candidate always stays with the
    global model, so L stops at (number of candidates - 1). Patches for L are
    a prefix of those for L + 1; they are grown once and only the global
    update is repeated per L.
    """
    X, y = as_training_data(X, y)
    learner = PatchLearner(config, global_factory, patch_factory, boxes)

    started = time.perf_counter()
    initial_global = learner.fit_global(X, y)
    global_seconds = time.perf_counter() - started

    l_max = config.max_patches
    truncated = False
    candidates: List[PatchBox] = []
    if l_max > 0:
        candidates = learner.candidates(initial_global)
        if learner.uses_rule_partitions and l_max > len(candidates) - 1:
            logger.warning(
                f"Only {len(candidates)} candidates; sweeping L up to "
                f"{len(candidates) - 1} instead of {l_max}"
            )
            l_max = max(len(candidates) - 1, 0)
            truncated = True

    growth = None
    if l_max > 0:
        sse = candidate_sse(initial_global, X, y, candidates)
        growth = learner.grow(X, y, candidates, sse, l_max)
        if len(growth.patches) < l_max:
            logger.warning(
                f"Only {len(growth.patches)} trainable patches; sweep stops at that L"
            )
            l_max = len(growth.patches)
            truncated = True

    entries: List[SweepEntry] = []
    for n_patches in range(l_max + 1):
        started = time.perf_counter()
        patches = growth.patches[:n_patches] if growth else []
        skipped = growth.skipped_for(n_patches) if growth else ()
        model = learner.finish(
            X, y, initial_global, patches, skipped, n_candidates=len(candidates)
        )
        seconds = global_seconds + time.perf_counter() - started
        if n_patches:
            seconds += growth.seconds[n_patches - 1]
        entries.append(
            SweepEntry(n_patches, model, model.training_rmse, model.loss, seconds)
        )
        logger.info(
            f"L={n_patches}: rmse {model.training_rmse:.4g}, loss {model.loss:.4g}"
        )

    best = best_index([entry.loss for entry in entries])
    logger.info(f"Best number of patches: {best} (loss {entries[best].loss:.4g})")
    return SweepResult(best_l=best, entries=entries, truncated=truncated)
