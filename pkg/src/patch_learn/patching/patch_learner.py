"""
Patch Learner
Trains a global model, carves high-error patches out of its input domain,
fits local patch models and refits the global model on what is left.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import CandidateSource, PlConfig
from ..core.exceptions import (
    ContractViolation,
    DegenerateRangeError,
    LearnerNotTrainable,
)
from ..core.metrics import rmse
from ..fuzzy.partition import PatchBox
from ..learners.base_learner import BaseLearner, LearnerFactory, as_training_data
from .model import Patch, PlModel, StageRecord, loss, route_predict

logger = logging.getLogger(__name__)


def candidate_sse(
    model: BaseLearner, X: np.ndarray, y: np.ndarray, boxes: Sequence[PatchBox]
) -> np.ndarray:
    """Sum of squared residuals of `model` inside each box (0 for empty boxes)"""
    X, y = as_training_data(X, y)
    squared = (model.predict(X) - y) ** 2
    return np.array([float(squared[box.contains(X)].sum()) for box in boxes])


def _reaches(lo: float, hi: float, closed: bool) -> bool:
    return lo < hi or (closed and lo == hi)


def _overlaps(first: PatchBox, second: PatchBox) -> bool:
    """True when some point lies in both boxes; closed faces count as shared"""
    return all(
        _reaches(lo1, hi2, closed2) and _reaches(lo2, hi1, closed1)
        for (lo1, hi1), closed1, (lo2, hi2), closed2 in zip(
            first.bounds, first.closed_upper, second.bounds, second.closed_upper
        )
    )


@dataclass
class PatchGrowth:
    """Patches recorded from the ranked pool, in order, with bookkeeping"""

    patches: List[Patch] = field(default_factory=list)
    # skipped_before[l]: untrainable candidates met before patch l was recorded
    skipped_before: List[Tuple[int, ...]] = field(default_factory=list)
    skipped: List[int] = field(default_factory=list)
    seconds: List[float] = field(default_factory=list)
    exhausted: bool = False

    def skipped_for(self, n_patches: int) -> Tuple[int, ...]:
        if n_patches < len(self.patches):
            return self.skipped_before[n_patches]
        return tuple(self.skipped)


class PatchLearner:
    """Patch learning over pluggable global and patch learners.

    The candidate pool is built once from the initial global model (its
    first-order rule partitions, or an explicit box list) and ranked by the
    initial global model's SSE; ties go to the lowest flat index.
    """

    def __init__(
        self,
        config: PlConfig,
        global_factory: LearnerFactory,
        patch_factory: LearnerFactory,
        boxes: Optional[Sequence[PatchBox]] = None,
    ):
        self.config = config
        self.global_factory = global_factory
        self.patch_factory = patch_factory
        self.boxes = list(boxes) if boxes is not None else None

        if self.boxes is None and config.candidate_source is CandidateSource.EXPLICIT:
            raise ContractViolation("Explicit candidate source needs a box list")
        if self.boxes is not None:
            for i, first in enumerate(self.boxes):
                for second in self.boxes[i + 1 :]:
                    if _overlaps(first, second):
                        raise ContractViolation(
                            f"Patch boxes {first.describe()} and "
                            f"{second.describe()} overlap"
                        )

    @property
    def uses_rule_partitions(self) -> bool:
        return self.boxes is None

    def fit_global(self, X: np.ndarray, y: np.ndarray) -> BaseLearner:
        learner = self.global_factory().fit(X, y)
        logger.debug(
            f"Initial global {learner.kind.value} model fitted on {len(y)} examples"
        )
        return learner

    def candidates(self, global_model: BaseLearner) -> List[PatchBox]:
        if self.boxes is not None:
            return list(self.boxes)
        boxes_of = getattr(global_model, "candidate_boxes", None)
        if boxes_of is None:
            raise ContractViolation(
                f"A {global_model.kind.value} global model has no rule partitions; "
                "supply explicit boxes"
            )
        return boxes_of()

    def rank(self, sse: np.ndarray) -> List[int]:
        """Candidate positions by descending SSE, lowest position first on ties"""
        return sorted(range(len(sse)), key=lambda k: (-sse[k], k))

    def make_patch_learner(self) -> BaseLearner:
        """Fresh patch learner carrying the configured example threshold"""
        learner = self.patch_factory()
        if self.config.min_patch_examples is not None:
            learner.with_min_examples(self.config.min_patch_examples)
        return learner

    def grow(
        self,
        X: np.ndarray,
        y: np.ndarray,
        boxes: Sequence[PatchBox],
        sse: np.ndarray,
        limit: int,
    ) -> PatchGrowth:
        """Take max-SSE candidates until `limit` patches exist or the pool runs dry"""
        growth = PatchGrowth()
        pool = self.rank(sse)
        started = time.perf_counter()
        while len(growth.patches) < limit and pool:
            k = pool.pop(0)
            box = boxes[k]
            inside = box.contains(X)
            count = int(inside.sum())
            learner = self.make_patch_learner()
            label = box.flat_index or k + 1
            if count == 0 or count < learner.required_examples(X.shape[1]):
                logger.debug(
                    f"Candidate {label} ({box.describe()}) untrainable: "
                    f"{count} examples"
                )
                growth.skipped.append(label)
                continue
            try:
                learner.fit(X[inside], y[inside])
            except (LearnerNotTrainable, DegenerateRangeError) as e:
                logger.debug(f"Candidate {label} ({box.describe()}) untrainable: {e}")
                growth.skipped.append(label)
                continue

            patch = Patch(
                box=box,
                learner=learner,
                n_examples=count,
                global_sse=float(sse[k]),
                global_rmse=float(np.sqrt(sse[k] / count)),
                local_rmse=rmse(learner.predict(X[inside]), y[inside]),
            )
            growth.skipped_before.append(tuple(growth.skipped))
            growth.patches.append(patch)
            growth.seconds.append(time.perf_counter() - started)
            logger.info(
                f"Patch {len(growth.patches)}: candidate {label} {box.describe()}, "
                f"{count} examples, "
                f"rmse {patch.global_rmse:.4g} -> {patch.local_rmse:.4g}"
            )
        growth.exhausted = not pool
        return growth

    def finish(
        self,
        X: np.ndarray,
        y: np.ndarray,
        initial_global: BaseLearner,
        patches: Sequence[Patch],
        skipped: Sequence[int] = (),
        n_candidates: int = 0,
    ) -> PlModel:
        """Refit the global model outside the patches and assemble the PlModel"""
        alpha = self.config.alpha
        patches = tuple(patches)
        stages = []
        for l in range(len(patches) + 1):
            stage_rmse = rmse(route_predict(patches[:l], initial_global, X), y)
            stages.append(StageRecord(l, False, stage_rmse, loss(stage_rmse, l, alpha)))

        global_model = initial_global
        update_skipped = False
        if patches:
            global_model, update_skipped = self._update_global(
                X, y, initial_global, patches
            )
            if not update_skipped:
                final_rmse = rmse(route_predict(patches, global_model, X), y)
                final_loss = loss(final_rmse, len(patches), alpha)
                stages.append(StageRecord(len(patches), True, final_rmse, final_loss))

        final = stages[-1]
        return PlModel(
            patches=patches,
            global_model=global_model,
            initial_global=initial_global,
            alpha=alpha,
            training_rmse=final.rmse,
            loss=final.loss,
            global_update_skipped=update_skipped,
            stages=tuple(stages),
            skipped=tuple(skipped),
            n_candidates=n_candidates,
        )

    def _update_global(
        self,
        X: np.ndarray,
        y: np.ndarray,
        initial_global: BaseLearner,
        patches: Sequence[Patch],
    ) -> Tuple[BaseLearner, bool]:
        outside = np.ones(X.shape[0], dtype=bool)
        for patch in patches:
            outside &= ~patch.box.contains(X)
        count = int(outside.sum())
        if count == 0:
            logger.warning(
                "Every example falls in a patch; keeping the initial global model"
            )
            return initial_global, True
        try:
            updated = self.global_factory().fit(X[outside], y[outside])
        except (LearnerNotTrainable, DegenerateRangeError) as e:
            logger.warning(
                f"Global update on {count} examples failed ({e}); "
                "keeping the initial global model"
            )
            return initial_global, True
        logger.info(f"Global model refitted on {count} examples outside the patches")
        return updated, False

    def fit(self, X: np.ndarray, y: np.ndarray) -> PlModel:
        X, y = as_training_data(X, y)
        initial_global = self.fit_global(X, y)
        if self.config.max_patches == 0:
            return self.finish(X, y, initial_global, ())

        boxes = self.candidates(initial_global)
        sse = candidate_sse(initial_global, X, y, boxes)
        ranking = ", ".join(
            f"{boxes[k].flat_index or k + 1}={sse[k]:.4g}" for k in self.rank(sse)
        )
        logger.debug(f"Candidate SSE ranking: {ranking}")
        growth = self.grow(X, y, boxes, sse, self.config.max_patches)
        if len(growth.patches) < self.config.max_patches:
            logger.info(
                f"Recorded {len(growth.patches)} of {self.config.max_patches} patches; "
                "candidate pool exhausted"
            )
        return self.finish(
            X,
            y,
            initial_global,
            growth.patches,
            growth.skipped,
            n_candidates=len(boxes),
        )


def train_patch_learning(
    X: np.ndarray,
    y: np.ndarray,
    config: PlConfig,
    global_factory: LearnerFactory,
    patch_factory: LearnerFactory,
    boxes: Optional[Sequence[PatchBox]] = None,
) -> PlModel:
    """Train a PL model with at most config.max_patches patches"""
    return PatchLearner(config, global_factory, patch_factory, boxes).fit(X, y)
