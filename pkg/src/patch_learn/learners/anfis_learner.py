"""
ANFIS Learner
TSK fuzzy system trained by ANFIS, usable as global, patch or bagging member
"""

import logging
from typing import List, Optional

import numpy as np

from ..core.config import AnfisConfig, LearnerKind
from ..core.exceptions import (
    ContractViolation,
    DegenerateRangeError,
    LearnerNotTrainable,
)
from ..fuzzy import anfis
from ..fuzzy.partition import PatchBox, candidate_boxes
from ..fuzzy.tsk import TskSystem
from .base_learner import BaseLearner

logger = logging.getLogger(__name__)


class AnfisLearner(BaseLearner):
    """First-order TSK system with trapezoidal MFs, trained by ANFIS"""

    kind = LearnerKind.ANFIS

    def __init__(
        self,
        config: Optional[AnfisConfig] = None,
        min_examples_override: Optional[int] = None,
    ):
        super().__init__()
        self.config = config or AnfisConfig()
        self.min_examples_override = min_examples_override
        self.system: Optional[TskSystem] = None
        self.history: List[float] = []

    @classmethod
    def from_system(
        cls, system: TskSystem, config: Optional[AnfisConfig] = None
    ) -> "AnfisLearner":
        """Wrap an already trained system"""
        learner = cls(config=config)
        learner.system = system
        learner.n_inputs = system.n_inputs
        learner.is_fitted = True
        return learner

    def min_examples(self, n_inputs: int) -> int:
        """3 examples per consequent coefficient of the full rule grid"""
        rules = self.config.mfs_per_input**n_inputs
        return 3 * (n_inputs + 1) * rules

    def _fit(self, X: np.ndarray, y: np.ndarray):
        self.history = []
        try:
            self.system = anfis.train(X, y, self.config, history=self.history)
        except DegenerateRangeError as e:
            raise LearnerNotTrainable(str(e)) from e
        logger.debug(
            f"ANFIS fit on {X.shape[0]} examples: "
            f"mse {self.history[0]:.6g} -> {self.history[-1]:.6g}"
        )

    def _predict(self, X: np.ndarray) -> np.ndarray:
        # Queries outside the training ranges fire no rule; clamp them back in
        return self.system.infer(X, clamp=True)

    def candidate_boxes(self) -> List[PatchBox]:
        """First-order rule partition boxes of the trained system"""
        if self.system is None:
            raise ContractViolation("candidate boxes need a trained system")
        return candidate_boxes(self.system)

    def clone(self) -> "AnfisLearner":
        return AnfisLearner(self.config, self.min_examples_override)
