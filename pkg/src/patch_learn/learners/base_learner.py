"""
Base Learner Class
Provides the common contract for global, patch and baseline learners
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..core.config import LearnerKind
from ..core.exceptions import ContractViolation, EmptyDataError, LearnerNotTrainable

logger = logging.getLogger(__name__)


class BaseLearner(ABC):
    """Base class for all regressors used by patch learning and the baselines"""

    kind: LearnerKind

    def __init__(self):
        self.n_inputs = 0
        self.is_fitted = False
        self.min_examples_override: Optional[int] = None

    def min_examples(self, n_inputs: int) -> int:
        """Smallest training set this learner agrees to fit"""
        return 1

    def required_examples(self, n_inputs: int) -> int:
        """The override when one is set, else the learner's own minimum"""
        if self.min_examples_override is not None:
            return self.min_examples_override
        return self.min_examples(n_inputs)

    def with_min_examples(self, count: Optional[int]) -> "BaseLearner":
        """Replace the example threshold; None restores the learner's own"""
        if count is not None and count < 1:
            raise ContractViolation(f"Example threshold must be positive, got {count}")
        self.min_examples_override = count
        return self

    def fit(self, X: np.ndarray, y: np.ndarray) -> "BaseLearner":
        """Fit on (X, y); raises LearnerNotTrainable when the data cannot support it"""
        X, y = as_training_data(X, y)
        needed = self.required_examples(X.shape[1])
        if X.shape[0] < needed:
            raise LearnerNotTrainable(
                f"{self.kind.value} learner needs {needed} examples, got {X.shape[0]}"
            )
        self._fit(X, y)
        self.n_inputs = X.shape[1]
        self.is_fitted = True
        return self

    @abstractmethod
    def _fit(self, X: np.ndarray, y: np.ndarray):
        """Fit the model on validated data"""
        pass

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Predict one value per row of X"""
        if not self.is_fitted:
            raise ContractViolation(f"{self.kind.value} learner used before fit")
        X = as_inputs(X)
        if X.shape[1] != self.n_inputs:
            raise ContractViolation(
                f"Learner was fitted on {self.n_inputs} inputs, got {X.shape[1]}"
            )
        if X.shape[0] == 0:
            return np.zeros(0)
        return self._predict(X)

    @abstractmethod
    def _predict(self, X: np.ndarray) -> np.ndarray:
        pass

    def predict_one(self, x: Sequence[float]) -> float:
        return float(self.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def clone(self) -> "BaseLearner":
        """Fresh, unfitted learner with the same settings"""
        raise NotImplementedError(f"{type(self).__name__} cannot be cloned")


LearnerFactory = Callable[[], BaseLearner]


def as_inputs(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ContractViolation(f"Inputs must be a matrix, got shape {X.shape}")
    return X


def as_training_data(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = as_inputs(X)
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] == 0:
        raise EmptyDataError("Cannot fit on an empty training set")
    if X.shape[0] != y.size:
        raise ContractViolation(f"{X.shape[0]} inputs but {y.size} targets")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ContractViolation("Training data contains non-finite values")
    return X, y
