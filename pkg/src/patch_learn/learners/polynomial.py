"""
Polynomial regression learner (affine or quadratic, no cross terms)
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.config import LearnerKind
from ..core.exceptions import ContractViolation, LearnerNotTrainable
from .base_learner import BaseLearner, as_inputs, as_training_data


@dataclass(frozen=True)
class PolynomialModel:
    """y = beta_0 + sum_m beta_m x_m [+ sum_m beta_{M+m} x_m^2]

    Coefficients are ordered [1, x_1..x_M, x_1^2..x_M^2].
    """

    degree: int
    coefficients: Tuple[float, ...]

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise ContractViolation(f"degree must be 1 or 2, got {self.degree}")
        if (len(self.coefficients) - 1) % self.degree:
            raise ContractViolation(
                f"{len(self.coefficients)} coefficients do not fit degree {self.degree}"
            )

    @property
    def n_inputs(self) -> int:
        return (len(self.coefficients) - 1) // self.degree

    def predict(self, X: np.ndarray) -> np.ndarray:
        return design_matrix(as_inputs(X), self.degree) @ np.asarray(self.coefficients)


def design_matrix(X: np.ndarray, degree: int) -> np.ndarray:
    columns = [np.ones((X.shape[0], 1)), X]
    if degree == 2:
        columns.append(X**2)
    return np.hstack(columns)


def poly_fit(X: np.ndarray, y: np.ndarray, degree: int = 2) -> PolynomialModel:
    """Ordinary least squares; rank-deficient designs are untrainable"""
    X, y = as_training_data(X, y)
    design = design_matrix(X, degree)
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise LearnerNotTrainable(
            f"Degree-{degree} design with {X.shape[0]} examples is rank deficient"
        )
    beta = np.linalg.lstsq(design, y, rcond=None)[0]
    return PolynomialModel(degree=degree, coefficients=tuple(float(b) for b in beta))


class PolynomialLearner(BaseLearner):
    """Least-squares polynomial regression as a base learner"""

    kind = LearnerKind.POLYNOMIAL

    def __init__(self, degree: int = 2, min_examples_override: Optional[int] = None):
        super().__init__()
        if degree not in (1, 2):
            raise ContractViolation(f"degree must be 1 or 2, got {degree}")
        self.degree = degree
        self.min_examples_override = min_examples_override
        self.model: Optional[PolynomialModel] = None

    @classmethod
    def from_model(cls, model: PolynomialModel) -> "PolynomialLearner":
        learner = cls(degree=model.degree)
        learner.model = model
        learner.n_inputs = model.n_inputs
        learner.is_fitted = True
        return learner

    def min_examples(self, n_inputs: int) -> int:
        return 3 * (self.degree + 1)

    def _fit(self, X: np.ndarray, y: np.ndarray):
        self.model = poly_fit(X, y, self.degree)

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self.model.predict(X)

    @property
    def coefficients(self) -> Tuple[float, ...]:
        return self.model.coefficients

    def clone(self) -> "PolynomialLearner":
        return PolynomialLearner(self.degree, self.min_examples_override)
