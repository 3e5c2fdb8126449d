"""
Regression metrics: RMSE, SSE and APE
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .exceptions import ContractViolation

ArrayLike = Union[Sequence[float], np.ndarray]

# Targets with smaller magnitude are left out of the APE average
APE_EPS = 1e-12


@dataclass(frozen=True)
class Metrics:
    """Error summary of a set of predictions"""

    rmse: float
    sse: float
    ape: float


def metrics(predictions: ArrayLike, targets: ArrayLike) -> Metrics:
    """Compute RMSE, SSE and the fractional average percentage error"""
    pred = np.asarray(predictions, dtype=float).ravel()
    true = np.asarray(targets, dtype=float).ravel()
    if pred.shape != true.shape:
        raise ContractViolation(
            f"{pred.size} predictions but {true.size} targets"
        )
    if pred.size == 0:
        raise ContractViolation("metrics need at least one prediction")

    residuals = pred - true
    sse = float(np.dot(residuals, residuals))
    rmse = float(np.sqrt(sse / pred.size))

    nonzero = np.abs(true) > APE_EPS
    if nonzero.any():
        ape = float(np.mean(np.abs(residuals[nonzero]) / np.abs(true[nonzero])))
    else:
        ape = 0.0
    return Metrics(rmse=rmse, sse=sse, ape=ape)


def rmse(predictions: ArrayLike, targets: ArrayLike) -> float:
    return metrics(predictions, targets).rmse
