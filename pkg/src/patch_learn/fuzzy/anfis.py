"""
ANFIS-style training of TSK systems

Premise parameters start from a uniform-overlap trapezoid layout and are
refined by derivative-free coordinate descent; consequents are always the
(ridge-regularized) least-squares solution for the current premises.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import AnfisConfig
from ..core.exceptions import (
    ContractViolation,
    DegenerateRangeError,
    EmptyDataError,
    UncoveredInputError,
)
from .membership import TrapezoidalMf, coverage_gap, uniform_trapezoids
from .tsk import TskSystem

logger = logging.getLogger(__name__)

# (input dimension, MF index, breakpoint index 0..3)
Coordinate = Tuple[int, int, int]

# Relative improvement an epoch step must beat to be accepted
ACCEPT_TOL = 1e-12


def _check_data(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape[0] == 0:
        raise EmptyDataError("ANFIS needs at least one training example")
    if X.shape[0] != y.size:
        raise ContractViolation(f"{X.shape[0]} inputs but {y.size} targets")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ContractViolation("training data contains non-finite values")
    return X, y


def init_from_data(X: np.ndarray, y: np.ndarray, config: AnfisConfig) -> TskSystem:
    """Uniform-overlap trapezoids over each input's observed range, zero consequents"""
    X, y = _check_data(X, y)
    mfs_per_dim = []
    ranges = []
    for m in range(X.shape[1]):
        lo, hi = float(X[:, m].min()), float(X[:, m].max())
        if not hi > lo:
            raise DegenerateRangeError(m, lo)
        mfs_per_dim.append(uniform_trapezoids(lo, hi, config.mfs_per_input))
        ranges.append((lo, hi))
    return TskSystem.from_grid(mfs_per_dim, ranges)


def _solve_consequents(
    system: TskSystem, X: np.ndarray, y: np.ndarray, ridge_lambda: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Least-squares consequents and the resulting fitted values"""
    weights = system.firing_strengths(X)
    totals = weights.sum(axis=1)
    uncovered = totals <= 0.0
    if uncovered.any():
        index = int(np.flatnonzero(uncovered)[0])
        raise UncoveredInputError(X[index], index=index)

    normalized = weights / totals[:, None]
    # Rules that never fire on the data keep zero consequents
    active = weights.sum(axis=0) > 0.0
    augmented = np.hstack([np.ones((X.shape[0], 1)), X])
    design = (normalized[:, active, None] * augmented[:, None, :]).reshape(
        X.shape[0], -1
    )

    if ridge_lambda > 0:
        n_coef = design.shape[1]
        lhs = np.vstack([design, np.sqrt(ridge_lambda) * np.eye(n_coef)])
        rhs = np.concatenate([y, np.zeros(n_coef)])
    else:
        lhs, rhs = design, y
    beta = np.linalg.lstsq(lhs, rhs, rcond=None)[0]

    coefficients = np.zeros((system.n_rules, system.n_inputs + 1))
    coefficients[active] = beta.reshape(-1, system.n_inputs + 1)
    return coefficients, design @ beta


def fit_consequents(
    system: TskSystem, X: np.ndarray, y: np.ndarray, ridge_lambda: float
) -> TskSystem:
    """Refit every consequent by linear least squares with the premises fixed"""
    X, y = _check_data(X, y)
    coefficients, _ = _solve_consequents(system, X, y, ridge_lambda)
    return system.with_coefficients(coefficients)


def training_mse(system: TskSystem, X: np.ndarray, y: np.ndarray) -> float:
    residuals = system.infer(X) - np.asarray(y, dtype=float).ravel()
    return float(np.mean(residuals**2))


def _free_coordinates(system: TskSystem) -> List[Coordinate]:
    """Breakpoints descent may move; outermost shoulders stay on the range ends"""
    coordinates = []
    for m, mfs in enumerate(system.mfs_per_dim):
        last = len(mfs) - 1
        for i in range(len(mfs)):
            for j in range(4):
                if (i == 0 and j in (0, 1)) or (i == last and j in (2, 3)):
                    continue
                coordinates.append((m, i, j))
    return coordinates


def _project(
    params: List[List[List[float]]],
    ranges: Sequence[Tuple[float, float]],
    coordinate: Coordinate,
    value: float,
) -> Optional[List[List[TrapezoidalMf]]]:
    """Move one breakpoint and re-project onto valid, covering trapezoids.

    Returns None when the projected move is a no-op or would open a coverage
    gap.
    """
    m, i, j = coordinate
    lo, hi = ranges[m]
    current = params[m][i]
    lower = current[j - 1] if j > 0 else lo
    upper = current[j + 1] if j < 3 else hi
    projected = min(max(value, lower, lo), upper, hi)
    if projected == current[j]:
        return None

    moved = [row[:] for row in params[m]]
    moved[i][j] = projected
    moved[0][0] = moved[0][1] = lo
    moved[-1][2] = moved[-1][3] = hi
    dim_mfs = [TrapezoidalMf(*row) for row in moved]
    if coverage_gap(dim_mfs, lo, hi) is not None:
        return None

    result = []
    for k, rows in enumerate(params):
        result.append(dim_mfs if k == m else [TrapezoidalMf(*row) for row in rows])
    return result


def train(
    X: np.ndarray,
    y: np.ndarray,
    config: AnfisConfig,
    history: Optional[List[float]] = None,
) -> TskSystem:
    """Train a TSK system, alternating premise descent and consequent fits.

    Each epoch visits every free breakpoint, tries a step up and a step down
    (consequents refit for each trial) and keeps the first trial that lowers
    the training MSE. A breakpoint whose trials both fail has its step
    halved. Only improvements are accepted, so the returned system has the
    lowest training MSE seen. If `history` is given, the MSE after
    initialization and after every epoch is appended to it.
    """
    X, y = _check_data(X, y)
    system = init_from_data(X, y, config)
    coefficients, fitted = _solve_consequents(system, X, y, config.ridge_lambda)
    system = system.with_coefficients(coefficients)
    best_mse = float(np.mean((fitted - y) ** 2))
    if history is not None:
        history.append(best_mse)

    ranges = system.input_ranges
    coordinates = _free_coordinates(system)
    steps: Dict[Coordinate, float] = {
        c: config.premise_step * (ranges[c[0]][1] - ranges[c[0]][0])
        for c in coordinates
    }
    min_steps = {c: 1e-6 * (ranges[c[0]][1] - ranges[c[0]][0]) for c in coordinates}

    for epoch in range(config.premise_epochs):
        accepted = 0
        for coordinate in coordinates:
            params = [[list(mf.params) for mf in mfs] for mfs in system.mfs_per_dim]
            m, i, j = coordinate
            improved = False
            for direction in (1.0, -1.0):
                value = params[m][i][j] + direction * steps[coordinate]
                candidate_mfs = _project(params, ranges, coordinate, value)
                if candidate_mfs is None:
                    continue
                candidate = system.with_mfs(candidate_mfs)
                try:
                    coefficients, fitted = _solve_consequents(
                        candidate, X, y, config.ridge_lambda
                    )
                except UncoveredInputError:
                    continue
                mse = float(np.mean((fitted - y) ** 2))
                if mse < best_mse - ACCEPT_TOL * max(1.0, best_mse):
                    system = candidate.with_coefficients(coefficients)
                    best_mse = mse
                    improved = True
                    break
            if improved:
                accepted += 1
            else:
                steps[coordinate] *= 0.5

        system.validate()
        if history is not None:
            history.append(best_mse)
        logger.debug(
            f"ANFIS epoch {epoch + 1}/{config.premise_epochs}: "
            f"mse={best_mse:.6g}, accepted={accepted}"
        )
        if accepted == 0 and all(steps[c] < min_steps[c] for c in coordinates):
            logger.debug(f"ANFIS premise descent converged after {epoch + 1} epochs")
            break

    return system
