"""
Mackey-Glass chaotic time series

dx/dt = 0.2 x(t - tau) / (1 + x(t - tau)^10) - 0.1 x(t), integrated with
fixed-step RK4 on a grid of `steps_per_unit` points per time unit.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core.config import MackeyGlassConfig
from ..core.exceptions import ContractViolation
from .labeled_set import LabeledSet

logger = logging.getLogger(__name__)


def mackey_glass_rate(x: float, delayed: float) -> float:
    return 0.2 * delayed / (1.0 + delayed**10) - 0.1 * x


def integrate(config: MackeyGlassConfig) -> np.ndarray:
    """Grid values x(n h) for n = 0..horizon * steps_per_unit.

    The delayed term at a full step is read from the stored grid; the
    half-step stages average the two neighbouring grid values. x(t) = x0
    for t <= 0.
    """
    h = 1.0 / config.steps_per_unit
    delay = config.delay_steps
    n_steps = config.horizon * config.steps_per_unit
    grid = np.empty(n_steps + 1)
    grid[0] = config.x0

    def history(n: int) -> float:
        return grid[n - delay] if n >= delay else config.x0

    for n in range(n_steps):
        x = grid[n]
        now, later = history(n), history(n + 1)
        middle = 0.5 * (now + later)
        k1 = mackey_glass_rate(x, now)
        k2 = mackey_glass_rate(x + 0.5 * h * k1, middle)
        k3 = mackey_glass_rate(x + 0.5 * h * k2, middle)
        k4 = mackey_glass_rate(x + h * k3, later)
        grid[n + 1] = x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return grid


def apply_embedding(
    series: np.ndarray, lags: Sequence[int], horizon: int
) -> LabeledSet:
    """Rows (x(t - lag) for lag in lags) -> x(t + horizon), ordered by t"""
    series = np.asarray(series, dtype=float).ravel()
    lags = tuple(int(lag) for lag in lags)
    if not lags or min(lags) < 0 or horizon < 0:
        raise ContractViolation(f"Invalid embedding lags={lags}, horizon={horizon}")
    first = max(lags)
    last = series.size - 1 - horizon
    if last < first:
        raise ContractViolation(
            f"Series of length {series.size} is too short for lags {lags} "
            f"and horizon {horizon}"
        )
    t = np.arange(first, last + 1)
    inputs = np.column_stack([series[t - lag] for lag in lags])
    return LabeledSet(
        inputs, series[t + horizon], {"lags": list(lags), "horizon": horizon}
    )


@dataclass(frozen=True)
class MackeyGlassData:
    series: np.ndarray
    embedded: LabeledSet
    train: LabeledSet
    test: LabeledSet


def gen_mackey_glass(config: Optional[MackeyGlassConfig] = None) -> MackeyGlassData:
    """Integer-time series t = 0..horizon, its embedding and the train/test split.

    Train is the first `n_train` embedded rows and test the last `n_test`;
    the two may share rows when the embedding is shorter than their sum.
    """
    config = config or MackeyGlassConfig()
    grid = integrate(config)
    series = grid[:: config.steps_per_unit]
    embedded = apply_embedding(series, config.lags, config.prediction_horizon)
    tags = {"dataset": "mackey-glass", "experiment": 5, "tau": config.tau}
    embedded = embedded.subset(slice(None), **tags)
    n = len(embedded)
    if config.n_train > n or config.n_test > n:
        raise ContractViolation(
            f"Embedding has {n} rows; cannot take "
            f"{config.n_train} train / {config.n_test} test"
        )
    overlap = config.n_train + config.n_test - n
    if overlap > 0:
        logger.debug(f"Mackey-Glass train and test share {overlap} rows")
    return MackeyGlassData(
        series=series,
        embedded=embedded,
        train=embedded.subset(slice(0, config.n_train), split="train"),
        test=embedded.subset(slice(n - config.n_test, n), split="test"),
    )
