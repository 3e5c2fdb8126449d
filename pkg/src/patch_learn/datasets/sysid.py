"""
Online nonlinear system identification benchmark

Plant: y(k+1) = 0.3 y(k) + 0.6 y(k-1) + f(u(k)), with
f(u) = 0.6 sin(pi u) + 0.3 sin(3 pi u) + 0.1 sin(5 pi u).
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ContractViolation
from .labeled_set import LabeledSet

logger = logging.getLogger(__name__)

LAST_K = 700
TRAIN_WINDOW = (40, 250)
TEST_WINDOW = (251, 700)
# Input switches to the two-tone signal from this index on
SWITCH_K = 500


def plant_nonlinearity(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return (
        0.6 * np.sin(np.pi * u)
        + 0.3 * np.sin(3 * np.pi * u)
        + 0.1 * np.sin(5 * np.pi * u)
    )


def plant_input(k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    slow = np.sin(2 * np.pi * k / 250)
    return np.where(k < SWITCH_K, slow, 0.5 * slow + 0.5 * np.sin(2 * np.pi * k / 25))


@dataclass(frozen=True)
class SysidStreams:
    """Streams indexed by k: `u[k]`, `y[k]` with index 0 unused.

    `y` runs to LAST_K + 1 so every k in 1..LAST_K has a successor.
    """

    u: np.ndarray
    y: np.ndarray
    f: np.ndarray

    def recovered(self, k: np.ndarray) -> np.ndarray:
        """f(u(k)) read back from the output stream"""
        k = np.asarray(k, dtype=int)
        return self.y[k + 1] - 0.3 * self.y[k] - 0.6 * self.y[k - 1]

    def pairs(self, first: int, last: int) -> LabeledSet:
        """Identification pairs (u(k), f(u(k))) for first <= k <= last"""
        if not 2 <= first <= last <= LAST_K:
            raise ContractViolation(f"Window [{first}, {last}] outside [2, {LAST_K}]")
        k = np.arange(first, last + 1)
        return LabeledSet(
            self.u[k].reshape(-1, 1),
            self.recovered(k),
            {"dataset": "sysid", "experiment": 4, "k_first": first, "k_last": last},
        )

    def train_pairs(self) -> LabeledSet:
        return self.pairs(*TRAIN_WINDOW)

    def test_pairs(self) -> LabeledSet:
        return self.pairs(*TEST_WINDOW)

    def series_parallel(self, f_hat: np.ndarray, first: int, last: int) -> np.ndarray:
        """y_hat(k+1) = 0.3 y(k) + 0.6 y(k-1) + f_hat(u(k)) for first <= k <= last"""
        k = np.arange(first, last + 1)
        f_hat = np.asarray(f_hat, dtype=float)
        if f_hat.size != k.size:
            raise ContractViolation(f"Need {k.size} estimates of f, got {f_hat.size}")
        return 0.3 * self.y[k] + 0.6 * self.y[k - 1] + f_hat

    def next_outputs(self, first: int, last: int) -> np.ndarray:
        """y(k+1) for first <= k <= last"""
        return self.y[np.arange(first, last + 1) + 1]


def gen_sysid() -> SysidStreams:
    """Simulate the plant for k = 1..700 from y(1) = y(2) = 0"""
    k = np.arange(LAST_K + 2)
    u = plant_input(k)
    u[0] = 0.0
    f = plant_nonlinearity(u)
    y = np.zeros(LAST_K + 2)
    for step in range(2, LAST_K + 1):
        y[step + 1] = 0.3 * y[step] + 0.6 * y[step - 1] + f[step]
    logger.debug(f"Simulated plant for k = 1..{LAST_K}")
    return SysidStreams(u=u, y=y, f=f)
