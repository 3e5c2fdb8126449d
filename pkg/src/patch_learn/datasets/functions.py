"""
Static regression benchmarks: piecewise 1-D curve, 2-D sinc, 3-D manifold
"""

import numpy as np

from .labeled_set import LabeledSet

# Closed intervals on which the 1-D curve carries an extra sine term
CURVE1D_BUMPS = ((1.5, 3.0, 8.0), (4.0, 5.0, 2.0))


def curve1d(x: np.ndarray) -> np.ndarray:
    """x + x^2, plus 8 sin(x) on [1.5, 3] and 2 sin(x) on [4, 5]"""
    x = np.asarray(x, dtype=float)
    y = x + x**2
    for lo, hi, gain in CURVE1D_BUMPS:
        inside = (x >= lo) & (x <= hi)
        y = np.where(inside, y + gain * np.sin(x), y)
    return y


def gen_curve1d(n_samples: int = 601) -> LabeledSet:
    x = np.linspace(0.0, 6.0, n_samples)
    return LabeledSet(
        x.reshape(-1, 1), curve1d(x), {"dataset": "curve1d", "experiment": 1}
    )


def sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with the removable singularity filled in as 1"""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 1.0, np.sin(safe) / safe)


def gen_sinc2d(n_per_axis: int = 30) -> LabeledSet:
    axis = np.linspace(-10.0, 10.0, n_per_axis)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    inputs = np.column_stack([x1.ravel(), x2.ravel()])
    return LabeledSet(
        inputs,
        sinc(inputs[:, 0]) * sinc(inputs[:, 1]),
        {"dataset": "sinc2d", "experiment": 2},
    )


def manifold3d(X: np.ndarray) -> np.ndarray:
    """(1 + x1^0.5 + x2^-1 + x3^-1.5)^2"""
    X = np.asarray(X, dtype=float)
    return (1.0 + X[:, 0] ** 0.5 + X[:, 1] ** -1.0 + X[:, 2] ** -1.5) ** 2


def gen_manifold3d(n_per_axis: int = 11) -> LabeledSet:
    axis = np.linspace(1.0, 6.0, n_per_axis)
    grid = np.meshgrid(axis, axis, axis, indexing="ij")
    inputs = np.column_stack([g.ravel() for g in grid])
    return LabeledSet(
        inputs, manifold3d(inputs), {"dataset": "manifold3d", "experiment": 3}
    )
