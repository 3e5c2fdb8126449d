"""
Tidy plot data (series, x, y) for the experiment figures
"""

import csv
import io
import logging
from typing import Iterable, List, Tuple

import numpy as np

from ..core.config import ExperimentConfig
from ..patching.patch_learner import candidate_sse
from .runner import ExperimentData, ExperimentRunner

logger = logging.getLogger(__name__)

Point = Tuple[str, float, float]


def _series(name: str, xs: Iterable[float], ys: Iterable[float]) -> List[Point]:
    return [(name, float(x), float(y)) for x, y in zip(xs, ys)]


def _axis(data: ExperimentData) -> np.ndarray:
    """The input itself for one-input data, the example index otherwise"""
    if data.train.n_inputs == 1:
        return data.train.inputs[:, 0]
    return np.arange(len(data.train), dtype=float)


def plot_points(config: ExperimentConfig) -> List[Point]:
    """Target, fitted and error curves per L, candidate SSE bars, online trace"""
    runner = ExperimentRunner(config)
    data = runner.load_data()
    sweep = runner.sweep(data.train)
    axis = _axis(data)
    order = np.argsort(axis, kind="mergesort")

    points = _series("target", axis[order], data.train.targets[order])
    for entry in sweep.entries:
        fitted = entry.model.predict(data.train.inputs)
        points += _series(f"fit_L{entry.n_patches}", axis[order], fitted[order])
        error = np.abs(fitted - data.train.targets)
        points += _series(f"error_L{entry.n_patches}", axis[order], error[order])

    initial = sweep.entries[0].model.initial_global
    boxes = initial.candidate_boxes()
    sse = candidate_sse(initial, data.train.inputs, data.train.targets, boxes)
    points += _series("sse", [box.flat_index for box in boxes], sse)

    if data.streams is not None:
        trace = runner.online_trace(data.streams)
        points += _series(
            "online_target", [p.k for p in trace], [p.target for p in trace]
        )
        points += _series(
            "online_prediction", [p.k for p in trace], [p.prediction for p in trace]
        )
    logger.debug(f"Experiment {config.experiment_id}: {len(points)} plot points")
    return points


def to_csv(points: Iterable[Point]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["series", "x", "y"])
    for name, x, y in points:
        writer.writerow([name, repr(x), repr(y)])
    return buffer.getvalue()
