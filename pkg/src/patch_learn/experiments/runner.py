"""
Experiment Runner
Runs the five benchmark experiments: PL sweep over L plus Bagging and LSBoost
with the same number of learners
"""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from ..core.config import AnfisConfig, ExperimentConfig, PlConfig
from ..core.exceptions import LearnerNotTrainable
from ..core.metrics import metrics
from ..datasets import LabeledSet
from ..datasets.functions import gen_curve1d, gen_manifold3d, gen_sinc2d
from ..datasets.mackey_glass import gen_mackey_glass
from ..datasets.sysid import TEST_WINDOW, TRAIN_WINDOW, SysidStreams, gen_sysid
from ..learners.anfis_learner import AnfisLearner
from ..learners.base_learner import LearnerFactory
from ..learners.ensemble import EnsembleModel, bagging_train, lsboost_train
from ..patching.model import PlModel
from ..patching.patch_learner import train_patch_learning
from ..patching.selection import SweepResult, select_num_patches
from .report import (
    BaselineRow,
    ExperimentReport,
    OnlineTracePoint,
    PlRow,
    patch_infos,
    stage_infos,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentData:
    dataset: str
    train: LabeledSet
    test: Optional[LabeledSet] = None
    streams: Optional[SysidStreams] = None


def _curve1d(config: ExperimentConfig) -> ExperimentData:
    return ExperimentData("curve1d", gen_curve1d())


def _sinc2d(config: ExperimentConfig) -> ExperimentData:
    return ExperimentData("sinc2d", gen_sinc2d())


def _manifold3d(config: ExperimentConfig) -> ExperimentData:
    return ExperimentData("manifold3d", gen_manifold3d())


def _sysid(config: ExperimentConfig) -> ExperimentData:
    streams = gen_sysid()
    return ExperimentData("sysid", streams.train_pairs(), streams.test_pairs(), streams)


def _mackey_glass(config: ExperimentConfig) -> ExperimentData:
    data = gen_mackey_glass(config.mackey_glass)
    return ExperimentData("mackey-glass", data.train, data.test)


EXPERIMENTS: Dict[int, Callable[[ExperimentConfig], ExperimentData]] = {
    1: _curve1d,
    2: _sinc2d,
    3: _manifold3d,
    4: _sysid,
    5: _mackey_glass,
}


def output_rmse(streams: SysidStreams, f_hat: np.ndarray) -> float:
    """RMSE of the series-parallel plant output over the test window"""
    first, last = TEST_WINDOW
    y_hat = streams.series_parallel(f_hat, first, last)
    return metrics(y_hat, streams.next_outputs(first, last)).rmse


def score(
    predict: Callable[[np.ndarray], np.ndarray], data: ExperimentData
) -> Dict[str, Optional[float]]:
    """Train and (when there is a test split) test RMSE/APE of one predictor"""
    train = metrics(predict(data.train.inputs), data.train.targets)
    scores: Dict[str, Optional[float]] = {
        "train_rmse": train.rmse,
        "train_ape": train.ape,
        "test_rmse": None,
        "test_ape": None,
        "y_rmse": None,
    }
    if data.test is not None:
        test_predictions = predict(data.test.inputs)
        test = metrics(test_predictions, data.test.targets)
        scores["test_rmse"] = test.rmse
        scores["test_ape"] = test.ape
        if data.streams is not None:
            scores["y_rmse"] = output_rmse(data.streams, test_predictions)
    return scores


def pl_row(model: PlModel, seconds: float, data: ExperimentData) -> PlRow:
    scores = score(model.predict, data)
    # Train RMSE and loss are the model's own figures so the loss recomputes exactly
    return PlRow(
        n_patches=model.n_patches,
        train_rmse=model.training_rmse,
        train_ape=scores["train_ape"],
        loss=model.loss,
        test_rmse=scores["test_rmse"],
        test_ape=scores["test_ape"],
        y_rmse=scores["y_rmse"],
        seconds=seconds,
        patches=patch_infos(model),
        skipped=list(model.skipped),
        global_update_skipped=model.global_update_skipped,
        stages=stage_infos(model),
    )


class ExperimentRunner:
    """Runs one experiment and assembles its report"""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.notes: List[str] = []
        self.partial = False

    def anfis_factory(self) -> LearnerFactory:
        anfis = self.config.anfis
        return lambda: AnfisLearner(anfis)

    def load_data(self) -> ExperimentData:
        return EXPERIMENTS[self.config.experiment_id](self.config)

    def run(self) -> ExperimentReport:
        config = self.config
        logger.info(f"Running experiment {config.experiment_id} (L_max={config.l_max})")
        data = self.load_data()

        trace: List[OnlineTracePoint] = []
        if data.streams is not None:
            trace = self.online_trace(data.streams)

        sweep = self.sweep(data.train)
        pl_rows = [pl_row(entry.model, entry.seconds, data) for entry in sweep.entries]
        baseline_rows = self.baseline_rows(data, config.l_max + 1)

        report = ExperimentReport(
            experiment_id=config.experiment_id,
            dataset=data.dataset,
            alpha=config.alpha,
            seed=config.seed,
            l_max=config.l_max,
            best_l=sweep.best_l,
            config=config.to_dict(),
            pl_rows=pl_rows,
            baseline_rows=baseline_rows,
            trace=trace,
            notes=self.notes,
            partial=self.partial,
        )
        logger.info(
            f"Experiment {config.experiment_id} done: best L = {sweep.best_l}, "
            f"{len(pl_rows)} PL rows, {len(baseline_rows)} baseline rows"
        )
        return report

    def sweep(self, train: LabeledSet) -> SweepResult:
        factory = self.anfis_factory()
        sweep = select_num_patches(
            train.inputs, train.targets, self.config.pl_config(), factory, factory
        )
        if sweep.truncated:
            self.partial = True
            self.notes.append(
                f"L sweep stopped at {len(sweep.entries) - 1} of {self.config.l_max}: "
                "not enough trainable candidates"
            )
        for entry in sweep.entries:
            if entry.model.global_update_skipped:
                self.notes.append(
                    f"L={entry.n_patches}: global update skipped, "
                    "initial global model kept"
                )
        return sweep

    def baseline_rows(self, data: ExperimentData, n_rows: int) -> List[BaselineRow]:
        """Bagging (ANFIS members) and LSBoost (trees) with 1..n_rows learners"""
        train = data.train
        baselines = self.config.baselines
        rows: List[BaselineRow] = []

        bagging: Optional[EnsembleModel] = None
        try:
            bagging = bagging_train(
                train.inputs,
                train.targets,
                n_rows,
                self.anfis_factory(),
                self.config.seed,
            )
        except LearnerNotTrainable as e:
            self.partial = True
            self.notes.append(f"Bagging skipped: {e}")
        if bagging is not None:
            if len(bagging) < n_rows:
                self.partial = True
                self.notes.append(f"Bagging kept {len(bagging)} of {n_rows} members")
            for size in range(1, len(bagging) + 1):
                scores = score(bagging.truncated(size).predict, data)
                rows.append(
                    BaselineRow(
                        method="bagging",
                        members=size,
                        seed=self.config.seed,
                        **scores,
                    )
                )

        lsboost = lsboost_train(
            train.inputs,
            train.targets,
            n_rows,
            baselines.lsboost_shrinkage,
            baselines.tree_max_depth,
            baselines.tree_min_leaf,
        )
        for size in range(1, n_rows + 1):
            scores = score(lsboost.truncated(size).predict, data)
            rows.append(BaselineRow(method="lsboost", members=size, **scores))
        return rows

    def retrain_schedule(self) -> List[int]:
        """Window ends k at which the online models are retrained"""
        first, last = TRAIN_WINDOW
        schedule = list(range(first, last + 1, self.config.retrain_every))
        if schedule[-1] != last:
            schedule.append(last)
        return schedule

    def online_trace(self, streams: SysidStreams) -> List[OnlineTracePoint]:
        """One-step-ahead estimates of f(u(k)) while the training window grows.

        The PL model is retrained on pairs [first, k] at every scheduled k
        and answers for the steps after k until the next retrain; windows
        too small to train are skipped.
        """
        first, last = TRAIN_WINDOW
        factory = self.anfis_factory()
        pl_config = self.config.pl_config()
        schedule = self.retrain_schedule()
        trace: List[OnlineTracePoint] = []
        trained = 0

        for position, k in enumerate(schedule):
            window = streams.pairs(first, k)
            try:
                model = train_patch_learning(
                    window.inputs, window.targets, pl_config, factory, factory
                )
            except LearnerNotTrainable:
                logger.debug(f"Online window [{first}, {k}] too small to train")
                continue
            trained += 1
            until = schedule[position + 1] if position + 1 < len(schedule) else k
            ahead = np.arange(k + 1, until + 1)
            if ahead.size == 0:
                continue
            predictions = model.predict(streams.u[ahead].reshape(-1, 1))
            targets = streams.recovered(ahead)
            trace.extend(
                OnlineTracePoint(k=int(j), target=float(t), prediction=float(p))
                for j, t, p in zip(ahead, targets, predictions)
            )

        self.notes.append(
            f"Online protocol: retrained {trained} times on windows [{first}, k], "
            f"every {self.config.retrain_every} step(s) up to k={last}; "
            "reported models and baselines use the final window"
        )
        return trace


def run_experiment(
    experiment_id: int, overrides: Optional[Dict[str, object]] = None
) -> ExperimentReport:
    """Run experiment 1..5 with optional config overrides"""
    config = ExperimentConfig(experiment_id=experiment_id)
    if overrides:
        config = config.with_overrides(overrides)
    return ExperimentRunner(config).run()


def run_sweep(
    data: LabeledSet,
    dataset: str,
    l_max: int,
    alpha: float = 0.25,
    anfis: Optional[AnfisConfig] = None,
) -> ExperimentReport:
    """L sweep with ANFIS global and patch models on an arbitrary dataset"""
    anfis = anfis or AnfisConfig()

    def factory() -> AnfisLearner:
        return AnfisLearner(anfis)

    pl_config = PlConfig(max_patches=l_max, alpha=alpha)
    sweep = select_num_patches(data.inputs, data.targets, pl_config, factory, factory)
    wrapped = ExperimentData(dataset, data)
    notes = []
    if sweep.truncated:
        notes.append(f"L sweep stopped at {len(sweep.entries) - 1} of {l_max}")
    return ExperimentReport(
        dataset=dataset,
        alpha=alpha,
        seed=0,
        l_max=l_max,
        best_l=sweep.best_l,
        config={"l_max": l_max, "alpha": alpha, "anfis": dataclasses.asdict(anfis)},
        pl_rows=[
            pl_row(entry.model, entry.seconds, wrapped) for entry in sweep.entries
        ],
        notes=notes,
        partial=sweep.truncated,
    )
