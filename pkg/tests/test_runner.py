"""Test the experiment runner and the benchmark experiments"""

import numpy as np
import pytest

from patch_learn.core.config import AnfisConfig, ExperimentConfig
from patch_learn.datasets.sysid import TEST_WINDOW, gen_sysid
from patch_learn.experiments.plots import plot_points, to_csv
from patch_learn.experiments.runner import (
    EXPERIMENTS,
    ExperimentRunner,
    output_rmse,
    run_experiment,
    run_sweep,
)
from patch_learn.patching.patch_learner import candidate_sse

QUICK = {"anfis": {"premise_epochs": 0}}


def quick_config(experiment_id: int, **kwargs) -> ExperimentConfig:
    return ExperimentConfig(
        experiment_id, anfis=AnfisConfig(premise_epochs=0), **kwargs
    )


def without_timings(report) -> dict:
    data = report.model_dump()
    for row in data["pl_rows"]:
        row.pop("seconds")
    return data


class TestRunnerPieces:
    """Fast checks of the runner building blocks"""

    def test_experiment_registry(self):
        assert sorted(EXPERIMENTS) == [1, 2, 3, 4, 5]

    def test_retrain_schedule(self):
        runner = ExperimentRunner(quick_config(4, retrain_every=100))
        assert runner.retrain_schedule() == [40, 140, 240, 250]
        assert len(ExperimentRunner(quick_config(4)).retrain_schedule()) == 211

    def test_output_rmse_of_true_nonlinearity(self):
        streams = gen_sysid()
        k = np.arange(TEST_WINDOW[0], TEST_WINDOW[1] + 1)
        assert output_rmse(streams, streams.f[k]) == pytest.approx(0.0, abs=1e-12)

    def test_online_trace(self):
        runner = ExperimentRunner(quick_config(4, retrain_every=50))
        trace = runner.online_trace(gen_sysid())
        assert [point.k for point in trace] == list(range(91, 251))
        assert any(note.startswith("Online protocol") for note in runner.notes)

    def test_three_input_patches_use_the_configured_threshold(self):
        """Grid cells of 36-64 examples train although ANFIS alone wants 96"""
        runner = ExperimentRunner(quick_config(3))
        sweep = runner.sweep(runner.load_data().train)
        assert len(sweep.entries) == 6
        assert not sweep.truncated
        patches = sweep.entries[-1].model.patches
        assert all(32 <= patch.n_examples < 96 for patch in patches)

    def test_run_sweep(self, small_curve):
        report = run_sweep(
            small_curve, "small", l_max=1, anfis=AnfisConfig(premise_epochs=0)
        )
        assert report.experiment_id is None
        assert [row.n_patches for row in report.pl_rows] == [0, 1]
        assert report.loss_mismatches() == []
        assert report.best_l in (0, 1)

    def test_quick_experiment(self):
        report = run_experiment(1, {"l_max": 1, **QUICK})
        assert [row.n_patches for row in report.pl_rows] == [0, 1]
        assert [row.members for row in report.baselines("bagging")] == [1, 2]
        assert [row.members for row in report.baselines("lsboost")] == [1, 2]
        assert report.baselines("bagging")[0].seed == 0
        assert report.loss_mismatches() == []
        assert report.config["anfis"]["premise_epochs"] == 0

    def test_deterministic_reports(self):
        first = run_experiment(1, {"l_max": 1, **QUICK})
        second = run_experiment(1, {"l_max": 1, **QUICK})
        assert without_timings(first) == without_timings(second)


class TestPlotData:
    def test_series(self):
        points = plot_points(quick_config(1, l_max=1))
        names = {name for name, _, _ in points}
        assert {"target", "fit_L0", "fit_L1", "error_L0", "error_L1", "sse"} <= names
        assert sum(1 for name, _, _ in points if name == "sse") == 3
        assert sum(1 for name, _, _ in points if name == "target") == 601
        assert to_csv(points).splitlines()[0] == "series,x,y"


@pytest.mark.slow
class TestExperiments:
    """Reproduce the trends of the five benchmark experiments"""

    def test_curve1d(self):
        report = run_experiment(1)
        rmse = [row.train_rmse for row in report.pl_rows]
        assert rmse[0] > rmse[1] > rmse[2]
        assert rmse[0] == pytest.approx(1.69, abs=0.3)
        assert rmse[2] <= 0.7

    @pytest.mark.parametrize("experiment_id, count", [(1, 3), (2, 9)])
    def test_trained_rule_partitions(self, experiment_id, count):
        runner = ExperimentRunner(ExperimentConfig(experiment_id))
        train = runner.load_data().train
        global_model = runner.anfis_factory()().fit(train.inputs, train.targets)
        boxes = global_model.candidate_boxes()
        assert len(boxes) == count
        assert sorted(box.flat_index for box in boxes) == list(range(1, count + 1))

    def test_sinc2d_first_patch_is_the_worst_candidate(self):
        runner = ExperimentRunner(ExperimentConfig(2, l_max=1))
        train = runner.load_data().train
        sweep = runner.sweep(train)
        initial = sweep.entries[0].model.initial_global
        boxes = initial.candidate_boxes()
        sse = candidate_sse(initial, train.inputs, train.targets, boxes)
        patch = sweep.entries[1].model.patches[0]
        assert patch.box.flat_index == boxes[int(np.argmax(sse))].flat_index
        assert patch.box.contains(np.array([[0.0, 0.0]]))[0]

    def test_sinc2d(self):
        report = run_experiment(2)
        losses = [row.loss for row in report.pl_rows]
        assert losses[1] < losses[0]
        assert losses[2] >= losses[1]
        assert report.best_l == 1
        assert len(run_experiment(2, {"l_max": 1}).pl_rows) == 2

    def test_manifold3d(self):
        report = run_experiment(3)
        assert len(report.pl_rows) == 6
        rmse = [row.train_rmse for row in report.pl_rows]
        assert rmse[4] < rmse[0]
        boosted = [row.train_rmse for row in report.baselines("lsboost")]
        assert all(b <= a for a, b in zip(boosted, boosted[1:]))
        bagged = report.baselines("bagging")
        assert rmse[4] < bagged[4].train_rmse
        assert rmse[4] < boosted[4]

    def test_sysid(self):
        report = run_experiment(4, {"retrain_every": 105})
        test_rmse = [row.test_rmse for row in report.pl_rows]
        assert test_rmse[0] > test_rmse[1] > test_rmse[2]
        assert all(row.y_rmse is not None for row in report.pl_rows)
        assert report.trace

    def test_mackey_glass(self):
        report = run_experiment(5)
        losses = [row.loss for row in report.pl_rows]
        assert losses[3] > losses[2]
        assert report.best_l == 2
        assert all(row.test_rmse is not None for row in report.pl_rows)
