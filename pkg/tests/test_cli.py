"""Test the command line interface"""

import json

import click
import numpy as np
import pytest
from click.testing import CliRunner

from patch_learn.cli import cli, parse_box
from patch_learn.datasets import LabeledSet
from patch_learn.experiments.model_file import save_model
from patch_learn.experiments.report import from_csv, from_json

pytestmark = pytest.mark.integration


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def data_file(tmp_path, small_curve):
    return small_curve.to_csv(tmp_path / "small.csv")


class TestParseBox:
    def test_two_sides(self):
        box = parse_box("0:1,2.5:4")
        assert box.bounds == ((0.0, 1.0), (2.5, 4.0))

    def test_malformed(self):
        with pytest.raises(click.BadParameter):
            parse_box("0-1")


class TestCommands:
    """Test each subcommand end to end"""

    def test_help_lists_commands(self, runner):
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        commands = ("experiment", "sweep", "train", "predict", "export-plot", "dataset")
        for command in commands:
            assert command in result.output

    def test_dataset(self, runner, tmp_path):
        out = tmp_path / "curve.csv"
        result = runner.invoke(cli, ["dataset", "curve1d", "--out", str(out)])
        assert result.exit_code == 0
        assert len(LabeledSet.from_csv(out)) == 601

    def test_train_and_predict(self, runner, tmp_path):
        data = tmp_path / "curve.csv"
        model = tmp_path / "model.json"
        predictions = tmp_path / "predictions.csv"
        runner.invoke(cli, ["dataset", "curve1d", "--out", str(data)])

        result = runner.invoke(
            cli,
            [
                "train",
                "--data",
                str(data),
                "--learner",
                "polynomial",
                "--box",
                "1.5:3",
                "--box",
                "4:5",
                "--out",
                str(model),
            ],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(model.read_text())["format_version"] == 1

        result = runner.invoke(
            cli,
            [
                "predict",
                "--model",
                str(model),
                "--data",
                str(data),
                "--out",
                str(predictions),
            ],
        )
        assert result.exit_code == 0, result.output
        lines = predictions.read_text().splitlines()
        assert lines[0] == "x1,prediction"
        assert len(lines) == 602
        x, value = (float(v) for v in lines[551].split(","))
        assert x == pytest.approx(5.5)
        assert value == pytest.approx(35.75, abs=0.01)

    def test_polynomial_needs_boxes(self, runner, tmp_path):
        result = runner.invoke(
            cli,
            [
                "train",
                "--dataset",
                "curve1d",
                "--learner",
                "polynomial",
                "--out",
                str(tmp_path / "m.json"),
            ],
        )
        assert result.exit_code != 0
        assert "--box" in result.output

    def test_dataset_and_data_are_exclusive(self, runner, data_file, tmp_path):
        result = runner.invoke(
            cli,
            [
                "train",
                "--dataset",
                "curve1d",
                "--data",
                str(data_file),
                "--out",
                str(tmp_path / "m.json"),
            ],
        )
        assert result.exit_code != 0

    def test_sweep(self, runner, data_file, tmp_path):
        out = tmp_path / "sweep.json"
        result = runner.invoke(
            cli,
            [
                "sweep",
                "--l-max",
                "1",
                "--data",
                str(data_file),
                "--format",
                "json",
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        report = from_json(out.read_text())
        assert report.dataset == "small"
        assert [row.n_patches for row in report.pl_rows] == [0, 1]

    def test_experiment_with_config_file(self, runner, tmp_path):
        overrides = tmp_path / "quick.yaml"
        overrides.write_text("anfis:\n  premise_epochs: 0\n")
        out = tmp_path / "report.csv"
        result = runner.invoke(
            cli,
            [
                "experiment",
                "1",
                "--l-max",
                "1",
                "--config",
                str(overrides),
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        report = from_csv(out.read_text())
        assert report.experiment_id == 1
        assert report.l_max == 1
        assert report.config["anfis"]["premise_epochs"] == 0

    def test_unknown_experiment(self, runner):
        result = runner.invoke(cli, ["experiment", "9"])
        assert result.exit_code == 2

    def test_bad_model_file(self, runner, tmp_path, data_file):
        model = tmp_path / "broken.json"
        model.write_text("{}")
        result = runner.invoke(
            cli, ["predict", "--model", str(model), "--data", str(data_file)]
        )
        assert result.exit_code == 1
        assert "format_version" in result.output

    def test_bad_override_key(self, runner, tmp_path):
        overrides = tmp_path / "bad.yaml"
        overrides.write_text("nope: 1\n")
        result = runner.invoke(cli, ["experiment", "1", "--config", str(overrides)])
        assert result.exit_code == 1
        assert "nope" in result.output


def test_predictions_match_library(tmp_path, quadratic_pl):
    model = save_model(quadratic_pl, tmp_path / "model.json")
    data = LabeledSet(np.array([[2.0], [5.5]]), np.zeros(2)).to_csv(tmp_path / "q.csv")
    out = tmp_path / "p.csv"
    result = CliRunner().invoke(
        cli, ["predict", "--model", str(model), "--data", str(data), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    values = [float(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
    assert values == [quadratic_pl.predict_one([2.0]), quadratic_pl.predict_one([5.5])]
