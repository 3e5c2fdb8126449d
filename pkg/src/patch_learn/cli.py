"""
CLI module for PatchLearn
Command line interface for running patch learning experiments
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .core.config import (
    AnfisConfig,
    CandidateSource,
    ExperimentConfig,
    LearnerKind,
    OutputFormat,
    PlConfig,
    load_overrides,
)
from .core.exceptions import PatchLearnError
from .datasets import DATASETS, LabeledSet, load_dataset
from .datasets.labeled_set import read_inputs
from .experiments.model_file import describe, load_model, save_model
from .experiments.plots import plot_points
from .experiments.plots import to_csv as plot_csv
from .experiments.report import ExperimentReport, render, write_report
from .experiments.runner import ExperimentRunner, run_sweep
from .fuzzy.partition import PatchBox
from .learners.anfis_learner import AnfisLearner
from .learners.polynomial import PolynomialLearner
from .patching.patch_learner import train_patch_learning

logger = logging.getLogger(__name__)

# Diagnostics go to stderr so reports on stdout stay machine-readable
console = Console(stderr=True)


def setup_logging(verbose: bool):
    """Configure the root logger with a rich console handler"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=verbose)],
        force=True,
    )


def handle_errors(command: Callable) -> Callable:
    """Turn library errors into click errors (exit code 1, one-line diagnostic)"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except PatchLearnError as e:
            raise click.ClickException(str(e)) from e

    return wrapper


def emit(text: str, out: Optional[Path]):
    if out is None:
        click.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"Wrote {out}")


def print_summary(report: ExperimentReport):
    """Rich table of the PL rows and baselines"""
    has_test = any(row.test_rmse is not None for row in report.pl_rows)
    table = Table(
        title=f"{report.dataset}: best L = {report.best_l}",
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("method")
    table.add_column("models", justify="right")
    table.add_column("train RMSE", justify="right")
    if has_test:
        table.add_column("test RMSE", justify="right")
    table.add_column("loss", justify="right")

    def fmt(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.4g}"

    for row in report.pl_rows:
        cells = [f"PL (L={row.n_patches})", str(row.n_patches + 1), fmt(row.train_rmse)]
        if has_test:
            cells.append(fmt(row.test_rmse))
        style = "bold green" if row.n_patches == report.best_l else None
        table.add_row(*cells, fmt(row.loss), style=style)
    for row in report.baseline_rows:
        cells = [row.method, str(row.members), fmt(row.train_rmse)]
        if has_test:
            cells.append(fmt(row.test_rmse))
        table.add_row(*cells, "-")
    console.print(table)
    for note in report.notes:
        console.print(f"[dim]note: {note}[/dim]")


def load_training_set(dataset: Optional[str], data: Optional[Path]) -> LabeledSet:
    if (dataset is None) == (data is None):
        raise click.UsageError("Give exactly one of --dataset or --data")
    if dataset is not None:
        return load_dataset(dataset)
    return LabeledSet.from_csv(data)


def parse_box(text: str) -> PatchBox:
    """'lo:hi' per input, inputs separated by commas, e.g. '1.5:3' or '0:1,2:4'"""
    try:
        bounds = []
        for side in text.split(","):
            lo, hi = side.split(":")
            bounds.append((float(lo), float(hi)))
    except ValueError:
        raise click.BadParameter(f"'{text}' is not of the form lo:hi[,lo:hi...]")
    return PatchBox.closed(bounds)


def build_config(
    experiment_id: int, config_file: Optional[Path], flags: Dict[str, Any]
) -> ExperimentConfig:
    """Defaults, then YAML overrides, then explicit CLI flags"""
    config = ExperimentConfig(experiment_id=experiment_id)
    if config_file is not None:
        config = config.with_overrides(load_overrides(config_file))
    given = {key: value for key, value in flags.items() if value is not None}
    if given:
        config = config.with_overrides(given)
    return config


format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice([f.value for f in OutputFormat]),
    default=OutputFormat.CSV.value,
    show_default=True,
    help="Report format",
)
out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Output file (default: stdout)",
)
dataset_choice = click.Choice(sorted(DATASETS))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose logging")
@click.version_option(package_name="patch-learn")
def cli(verbose: bool):
    """PatchLearn - patch learning with TSK fuzzy systems"""
    setup_logging(verbose)


@cli.command()
@click.argument("experiment_id", type=click.IntRange(1, 5))
@click.option("--l-max", type=click.IntRange(min=0), help="Largest number of patches")
@click.option("--alpha", type=float, help="Loss exponent  [default: 0.25]")
@click.option("--mfs", type=click.IntRange(min=2), help="MFs per input  [default: 2]")
@click.option("--seed", type=int, help="Bagging seed  [default: 0]")
@click.option(
    "--retrain-every", type=click.IntRange(min=1), help="Online retrain period"
)
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML file of config overrides",
)
@format_option
@out_option
@handle_errors
def experiment(
    experiment_id: int,
    l_max: Optional[int],
    alpha: Optional[float],
    mfs: Optional[int],
    seed: Optional[int],
    retrain_every: Optional[int],
    config_file: Optional[Path],
    output_format: str,
    out: Optional[Path],
):
    """Run experiment EXPERIMENT_ID (1-5) and emit its report"""
    flags = {
        "l_max": l_max,
        "alpha": alpha,
        "mfs": mfs,
        "seed": seed,
        "retrain_every": retrain_every,
    }
    config = build_config(experiment_id, config_file, flags)
    report = ExperimentRunner(config).run()
    fmt = OutputFormat(output_format)
    if out is not None:
        write_report(report, out, fmt)
        print_summary(report)
    else:
        click.echo(render(report, fmt), nl=False)


@cli.command()
@click.option("--l-max", type=click.IntRange(min=0), required=True)
@click.option("--dataset", type=dataset_choice, help="Built-in benchmark")
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--alpha", type=float, default=0.25, show_default=True)
@click.option("--mfs", type=click.IntRange(min=2), default=2, show_default=True)
@format_option
@out_option
@handle_errors
def sweep(
    l_max: int,
    dataset: Optional[str],
    data: Optional[Path],
    alpha: float,
    mfs: int,
    output_format: str,
    out: Optional[Path],
):
    """Train ANFIS-based PL for L = 0..L_MAX and report the best L"""
    training = load_training_set(dataset, data)
    name = dataset or data.stem
    report = run_sweep(training, name, l_max, alpha, AnfisConfig(mfs_per_input=mfs))
    emit(render(report, OutputFormat(output_format)), out)
    if out is not None:
        print_summary(report)


@cli.command()
@click.option("--dataset", type=dataset_choice, help="Built-in benchmark")
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--patches", type=click.IntRange(min=0), default=2, show_default=True)
@click.option(
    "--learner",
    type=click.Choice([LearnerKind.ANFIS.value, LearnerKind.POLYNOMIAL.value]),
    default=LearnerKind.ANFIS.value,
    show_default=True,
)
@click.option(
    "--box",
    "boxes",
    multiple=True,
    help="Explicit patch box 'lo:hi[,lo:hi...]' (repeatable, in priority order)",
)
@click.option("--alpha", type=float, default=0.25, show_default=True)
@click.option("--mfs", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@handle_errors
def train(
    dataset: Optional[str],
    data: Optional[Path],
    patches: int,
    learner: str,
    boxes: Sequence[str],
    alpha: float,
    mfs: int,
    out: Path,
):
    """Train one PL model and save it as a model file"""
    training = load_training_set(dataset, data)
    explicit: Optional[List[PatchBox]] = [parse_box(b) for b in boxes] or None
    kind = LearnerKind(learner)
    if kind is LearnerKind.POLYNOMIAL and explicit is None and patches > 0:
        raise click.UsageError("Polynomial learners need explicit patches (--box)")

    anfis = AnfisConfig(mfs_per_input=mfs)

    def factory():
        if kind is LearnerKind.POLYNOMIAL:
            return PolynomialLearner(degree=2)
        return AnfisLearner(anfis)

    source = CandidateSource.EXPLICIT if explicit else CandidateSource.RULE_PARTITIONS
    config = PlConfig(max_patches=patches, alpha=alpha, candidate_source=source)
    model = train_patch_learning(
        training.inputs, training.targets, config, factory, factory, boxes=explicit
    )
    save_model(model, out)
    console.print(
        f"[green]Saved[/green] {model.n_patches}-patch model to {out}: "
        f"training RMSE {model.training_rmse:.4g}, loss {model.loss:.4g}"
    )


@cli.command()
@click.option(
    "--model",
    "model_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
)
@click.option(
    "--data",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
)
@out_option
@handle_errors
def predict(model_path: Path, data: Path, out: Optional[Path]):
    """Predict every row of a CSV with a saved model"""
    model = load_model(model_path)
    logger.debug(f"Loaded {describe(model)}")
    inputs = read_inputs(data)
    predictions = model.predict(inputs)
    header = ",".join([f"x{m + 1}" for m in range(inputs.shape[1])] + ["prediction"])
    lines = [header]
    for row, value in zip(inputs, predictions):
        lines.append(",".join(repr(float(v)) for v in np.append(row, value)))
    emit("\n".join(lines) + "\n", out)


@cli.command("export-plot")
@click.argument("experiment_id", type=click.IntRange(1, 5))
@click.option("--l-max", type=click.IntRange(min=0))
@click.option("--mfs", type=click.IntRange(min=2))
@click.option("--retrain-every", type=click.IntRange(min=1))
@out_option
@handle_errors
def export_plot(
    experiment_id: int,
    l_max: Optional[int],
    mfs: Optional[int],
    retrain_every: Optional[int],
    out: Optional[Path],
):
    """Write tidy series,x,y plot data for an experiment"""
    flags = {"l_max": l_max, "mfs": mfs, "retrain_every": retrain_every}
    config = build_config(experiment_id, None, flags)
    emit(plot_csv(plot_points(config)), out)


@cli.command("dataset")
@click.argument("name", type=dataset_choice)
@out_option
@handle_errors
def dataset_command(name: str, out: Optional[Path]):
    """Write a benchmark dataset as CSV"""
    labeled = load_dataset(name)
    if out is None:
        header = ",".join([f"x{m + 1}" for m in range(labeled.n_inputs)] + ["y"])
        table = np.column_stack([labeled.inputs, labeled.targets])
        rows = [",".join(f"{v:.12g}" for v in row) for row in table]
        click.echo("\n".join([header] + rows))
    else:
        labeled.to_csv(out)
        logger.info(f"Wrote {len(labeled)} examples of {name} to {out}")


def main():
    """Main entry point for the CLI"""
    try:
        cli()
    except KeyboardInterrupt:
        logger.info("Operation cancelled by user.")
        sys.exit(1)
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        logger.debug("Traceback", exc_info=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
