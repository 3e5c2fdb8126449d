"""
Experiment reports: schemas and their JSON, CSV and Markdown forms
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from jinja2 import Environment, PackageLoader, StrictUndefined
from pydantic import BaseModel, Field

from ..core.config import OutputFormat
from ..core.exceptions import ContractViolation
from ..patching.model import PlModel, loss

logger = logging.getLogger(__name__)


class PatchInfo(BaseModel):
    flat_index: int
    bounds: List[Tuple[float, float]]
    n_examples: int
    global_sse: float
    global_rmse: float
    local_rmse: float


class StageInfo(BaseModel):
    n_patches: int
    global_updated: bool
    rmse: float
    loss: float


class PlRow(BaseModel):
    """One PL model of the L sweep"""

    n_patches: int
    train_rmse: float
    train_ape: float
    loss: float
    test_rmse: Optional[float] = None
    test_ape: Optional[float] = None
    y_rmse: Optional[float] = None
    seconds: float = 0.0
    patches: List[PatchInfo] = Field(default_factory=list)
    skipped: List[int] = Field(default_factory=list)
    global_update_skipped: bool = False
    stages: List[StageInfo] = Field(default_factory=list)


class BaselineRow(BaseModel):
    method: str
    members: int
    train_rmse: float
    train_ape: float
    test_rmse: Optional[float] = None
    test_ape: Optional[float] = None
    y_rmse: Optional[float] = None
    seed: Optional[int] = None


class OnlineTracePoint(BaseModel):
    """One-step-ahead estimate of f(u(k)) made before k joins the training window"""

    k: int
    target: float
    prediction: float


class ExperimentReport(BaseModel):
    """PL sweep and baselines for one experiment (or one dataset sweep)"""

    experiment_id: Optional[int] = None
    dataset: str
    alpha: float
    seed: int
    l_max: int
    best_l: int
    config: Dict[str, Any] = Field(default_factory=dict)
    pl_rows: List[PlRow] = Field(default_factory=list)
    baseline_rows: List[BaselineRow] = Field(default_factory=list)
    trace: List[OnlineTracePoint] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    partial: bool = False

    def loss_mismatches(self) -> List[int]:
        """L values whose stored loss differs from loss(train_rmse, L, alpha)"""
        return [
            row.n_patches
            for row in self.pl_rows
            if row.loss != loss(row.train_rmse, row.n_patches, self.alpha)
        ]

    def baselines(self, method: str) -> List[BaselineRow]:
        return [row for row in self.baseline_rows if row.method == method]


def patch_infos(model: PlModel) -> List[PatchInfo]:
    return [
        PatchInfo(
            flat_index=patch.box.flat_index,
            bounds=[tuple(side) for side in patch.box.bounds],
            n_examples=patch.n_examples,
            global_sse=patch.global_sse,
            global_rmse=patch.global_rmse,
            local_rmse=patch.local_rmse,
        )
        for patch in model.patches
    ]


def stage_infos(model: PlModel) -> List[StageInfo]:
    return [
        StageInfo(
            n_patches=stage.n_patches,
            global_updated=stage.global_updated,
            rmse=stage.rmse,
            loss=stage.loss,
        )
        for stage in model.stages
    ]


# CSV layout: one row per record; nested parts go to the JSON `detail` column
CSV_COLUMNS = [
    "record",
    "method",
    "n_patches",
    "members",
    "train_rmse",
    "train_ape",
    "test_rmse",
    "test_ape",
    "y_rmse",
    "loss",
    "seconds",
    "seed",
    "k",
    "target",
    "prediction",
    "detail",
]
_PL_NESTED = {"patches", "skipped", "global_update_skipped", "stages"}
_REPORT_NESTED = {"pl_rows", "baseline_rows", "trace"}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(row: Dict[str, str]) -> Dict[str, Any]:
    return {key: value for key, value in row.items() if value != "" and key != "record"}


def to_csv(report: ExperimentReport) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    meta = report.model_dump(exclude=_REPORT_NESTED)
    writer.writerow({"record": "meta", "detail": json.dumps(meta)})
    for row in report.pl_rows:
        cells = {k: _cell(v) for k, v in row.model_dump(exclude=_PL_NESTED).items()}
        detail = json.dumps(row.model_dump(include=_PL_NESTED))
        writer.writerow({"record": "pl", **cells, "detail": detail})
    for row in report.baseline_rows:
        cells = {k: _cell(v) for k, v in row.model_dump().items()}
        writer.writerow({"record": "baseline", **cells})
    for point in report.trace:
        cells = {k: _cell(v) for k, v in point.model_dump().items()}
        writer.writerow({"record": "trace", **cells})
    return buffer.getvalue()


def from_csv(text: str) -> ExperimentReport:
    meta: Dict[str, Any] = {}
    pl_rows, baseline_rows, trace = [], [], []
    for row in csv.DictReader(io.StringIO(text)):
        record = row.get("record")
        fields = _parse(row)
        detail = json.loads(fields.pop("detail", "{}"))
        if record == "meta":
            meta = detail
        elif record == "pl":
            pl_rows.append(PlRow.model_validate({**fields, **detail}))
        elif record == "baseline":
            baseline_rows.append(BaselineRow.model_validate(fields))
        elif record == "trace":
            trace.append(OnlineTracePoint.model_validate(fields))
        else:
            raise ContractViolation(f"Unknown report record type '{record}'")
    return ExperimentReport.model_validate(
        {**meta, "pl_rows": pl_rows, "baseline_rows": baseline_rows, "trace": trace}
    )


def to_json(report: ExperimentReport) -> str:
    return report.model_dump_json(indent=2)


def from_json(text: str) -> ExperimentReport:
    return ExperimentReport.model_validate_json(text)


_environment = Environment(
    loader=PackageLoader("patch_learn.experiments", "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def _number(value: Optional[float], digits: int = 4) -> str:
    return "-" if value is None else f"{value:.{digits}g}"


_environment.filters["num"] = _number


def to_markdown(report: ExperimentReport) -> str:
    """Table-style summary of PL against Bagging and LSBoost"""
    template = _environment.get_template("report.md.j2")
    return template.render(
        report=report,
        bagging=report.baselines("bagging"),
        lsboost=report.baselines("lsboost"),
        has_test=any(row.test_rmse is not None for row in report.pl_rows),
    )


def render(report: ExperimentReport, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.JSON:
        return to_json(report)
    if output_format is OutputFormat.MARKDOWN:
        return to_markdown(report)
    return to_csv(report)


def write_report(
    report: ExperimentReport, path: Union[str, Path], output_format: OutputFormat
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(render(report, output_format))
    logger.info(f"Wrote {output_format.value} report to {path}")
    return path
