"""
Versioned JSON model files for trained learners and PL models

Floats are written with the shortest repr that parses back to the same
double, so a loaded model predicts exactly like the saved one.
"""

import dataclasses
import json
import logging
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from ..core.config import Combiner
from ..core.exceptions import ContractViolation, ModelFileError, ModelVersionError
from ..fuzzy.membership import TrapezoidalMf
from ..fuzzy.partition import PatchBox
from ..fuzzy.tsk import TskSystem
from ..learners.anfis_learner import AnfisLearner
from ..learners.base_learner import BaseLearner
from ..learners.ensemble import EnsembleModel
from ..learners.polynomial import PolynomialLearner, PolynomialModel
from ..learners.tree import RegressionTree, TreeLearner, TreeNode
from ..patching.model import Patch, PlModel, StageRecord

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class TskDoc(BaseModel):
    kind: Literal["tsk"] = "tsk"
    input_ranges: List[Tuple[float, float]]
    mfs: List[List[Tuple[float, float, float, float]]]
    coefficients: List[List[float]]


class PolynomialDoc(BaseModel):
    kind: Literal["polynomial"] = "polynomial"
    degree: int
    coefficients: List[float]


class TreeNodeDoc(BaseModel):
    value: float
    n_samples: int
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNodeDoc"] = None
    right: Optional["TreeNodeDoc"] = None


class TreeDoc(BaseModel):
    kind: Literal["tree"] = "tree"
    n_inputs: int
    max_depth: int
    min_leaf: int
    root: TreeNodeDoc


class EnsembleDoc(BaseModel):
    kind: Literal["ensemble"] = "ensemble"
    combiner: Combiner
    shrinkage: float
    initial: float
    member_seeds: List[int] = Field(default_factory=list)
    members: List["LearnerDoc"]


LearnerDoc = Annotated[
    Union[TskDoc, PolynomialDoc, TreeDoc, EnsembleDoc], Field(discriminator="kind")
]


class BoxDoc(BaseModel):
    bounds: List[Tuple[float, float]]
    flat_index: int = 0
    source: List[int] = Field(default_factory=list)
    closed_upper: List[bool]


class PatchDoc(BaseModel):
    box: BoxDoc
    learner: LearnerDoc
    n_examples: int
    global_sse: float
    global_rmse: float
    local_rmse: float


class StageDoc(BaseModel):
    n_patches: int
    global_updated: bool
    rmse: float
    loss: float


class PatchModelDoc(BaseModel):
    kind: Literal["patch-model"] = "patch-model"
    alpha: float
    training_rmse: float
    loss: float
    global_update_skipped: bool = False
    skipped: List[int] = Field(default_factory=list)
    n_candidates: int = 0
    stages: List[StageDoc] = Field(default_factory=list)
    patches: List[PatchDoc]
    global_model: LearnerDoc
    initial_global: Optional[LearnerDoc] = None


class ModelDocument(BaseModel):
    format_version: int
    model: Annotated[
        Union[TskDoc, PolynomialDoc, TreeDoc, EnsembleDoc, PatchModelDoc],
        Field(discriminator="kind"),
    ]


TreeNodeDoc.model_rebuild()
EnsembleDoc.model_rebuild()
PatchDoc.model_rebuild()
PatchModelDoc.model_rebuild()
ModelDocument.model_rebuild()


def _node_doc(node: TreeNode) -> TreeNodeDoc:
    return TreeNodeDoc.model_validate(node.to_dict())


def _node(doc: TreeNodeDoc) -> TreeNode:
    return TreeNode.from_dict(doc.model_dump())


def learner_doc(learner: BaseLearner) -> Any:
    """Document for one trained learner"""
    if isinstance(learner, AnfisLearner):
        system = learner.system
        return TskDoc(
            input_ranges=list(system.input_ranges),
            mfs=[[mf.params for mf in mfs] for mfs in system.mfs_per_dim],
            coefficients=system.coefficients.tolist(),
        )
    if isinstance(learner, PolynomialLearner):
        return PolynomialDoc(
            degree=learner.model.degree, coefficients=list(learner.model.coefficients)
        )
    if isinstance(learner, TreeLearner):
        tree = learner.tree
        return TreeDoc(
            n_inputs=tree.n_inputs,
            max_depth=tree.max_depth,
            min_leaf=tree.min_leaf,
            root=_node_doc(tree.root),
        )
    if isinstance(learner, EnsembleModel):
        return EnsembleDoc(
            combiner=learner.combiner,
            shrinkage=learner.shrinkage,
            initial=learner.initial,
            member_seeds=list(learner.member_seeds),
            members=[learner_doc(member) for member in learner.members],
        )
    raise ContractViolation(f"Cannot serialize a {type(learner).__name__}")


def learner_from_doc(doc: Any) -> BaseLearner:
    if isinstance(doc, TskDoc):
        mfs = [[TrapezoidalMf(*params) for params in dim] for dim in doc.mfs]
        system = TskSystem.from_grid(mfs, doc.input_ranges, np.array(doc.coefficients))
        return AnfisLearner.from_system(system)
    if isinstance(doc, PolynomialDoc):
        model = PolynomialModel(degree=doc.degree, coefficients=tuple(doc.coefficients))
        return PolynomialLearner.from_model(model)
    if isinstance(doc, TreeDoc):
        tree = RegressionTree(
            root=_node(doc.root),
            n_inputs=doc.n_inputs,
            max_depth=doc.max_depth,
            min_leaf=doc.min_leaf,
        )
        return TreeLearner.from_tree(tree)
    if isinstance(doc, EnsembleDoc):
        return EnsembleModel(
            [learner_from_doc(member) for member in doc.members],
            doc.combiner,
            shrinkage=doc.shrinkage,
            initial=doc.initial,
            member_seeds=doc.member_seeds,
        )
    raise ContractViolation(f"Unknown learner document {type(doc).__name__}")


def _box_doc(box: PatchBox) -> BoxDoc:
    return BoxDoc(
        bounds=list(box.bounds),
        flat_index=box.flat_index,
        source=list(box.source),
        closed_upper=list(box.closed_upper),
    )


def _box(doc: BoxDoc) -> PatchBox:
    return PatchBox(
        bounds=tuple(doc.bounds),
        flat_index=doc.flat_index,
        source=tuple(doc.source),
        closed_upper=tuple(doc.closed_upper),
    )


def model_doc(model: Union[PlModel, BaseLearner]) -> ModelDocument:
    if not isinstance(model, PlModel):
        return ModelDocument(format_version=FORMAT_VERSION, model=learner_doc(model))
    patches = [
        PatchDoc(
            box=_box_doc(patch.box),
            learner=learner_doc(patch.learner),
            n_examples=patch.n_examples,
            global_sse=patch.global_sse,
            global_rmse=patch.global_rmse,
            local_rmse=patch.local_rmse,
        )
        for patch in model.patches
    ]
    initial = None
    if model.initial_global is not model.global_model:
        initial = learner_doc(model.initial_global)
    document = PatchModelDoc(
        alpha=model.alpha,
        training_rmse=model.training_rmse,
        loss=model.loss,
        global_update_skipped=model.global_update_skipped,
        skipped=list(model.skipped),
        n_candidates=model.n_candidates,
        stages=[StageDoc(**dataclasses.asdict(stage)) for stage in model.stages],
        patches=patches,
        global_model=learner_doc(model.global_model),
        initial_global=initial,
    )
    return ModelDocument(format_version=FORMAT_VERSION, model=document)


def model_from_doc(document: ModelDocument) -> Union[PlModel, BaseLearner]:
    doc = document.model
    if not isinstance(doc, PatchModelDoc):
        return learner_from_doc(doc)
    global_model = learner_from_doc(doc.global_model)
    initial = global_model
    if doc.initial_global is not None:
        initial = learner_from_doc(doc.initial_global)
    patches = tuple(
        Patch(
            box=_box(patch.box),
            learner=learner_from_doc(patch.learner),
            n_examples=patch.n_examples,
            global_sse=patch.global_sse,
            global_rmse=patch.global_rmse,
            local_rmse=patch.local_rmse,
        )
        for patch in doc.patches
    )
    return PlModel(
        patches=patches,
        global_model=global_model,
        initial_global=initial,
        alpha=doc.alpha,
        training_rmse=doc.training_rmse,
        loss=doc.loss,
        global_update_skipped=doc.global_update_skipped,
        stages=tuple(StageRecord(**stage.model_dump()) for stage in doc.stages),
        skipped=tuple(doc.skipped),
        n_candidates=doc.n_candidates,
    )


def dumps(model: Union[PlModel, BaseLearner]) -> str:
    return json.dumps(model_doc(model).model_dump(mode="json"), indent=2)


def loads(text: str) -> Union[PlModel, BaseLearner]:
    """Parse a model document; errors name the offending field"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(
            "$", f"malformed document at line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(raw, dict):
        raise ModelFileError("$", "document must be a JSON object")
    if "format_version" not in raw:
        raise ModelFileError("format_version", "missing")
    if raw["format_version"] != FORMAT_VERSION:
        raise ModelVersionError(
            "format_version",
            f"unsupported version {raw['format_version']!r}, expected {FORMAT_VERSION}",
        )
    try:
        document = ModelDocument.model_validate(raw)
    except ValidationError as e:
        error = e.errors()[0]
        path = ".".join(str(part) for part in error["loc"])
        raise ModelFileError(path or "$", error["msg"]) from e
    try:
        return model_from_doc(document)
    except ContractViolation as e:
        raise ModelFileError("model", str(e)) from e


def save_model(model: Union[PlModel, BaseLearner], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(model))
    logger.info(f"Saved model to {path}")
    return path


def load_model(path: Union[str, Path]) -> Union[PlModel, BaseLearner]:
    with open(path, "r", encoding="utf-8") as f:
        return loads(f.read())


def describe(model: Union[PlModel, BaseLearner]) -> Dict[str, Any]:
    """Short summary used by the CLI"""
    if isinstance(model, PlModel):
        return {
            "kind": "patch-model",
            "patches": model.n_patches,
            "training_rmse": model.training_rmse,
            "loss": model.loss,
        }
    return {"kind": model.kind.value, "inputs": model.n_inputs}
