"""
Labeled example sets and their CSV form
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from ..core.exceptions import ContractViolation, EmptyDataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledSet:
    """N x M inputs with N targets, tagged with where they came from"""

    inputs: np.ndarray
    targets: np.ndarray
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs.reshape(-1, 1)
        targets = np.asarray(self.targets, dtype=float).ravel()
        if inputs.shape[0] == 0:
            raise EmptyDataError("A labeled set needs at least one example")
        if inputs.shape[0] != targets.size:
            raise ContractViolation(
                f"{inputs.shape[0]} inputs but {targets.size} targets"
            )
        if not (np.isfinite(inputs).all() and np.isfinite(targets).all()):
            raise ContractViolation("Labeled set contains non-finite values")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return self.targets.size

    @property
    def n_inputs(self) -> int:
        return self.inputs.shape[1]

    def subset(self, rows: Union[slice, np.ndarray], **tags: Any) -> "LabeledSet":
        return LabeledSet(
            self.inputs[rows], self.targets[rows], {**self.provenance, **tags}
        )

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write `x1,...,xM,y` with 12 significant digits"""
        path = Path(path)
        header = ",".join([f"x{m + 1}" for m in range(self.n_inputs)] + ["y"])
        table = np.column_stack([self.inputs, self.targets])
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, table, fmt="%.12g", delimiter=",", header=header, comments="")
        logger.debug(f"Wrote {len(self)} examples to {path}")
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "LabeledSet":
        """Read a CSV whose last column is the target"""
        path = Path(path)
        with open(path, "r", encoding="utf-8") as f:
            header = f.readline().strip().split(",")
        if len(header) < 2:
            raise ContractViolation(f"{path}: need at least one input column and y")
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if table.size == 0:
            raise EmptyDataError(f"{path} holds no examples")
        if table.shape[1] != len(header):
            raise ContractViolation(
                f"{path}: header has {len(header)} columns, rows have {table.shape[1]}"
            )
        return cls(table[:, :-1], table[:, -1], {"source": str(path)})


def read_inputs(path: Union[str, Path]) -> np.ndarray:
    """Input matrix from a CSV; a trailing `y` column is ignored"""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        header = [name.strip() for name in f.readline().strip().split(",")]
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if header and header[-1] == "y":
        table = table[:, :-1]
    if table.shape[0] == 0:
        raise EmptyDataError(f"{path} holds no inputs")
    return table
