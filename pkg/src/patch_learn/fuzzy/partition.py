"""
First-order rule partitions and patch boxes

A first-order rule partition of one input is a maximal interval on which the
same set of rules fires. Cartesian products of the per-input partitions are
the patch candidates; they are numbered with a single flat index k (last
input varying fastest).
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..core.exceptions import ContractViolation, UncoveredRangeError
from .membership import TrapezoidalMf, fired_set
from .tsk import TskSystem

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]

# Breakpoints closer than this fraction of the range are merged
MERGE_TOL = 1e-9


@dataclass(frozen=True)
class PatchBox:
    """Axis-aligned box owning a patch model.

    Membership per input is closed below and open above, except where
    `closed_upper` is set (last partition of an input, or explicit boxes),
    which makes the candidate boxes of one system a true tiling.
    """

    bounds: Tuple[Interval, ...]
    flat_index: int = 0
    source: Tuple[int, ...] = ()
    closed_upper: Tuple[bool, ...] = ()

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        for m, (lo, hi) in enumerate(bounds):
            if not lo < hi:
                raise ContractViolation(f"Box side {m} is empty: [{lo!r}, {hi!r}]")
        if not self.closed_upper:
            object.__setattr__(self, "closed_upper", (True,) * len(bounds))
        elif len(self.closed_upper) != len(bounds):
            raise ContractViolation("closed_upper needs one flag per box side")

    @classmethod
    def closed(cls, bounds: Sequence[Interval], flat_index: int = 0) -> "PatchBox":
        """Box closed on every side (used for hand-picked patches)"""
        return cls(bounds=tuple(bounds), flat_index=flat_index)

    @property
    def n_inputs(self) -> int:
        return len(self.bounds)

    def contains(self, X: np.ndarray) -> np.ndarray:
        """Boolean mask of the rows of X that fall into the box"""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_inputs:
            raise ContractViolation(
                f"Box has {self.n_inputs} sides, inputs have {X.shape[1]} columns"
            )
        inside = np.ones(X.shape[0], dtype=bool)
        for m, ((lo, hi), closed) in enumerate(zip(self.bounds, self.closed_upper)):
            column = X[:, m]
            upper_ok = column <= hi if closed else column < hi
            inside &= (column >= lo) & upper_ok
        return inside

    def describe(self) -> str:
        sides = []
        for (lo, hi), closed in zip(self.bounds, self.closed_upper):
            sides.append(f"[{lo:.4g},{hi:.4g}{']' if closed else ')'}")
        return "x".join(sides)


@dataclass(frozen=True)
class PartitionGrid:
    """Per-input first-order rule partitions of a TSK system"""

    per_dim: Tuple[Tuple[Interval, ...], ...]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(len(intervals) for intervals in self.per_dim)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def box(self, multi: Sequence[int]) -> PatchBox:
        """Box for a 1-based multi-index"""
        dims = self.dims
        flat = flat_index(multi, dims)
        bounds = tuple(self.per_dim[m][k - 1] for m, k in enumerate(multi))
        closed = tuple(k == dims[m] for m, k in enumerate(multi))
        return PatchBox(
            bounds=bounds,
            flat_index=flat,
            source=tuple(int(k) for k in multi),
            closed_upper=closed,
        )

    def boxes(self) -> List[PatchBox]:
        ranges = [range(1, count + 1) for count in self.dims]
        return [self.box(multi) for multi in itertools.product(*ranges)]


def partitions_1d(
    mfs: Sequence[TrapezoidalMf], value_range: Interval
) -> List[Interval]:
    """First-order rule partitions of one input over value_range"""
    lo, hi = float(value_range[0]), float(value_range[1])
    tolerance = MERGE_TOL * max(hi - lo, abs(lo), abs(hi), 1.0)

    candidates = sorted(p for mf in mfs for p in (mf.a, mf.d) if lo < p < hi)
    points = [lo]
    for p in candidates:
        if p - points[-1] > tolerance and hi - p > tolerance:
            points.append(p)
    points.append(hi)

    for p in points:
        if not fired_set(mfs, p):
            raise UncoveredRangeError((p, p))

    intervals: List[Interval] = []
    fired_sets: List[Tuple[int, ...]] = []
    for left, right in zip(points[:-1], points[1:]):
        fired = fired_set(mfs, 0.5 * (left + right))
        if not fired:
            raise UncoveredRangeError((left, right))
        if fired_sets and fired == fired_sets[-1]:
            intervals[-1] = (intervals[-1][0], right)
        else:
            intervals.append((left, right))
            fired_sets.append(fired)
    return intervals


def _check_dims(dims: Sequence[int]) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ContractViolation(f"Partition counts must be positive, got {dims}")
    return dims


def flat_index(multi: Sequence[int], dims: Sequence[int]) -> int:
    """k = k_M + sum_{m<M} (k_m - 1) * prod_{p>m} K_p (1-based)"""
    dims = _check_dims(dims)
    multi = tuple(int(k) for k in multi)
    if len(multi) != len(dims):
        raise ContractViolation(f"Multi-index {multi} does not match dims {dims}")
    for m, (k, count) in enumerate(zip(multi, dims)):
        if not 1 <= k <= count:
            raise ContractViolation(f"Component {m} of {multi} outside [1, {count}]")

    k = multi[-1]
    for m in range(len(dims) - 1):
        k += (multi[m] - 1) * int(np.prod(dims[m + 1 :], dtype=np.int64))
    return int(k)


def multi_index(k: int, dims: Sequence[int]) -> Tuple[int, ...]:
    """Inverse of flat_index via the integer-part recurrences"""
    dims = _check_dims(dims)
    total = int(np.prod(dims, dtype=np.int64))
    k = int(k)
    if not 1 <= k <= total:
        raise ContractViolation(f"Flat index {k} outside [1, {total}]")

    components = []
    consumed = 0
    for m in range(len(dims) - 1):
        stride = int(np.prod(dims[m + 1 :], dtype=np.int64))
        k_m = (k - 1 - consumed) // stride + 1
        components.append(k_m)
        consumed += (k_m - 1) * stride
    components.append(k - consumed)
    return tuple(components)


def partition_grid(system: TskSystem) -> PartitionGrid:
    per_dim = tuple(
        tuple(partitions_1d(mfs, value_range))
        for mfs, value_range in zip(system.mfs_per_dim, system.input_ranges)
    )
    return PartitionGrid(per_dim=per_dim)


def candidate_boxes(system: TskSystem) -> List[PatchBox]:
    """Every combination of per-input rule partitions, ordered by flat index"""
    grid = partition_grid(system)
    boxes = grid.boxes()
    logger.debug(f"{len(boxes)} candidate boxes from partition counts {grid.dims}")
    return boxes
