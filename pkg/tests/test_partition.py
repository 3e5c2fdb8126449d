"""Test first-order rule partitions, index mapping and candidate boxes"""

import itertools

import numpy as np
import pytest

from patch_learn.core.config import AnfisConfig
from patch_learn.core.exceptions import ContractViolation, UncoveredRangeError
from patch_learn.fuzzy import anfis
from patch_learn.fuzzy.membership import TrapezoidalMf, fired_set, uniform_trapezoids
from patch_learn.fuzzy.partition import (
    PatchBox,
    candidate_boxes,
    flat_index,
    multi_index,
    partition_grid,
    partitions_1d,
)
from patch_learn.fuzzy.tsk import TskSystem


def grid_system(n_inputs: int, mfs: int = 2) -> TskSystem:
    layout = uniform_trapezoids(0.0, 1.0, mfs)
    return TskSystem.from_grid([layout] * n_inputs, [(0.0, 1.0)] * n_inputs)


class TestPartitions1d:
    """Test partitions_1d"""

    def test_tuned_layout(self):
        mfs = [TrapezoidalMf(0, 0, 2.11, 4.58), TrapezoidalMf(2.11, 4.58, 6, 6)]
        assert partitions_1d(mfs, (0.0, 6.0)) == [(0, 2.11), (2.11, 4.58), (4.58, 6)]

    def test_single_mf(self):
        assert partitions_1d([TrapezoidalMf(0, 0, 6, 6)], (0.0, 6.0)) == [(0.0, 6.0)]

    def test_gap(self):
        mfs = [TrapezoidalMf(0, 0, 1, 2), TrapezoidalMf(3, 4, 5, 5)]
        with pytest.raises(UncoveredRangeError):
            partitions_1d(mfs, (0.0, 5.0))

    def test_near_duplicate_breakpoints_merge(self):
        mfs = [
            TrapezoidalMf(0, 0, 2, 4),
            TrapezoidalMf(2, 4, 6, 6),
            TrapezoidalMf(4 + 1e-12, 5, 6, 6),
        ]
        intervals = partitions_1d(mfs, (0.0, 6.0))
        assert len(intervals) == 3
        assert min(hi - lo for lo, hi in intervals) > 1.0

    def test_fired_set_constant_inside(self):
        mfs = uniform_trapezoids(0.0, 6.0, 3)
        for lo, hi in partitions_1d(mfs, (0.0, 6.0)):
            probes = np.linspace(lo, hi, 12)[1:-1]
            assert len({fired_set(mfs, x) for x in probes}) == 1


class TestIndexMapping:
    """Test flat_index and multi_index"""

    @pytest.mark.parametrize(
        "multi, dims, k", [((2, 1), (5, 5), 6), ((5, 5), (5, 5), 25), ((4,), (7,), 4)]
    )
    def test_flat_index(self, multi, dims, k):
        assert flat_index(multi, dims) == k
        assert multi_index(k, dims) == multi

    def test_first_and_last(self):
        dims = (3, 4, 2)
        assert multi_index(1, dims) == (1, 1, 1)
        assert multi_index(24, dims) == dims

    def test_enumeration_order(self):
        dims = (3, 2, 4)
        products = itertools.product(*[range(1, d + 1) for d in dims])
        assert [flat_index(m, dims) for m in products] == list(range(1, 25))

    def test_random_round_trip(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            dims = []
            while True:
                count = int(rng.integers(1, 12))
                if np.prod(dims + [count]) > 100_000 or len(dims) == 6:
                    break
                dims.append(count)
            if not dims:
                dims = [1]
            total = int(np.prod(dims))
            k = int(rng.integers(1, total + 1))
            assert flat_index(multi_index(k, dims), dims) == k
            multi = tuple(int(rng.integers(1, d + 1)) for d in dims)
            assert multi_index(flat_index(multi, dims), dims) == multi

    @pytest.mark.parametrize("multi", [(0, 1), (6, 1), (1,)])
    def test_component_out_of_range(self, multi):
        with pytest.raises(ContractViolation):
            flat_index(multi, (5, 5))

    @pytest.mark.parametrize("k", [0, 26])
    def test_flat_out_of_range(self, k):
        with pytest.raises(ContractViolation):
            multi_index(k, (5, 5))


class TestCandidateBoxes:
    """Test candidate_boxes and the box boundary rule"""

    @pytest.mark.parametrize("n_inputs, count", [(1, 3), (2, 9), (3, 27)])
    def test_counts(self, n_inputs, count):
        boxes = candidate_boxes(grid_system(n_inputs))
        assert len(boxes) == count
        assert sorted(box.flat_index for box in boxes) == list(range(1, count + 1))

    def test_sinc_like_grid(self):
        """Two trained trapezoids per input give the nine-box grid"""
        axis = np.linspace(-10, 10, 12)
        x1, x2 = np.meshgrid(axis, axis, indexing="ij")
        X = np.column_stack([x1.ravel(), x2.ravel()])
        system = anfis.init_from_data(X, X[:, 0] * X[:, 1], AnfisConfig())
        assert partition_grid(system).dims == (3, 3)

    def test_boxes_tile_the_data(self):
        system = grid_system(2)
        boxes = candidate_boxes(system)
        rng = np.random.default_rng(3)
        edges = [lo for lo, _ in partition_grid(system).per_dim[0]] + [1.0]
        corners = np.array(list(itertools.product(edges, edges)))
        X = np.vstack([rng.uniform(0, 1, size=(300, 2)), corners])
        owners = np.vstack([box.contains(X) for box in boxes]).sum(axis=0)
        assert np.all(owners == 1)

    def test_multi_index_is_carried(self):
        boxes = candidate_boxes(grid_system(2))
        assert boxes[3].source == (2, 1)
        assert boxes[3].flat_index == 4


class TestPatchBox:
    def test_open_upper_side(self):
        box = PatchBox(bounds=((0.0, 1.0),), closed_upper=(False,))
        inside = box.contains(np.array([[0.0], [0.5], [1.0]]))
        assert inside.tolist() == [True, True, False]

    def test_closed_box(self):
        box = PatchBox.closed([(1.5, 3.0)])
        assert box.contains(np.array([[3.0], [3.0001]])).tolist() == [True, False]

    def test_empty_side(self):
        with pytest.raises(ContractViolation):
            PatchBox.closed([(1.0, 1.0)])

    def test_width_mismatch(self):
        with pytest.raises(ContractViolation):
            PatchBox.closed([(0.0, 1.0)]).contains(np.zeros((2, 2)))
