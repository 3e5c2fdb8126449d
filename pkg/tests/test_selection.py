"""Test choosing the number of patches"""

import numpy as np
import pytest

from patch_learn.core.config import CandidateSource, PlConfig
from patch_learn.learners.polynomial import PolynomialLearner
from patch_learn.patching.patch_learner import train_patch_learning
from patch_learn.patching.selection import best_index, select_num_patches


def quadratic_factory() -> PolynomialLearner:
    return PolynomialLearner(degree=2)


class TestBestIndex:
    @pytest.mark.parametrize(
        "losses, expected",
        [([0.046, 0.021, 0.023], 1), ([3.0, 2.0, 1.0], 2), ([1.0, 1.0], 0)],
    )
    def test_smallest_loss_earliest_tie(self, losses, expected):
        assert best_index(losses) == expected


class TestSelectNumPatches:
    """Test the L sweep"""

    def test_explicit_sweep(self, curve1d, quadratic_boxes):
        config = PlConfig(max_patches=2, candidate_source=CandidateSource.EXPLICIT)
        sweep = select_num_patches(
            curve1d.inputs,
            curve1d.targets,
            config,
            quadratic_factory,
            quadratic_factory,
            boxes=quadratic_boxes,
        )
        assert [entry.n_patches for entry in sweep.entries] == [0, 1, 2]
        assert sweep.best_l == 2
        assert not sweep.truncated
        assert sweep.losses == [entry.model.loss for entry in sweep.entries]
        assert all(entry.seconds >= 0 for entry in sweep.entries)

    def test_sweep_matches_direct_training(
        self, curve1d, quadratic_boxes, quadratic_pl
    ):
        config = PlConfig(max_patches=2, candidate_source=CandidateSource.EXPLICIT)
        sweep = select_num_patches(
            curve1d.inputs,
            curve1d.targets,
            config,
            quadratic_factory,
            quadratic_factory,
            boxes=quadratic_boxes,
        )
        assert np.array_equal(
            sweep.best.model.predict(curve1d.inputs),
            quadratic_pl.predict(curve1d.inputs),
        )
        assert sweep.best.model.loss == quadratic_pl.loss

    def test_patch_sets_are_prefixes(self, curve1d, quadratic_boxes):
        config = PlConfig(max_patches=2, candidate_source=CandidateSource.EXPLICIT)
        sweep = select_num_patches(
            curve1d.inputs,
            curve1d.targets,
            config,
            quadratic_factory,
            quadratic_factory,
            boxes=quadratic_boxes,
        )
        one, two = sweep.entries[1].model, sweep.entries[2].model
        assert one.boxes == two.boxes[:1]

    def test_last_candidate_stays_global(self, small_curve, anfis_factory):
        """Three rule partitions allow at most two patches"""
        sweep = select_num_patches(
            small_curve.inputs,
            small_curve.targets,
            PlConfig(max_patches=5),
            anfis_factory,
            anfis_factory,
        )
        assert len(sweep.entries) == 3
        assert sweep.truncated
        assert sweep.best_l == int(np.argmin(sweep.losses))

    def test_zero_l_max(self, small_curve, anfis_factory):
        sweep = select_num_patches(
            small_curve.inputs,
            small_curve.targets,
            PlConfig(max_patches=0),
            anfis_factory,
            anfis_factory,
        )
        assert sweep.best_l == 0
        assert len(sweep.entries) == 1
        direct = train_patch_learning(
            small_curve.inputs,
            small_curve.targets,
            PlConfig(max_patches=0),
            anfis_factory,
            anfis_factory,
        )
        assert sweep.best.model.training_rmse == direct.training_rmse
