"""Shared fixtures for the PatchLearn test suite"""

import numpy as np
import pytest

from patch_learn.core.config import AnfisConfig, CandidateSource, PlConfig
from patch_learn.datasets import LabeledSet, gen_curve1d
from patch_learn.fuzzy.partition import PatchBox
from patch_learn.learners.anfis_learner import AnfisLearner
from patch_learn.learners.polynomial import PolynomialLearner
from patch_learn.patching.patch_learner import train_patch_learning


def quadratic_factory() -> PolynomialLearner:
    return PolynomialLearner(degree=2)


@pytest.fixture(scope="session")
def curve1d() -> LabeledSet:
    """601 samples of the piecewise 1-D curve"""
    return gen_curve1d()


@pytest.fixture(scope="session")
def quadratic_boxes():
    """Hand-picked patches over the two sine bumps of the 1-D curve"""
    return [PatchBox.closed([(1.5, 3.0)]), PatchBox.closed([(4.0, 5.0)])]


@pytest.fixture(scope="session")
def quadratic_pl(curve1d, quadratic_boxes):
    """Two-patch model with quadratic global and patch learners"""
    config = PlConfig(max_patches=2, candidate_source=CandidateSource.EXPLICIT)
    return train_patch_learning(
        curve1d.inputs,
        curve1d.targets,
        config,
        quadratic_factory,
        quadratic_factory,
        boxes=quadratic_boxes,
    )


@pytest.fixture(scope="session")
def quick_anfis() -> AnfisConfig:
    """ANFIS without premise descent: init plus one least-squares fit"""
    return AnfisConfig(premise_epochs=0)


@pytest.fixture
def anfis_factory(quick_anfis):
    def factory() -> AnfisLearner:
        return AnfisLearner(quick_anfis)

    return factory


@pytest.fixture
def small_curve() -> LabeledSet:
    """Smooth 1-D data, small enough for fast ANFIS runs"""
    x = np.linspace(0.0, 6.0, 61)
    return LabeledSet(x.reshape(-1, 1), x + x**2 + np.sin(3 * x))
