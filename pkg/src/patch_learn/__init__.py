"""
PatchLearn - patch learning for regression with TSK fuzzy systems

This package trains a global model, then carves out the input regions it fits
worst and gives each one its own local model. It ships the ANFIS learner,
polynomial, CART, Bagging and LSBoost baselines, and the benchmark experiments.
"""

__version__ = "0.1.0"
__author__ = "PatchLearn Team"

from .core.config import AnfisConfig, CandidateSource, ExperimentConfig, PlConfig
from .learners.anfis_learner import AnfisLearner
from .learners.polynomial import PolynomialLearner
from .patching.model import PlModel
from .patching.patch_learner import PatchLearner, train_patch_learning
from .patching.selection import select_num_patches

__all__ = [
    "AnfisConfig",
    "CandidateSource",
    "ExperimentConfig",
    "PlConfig",
    "AnfisLearner",
    "PolynomialLearner",
    "PlModel",
    "PatchLearner",
    "train_patch_learning",
    "select_num_patches",
]
