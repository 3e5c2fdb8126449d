"""Test Bagging and LSBoost ensembles"""

import numpy as np
import pytest

from patch_learn.core.config import Combiner
from patch_learn.core.exceptions import ContractViolation, LearnerNotTrainable
from patch_learn.learners.ensemble import (
    MAX_RESAMPLE_ATTEMPTS,
    EnsembleModel,
    bagging_train,
    lsboost_train,
)
from patch_learn.learners.polynomial import PolynomialLearner


def line_data(n: int = 30):
    X = np.linspace(0, 3, n).reshape(-1, 1)
    return X, 1.0 + X[:, 0] ** 2 + 0.1 * np.sin(7 * X[:, 0])


def quadratic() -> PolynomialLearner:
    return PolynomialLearner(degree=2)


def identity_resampler(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.arange(n)


class TestEnsembleModel:
    """Test ensemble combination"""

    def test_average_of_constants(self):
        X = np.arange(10.0).reshape(-1, 1)
        two = PolynomialLearner(1).fit(X, np.full(10, 2.0))
        four = PolynomialLearner(1).fit(X, np.full(10, 4.0))
        ensemble = EnsembleModel([two, four], Combiner.AVERAGE)
        assert ensemble.predict(X) == pytest.approx(np.full(10, 3.0))

    def test_truncated_prefix(self):
        X = np.arange(10.0).reshape(-1, 1)
        members = [PolynomialLearner(1).fit(X, np.full(10, v)) for v in (1.0, 2.0, 6.0)]
        ensemble = EnsembleModel(members, Combiner.AVERAGE)
        assert len(ensemble.truncated(2)) == 2
        assert ensemble.truncated(2).predict_one([0.0]) == pytest.approx(1.5)
        staged = ensemble.staged_predict(X[:1])
        assert staged[:, 0] == pytest.approx([1.0, 1.5, 3.0])
        with pytest.raises(ContractViolation):
            ensemble.truncated(4)

    def test_needs_members(self):
        with pytest.raises(ContractViolation):
            EnsembleModel([], Combiner.AVERAGE)

    def test_cannot_be_refit(self):
        X, y = line_data()
        ensemble = bagging_train(X, y, 1, quadratic)
        with pytest.raises(ContractViolation):
            ensemble.fit(X, y)


class TestBagging:
    """Test bootstrap aggregation"""

    def test_identity_resample_equals_single_learner(self):
        X, y = line_data()
        bagged = bagging_train(X, y, 1, quadratic, resampler=identity_resampler)
        assert np.array_equal(bagged.predict(X), quadratic().fit(X, y).predict(X))

    def test_identical_members_equal_single_model(self):
        X, y = line_data()
        bagged = bagging_train(X, y, 4, quadratic, resampler=identity_resampler)
        assert bagged.predict(X) == pytest.approx(quadratic().fit(X, y).predict(X))

    def test_smaller_ensemble_is_prefix(self):
        X, y = line_data()
        large = bagging_train(X, y, 5, quadratic, seed=3)
        small = bagging_train(X, y, 3, quadratic, seed=3)
        assert np.array_equal(large.truncated(3).predict(X), small.predict(X))
        assert large.member_seeds == (0, 1, 2, 3, 4)

    def test_seed_changes_resamples(self):
        X, y = line_data()
        first = bagging_train(X, y, 2, quadratic, seed=0).predict(X)
        second = bagging_train(X, y, 2, quadratic, seed=1).predict(X)
        assert not np.array_equal(first, second)

    def test_untrainable_member_is_dropped(self):
        X, y = line_data()
        calls = []

        def resampler(rng, n):
            calls.append(n)
            if len(calls) <= MAX_RESAMPLE_ATTEMPTS:
                return np.zeros(n, dtype=int)
            return np.arange(n)

        bagged = bagging_train(X, y, 3, quadratic, resampler=resampler)
        assert len(bagged) == 2
        assert bagged.member_seeds == (1, 2)

    def test_no_trainable_member(self):
        X, y = line_data()
        with pytest.raises(LearnerNotTrainable):
            bagging_train(
                X, y, 2, lambda: PolynomialLearner(2, min_examples_override=10**6)
            )

    def test_member_count(self):
        X, y = line_data()
        with pytest.raises(ContractViolation):
            bagging_train(X, y, 0, quadratic)


class TestLsboost:
    """Test least-squares boosting"""

    def test_zero_shrinkage_is_the_mean(self):
        X, y = line_data()
        model = lsboost_train(X, y, rounds=4, shrinkage=0.0)
        assert model.predict(X) == pytest.approx(np.full(y.size, y.mean()))

    def test_deep_tree_interpolates(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0], [4.0]])
        y = np.array([3.0, -1.0, 4.0, 1.5, 9.0])
        model = lsboost_train(X, y, rounds=1, shrinkage=1.0, max_depth=10, min_leaf=1)
        assert model.predict(X) == pytest.approx(y)

    def test_training_error_never_increases(self):
        rng = np.random.default_rng(4)
        X = rng.uniform(-2, 2, size=(150, 2))
        y = np.sin(X[:, 0]) * X[:, 1] + 0.05 * rng.normal(size=150)
        model = lsboost_train(X, y, rounds=12, shrinkage=0.3, max_depth=3, min_leaf=5)
        staged = model.staged_predict(X)
        errors = np.mean((staged - y) ** 2, axis=1)
        assert np.all(np.diff(errors) <= 1e-12)

    def test_rounds(self):
        X, y = line_data()
        with pytest.raises(ContractViolation):
            lsboost_train(X, y, rounds=0)
