"""
First-order TSK fuzzy systems on a full rule grid
"""

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ContractViolation, UncoveredInputError
from .membership import TrapezoidalMf, coverage_gap, membership_matrix


@dataclass(frozen=True)
class TskRule:
    """IF x_1 is A_{antecedent[0]} and ... THEN y = b_0 + b_1 x_1 + ... + b_M x_M"""

    antecedent: Tuple[int, ...]
    consequent: Tuple[float, ...]

    def output(self, x: Sequence[float]) -> float:
        """Value of the affine consequent at x"""
        return float(self.consequent[0] + np.dot(self.consequent[1:], x))


@dataclass(frozen=True)
class TskSystem:
    """Grid-partitioned rule base with first-order consequents.

    Rules enumerate the Cartesian product of the per-dimension MF lists with
    the last dimension varying fastest. Immutable; all "updates" return new
    systems.
    """

    mfs_per_dim: Tuple[Tuple[TrapezoidalMf, ...], ...]
    rules: Tuple[TskRule, ...]
    input_ranges: Tuple[Tuple[float, float], ...]
    _antecedents: np.ndarray = field(init=False, repr=False, compare=False)
    _coefficients: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n_inputs = len(self.mfs_per_dim)
        if len(self.input_ranges) != n_inputs:
            raise ContractViolation(
                f"{len(self.input_ranges)} input ranges for {n_inputs} inputs"
            )
        expected = int(np.prod([len(mfs) for mfs in self.mfs_per_dim]))
        if len(self.rules) != expected:
            raise ContractViolation(
                f"Rule grid needs {expected} rules, got {len(self.rules)}"
            )
        for rule in self.rules:
            if len(rule.antecedent) != n_inputs:
                raise ContractViolation(
                    f"Rule antecedent {rule.antecedent} does not have {n_inputs} terms"
                )
            if len(rule.consequent) != n_inputs + 1:
                raise ContractViolation(
                    f"Rule consequent needs {n_inputs + 1} coefficients"
                )
            for m, index in enumerate(rule.antecedent):
                if not 0 <= index < len(self.mfs_per_dim[m]):
                    raise ContractViolation(
                        f"MF index {index} is invalid for input {m}"
                    )

        object.__setattr__(
            self, "_antecedents", np.array([r.antecedent for r in self.rules], int)
        )
        object.__setattr__(
            self,
            "_coefficients",
            np.array([r.consequent for r in self.rules], dtype=float),
        )

    @classmethod
    def from_grid(
        cls,
        mfs_per_dim: Sequence[Sequence[TrapezoidalMf]],
        input_ranges: Sequence[Tuple[float, float]],
        coefficients: Optional[np.ndarray] = None,
    ) -> "TskSystem":
        """Build the full rule grid, zero consequents unless given"""
        mfs = tuple(tuple(dim_mfs) for dim_mfs in mfs_per_dim)
        antecedents = list(itertools.product(*[range(len(m)) for m in mfs]))
        if coefficients is None:
            coefficients = np.zeros((len(antecedents), len(mfs) + 1))
        rules = tuple(
            TskRule(tuple(int(i) for i in ant), tuple(float(c) for c in coef))
            for ant, coef in zip(antecedents, np.asarray(coefficients, dtype=float))
        )
        ranges = tuple((float(lo), float(hi)) for lo, hi in input_ranges)
        return cls(mfs_per_dim=mfs, rules=rules, input_ranges=ranges)

    @property
    def n_inputs(self) -> int:
        return len(self.mfs_per_dim)

    @property
    def n_rules(self) -> int:
        return len(self.rules)

    @property
    def coefficients(self) -> np.ndarray:
        """Consequent matrix, shape (rules, M + 1)"""
        return self._coefficients.copy()

    def with_coefficients(self, coefficients: np.ndarray) -> "TskSystem":
        return TskSystem.from_grid(self.mfs_per_dim, self.input_ranges, coefficients)

    def with_mfs(self, mfs_per_dim: Sequence[Sequence[TrapezoidalMf]]) -> "TskSystem":
        return TskSystem.from_grid(mfs_per_dim, self.input_ranges, self._coefficients)

    def scaled(self, factor: float) -> "TskSystem":
        return self.with_coefficients(self._coefficients * factor)

    def validate(self) -> None:
        """Check that the MFs cover every training range"""
        for m, (mfs, (lo, hi)) in enumerate(zip(self.mfs_per_dim, self.input_ranges)):
            gap = coverage_gap(mfs, lo, hi)
            if gap is not None:
                raise ContractViolation(
                    f"Input {m}: MFs leave [{gap[0]!r}, {gap[1]!r}] uncovered"
                )

    def _check_inputs(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.n_inputs:
            raise ContractViolation(
                f"Expected inputs with {self.n_inputs} columns, got shape {X.shape}"
            )
        return X

    def firing_strengths(self, X: np.ndarray) -> np.ndarray:
        """Product t-norm firing strength of every rule, shape (N, rules)"""
        X = self._check_inputs(X)
        strengths = np.ones((X.shape[0], self.n_rules))
        for m, mfs in enumerate(self.mfs_per_dim):
            grades = membership_matrix(mfs, X[:, m])
            strengths *= grades[:, self._antecedents[:, m]]
        return strengths

    def rule_outputs(self, X: np.ndarray) -> np.ndarray:
        """Consequent value of every rule at every input, shape (N, rules)"""
        X = self._check_inputs(X)
        return self._coefficients[:, 0] + X @ self._coefficients[:, 1:].T

    def infer(self, X: np.ndarray, clamp: bool = False) -> np.ndarray:
        """Weighted-average output for every row of X.

        With clamp=True, rows that fire no rule are clipped into the input
        ranges and evaluated again instead of raising.
        """
        X = self._check_inputs(X)
        weights = self.firing_strengths(X)
        totals = weights.sum(axis=1)

        uncovered = totals <= 0.0
        if uncovered.any():
            if not clamp:
                index = int(np.flatnonzero(uncovered)[0])
                raise UncoveredInputError(X[index], index=index)
            lows = np.array([lo for lo, _ in self.input_ranges])
            highs = np.array([hi for _, hi in self.input_ranges])
            X = X.copy()
            X[uncovered] = np.clip(X[uncovered], lows, highs)
            weights[uncovered] = self.firing_strengths(X[uncovered])
            totals = weights.sum(axis=1)
            if (totals <= 0.0).any():
                index = int(np.flatnonzero(totals <= 0.0)[0])
                raise UncoveredInputError(X[index], index=index)

        outputs = self.rule_outputs(X)
        return (weights * outputs).sum(axis=1) / totals

    def mf_lists(self) -> List[List[Tuple[float, float, float, float]]]:
        return [[mf.params for mf in mfs] for mfs in self.mfs_per_dim]


def rule_firing(system: TskSystem, rule: TskRule, x: Sequence[float]) -> float:
    """Product of the antecedent membership grades of one rule at x"""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != system.n_inputs or len(rule.antecedent) != system.n_inputs:
        raise ContractViolation(
            f"Input has {x.size} components, system has {system.n_inputs} inputs"
        )
    strength = 1.0
    for m, index in enumerate(rule.antecedent):
        strength *= system.mfs_per_dim[m][index].membership(float(x[m]))
    return float(strength)


def tsk_infer(system: TskSystem, x: Sequence[float]) -> float:
    """Firing-strength-weighted average of the rule consequents at x"""
    return float(system.infer(np.asarray(x, dtype=float).reshape(1, -1))[0])
