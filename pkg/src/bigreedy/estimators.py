"""scikit-learn style front ends for the two bi-greedy algorithms.

The "training data" of these estimators is the objective itself::

    est = GameBiGreedy(epsilon=0.01, random_state=0).fit(objective)
    est.solution_, est.value_
"""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import strong, weak
from .validation import check_objective, check_positive


class _BiGreedyBase(BaseEstimator):
    def score(self, objective=None) -> float:
        """Objective value of the fitted solution (on ``objective`` if given)."""
        check_is_fitted(self, "solution_")
        if objective is None:
            return self.value_
        return float(check_objective(objective)(self.solution_))

    def _store(self, result):
        self.solution_ = result.solution
        self.value_ = result.report.objective_value
        self.report_ = result.report
        self.order_ = result.order
        self.trace_ = result.trace
        self.n_features_in_ = len(result.solution)
        return self


class GameBiGreedy(_BiGreedyBase):
    """Randomized bi-greedy for weak DR-submodular objectives.

    Parameters
    ----------
    epsilon : float, default=0.01
        Grid spacing for the 1-D searches and the curve samples.
    order : {"sequential", "random"}, default="sequential"
    random_state : int or None
        Seed of the Philox stream used for the coordinate order and the coins.
    record_trace : bool, default=False
        Keep one :class:`~bigreedy.weak.StepRecord` per coordinate in ``trace_``.
    """

    def __init__(self, epsilon=0.01, order="sequential", random_state=None, record_trace=False):
        self.epsilon = epsilon
        self.order = order
        self.random_state = random_state
        self.record_trace = record_trace

    def fit(self, objective, y=None):
        check_objective(objective)
        config = weak.RunConfig(self.epsilon, self.order, self.random_state, self.record_trace)
        return self._store(weak.run(objective, config))


class BinarySearchBiGreedy(_BiGreedyBase):
    """Deterministic binary-search bi-greedy for strong DR-submodular objectives."""

    def __init__(self, epsilon=1e-3, order="sequential", random_state=None):
        self.epsilon = epsilon
        self.order = order
        self.random_state = random_state

    def fit(self, objective, y=None):
        check_objective(objective)
        check_positive(self.epsilon, "epsilon")
        result = strong.run(objective, self.epsilon, order=self.order, seed=self.random_state)
        return self._store(result)
