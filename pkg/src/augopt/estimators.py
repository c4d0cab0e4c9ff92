"""scikit-learn style wrappers around the two solvers.

``fit`` takes a single initial state ``X`` of shape ``(3,)`` or ``(1, 3)``
and learns the optimal translocation schedule for it. ``transform`` replays
that schedule from any number of initial states, ``predict`` returns the
terminal populations, and ``score`` the mean objective value.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted

from .direct import OptimizerConfig, solve_direct
from .exceptions import NotConvergedError
from .fbsm import SweepConfig, solve_fbsm
from .model import ModelKind, ModelParams, ObjectiveParams, State, objective, simulate
from .scenarios import MODEL_KEYS, OBJECTIVE_KEYS
from .validation import check_initial_state

__all__ = ["ModelAOptimizer", "ModelBOptimizer"]


class _AugmentationOptimizer(BaseEstimator):
    _kind = None

    def model_params(self):
        return ModelParams(**{k: getattr(self, k) for k in MODEL_KEYS})

    def objective_params(self):
        return ObjectiveParams(**{k: getattr(self, k) for k in OBJECTIVE_KEYS})

    @classmethod
    def from_scenario(cls, spec, **solver_params):
        """Estimator preloaded with a :class:`ScenarioSpec`'s parameters."""
        return cls(**spec.params.as_dict(), **spec.obj.as_dict(), **solver_params)

    def _solve(self, x0, p, obj):
        raise NotImplementedError

    def fit(self, X, y=None):
        X = check_initial_state(X)
        if X.shape[0] != 1:
            raise ValueError(f"fit expects exactly one initial state, got {X.shape[0]}")
        x0 = State(*map(float, X[0]))
        p, obj = self.model_params(), self.objective_params()
        try:
            res = self._solve(x0, p, obj)
        except NotConvergedError as exc:
            warnings.warn(str(exc), ConvergenceWarning)
            res = exc.result
        self.initial_state_ = x0
        self.controls_ = np.asarray(res.controls, dtype=float)
        self.trajectory_ = res.trajectory
        self.objective_ = res.objective_value
        self.n_iter_ = res.iterations
        self.converged_ = res.converged
        self.result_ = res
        base = simulate(ModelKind.UNCONTROLLED, x0, None, p, obj.T)
        self.baseline_objective_ = objective(base, obj)
        return self

    def transform(self, X):
        """Trajectories of shape ``(n_samples, T + 1, 3)`` under the fitted schedule."""
        check_is_fitted(self, "controls_")
        X = check_initial_state(X)
        p = self.model_params()
        T = len(self.controls_)
        return np.stack(
            [simulate(self._kind, row, self.controls_, p, T).as_array() for row in X]
        )

    def predict(self, X):
        """Terminal populations ``(u_T, v_T, w_T)`` for each initial state."""
        return self.transform(X)[:, -1, :]

    def score(self, X, y=None):
        """Mean objective value of the fitted schedule over the given initial states."""
        check_is_fitted(self, "controls_")
        X = check_initial_state(X)
        p, obj = self.model_params(), self.objective_params()
        return float(np.mean([
            objective(simulate(self._kind, row, self.controls_, p, obj.T), obj) for row in X
        ]))


class ModelAOptimizer(_AugmentationOptimizer):
    """Grow, predate, then augment; solved by the forward-backward sweep.

    Fitted attributes: ``controls_``, ``trajectory_``, ``adjoints_``,
    ``objective_``, ``baseline_objective_``, ``n_iter_``, ``converged_``.
    """

    _kind = ModelKind.MODEL_A

    def __init__(
        self,
        s=0.25, k_u=0.50, m=0.25, delta1=0.40, delta2=0.50, gamma=0.025,
        q=0.85, k_w=0.80, n=0.25,
        T=6, N=0.50, M1=0.40, M2=0.15, A=0.70,
        relaxation=0.25, tol=1e-3, max_iter=1000,
    ):
        self.s = s
        self.k_u = k_u
        self.m = m
        self.delta1 = delta1
        self.delta2 = delta2
        self.gamma = gamma
        self.q = q
        self.k_w = k_w
        self.n = n
        self.T = T
        self.N = N
        self.M1 = M1
        self.M2 = M2
        self.A = A
        self.relaxation = relaxation
        self.tol = tol
        self.max_iter = max_iter

    def _solve(self, x0, p, obj):
        return solve_fbsm(x0, p, obj, SweepConfig(self.relaxation, self.tol, self.max_iter))

    def fit(self, X, y=None):
        super().fit(X, y)
        self.adjoints_ = self.result_.adjoints
        return self


class ModelBOptimizer(_AugmentationOptimizer):
    """Augment, grow, then predate; solved by multistart projected quasi-Newton.

    Fitted attributes: ``controls_``, ``trajectory_``, ``objective_``,
    ``baseline_objective_``, ``n_iter_``, ``converged_``.
    """

    _kind = ModelKind.MODEL_B

    def __init__(
        self,
        s=0.25, k_u=0.50, m=0.25, delta1=0.40, delta2=0.50, gamma=0.025,
        q=0.85, k_w=0.80, n=0.25,
        T=6, N=0.50, M1=0.40, M2=0.15, A=0.70,
        starts=None, grad_step=1e-7, kkt_tol=1e-6, max_iter=500,
    ):
        self.s = s
        self.k_u = k_u
        self.m = m
        self.delta1 = delta1
        self.delta2 = delta2
        self.gamma = gamma
        self.q = q
        self.k_w = k_w
        self.n = n
        self.T = T
        self.N = N
        self.M1 = M1
        self.M2 = M2
        self.A = A
        self.starts = starts
        self.grad_step = grad_step
        self.kkt_tol = kkt_tol
        self.max_iter = max_iter

    def _solve(self, x0, p, obj):
        starts = None if self.starts is None else tuple(self.starts)
        return solve_direct(x0, p, obj, OptimizerConfig(starts, self.grad_step, self.kkt_tol, self.max_iter))
