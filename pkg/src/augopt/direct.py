"""Direct maximisation of the augment-grow-predate objective.

The objective is cubic in each control, so instead of a maximum-principle
characterization the schedule is optimised directly over the box
``[0, A]^T``. Each iteration builds a quasi-Newton quadratic model of the
objective on the currently free coordinates, takes the projected step, and
backtracks until sufficient increase; iteration stops once the
box-projected gradient vanishes (the KKT conditions for a box). A small
grid of constant starting schedules hedges against local maxima.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .exceptions import InfeasibleRegimeError, NotConvergedError, ValidationError
from .model import ModelKind, State, is_infeasible, objective, simulate, step_model_b
from .result import SolveResult
from .validation import check_int, check_interval, check_schedule

__all__ = [
    "OptimizerConfig",
    "objective_of_controls",
    "gradient",
    "kkt_residual",
    "maximize_box",
    "solve_direct",
]

DEFAULT_START_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)
ARMIJO = 1e-4
GRAD_FLOOR = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for :func:`solve_direct`.

    ``starts`` holds the constant values used as initial schedules; ``None``
    means ``A`` times 0, 1/4, 1/2, 3/4 and 1.
    """

    starts: Optional[Tuple[float, ...]] = None
    grad_step: float = 1e-7
    kkt_tol: float = 1e-6
    max_iter: int = 500

    def __post_init__(self):
        if self.starts is not None:
            starts = tuple(check_interval("starts", s, 0.0, None, closed=(True, False)) for s in self.starts)
            if not starts:
                raise ValidationError("starts", "need at least one starting value")
            object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "grad_step", check_interval("grad_step", self.grad_step, 0.0))
        object.__setattr__(self, "kkt_tol", check_interval("kkt_tol", self.kkt_tol, 0.0))
        object.__setattr__(self, "max_iter", check_int("max_iter", self.max_iter, minimum=1))

    def start_values(self, A):
        if self.starts is None:
            return tuple(f * A for f in DEFAULT_START_FRACTIONS)
        for s in self.starts:
            if s > A:
                raise ValidationError("starts", f"start {s} exceeds the control bound A={A}")
        return self.starts


def _terminal_value(h, x0, p, obj):
    # unchecked fast path shared by the objective and its finite differences
    x = x0
    for t, ht in enumerate(h):
        if is_infeasible(x, p):
            raise InfeasibleRegimeError([t])
        x = step_model_b(x, ht, p)
    return x.u + obj.N * x.w - obj.cost(h)


def objective_of_controls(h, x0, p, obj):
    """Simulate Model B under ``h`` and return ``J(h)``."""
    h = check_schedule(h, obj.T, upper=obj.A)
    return _terminal_value(h, State.checked(x0), p, obj)


def gradient(h, x0, p, obj, step=1e-7):
    """Finite-difference gradient of :func:`objective_of_controls`.

    Central differences in the interior; one-sided differences when the
    central stencil would leave ``[0, A]``. The step for coordinate ``t`` is
    ``max(step * |h_t|, 1e-8)``.
    """
    h = np.asarray(check_schedule(h, obj.T, upper=obj.A), dtype=float)
    return _fd_gradient(h, State.checked(x0), p, obj, step)


def _fd_gradient(h, x0, p, obj, step):
    g = np.empty(len(h))
    f0 = None
    for t in range(len(h)):
        d = max(step * abs(h[t]), GRAD_FLOOR)
        hp = h.copy()
        hm = h.copy()
        if h[t] - d >= 0.0 and h[t] + d <= obj.A:
            hp[t] += d
            hm[t] -= d
            g[t] = (_terminal_value(tuple(hp), x0, p, obj) - _terminal_value(tuple(hm), x0, p, obj)) / (2 * d)
            continue
        if f0 is None:
            f0 = _terminal_value(tuple(h), x0, p, obj)
        if h[t] - d < 0.0:
            hp[t] += d
            g[t] = (_terminal_value(tuple(hp), x0, p, obj) - f0) / d
        else:
            hm[t] -= d
            g[t] = (f0 - _terminal_value(tuple(hm), x0, p, obj)) / d
    return g


def kkt_residual(h, g, A):
    """``max_t |P(h + g) - h|`` with ``P`` the projection onto ``[0, A]``."""
    h = np.asarray(h, dtype=float)
    return float(np.max(np.abs(np.clip(h + g, 0.0, A) - h), initial=0.0))


def maximize_box(fun, grad, x0, lower, upper, kkt_tol=1e-6, max_iter=500):
    """Projected quasi-Newton maximisation of ``fun`` over a box.

    Coordinates sitting (within a shrinking margin) on a bound with the
    gradient pushing outward are held by a plain projected-gradient step;
    the rest follow an inverse-BFGS direction, reset whenever that split
    changes. Steps are halved from 1 until the Armijo sufficient-increase
    condition holds along the projection arc.

    Returns
    -------
    x : ndarray
    value : float
    iterations : int
    converged : bool
        True when the projected-gradient residual fell to ``kkt_tol``.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    x = np.clip(np.asarray(x0, dtype=float), lower, upper)
    n = x.size
    # minimise f = -fun
    f = -fun(x)
    g = -grad(x)
    H = np.eye(n)
    prev_free = None
    converged = False
    it = 0
    while True:
        pg = np.clip(x - g, lower, upper) - x
        if np.max(np.abs(pg), initial=0.0) <= kkt_tol:
            converged = True
            break
        if it >= max_iter:
            break
        it += 1

        margin = min(1e-3, float(np.linalg.norm(pg)))
        active = ((x - lower <= margin) & (g > 0)) | ((upper - x <= margin) & (g < 0))
        free = ~active
        if prev_free is None or np.any(free != prev_free):
            H = np.eye(n)
        prev_free = free

        d = -g.copy()
        if free.any():
            d[free] = -H[np.ix_(free, free)] @ g[free]
        if g @ d >= 0:
            H = np.eye(n)
            d = -g.copy()

        accepted = False
        for use_gradient in (False, True):
            if use_gradient:
                H = np.eye(n)
                d = -g.copy()
            alpha = 1.0
            for _ in range(60):
                x_new = np.clip(x + alpha * d, lower, upper)
                f_new = -fun(x_new)
                if f_new <= f + ARMIJO * (g @ (x_new - x)):
                    accepted = True
                    break
                alpha *= 0.5
            if accepted:
                break
        if not accepted or np.array_equal(x_new, x):
            break

        g_new = -grad(x_new)
        s = x_new - x
        y = g_new - g
        sy = s @ y
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            V = np.eye(n) - rho * np.outer(s, y)
            H = V @ H @ V.T + rho * np.outer(s, s)
        x, f, g = x_new, f_new, g_new
    return x, -f, it, converged


def solve_direct(x0, p, obj, cfg=None):
    """Optimal schedule for Model B by multistart box-constrained maximisation.

    Every start in ``cfg`` is run to KKT stationarity; the best converged
    schedule wins (ties go to the lexicographically smaller schedule). When
    no start converges, :class:`NotConvergedError` carries the best iterate.
    """
    cfg = cfg or OptimizerConfig()
    x0 = State.checked(x0)
    T, A = obj.T, obj.A
    lower = np.zeros(T)
    upper = np.full(T, A)

    def fun(h):
        return _terminal_value(tuple(h), x0, p, obj)

    def grad(h):
        return _fd_gradient(h, x0, p, obj, cfg.grad_step)

    runs = []
    for s in cfg.start_values(A):
        h, value, iters, ok = maximize_box(
            fun, grad, np.full(T, s), lower, upper, cfg.kkt_tol, cfg.max_iter
        )
        runs.append((value, tuple(float(x) for x in h), iters, ok))

    pool = [r for r in runs if r[3]] or runs
    value, h, iters, ok = min(pool, key=lambda r: (-r[0], r[1]))
    traj = simulate(ModelKind.MODEL_B, x0, h, p, T)
    result = SolveResult(
        controls=h,
        trajectory=traj,
        objective_value=objective(traj, obj),
        iterations=iters,
        converged=ok,
    )
    if not ok:
        raise NotConvergedError(result, "no start reached the KKT tolerance")
    return result
