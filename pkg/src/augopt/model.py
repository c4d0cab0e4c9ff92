"""Predator-prey-reserve dynamics and the augmentation objective.

Populations are real numbers in units of 1000 individuals. The step maps
work on plain Python scalars (complex values included, which the test
suite uses for complex-step derivatives) and evaluate every formula in the
written order, so results are reproducible bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .exceptions import InfeasibleRegimeError, LengthMismatchError
from .validation import (
    check_int,
    check_interval,
    check_population,
    check_schedule,
)

__all__ = [
    "ModelKind",
    "ModelParams",
    "ObjectiveParams",
    "State",
    "Trajectory",
    "growth_u",
    "decay_v",
    "growth_w",
    "is_infeasible",
    "step_uncontrolled",
    "step_model_a",
    "step_model_b",
    "step",
    "simulate",
    "objective",
]


class ModelKind(str, enum.Enum):
    """Order-of-events tag attached to every trajectory."""

    UNCONTROLLED = "uncontrolled"
    MODEL_A = "a"  # grow -> predation -> augment
    MODEL_B = "b"  # augment -> grow -> predation

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"model_a": "a", "modela": "a", "model_b": "b", "modelb": "b", "none": "uncontrolled"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class ModelParams:
    """Ecological rate constants.

    Parameters
    ----------
    s : float
        Prey intrinsic growth rate.
    k_u : float
        Prey carrying capacity.
    m : float
        Prey Allee constant; the growth threshold is ``m * k_u``.
    delta1 : float
        Fraction of grown prey consumed per unit of predator.
    delta2 : float
        Predator conversion rate per unit of grown prey.
    gamma : float
        Predator decay proportion per step.
    q : float
        Reserve intrinsic growth rate.
    k_w : float
        Reserve carrying capacity.
    n : float
        Reserve Allee constant; the growth threshold is ``n * k_w``.
    """

    s: float = 0.25
    k_u: float = 0.50
    m: float = 0.25
    delta1: float = 0.40
    delta2: float = 0.50
    gamma: float = 0.025
    q: float = 0.85
    k_w: float = 0.80
    n: float = 0.25

    def __post_init__(self):
        for name in ("s", "k_u", "delta1", "delta2", "q", "k_w"):
            object.__setattr__(self, name, check_interval(name, getattr(self, name), 0.0))
        object.__setattr__(self, "m", check_interval("m", self.m, 0.0, 1.0))
        object.__setattr__(self, "n", check_interval("n", self.n, 0.0, 1.0))
        # gamma = 0 is admitted so the no-decay limit can be exercised.
        object.__setattr__(
            self, "gamma", check_interval("gamma", self.gamma, 0.0, 1.0, closed=(True, False))
        )

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ObjectiveParams:
    """Horizon, payoff weight, cost constants and control bound.

    ``J(h) = u_T + N w_T - sum_t (M1 h_t**2 + M2 h_t)`` is maximised over
    schedules with ``0 <= h_t <= A``.
    """

    T: int = 6
    N: float = 0.50
    M1: float = 0.40
    M2: float = 0.15
    A: float = 0.70

    def __post_init__(self):
        object.__setattr__(self, "T", check_int("T", self.T, minimum=0))
        object.__setattr__(self, "N", check_interval("N", self.N, 0.0, 1.0, closed=(True, False)))
        object.__setattr__(self, "M1", check_interval("M1", self.M1, 0.0))
        object.__setattr__(self, "M2", check_interval("M2", self.M2, 0.0, closed=(True, False)))
        object.__setattr__(self, "A", check_interval("A", self.A, 0.0, 1.0, closed=(True, True)))

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def cost(self, h):
        """Accumulated translocation cost of a schedule."""
        total = 0.0
        for x in h:
            total = total + (self.M1 * x**2 + self.M2 * x)
        return total


class State(NamedTuple):
    """Prey, predator and reserve populations at one time step."""

    u: float
    v: float
    w: float

    @classmethod
    def checked(cls, x):
        u, v, w = x
        return cls(check_population("u", u), check_population("v", v), check_population("w", w))


@dataclass(frozen=True)
class Trajectory:
    """States ``x_0..x_T`` plus the schedule that produced them.

    ``infeasible_steps`` lists every ``t`` at which ``delta1 * v_t > 1``,
    i.e. where the prey update left the nonnegative orthant.
    """

    states: Tuple[State, ...]
    controls: Optional[Tuple[float, ...]]
    kind: ModelKind
    infeasible_steps: Tuple[int, ...] = ()

    @property
    def T(self):
        return len(self.states) - 1

    @property
    def initial(self):
        return self.states[0]

    @property
    def final(self):
        return self.states[-1]

    @property
    def feasible(self):
        return not self.infeasible_steps

    def as_array(self):
        """States as a ``(T+1, 3)`` float array."""
        return np.array(self.states, dtype=float).reshape(-1, 3)

    def controls_or_zeros(self):
        if self.controls is None:
            return (0.0,) * self.T
        return self.controls


# -- growth / decay primitives ------------------------------------------------

def growth_u(u, p):
    """Prey growth with a strong Allee effect: ``s u (1-u/k_u)(u/k_u-m) + u``."""
    return p.s * u * (1 - u / p.k_u) * (u / p.k_u - p.m) + u


def decay_v(v, p):
    """Predator decay ``(1 - gamma) v``."""
    return (1 - p.gamma) * v


def growth_w(w, p):
    """Reserve growth with a strong Allee effect: ``q w (1-w/k_w)(w/k_w-n) + w``."""
    return p.q * w * (1 - w / p.k_w) * (w / p.k_w - p.n) + w


def is_infeasible(x, p):
    """True when predation would drive the prey update negative."""
    return (p.delta1 * x[1]).real > 1


# -- one-step transition maps -------------------------------------------------

def step_uncontrolled(x, p):
    """Grow the prey, let predation act, decay the predator; reserve is decoupled."""
    u, v, w = x
    fu = growth_u(u, p)
    return State(
        fu * (1 - p.delta1 * v),
        (v + fu * p.delta2 * v) * (1 - p.gamma),
        growth_w(w, p),
    )


def step_model_a(x, h, p):
    """Growth, then predation, then move ``h`` of the *grown* reserve to the prey."""
    u, v, w = x
    fu = growth_u(u, p)
    fw = growth_w(w, p)
    return State(
        fu * (1 - p.delta1 * v) + h * fw,
        (v + fu * p.delta2 * v) * (1 - p.gamma),
        (1 - h) * fw,
    )


def step_model_b(x, h, p):
    """Move ``h`` of the reserve to the prey first, then growth and predation."""
    u, v, w = x
    u_aug = u + h * w
    w_left = w - h * w
    fu = growth_u(u_aug, p)
    return State(
        fu * (1 - p.delta1 * v),
        (v + fu * p.delta2 * v) * (1 - p.gamma),
        growth_w(w_left, p),
    )


def step(kind, x, h, p):
    """Dispatch to the transition map for ``kind``; ``h`` is ignored when uncontrolled."""
    kind = ModelKind.parse(kind)
    if kind is ModelKind.MODEL_A:
        return step_model_a(x, h, p)
    if kind is ModelKind.MODEL_B:
        return step_model_b(x, h, p)
    return step_uncontrolled(x, p)


def simulate(kind, x0, h, p, T, *, strict=False):
    """Iterate the transition map for ``kind`` over ``T`` steps.

    Parameters
    ----------
    kind : ModelKind or str
        ``"uncontrolled"``, ``"a"`` or ``"b"``.
    x0 : State or sequence of 3 floats
        Nonnegative initial populations.
    h : sequence of float or None
        Control schedule of length ``T``. ``None`` is accepted for every kind
        and means "no translocation"; the trajectory then records no
        controls for the uncontrolled kind and zeros otherwise.
    p : ModelParams
    T : int
        Number of steps.
    strict : bool, default False
        Raise :class:`InfeasibleRegimeError` instead of only recording the
        offending steps.

    Returns
    -------
    Trajectory
    """
    kind = ModelKind.parse(kind)
    T = check_int("T", T, minimum=0)
    x = State.checked(x0)
    if h is None:
        controls = None if kind is ModelKind.UNCONTROLLED else (0.0,) * T
    else:
        controls = check_schedule(h, T)
    states = [x]
    bad = []
    for t in range(T):
        if is_infeasible(x, p):
            bad.append(t)
        x = step(kind, x, 0.0 if controls is None else controls[t], p)
        states.append(x)
    if bad and strict:
        raise InfeasibleRegimeError(bad)
    return Trajectory(tuple(states), controls, kind, tuple(bad))


def objective(traj, obj):
    """Terminal payoff minus translocation cost.

    A trajectory without recorded controls is charged nothing, which is how
    the no-control value ``J(0)`` is defined.
    """
    if traj.T != obj.T:
        raise LengthMismatchError(
            f"trajectory has {traj.T} steps but the objective horizon is {obj.T}"
        )
    h = traj.controls_or_zeros()
    if len(h) != obj.T:
        raise LengthMismatchError(f"expected {obj.T} controls, got {len(h)}")
    final = traj.final
    return final.u + obj.N * final.w - obj.cost(h)
