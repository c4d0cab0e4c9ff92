"""Forward-backward sweep for the grow-predate-augment order of events.

The sweep alternates a forward state solve, a backward costate solve from
the transversality conditions, and a relaxed update of the controls towards
the clamped stationary point of the Hamiltonian, until successive iterates
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import InfeasibleRegimeError, NotConvergedError
from .model import ModelKind, objective, simulate
from .result import AdjointTrajectory, SolveResult
from .validation import check_int, check_interval

__all__ = [
    "SweepConfig",
    "adjoint_step",
    "backward_sweep",
    "characterize_control",
    "control_derivative",
    "hamiltonian_a",
    "solve_fbsm",
]


@dataclass(frozen=True)
class SweepConfig:
    """Sweep hyperparameters.

    Parameters
    ----------
    relaxation : float, default 0.25
        Weight of the fresh characterization in the convex-combination update
        ``h_new = relaxation * h_char + (1 - relaxation) * h_old``.
    tol : float, default 1e-3
        Relative closeness required between successive controls, states and
        costates.
    max_iter : int, default 1000
    """

    relaxation: float = 0.25
    tol: float = 1e-3
    max_iter: int = 1000

    def __post_init__(self):
        object.__setattr__(
            self,
            "relaxation",
            check_interval("relaxation", self.relaxation, 0.0, 1.0, closed=(False, True)),
        )
        object.__setattr__(self, "tol", check_interval("tol", self.tol, 0.0))
        object.__setattr__(self, "max_iter", check_int("max_iter", self.max_iter, minimum=1))


def _prey_bracket(u, p):
    # f_u(u) = u * bracket(u)
    return p.s * (1 - u / p.k_u) * (u / p.k_u - p.m) + 1


def _prey_bracket_slope(u, p):
    return p.s / p.k_u * (1 - u / p.k_u) - p.s / p.k_u * (u / p.k_u - p.m)


def _reserve_bracket(w, p):
    return p.q * (1 - w / p.k_w) * (w / p.k_w - p.n) + 1


def _reserve_bracket_slope(w, p):
    return p.q / p.k_w * (1 - w / p.k_w) - p.q / p.k_w * (w / p.k_w - p.n)


def adjoint_step(x, h, lam_next, p):
    """Propagate the costates one step backwards.

    Parameters
    ----------
    x : State
        Forward state at step ``t``.
    h : float
        Control applied at step ``t``.
    lam_next : tuple of 3 floats
        ``(lambda_u, lambda_v, lambda_w)`` at step ``t + 1``.
    p : ModelParams

    Returns
    -------
    tuple of 3 floats
        Costates at step ``t``.
    """
    u, v, w = x
    lu, lv, lw = lam_next
    gu = _prey_bracket(u, p)
    dgu = _prey_bracket_slope(u, p)
    gw = _reserve_bracket(w, p)
    dgw = _reserve_bracket_slope(w, p)

    lam_u = ((1 - p.delta1 * v) * lu + p.delta2 * v * (1 - p.gamma) * lv) * gu + (
        u * (1 - p.delta1 * v) * lu + u * p.delta2 * v * (1 - p.gamma) * lv
    ) * dgu
    lam_v = -lu * u * gu * p.delta1 + lv * (1 + u * gu * p.delta2) * (1 - p.gamma)
    mix = h * lu + (1 - h) * lw
    lam_w = mix * gw + w * mix * dgw
    return (lam_u, lam_v, lam_w)


def backward_sweep(traj, p, obj):
    """Costates for a Model A trajectory, starting from transversality."""
    T = traj.T
    h = traj.controls_or_zeros()
    lam = [None] * (T + 1)
    lam[T] = (1.0, 0.0, obj.N)
    for t in range(T - 1, -1, -1):
        lam[t] = adjoint_step(traj.states[t], h[t], lam[t + 1], p)
    lu, lv, lw = zip(*lam)
    return AdjointTrajectory(tuple(lu), tuple(lv), tuple(lw))


def _switching_numerator(w, lam_u_next, lam_w_next, p):
    return (lam_u_next - lam_w_next) * _reserve_bracket(w, p) * w


def characterize_control(w, lam_u_next, lam_w_next, p, obj):
    """Clamped maximiser of the Hamiltonian in ``h`` at one step."""
    raw = (_switching_numerator(w, lam_u_next, lam_w_next, p) - obj.M2) / (2 * obj.M1)
    return min(obj.A, max(0.0, raw))


def control_derivative(w, h, lam_u_next, lam_w_next, p, obj):
    """``dH_t/dh_t``; equals ``dJ/dh_t`` when the costates come from the same schedule."""
    return -2 * obj.M1 * h - obj.M2 + _switching_numerator(w, lam_u_next, lam_w_next, p)


def hamiltonian_a(x, h, lam_next, p, obj):
    """Stage Hamiltonian for the grow-predate-augment model."""
    u, v, w = x
    lu, lv, lw = lam_next
    gu = _prey_bracket(u, p)
    gw = _reserve_bracket(w, p)
    return (
        -obj.M1 * h**2
        - obj.M2 * h
        + lu * (u * gu * (1 - p.delta1 * v))
        + lu * (h * w * gw)
        + lv * ((v + u * gu * p.delta2 * v) * (1 - p.gamma))
        + lw * ((w - h * w) * gw)
    )


def _close(new, old, tol):
    # relative test: tol * sum|new| - sum|new - old| >= 0
    scale = sum(abs(a) for a in new)
    diff = sum(abs(a - b) for a, b in zip(new, old))
    return tol * scale - diff >= 0


def _flat_states(traj):
    return [c for x in traj.states for c in x]


def _flat_adjoints(adj):
    return list(adj.lambda_u) + list(adj.lambda_v) + list(adj.lambda_w)


def solve_fbsm(x0, p, obj, cfg=None):
    """Optimal schedule for Model A by the forward-backward sweep.

    Starts from the all-zero schedule. Raises :class:`NotConvergedError`
    (carrying the last iterate) when ``cfg.max_iter`` sweeps are not enough,
    and :class:`InfeasibleRegimeError` if any forward pass leaves the
    feasible regime.
    """
    cfg = cfg or SweepConfig()
    T = obj.T
    w_relax = cfg.relaxation

    def forward(h):
        traj = simulate(ModelKind.MODEL_A, x0, h, p, T)
        if traj.infeasible_steps:
            raise InfeasibleRegimeError(traj.infeasible_steps)
        return traj

    h = (0.0,) * T
    traj = forward(h)
    adj = backward_sweep(traj, p, obj)

    converged = False
    iterations = 0
    while iterations < cfg.max_iter:
        iterations += 1
        h_char = [
            characterize_control(traj.states[t].w, adj.lambda_u[t + 1], adj.lambda_w[t + 1], p, obj)
            for t in range(T)
        ]
        h_new = tuple(
            min(obj.A, max(0.0, w_relax * hc + (1 - w_relax) * ho)) for hc, ho in zip(h_char, h)
        )
        traj_new = forward(h_new)
        adj_new = backward_sweep(traj_new, p, obj)
        converged = (
            _close(h_new, h, cfg.tol)
            and _close(_flat_states(traj_new), _flat_states(traj), cfg.tol)
            and _close(_flat_adjoints(adj_new), _flat_adjoints(adj), cfg.tol)
        )
        h, traj, adj = h_new, traj_new, adj_new
        if converged:
            break

    result = SolveResult(
        controls=h,
        trajectory=traj,
        objective_value=objective(traj, obj),
        iterations=iterations,
        converged=converged,
        adjoints=adj,
    )
    if not converged:
        raise NotConvergedError(result)
    return result
