import numpy as np
import pytest

from augopt.direct import (
    OptimizerConfig,
    gradient,
    kkt_residual,
    maximize_box,
    objective_of_controls,
    solve_direct,
)
from augopt.exceptions import LengthMismatchError, NotConvergedError, ValidationError
from augopt.model import ObjectiveParams, State, objective, simulate
from augopt.scenarios import builtin_scenarios, no_control_objective

from oracles import complex_step_grad, ref_objective, scipy_optimum

SCENARIOS = builtin_scenarios()
EMPTY_RESERVE = State(0.2, 0.5, 0.0)


def _cfg(spec):
    return dict(spec.params.as_dict(), **spec.obj.as_dict())


@pytest.fixture(scope="module")
def solved():
    return {s.name: solve_direct(s.x0, s.params, s.obj) for s in SCENARIOS}


# -- objective_of_controls ----------------------------------------------------

def test_objective_no_control(params, obj, x0):
    assert objective_of_controls([0.0] * 6, x0, params, obj) == pytest.approx(0.4413, abs=5e-5)


def test_objective_at_reported_schedule(params, obj, x0):
    assert objective_of_controls([0, 0, 0, 0.05, 0.08, 0.15], x0, params, obj) == pytest.approx(0.4825, abs=0.01)


def test_objective_empty_reserve_pure_cost(params):
    obj = ObjectiveParams(T=1)
    base = objective(simulate("uncontrolled", EMPTY_RESERVE, None, params, 1), obj)
    got = objective_of_controls([obj.A], EMPTY_RESERVE, params, obj)
    assert got == pytest.approx(base - (obj.M1 * obj.A**2 + obj.M2 * obj.A), rel=1e-15)


def test_objective_rejects_out_of_box(params, obj, x0):
    with pytest.raises(ValidationError):
        objective_of_controls([0, 0, 0, 0, 0, 0.8], x0, params, obj)
    with pytest.raises(LengthMismatchError):
        objective_of_controls([0.1] * 5, x0, params, obj)


# -- gradient -----------------------------------------------------------------

@pytest.mark.parametrize("h", [[0.1, 0.2, 0.3, 0.4, 0.5, 0.6], [0.0] * 6, [0.7] * 6])
def test_gradient_empty_reserve_is_cost_slope(params, obj, h):
    g = gradient(h, EMPTY_RESERVE, params, obj)
    np.testing.assert_allclose(g, -2 * obj.M1 * np.array(h) - obj.M2, atol=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_gradient_matches_complex_step(params, x0, seed):
    obj = ObjectiveParams(M1=1e-12, M2=0.0)  # cost-free up to round-off
    h = np.random.default_rng(seed).uniform(0.05, 0.65, 6)
    c = dict(params.as_dict(), **obj.as_dict())
    want = complex_step_grad("b", h, c, tuple(x0))
    np.testing.assert_allclose(gradient(h, x0, params, obj), want, rtol=1e-6)


@pytest.mark.parametrize("spec", SCENARIOS, ids=lambda s: s.name)
def test_kkt_at_solver_output(spec, solved):
    res = solved[spec.name]
    g = gradient(res.controls, spec.x0, spec.params, spec.obj)
    assert kkt_residual(res.controls, g, spec.obj.A) <= 1e-6


# -- the box maximiser on its own -----------------------------------------------

def test_maximize_box_concave_quadratic():
    target = np.array([-0.5, 0.3, 2.0, 0.9])
    f = lambda x: -np.sum((x - target) ** 2)  # noqa: E731
    g = lambda x: -2 * (x - target)  # noqa: E731
    x, val, _, ok = maximize_box(f, g, np.zeros(4), np.zeros(4), np.ones(4), kkt_tol=1e-10)
    assert ok
    np.testing.assert_allclose(x, [0.0, 0.3, 1.0, 0.9], atol=1e-9)


def test_maximize_box_rosenbrock():
    f = lambda x: -((1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2)  # noqa: E731
    g = lambda x: -np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2), 200 * (x[1] - x[0] ** 2)])  # noqa: E731
    x, _, _, ok = maximize_box(f, g, [-1.2, 0.5], [-2, -2], [0.5, 2], kkt_tol=1e-6, max_iter=2000)
    assert ok
    np.testing.assert_allclose(x, [0.5, 0.25], atol=1e-6)


# -- solve_direct -------------------------------------------------------------

@pytest.mark.parametrize("spec", SCENARIOS, ids=lambda s: s.name)
def test_direct_matches_independent_optimiser(spec, solved):
    res = solved[spec.name]
    h_ref, j_ref = scipy_optimum("b", _cfg(spec), tuple(spec.x0))
    assert res.converged
    assert res.objective_value >= j_ref - 1e-8
    assert res.objective_value == pytest.approx(ref_objective("b", res.controls, _cfg(spec), tuple(spec.x0)), rel=1e-12)
    np.testing.assert_allclose(res.controls, h_ref, atol=2e-3)


@pytest.mark.parametrize("spec", SCENARIOS, ids=lambda s: s.name)
def test_direct_result_invariants(spec, solved):
    res = solved[spec.name]
    assert res.adjoints is None
    assert all(0.0 <= h <= spec.obj.A for h in res.controls)
    assert res.objective_value == objective(res.trajectory, spec.obj)
    assert res.objective_value >= no_control_objective(spec)


def test_multistart_returns_best_start(params, obj, x0, solved):
    singles = [solve_direct(x0, params, obj, OptimizerConfig(starts=(s,))) for s in (0.0, 0.35, 0.7)]
    best = solved["baseline"]
    assert best.objective_value == pytest.approx(max(r.objective_value for r in singles), abs=1e-12)


def test_direct_zero_bound(params, x0):
    obj = ObjectiveParams(A=0.0)
    res = solve_direct(x0, params, obj)
    assert res.controls == (0.0,) * 6
    assert res.objective_value == objective(simulate("uncontrolled", x0, None, params, 6), obj)


def test_direct_empty_reserve_chooses_no_control(params):
    res = solve_direct(EMPTY_RESERVE, params, ObjectiveParams())
    assert res.controls == (0.0,) * 6


def test_direct_is_deterministic(params, obj, x0, solved):
    assert solve_direct(x0, params, obj) == solved["baseline"]


def test_direct_not_converged(params, obj, x0):
    with pytest.raises(NotConvergedError) as err:
        solve_direct(x0, params, obj, OptimizerConfig(max_iter=1, kkt_tol=1e-12))
    assert not err.value.result.converged


def test_optimizer_config_start_beyond_bound(params, x0):
    with pytest.raises(ValidationError):
        solve_direct(x0, params, ObjectiveParams(A=0.5), OptimizerConfig(starts=(0.6,)))


@pytest.mark.parametrize("kw", [dict(grad_step=0.0), dict(kkt_tol=-1.0), dict(max_iter=0), dict(starts=())])
def test_optimizer_config_invariants(kw):
    with pytest.raises(ValidationError):
        OptimizerConfig(**kw)
