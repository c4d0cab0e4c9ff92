import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import ConvergenceWarning, NotFittedError

from augopt.estimators import ModelAOptimizer, ModelBOptimizer
from augopt.exceptions import ValidationError
from augopt.fbsm import solve_fbsm
from augopt.scenarios import BASELINE, get_scenario

X0 = np.array([[0.2, 0.5, 0.7]])


@pytest.mark.parametrize("cls", [ModelAOptimizer, ModelBOptimizer])
def test_params_round_trip(cls):
    est = cls(gamma=0.1)
    params = est.get_params()
    assert params["gamma"] == 0.1 and params["A"] == 0.7
    again = clone(est)
    assert again.get_params() == params
    est.set_params(M2=0.0)
    assert est.objective_params().M2 == 0.0


def test_from_scenario():
    est = ModelBOptimizer.from_scenario(get_scenario("reserve-low"), kkt_tol=1e-7)
    assert est.q == 0.70 and est.k_w == 0.60 and est.kkt_tol == 1e-7


def test_model_a_fit_matches_functional_solver():
    est = ModelAOptimizer().fit(X0)
    res = solve_fbsm(BASELINE.x0, BASELINE.params, BASELINE.obj)
    np.testing.assert_array_equal(est.controls_, res.controls)
    assert est.objective_ == res.objective_value
    assert est.adjoints_ == res.adjoints
    assert est.converged_ and est.n_iter_ == res.iterations
    assert est.baseline_objective_ == pytest.approx(0.4413, abs=5e-5)


@pytest.mark.parametrize("cls", [ModelAOptimizer, ModelBOptimizer])
def test_transform_predict_score(cls):
    est = cls().fit(X0[0])
    X = np.array([[0.2, 0.5, 0.7], [0.3, 0.4, 0.6]])
    traj = est.transform(X)
    assert traj.shape == (2, 7, 3)
    np.testing.assert_array_equal(traj[0], est.trajectory_.as_array())
    np.testing.assert_array_equal(est.predict(X), traj[:, -1, :])
    assert est.score(X0) == pytest.approx(est.objective_, rel=1e-15)


def test_unfitted():
    with pytest.raises(NotFittedError):
        ModelBOptimizer().predict(X0)


@pytest.mark.parametrize("X", [np.zeros((2, 3)), np.zeros(4), [[0.2, -0.5, 0.7]], [[np.nan, 0, 0]]])
def test_fit_rejects_bad_input(X):
    with pytest.raises(ValueError):
        ModelAOptimizer().fit(X)


def test_invalid_parameter_raises_on_fit():
    with pytest.raises(ValidationError):
        ModelAOptimizer(m=1.5).fit(X0)


def test_non_convergence_warns():
    with pytest.warns(ConvergenceWarning):
        est = ModelAOptimizer(max_iter=1).fit(X0)
    assert not est.converged_ and est.n_iter_ == 1
