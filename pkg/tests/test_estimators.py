import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from latsamp.estimators import ShiftRepresentationRegressor
from latsamp.freqsets import build_rectangle, build_step_hyperbolic_cross
from latsamp.lattices import fibonacci_points, korobov_points
from latsamp.trigpoly import evaluate, random_poly


def test_recovers_polynomial_from_lattice_samples():
    pts = fibonacci_points(12)
    f = random_poly(build_rectangle((4, 4)), 11)
    est = ShiftRepresentationRegressor(fibonacci_n=12, kernel_params=(4, 4))
    perm = np.random.default_rng(0).permutation(len(pts))
    X = pts.points[perm]
    est.fit(X, evaluate(f, X))
    Z = np.random.default_rng(1).random((40, 2)) * 2 * np.pi
    assert np.abs(est.predict(Z) - evaluate(f, Z)).max() <= 1e-10
    assert est.poly_.max_abs_diff(f) <= 1e-10


def test_real_targets_and_score():
    pts = fibonacci_points(11)
    f = random_poly(build_rectangle((3, 3)), 2)
    g = lambda X: evaluate(f, X).real
    est = ShiftRepresentationRegressor(fibonacci_n=11, kernel_params=(3, 3)).fit(pts.points, g(pts.points))
    Z = np.random.default_rng(2).random((30, 2)) * 2 * np.pi
    pred = est.predict(Z)
    assert not np.iscomplexobj(pred)
    assert est.score(Z, g(Z)) == pytest.approx(1.0, abs=1e-10)


def test_hyperbolic_cross_kernel_korobov():
    pts = korobov_points(251, 3, 3)
    f = random_poly(build_step_hyperbolic_cross(0, 3), 1)
    est = ShiftRepresentationRegressor(korobov_m=251, korobov_h=3, korobov_d=3,
                                       kernel="hc_vallee_poussin", kernel_params=(2,))
    est.fit(pts.points, evaluate(f, pts.points))
    assert est.n_features_in_ == 3
    Z = np.random.default_rng(3).random((5, 3)) * 2 * np.pi
    assert np.abs(est.predict(Z) - evaluate(f, Z)).max() <= 1e-10


def test_get_params_and_clone():
    est = ShiftRepresentationRegressor(fibonacci_n=9, kernel="fejer", kernel_params=(2, 2))
    params = est.get_params()
    assert params["fibonacci_n"] == 9 and params["kernel"] == "fejer"
    c = clone(est)
    assert c.get_params() == params
    est.set_params(fibonacci_n=10)
    assert est.fibonacci_n == 10


def test_validation_errors():
    pts = fibonacci_points(8)
    y = np.zeros(len(pts))
    with pytest.raises(NotFittedError):
        ShiftRepresentationRegressor(fibonacci_n=8).predict(pts.points)
    with pytest.raises(ValueError):
        ShiftRepresentationRegressor().fit(pts.points, y)
    with pytest.raises(ValueError):
        ShiftRepresentationRegressor(fibonacci_n=8).fit(pts.points[:-1], y[:-1])
    with pytest.raises(ValueError):
        ShiftRepresentationRegressor(fibonacci_n=8).fit(pts.points + 0.1, y)
    with pytest.raises(ValueError):
        ShiftRepresentationRegressor(fibonacci_n=8).fit(pts.points, y[:-1])
    bad = y.copy()
    bad[0] = np.nan
    with pytest.raises(ValueError):
        ShiftRepresentationRegressor(fibonacci_n=8).fit(pts.points, bad)
    with pytest.raises(ValueError):
        ShiftRepresentationRegressor(fibonacci_n=8, kernel_params=(2, 2, 2)).fit(pts.points, y)
