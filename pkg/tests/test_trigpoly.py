import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latsamp.freqsets import build_hyperbolic_cross, build_rectangle, explicit_set
from latsamp.kernels import dirichlet, fejer
from latsamp.trigpoly import (
    GridSpec,
    TrigPoly,
    autocorrelate,
    constant,
    convolve,
    evaluate,
    exponential,
    grid_values,
    lp_norm,
    norm_method,
    random_poly,
    tensor_product,
)


def poly_strategy(dim=2, max_deg=3, max_terms=8):
    freq = st.lists(st.integers(-max_deg, max_deg), min_size=dim, max_size=dim)
    coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
    return st.lists(st.tuples(freq, coef), min_size=1, max_size=max_terms).map(
        lambda items: TrigPoly([f for f, _ in items], [c for _, c in items], dim=dim))


def test_evaluate_examples():
    assert evaluate(exponential((1, 1)), (0.0, 0.0)) == pytest.approx(1.0)
    f = TrigPoly([[-1], [0], [1]], [1, 1, 1])
    assert evaluate(f, [math.pi]).real == pytest.approx(-1.0)
    assert evaluate(dirichlet(2), [0.0]).real == pytest.approx(5.0)


def test_evaluate_shapes():
    f = exponential((1, 2))
    assert isinstance(evaluate(f, [0.1, 0.2]), complex)
    assert evaluate(f, np.zeros((5, 2))).shape == (5,)
    with pytest.raises(ValueError):
        evaluate(f, np.zeros((3, 3)))


def test_convolution_examples():
    ek, el = exponential((1, 0)), exponential((0, 1))
    assert len(convolve(ek, el)) == 0
    assert convolve(ek, ek).max_abs_diff(ek) == 0
    f = random_poly(build_rectangle((3, 2)), seed=4)
    D = tensor_product(dirichlet(2), dirichlet(1))
    assert convolve(f, D).max_abs_diff(f) <= 1e-15


def test_autocorrelate_examples():
    e = exponential((2, -1))
    assert autocorrelate(e).max_abs_diff(e) == 0
    assert autocorrelate(e * 2).max_abs_diff(e * 4) == 0
    Kstar = autocorrelate(fejer(5))
    assert grid_values(Kstar, (160,)).real.min() >= -1e-12


def test_lp_norm_examples():
    for p in (1, 1.5, 2, 3, 4, math.inf):
        assert lp_norm(exponential((3, -2)), p) == pytest.approx(1.0, abs=1e-12)
    assert lp_norm(fejer(2), 1) == pytest.approx(1.0, abs=1e-12)
    assert lp_norm(fejer(2), math.inf) == pytest.approx(2.0, abs=1e-12)


def test_norm_method_labels():
    f = fejer(3)
    assert norm_method(f, 2) == "exact"
    assert norm_method(f, 4) == "exact"
    assert norm_method(f, 1) == "grid-estimated"
    assert norm_method(f, math.inf) == "grid-estimated"
    with pytest.raises(ValueError):
        lp_norm(f, 0.5)


def test_random_poly_examples():
    Q = build_hyperbolic_cross(4, 2)
    assert random_poly(Q, 7).max_abs_diff(random_poly(Q, 7)) == 0
    c = random_poly(explicit_set([[0]]), 3, law="unimodular")
    assert abs(abs(c.coefficient((0,))) - 1) < 1e-15
    for seed in range(5):
        f = random_poly(Q, seed, law="unimodular")
        assert lp_norm(f, 2) ** 2 / len(Q) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        random_poly(Q, 0, law="cauchy")


def test_pruning_and_duplicates():
    f = TrigPoly([[1], [1], [2]], [1.0, -1.0, 1e-16])
    assert len(f) == 0
    g = TrigPoly([[1], [1]], [1.0, 2.0])
    assert g.coefficient((1,)) == 3


def test_immutability():
    f = exponential((1,))
    with pytest.raises(ValueError):
        f.coeffs[0] = 2


def test_json_roundtrip():
    f = random_poly(build_rectangle((3, 3)), seed=1)
    g = TrigPoly.from_json(f.to_json())
    assert g.max_abs_diff(f) == 0
    assert json.loads(f.to_json())["dim"] == 2


def test_is_real_predicate():
    assert fejer(4).is_real()
    assert not exponential((1,)).is_real()
    f = TrigPoly([[1], [-1]], [1 + 2j, 1 - 2j])
    assert f.is_real()
    x = np.linspace(0, 2 * np.pi, 17)[:, None]
    assert np.abs(evaluate(f, x).imag).max() < 1e-13


def test_translate():
    f = random_poly(build_rectangle((3, 2)), seed=2)
    y = np.array([0.3, -1.1])
    x = np.random.default_rng(0).random((10, 2)) * 2 * np.pi
    assert np.allclose(evaluate(f.translate(y), x), evaluate(f, x - y), atol=1e-12)


@given(poly_strategy(), st.integers(0, 5))
def test_parseval(f, extra):
    sizes = tuple(2 * int(K) + 1 + extra for K in f.degrees())
    direct = lp_norm(f, 2, grid=sizes)
    assert direct == pytest.approx(lp_norm(f, 2), rel=1e-12, abs=1e-12)
    assert lp_norm(f, 2) ** 2 == pytest.approx(np.sum(np.abs(f.coeffs) ** 2), rel=1e-12)


@given(poly_strategy(dim=2, max_deg=4))
def test_grid_quadrature_exactness(f):
    sizes = tuple(2 * int(K) + 1 for K in f.degrees())
    mean = np.mean(grid_values(f, sizes))
    assert abs(mean - f.coefficient((0, 0))) <= 1e-12 * max(1.0, np.abs(f.coeffs).sum())


@given(poly_strategy(), poly_strategy(), poly_strategy(), st.complex_numbers(max_magnitude=5))
def test_convolution_algebra(f, g, h, a):
    tol = 1e-12 * (1 + abs(a)) * 1e3
    assert convolve(f, g).max_abs_diff(convolve(g, f)) <= tol
    assert convolve(convolve(f, g), h).max_abs_diff(convolve(f, convolve(g, h))) <= tol
    assert convolve(f, g + h * a).max_abs_diff(convolve(f, g) + convolve(f, h) * a) <= tol


@given(poly_strategy(dim=1, max_deg=5))
def test_grid_values_match_pointwise(f):
    M = 4 * int(f.degrees()[0]) + 3
    x = GridSpec((M,)).points()
    assert np.allclose(grid_values(f, (M,)), evaluate(f, x), atol=1e-10)


@given(poly_strategy(dim=2, max_deg=3))
def test_holder_monotone_in_p(f):
    grid = (64, 64)
    norms = [lp_norm(f, p, grid=grid) for p in (1, 1.5, 2, 3, 4, 6)] + [lp_norm(f, math.inf, grid=grid)]
    assert all(a <= b + 1e-9 * max(1.0, b) for a, b in zip(norms, norms[1:]))


@given(poly_strategy(dim=2, max_deg=3))
def test_even_p_norm_exact(f):
    fine = lp_norm(f, 4, grid=(41, 41))
    assert lp_norm(f, 4) == pytest.approx(fine, rel=1e-10, abs=1e-12)


def test_constant_and_tensor():
    c = constant(2.5, 3)
    assert evaluate(c, np.zeros(3)) == pytest.approx(2.5)
    t = tensor_product(dirichlet(1), fejer(2))
    x = np.array([0.4, 1.3])
    expected = evaluate(dirichlet(1), x[:1]) * evaluate(fejer(2), x[1:])
    assert evaluate(t, x) == pytest.approx(expected)


def test_parseval_hundred_random_polynomials():
    Q = build_hyperbolic_cross(6, 2)
    for seed in range(100):
        f = random_poly(Q, seed)
        sizes = tuple(2 * int(K) + 1 for K in f.degrees())
        on_grid = np.sqrt(np.mean(np.abs(grid_values(f, sizes)) ** 2))
        assert on_grid == pytest.approx(lp_norm(f, 2), rel=1e-12)
