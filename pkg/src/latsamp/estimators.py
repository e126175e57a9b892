"""Estimator-style wrapper around the sampling shift representation.

:class:`ShiftRepresentationRegressor` is fitted on the values of a function
at the nodes of a rank-1 lattice and predicts

    ``x -> (1/m) sum_nu y_nu kernel(x - xi^nu)``,

which reproduces every trigonometric polynomial whose spectrum the kernel
reproduces, as long as the lattice is exact on the required differences.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int_vector, check_points, check_positive_int
from .discretize import ShiftOperator, apply_shift
from .kernels import KernelId, build_kernel
from .lattices import PointSet, fibonacci_points, korobov_points
from .trigpoly import evaluate

__all__ = ["ShiftRepresentationRegressor"]


class ShiftRepresentationRegressor(RegressorMixin, BaseEstimator):
    """Recover a trigonometric polynomial from lattice samples.

    Parameters
    ----------
    fibonacci_n : int, optional
        Use the Fibonacci lattice with ``m = b_n`` points.
    korobov_m, korobov_h : int and int or sequence of int, optional
        Use the Korobov lattice ``2 pi {mu h / m}``; a scalar h needs
        ``korobov_d``.
    korobov_d : int, optional
    kernel : str
        Kernel kind accepted by :class:`~latsamp.kernels.KernelId`.
    kernel_params : tuple of int
        Kernel parameters: one per coordinate for tensor kernels, ``(r,)``
        for hyperbolic-cross kernels.

    Attributes
    ----------
    points_ : PointSet
    poly_ : TrigPoly
        The fitted shift representation.
    real_ : bool
        Whether the training values were real.
    """

    def __init__(self, fibonacci_n=None, korobov_m=None, korobov_h=None, korobov_d=None,
                 kernel="vallee_poussin", kernel_params=(4, 4)):
        self.fibonacci_n = fibonacci_n
        self.korobov_m = korobov_m
        self.korobov_h = korobov_h
        self.korobov_d = korobov_d
        self.kernel = kernel
        self.kernel_params = kernel_params

    def _point_set(self) -> PointSet:
        if (self.fibonacci_n is None) == (self.korobov_m is None):
            raise ValueError("set exactly one of fibonacci_n and korobov_m")
        if self.fibonacci_n is not None:
            return fibonacci_points(check_positive_int(self.fibonacci_n, "fibonacci_n", minimum=2))
        if self.korobov_h is None:
            raise ValueError("korobov_m needs korobov_h")
        m = check_positive_int(self.korobov_m, "korobov_m", minimum=2)
        return korobov_points(m, check_int_vector(self.korobov_h, "korobov_h"), self.korobov_d)

    def _lattice_order(self, X: np.ndarray, pts: PointSet) -> np.ndarray:
        """Row index into ``pts`` for every training point; all nodes exactly once."""
        m = pts.modulus
        u = np.mod(X / (2 * np.pi), 1.0) * m
        num = np.rint(u)
        if np.any(np.abs(u - num) > 1e-6 * m):
            raise ValueError("training points are not nodes of the lattice")
        num = np.mod(num.astype(np.int64), m)
        h1_inv = pow(int(pts.h[0]) % m, -1, m)
        mu = np.mod(num[:, 0] * h1_inv, m)
        idx = np.mod(mu - 1, m)
        if not np.array_equal(pts.numerators[idx], num):
            raise ValueError("training points are not nodes of the lattice")
        if np.unique(idx).size != m or idx.size != m:
            raise ValueError(f"need each of the {m} lattice nodes exactly once")
        return idx

    def fit(self, X, y):
        """Store the samples ``y`` taken at the lattice nodes ``X``."""
        pts = self._point_set()
        X = check_points(X, pts.dim)
        y = np.asarray(y).reshape(-1)
        if y.shape[0] != X.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} values")
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains NaN or infinity")
        idx = self._lattice_order(X, pts)
        a = np.empty(pts.modulus, dtype=np.complex128)
        a[idx] = y
        params = tuple(int(v) for v in np.atleast_1d(self.kernel_params))
        dim = pts.dim if self.kernel in ("hc_vallee_poussin", "delta_hc_vp") else None
        kern = build_kernel(KernelId(self.kernel, params, dim))
        if kern.dim != pts.dim:
            raise ValueError(f"kernel dimension {kern.dim} does not match the lattice ({pts.dim})")
        self.points_ = pts
        self.poly_ = apply_shift(ShiftOperator(kern, pts), a)
        self.real_ = not np.iscomplexobj(y)
        self.n_features_in_ = pts.dim
        return self

    def predict(self, X):
        check_is_fitted(self, "poly_")
        X = check_points(X, self.n_features_in_)
        vals = evaluate(self.poly_, X)
        return vals.real if self.real_ else vals
