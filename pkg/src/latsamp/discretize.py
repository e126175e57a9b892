"""Cubature, discretized convolution and shift operators on lattice point sets.

The central object is the shift operator

    a -> (1/m) sum_nu a_nu F(x - xi^nu),

mapping sample vectors (normed by ``||a||_{p,m}``) to trigonometric
polynomials.  Its L_1, L_2 and L_inf operator norms are computed here from
the kernel norm, the Gram matrix of shifted kernels and the sum of absolute
shifted kernels respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._validation import check_exponent, check_points
from .freqsets import FreqSet, build_rectangle, explicit_set
from .kernels import hc_vallee_poussin, tensor_kernel
from .lattices import PointSet, fibonacci_points, is_exact_on
from .trigpoly import (
    DEFAULT_OVERSAMPLE,
    TrigPoly,
    autocorrelate,
    evaluate,
    grid_values,
    lp_norm,
    norm_method,
    random_poly,
)

__all__ = [
    "sample_norm",
    "ShiftOperator",
    "cubature",
    "exponential_sums",
    "discretized_convolution",
    "convolution_exactness_set",
    "sampling_representation_check",
    "apply_shift",
    "apply_shift_direct",
    "shift_abs_sum",
    "fibonacci_sum",
    "fsv_grid_sizes",
    "gram_matrix",
    "power_iteration",
    "gram_eigenvalues",
    "op_norm",
    "probe_op_norm",
    "interpolated_bound",
    "discretization_ratio",
    "rectangle_collection",
    "dyadic_collection",
    "universal_check",
]

MAX_GRAM_SIZE = 4096


def sample_norm(a, p: float) -> float:
    """``||a||_{p,m} = ((1/m) sum |a_i|^p)^(1/p)``; ``max |a_i|`` for p = inf."""
    p = check_exponent(p)
    a = np.abs(np.asarray(a).reshape(-1))
    if a.size == 0:
        raise ValueError("empty sample vector")
    if p == np.inf:
        return float(a.max())
    return float(np.mean(a**p) ** (1.0 / p))


@dataclass(frozen=True, eq=False)
class ShiftOperator:
    """``a -> (1/m) sum_nu a_nu kernel(x - xi^nu)`` for the points ``xi^nu``."""

    kernel: TrigPoly
    points: PointSet

    def __post_init__(self):
        if self.kernel.dim != self.points.dim:
            raise ValueError(
                f"kernel dimension {self.kernel.dim} != point dimension {self.points.dim}"
            )

    @property
    def m(self) -> int:
        return len(self.points)

    def __call__(self, a) -> TrigPoly:
        return apply_shift(self, a)


def cubature(points: PointSet, f, method: str = "direct") -> complex:
    """``(1/m) sum_nu f(xi^nu)``.

    ``f`` may be a :class:`TrigPoly` or an array of sampled values.  For
    polynomials on a lattice, ``method="spectral"`` instead sums the
    coefficients over the dual lattice.
    """
    if isinstance(f, TrigPoly):
        if method == "spectral":
            if len(f) == 0:
                return 0j
            member = points.dual().contains_many(f.freqs)
            return complex(f.coeffs[member].sum())
        if method != "direct":
            raise ValueError(f"unknown method {method!r}")
        return complex(np.mean(evaluate(f, points.points)))
    vals = np.asarray(f).reshape(-1)
    if vals.shape[0] != len(points):
        raise ValueError(f"expected {len(points)} samples, got {vals.shape[0]}")
    return complex(np.mean(vals))


def exponential_sums(points: PointSet) -> np.ndarray:
    """``S(k) = (1/m) sum_nu exp(i (k, xi^nu))`` for every k modulo m.

    Lattice points sit on the grid ``2 pi Z^d / m``, so all sums at once are
    one d-dimensional FFT of the point indicator.  Returns the full
    ``(m,) * d`` table indexed by ``k mod m``.
    """
    if not points.is_lattice:
        raise ValueError("exponential_sums needs a lattice point set")
    m, d = points.modulus, points.dim
    ind = np.zeros((m,) * d, dtype=float)
    np.add.at(ind, tuple(points.numerators.T), 1.0)
    # the indicator is real, so S(k) = conj(DFT(k)) / m
    return np.conj(np.fft.fftn(ind)) / m


def convolution_exactness_set(f: TrigPoly, g: TrigPoly) -> FreqSet:
    """Frequencies the cubature must integrate exactly for ``f * g`` to be reproduced.

    These are the differences ``l - k`` with ``l`` in supp f and ``k`` in supp g,
    together with both supports.
    """
    diffs = (f.freqs[:, None, :] - g.freqs[None, :, :]).reshape(-1, f.dim)
    return explicit_set(np.vstack([diffs, f.freqs, g.freqs]), f.dim)


def _fourier_of_samples(freqs: np.ndarray, points: np.ndarray, values: np.ndarray) -> np.ndarray:
    """``(1/m) sum_nu values_nu exp(-i (k, xi^nu))`` for each row k of ``freqs``."""
    m = points.shape[0]
    out = np.zeros(freqs.shape[0], dtype=np.complex128)
    step = max(1, 2_000_000 // m)
    for start in range(0, freqs.shape[0], step):
        phase = freqs[start:start + step].astype(float) @ points.T
        out[start:start + step] = np.exp(-1j * phase) @ values / m
    return out


def discretized_convolution(f: TrigPoly, g: TrigPoly, points: PointSet) -> TrigPoly:
    """``x -> (1/m) sum_nu f(xi^nu) g(x - xi^nu)`` as a polynomial on supp g."""
    if f.dim != g.dim or f.dim != points.dim:
        raise ValueError("dimension mismatch")
    fvals = evaluate(f, points.points)
    hat = _fourier_of_samples(g.freqs, points.points, fvals)
    return TrigPoly(g.freqs, g.coeffs * hat, dim=g.dim)


def apply_shift(op: ShiftOperator, a) -> TrigPoly:
    """Spectral form: coefficient ``kernel(k) (1/m) sum_nu a_nu exp(-i (k, xi^nu))``."""
    a = np.asarray(a, dtype=np.complex128).reshape(-1)
    if a.shape[0] != op.m:
        raise ValueError(f"expected a sample vector of length {op.m}, got {a.shape[0]}")
    hat = _fourier_of_samples(op.kernel.freqs, op.points.points, a)
    return TrigPoly(op.kernel.freqs, op.kernel.coeffs * hat, dim=op.kernel.dim)


def apply_shift_direct(op: ShiftOperator, a, x) -> np.ndarray:
    """Point-sum form of :func:`apply_shift`, evaluated at the rows of ``x``."""
    a = np.asarray(a, dtype=np.complex128).reshape(-1)
    if a.shape[0] != op.m:
        raise ValueError(f"expected a sample vector of length {op.m}, got {a.shape[0]}")
    X = check_points(x, op.kernel.dim)
    diffs = (X[:, None, :] - op.points.points[None, :, :]).reshape(-1, X.shape[1])
    return evaluate(op.kernel, diffs).reshape(X.shape[0], op.m) @ a / op.m


def sampling_representation_check(f: TrigPoly, points: PointSet, kernel: TrigPoly,
                                  probes: int = 64, seed: int = 0) -> float:
    """Largest ``|f(x) - (1/m) sum_nu f(xi^nu) kernel(x - xi^nu)|`` over random probes."""
    rng = np.random.default_rng(seed)
    X = 2 * np.pi * rng.random((probes, f.dim))
    op = ShiftOperator(kernel, points)
    approx = apply_shift_direct(op, evaluate(f, points.points), X)
    return float(np.abs(evaluate(f, X) - approx).max())


def fsv_grid_sizes(kernel: TrigPoly, points: PointSet,
                   oversample: int = DEFAULT_OVERSAMPLE) -> tuple[int, ...]:
    """Grid for sums of shifted kernels: multiples of m, at least ``oversample`` x degree."""
    m = points.modulus
    return tuple(m * max(1, math.ceil(oversample * int(K) / m)) for K in kernel.degrees())


def shift_abs_sum(kernel: TrigPoly, points: PointSet,
                  sizes: Sequence[int] | None = None,
                  oversample: int = DEFAULT_OVERSAMPLE,
                  fundamental: bool = False) -> np.ndarray:
    """``(1/m) sum_nu |kernel(x - xi^nu)|`` on an equispaced grid.

    On a grid whose sizes are multiples of m every shift ``x - xi^nu`` is again
    a node, so the sum is a cyclic convolution of the tabulated ``|kernel|``
    with the point indicator.

    The sum is invariant under lattice translations.  When the first
    coordinate of the generating vector is invertible mod m, every node is
    a translate of one in the slab ``0 <= i_1 < M_1 / m``; with
    ``fundamental=True`` only that slab is returned (same max and mean as
    the full grid) and it is assembled from rolled blocks of the table
    instead of FFTs.
    """
    if not points.is_lattice:
        raise ValueError("shift_abs_sum needs a lattice point set")
    m = points.modulus
    sizes = tuple(sizes) if sizes is not None else fsv_grid_sizes(kernel, points, oversample)
    if any(M % m for M in sizes):
        raise ValueError(f"grid sizes {sizes} must be multiples of m = {m}")
    table = np.abs(grid_values(kernel, sizes))
    scale = np.array([M // m for M in sizes], dtype=np.int64)
    shifts = points.numerators * scale
    if fundamental and math.gcd(int(points.h[0]), m) == 1:
        c1 = int(scale[0])
        blocks = table.reshape((m, c1) + sizes[1:])
        out = np.zeros((c1,) + sizes[1:])
        axes = tuple(range(1, len(sizes)))
        for s in shifts:
            # rows (a - s_1) mod M_1 for a < c1 form the block -s_1 / c1 mod m
            block = blocks[(-int(s[0]) // c1) % m]
            out += np.roll(block, tuple(int(v) for v in s[1:]), axis=axes) if axes else block
        return np.maximum(out / m, 0.0)
    ind = np.zeros(sizes, dtype=float)
    np.add.at(ind, tuple(shifts.T), 1.0)
    axes = tuple(range(len(sizes)))
    out = np.fft.irfftn(np.fft.rfftn(table) * np.fft.rfftn(ind), s=sizes, axes=axes) / m
    out = np.maximum(out, 0.0)
    return out[: int(scale[0])] if fundamental else out


def fibonacci_sum(r: int, n: int, sizes: Sequence[int] | None = None,
                  oversample: int = DEFAULT_OVERSAMPLE) -> np.ndarray:
    """Grid values of ``(1/b_n) sum_nu |V_{Q_r}(x - y^nu)|`` for the Fibonacci set."""
    return shift_abs_sum(hc_vallee_poussin(r, 2), fibonacci_points(n), sizes, oversample)


def gram_matrix(op: ShiftOperator) -> np.ndarray:
    """``G[nu, mu] = (kernel * kernel)(xi^nu - xi^mu)``.

    ``||op(a)||_2^2 = (1/m^2) a^* G a``, so ``||op||_{2 -> 2}^2 = lambda_max(G) / m``.
    """
    m = op.m
    if m > MAX_GRAM_SIZE:
        raise ValueError(f"dense Gram matrix capped at m <= {MAX_GRAM_SIZE}, got {m}")
    auto = autocorrelate(op.kernel)
    pts = op.points
    if pts.is_lattice:
        # lattice differences are lattice points: xi^nu - xi^mu = xi^(nu - mu)
        vals = evaluate(auto, pts.points)
        idx = np.arange(m)
        # row i holds point mu = i + 1; xi^0 = xi^m sits in the last row
        t = np.mod(idx[:, None] - idx[None, :], m)
        G = vals[np.mod(t - 1, m)]
    else:
        diffs = (pts.points[:, None, :] - pts.points[None, :, :]).reshape(-1, pts.dim)
        G = evaluate(auto, diffs).reshape(m, m)
    if op.kernel.is_real():
        G = np.ascontiguousarray(G.real)
    return G


def power_iteration(G: np.ndarray, tol: float = 1e-10, max_iter: int = 100_000,
                    seed: int = 0, stall: int = 400, max_squarings: int = 12) -> tuple[float, int]:
    """Largest eigenvalue of a Hermitian positive semidefinite matrix.

    Returns ``(lambda, iterations)``.  The Rayleigh quotient of ``G`` increases
    geometrically towards lambda_max; the remaining error is estimated from
    the ratio q of successive increments as ``delta q / (1 - q)`` and the
    loop stops once that estimate is below ``tol`` relative to lambda.

    When the top of the spectrum is clustered the plain iteration crawls.
    After ``stall`` iterations without convergence the iterated matrix is
    replaced by its (rescaled) square, which has the same leading eigenvector
    and squared eigenvalue ratios; the Rayleigh quotient is always taken
    with ``G`` itself.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(G.shape[0])
    if np.iscomplexobj(G):
        x = x + 1j * rng.standard_normal(G.shape[0])
    x /= np.linalg.norm(x)
    H, squarings, in_phase = G, 0, 0
    lam, prev_delta = 0.0, np.inf
    for it in range(1, max_iter + 1):
        g = G @ x
        lam_new = float(np.real(np.vdot(x, g)))
        y = g if H is G else H @ x
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0, it
        delta = abs(lam_new - lam)
        if lam_new > 0 and in_phase > 2:
            if delta <= 1e-15 * lam_new:
                return lam_new, it
            q = delta / prev_delta if prev_delta > 0 else 1.0
            if q < 1 and delta * q / (1 - q) <= tol * lam_new:
                return lam_new, it
        lam, prev_delta = lam_new, delta
        x = y / ny
        in_phase += 1
        if in_phase >= stall and squarings < max_squarings:
            H = H @ H
            H /= np.abs(H).max()
            # flush entries that would turn into subnormals (slow BLAS paths)
            H[np.abs(H) < 1e-150] = 0.0
            squarings, in_phase, prev_delta = squarings + 1, 0, np.inf
    return lam, max_iter


def gram_eigenvalues(op: ShiftOperator) -> np.ndarray:
    """Spectrum of the Gram matrix of a lattice from its circulant structure.

    On a rank-1 lattice ``G[nu, mu]`` depends on ``nu - mu mod m`` only, so the
    eigenvalues are ``m sum_{k : (h,k) = t mod m} |kernel(k)|^2``, t = 0..m-1.
    """
    pts = op.points
    res = pts.dual().residues(op.kernel.freqs)
    return op.m * np.bincount(res, weights=np.abs(op.kernel.coeffs) ** 2, minlength=op.m)


def op_norm(op: ShiftOperator, p: float, oversample: int = DEFAULT_OVERSAMPLE,
            tol: float = 1e-11, details: bool = False):
    """``||op||_{l_{p,m} -> L_p}`` for p in {1, 2, inf}.

    p = 1: the kernel's L_1 norm (unit coordinate vectors are extremal).
    p = inf: the maximum over a grid of ``(1/m) sum |kernel(x - xi^nu)|``.
    p = 2: ``sqrt(lambda_max(G) / m)`` by power iteration on the Gram matrix.
    """
    p = check_exponent(p)
    if p == 1:
        value, info = lp_norm(op.kernel, 1, oversample=oversample), {"method": norm_method(op.kernel, 1)}
    elif p == np.inf:
        sizes = fsv_grid_sizes(op.kernel, op.points, oversample)
        value = float(shift_abs_sum(op.kernel, op.points, sizes, fundamental=True).max())
        info = {"method": "grid-estimated", "grid": list(sizes)}
    elif p == 2:
        lam, iters = power_iteration(gram_matrix(op), tol=tol)
        value, info = math.sqrt(lam / op.m), {"method": "power-iteration", "iterations": iters}
    else:
        raise ValueError("exact operator norms are available for p in {1, 2, inf}; use probe_op_norm")
    return (value, info) if details else value


def probe_op_norm(op: ShiftOperator, p: float, trials: int = 50, seed: int = 0,
                  include_unit: bool = True) -> float:
    """Lower bound ``max ||op(a)||_p / ||a||_{p,m}`` over random and unit vectors a."""
    p = check_exponent(p)
    rng = np.random.default_rng(seed)
    vectors = [rng.standard_normal(op.m) for _ in range(trials)]
    if include_unit:
        e = np.zeros(op.m)
        e[0] = 1.0
        vectors.append(e)
    best = 0.0
    for a in vectors:
        best = max(best, lp_norm(apply_shift(op, a), p) / sample_norm(a, p))
    return best


def interpolated_bound(norm_1: float, norm_inf: float, q: float) -> float:
    """Riesz-Thorin bound ``norm_1^(1/q) norm_inf^(1 - 1/q)`` on the q -> q norm."""
    if q == np.inf:
        return norm_inf
    return norm_1 ** (1.0 / q) * norm_inf ** (1.0 - 1.0 / q)


def discretization_ratio(f: TrigPoly, points: PointSet, p: float) -> tuple[float, float]:
    """``(sampled, true)``: ``(1/m) sum |f(xi)|^p`` against ``||f||_p^p``.

    For p = inf both entries are maxima (``max |f(xi)|`` and ``||f||_inf``).
    """
    p = check_exponent(p)
    vals = evaluate(f, points.points)
    if p == np.inf:
        # the grid maximum underestimates the sup; the samples are admissible nodes too
        peak = float(np.abs(vals).max())
        return peak, max(peak, lp_norm(f, np.inf))
    return float(np.mean(np.abs(vals) ** p)), lp_norm(f, p) ** p


def rectangle_collection(N: int, d: int = 2) -> list[tuple[int, ...]]:
    """All ``j`` in N^d with ``prod j_i <= N``, lexicographic."""
    def rec(budget, depth):
        if depth == 0:
            yield ()
            return
        for j in range(1, budget + 1):
            for tail in rec(budget // j, depth - 1):
                yield (j,) + tail
    return list(rec(int(N), d))


def dyadic_collection(n: int, d: int = 2) -> list[tuple[int, ...]]:
    """``j = 2^s`` for all ``s`` with ``|s|_1 = n``."""
    from .freqsets import level_vectors
    return [tuple(2**si for si in s) for s in level_vectors(n, d, exact=True)]


def _merge_range(acc: dict, key: str, value: float) -> None:
    lo, hi = acc.get(key, (np.inf, -np.inf))
    acc[key] = (min(lo, value), max(hi, value))


def universal_check(collection: Iterable[Sequence[int]], points: PointSet, p: float,
                    trials: int = 3, seed: int = 0, law: str = "complex-gaussian",
                    oversample: int = DEFAULT_OVERSAMPLE, representation_trials: int = 1,
                    probes: int = 32) -> dict:
    """Two-sided sampling discretization and shift representation over a collection.

    For each rectangle ``R(j)`` of the collection, draws ``trials`` random
    polynomials, measures ``sampled / true`` (see :func:`discretization_ratio`),
    the representation error of ``f`` through the de la Vallee Poussin kernel
    ``V_j`` (first ``representation_trials`` draws, ``probes`` random points)
    and the kernel's operator norms.  Returns the worst cases over the
    collection together with per-rectangle rows.
    """
    p = check_exponent(p)
    rows = []
    summary: dict = {}
    for case, j in enumerate(collection):
        j = tuple(int(v) for v in j)
        R = build_rectangle(j)
        kernel = tensor_kernel("vallee_poussin", j)
        op = ShiftOperator(kernel, points)
        exact_l2 = is_exact_on(points, build_rectangle(tuple(2 * v - 1 for v in j)))
        exact_rep = is_exact_on(points, build_rectangle(tuple(3 * v - 1 for v in j)))
        n1 = op_norm(op, 1, oversample=oversample)
        ninf = op_norm(op, np.inf, oversample=oversample)
        ratios, rep_err, spr = [], 0.0, 0.0
        for t in range(trials):
            f = random_poly(R, seed=seed + 1000 * case + t, law=law)
            sampled, true = discretization_ratio(f, points, p)
            ratios.append(sampled / true)
            if t < representation_trials:
                rep_err = max(rep_err, sampling_representation_check(f, points, kernel,
                                                                     probes=probes, seed=seed + t))
            samples = evaluate(f, points.points)
            spr = max(spr, lp_norm(f, p) / sample_norm(samples, p))
        lo, hi = min(ratios), max(ratios)
        if p == np.inf:
            lower_bound, upper_bound = 1.0 / ninf, 1.0
        else:
            pd = p / (p - 1) if p > 1 else np.inf
            lower_bound = interpolated_bound(n1, ninf, p) ** (-p)
            upper_bound = interpolated_bound(n1, ninf, pd) ** p
        row = {
            "j": list(j),
            "exact_l2": exact_l2,
            "exact_representation": exact_rep,
            "ratio_min": lo,
            "ratio_max": hi,
            "representation_error": rep_err,
            "op_norm_1": n1,
            "op_norm_inf": ninf,
            "spr_ratio": spr,
            "chain_lower": lower_bound,
            "chain_upper": upper_bound,
        }
        rows.append(row)
        _merge_range(summary, "ratio", lo)
        _merge_range(summary, "ratio", hi)
        _merge_range(summary, "spr_ratio", spr)
        _merge_range(summary, "representation_error", rep_err)
        _merge_range(summary, "op_norm_inf", ninf)
    return {
        "p": p,
        "m": len(points),
        "rectangles": len(rows),
        "trials": trials,
        "lower": summary["ratio"][0] if rows else None,
        "upper": summary["ratio"][1] if rows else None,
        "max_spr_ratio": summary["spr_ratio"][1] if rows else None,
        "max_representation_error": summary["representation_error"][1] if rows else None,
        "max_op_norm_inf": summary["op_norm_inf"][1] if rows else None,
        "all_exact": all(r["exact_l2"] and r["exact_representation"] for r in rows),
        "rows": rows,
    }
