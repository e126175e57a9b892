"""Sparse multivariate trigonometric polynomials.

A :class:`TrigPoly` is a map from integer frequencies to complex
coefficients, representing ``f(x) = sum_k c_k exp(i (k, x))`` on the torus
``[0, 2 pi)^d``.  Norms are taken with respect to the normalized Lebesgue
measure, so ``||exp(i (k, x))||_p = 1`` for every p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import check_exponent, check_points
from .freqsets import FreqSet, _row_keys, explicit_set, lex_sort_unique

__all__ = [
    "TrigPoly",
    "GridSpec",
    "RNG_ALGORITHM",
    "PRUNE_TOL",
    "DEFAULT_OVERSAMPLE",
    "evaluate",
    "convolve",
    "autocorrelate",
    "grid_values",
    "lp_norm",
    "norm_method",
    "random_poly",
    "tensor_product",
    "exponential",
    "constant",
]

PRUNE_TOL = 1e-15
DEFAULT_OVERSAMPLE = 8
# smallest grid per non-constant coordinate for estimated norms
MIN_GRID = 64
RNG_ALGORITHM = "numpy.random.Generator(PCG64)"

# evaluation works on (points x frequencies) phase blocks of at most this size
_EVAL_BLOCK = 2_000_000


class TrigPoly:
    """Immutable sparse trigonometric polynomial.

    Parameters
    ----------
    freqs : array_like, shape (n, d)
        Integer frequency vectors. Duplicates are summed.
    coeffs : array_like, shape (n,)
        Complex coefficients.
    dim : int, optional
        Dimension; required when ``freqs`` is empty.
    """

    __slots__ = ("_freqs", "_coeffs", "_dim")

    def __init__(self, freqs, coeffs, dim: int | None = None):
        freqs = np.asarray(freqs, dtype=np.int64)
        coeffs = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
        if freqs.ndim == 1:
            freqs = freqs.reshape(-1, dim or 1) if freqs.size else freqs.reshape(0, dim or 1)
        if dim is None:
            dim = freqs.shape[1]
        if freqs.shape[1] != dim or freqs.shape[0] != coeffs.shape[0]:
            raise ValueError("freqs must have shape (n, dim) matching coeffs of length n")
        if freqs.shape[0]:
            freqs, inv = lex_sort_unique(freqs, return_inverse=True)
            summed = np.zeros(freqs.shape[0], dtype=np.complex128)
            np.add.at(summed, inv, coeffs)
            keep = np.abs(summed) > PRUNE_TOL
            freqs, coeffs = freqs[keep], summed[keep]
        freqs.setflags(write=False)
        coeffs.setflags(write=False)
        self._freqs = freqs
        self._coeffs = coeffs
        self._dim = int(dim)

    @classmethod
    def from_dict(cls, mapping: dict, dim: int | None = None) -> "TrigPoly":
        if not mapping:
            return cls(np.zeros((0, dim or 1), dtype=np.int64), [], dim=dim or 1)
        keys = [tuple(np.atleast_1d(k)) for k in mapping]
        return cls(np.array(keys), list(mapping.values()), dim=dim)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def freqs(self) -> np.ndarray:
        return self._freqs

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def __len__(self) -> int:
        return int(self._freqs.shape[0])

    def to_dict(self) -> dict:
        return {tuple(int(v) for v in k): complex(c) for k, c in zip(self._freqs, self._coeffs)}

    def coefficient(self, k) -> complex:
        """Fourier coefficient at frequency ``k`` (zero off the support)."""
        k = np.asarray(k, dtype=np.int64).reshape(1, -1)
        return complex(self.coefficients_at(k)[0])

    def coefficients_at(self, ks) -> np.ndarray:
        ks = np.atleast_2d(np.asarray(ks, dtype=np.int64))
        out = np.zeros(ks.shape[0], dtype=np.complex128)
        if len(self) == 0 or ks.shape[0] == 0:
            return out
        idx, found = _locate(self._freqs, ks)
        out[found] = self._coeffs[idx[found]]
        return out

    def support(self) -> FreqSet:
        return explicit_set(self._freqs, self._dim)

    def degrees(self) -> np.ndarray:
        """Maximal ``|k_i|`` over the support, per coordinate."""
        if len(self) == 0:
            return np.zeros(self._dim, dtype=np.int64)
        return np.abs(self._freqs).max(axis=0)

    def is_real(self, tol: float = 1e-12) -> bool:
        """True iff ``c(-k) == conj(c(k))`` for all k, i.e. f is real-valued."""
        mirrored = self.coefficients_at(-self._freqs)
        return bool(np.all(np.abs(mirrored - np.conj(self._coeffs)) <= tol))

    def __call__(self, x) -> np.ndarray | complex:
        return evaluate(self, x)

    def _binary(self, other: "TrigPoly", sign: float) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        _check_same_dim(self, other)
        return TrigPoly(
            np.vstack([self._freqs, other._freqs]),
            np.concatenate([self._coeffs, sign * other._coeffs]),
            dim=self._dim,
        )

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __neg__(self):
        return TrigPoly(self._freqs, -self._coeffs, dim=self._dim)

    def __mul__(self, scalar):
        if isinstance(scalar, TrigPoly):
            return NotImplemented
        return TrigPoly(self._freqs, complex(scalar) * self._coeffs, dim=self._dim)

    __rmul__ = __mul__

    def translate(self, y) -> "TrigPoly":
        """The polynomial ``x -> f(x - y)``."""
        y = np.asarray(y, dtype=float).reshape(-1)
        return TrigPoly(self._freqs, self._coeffs * np.exp(-1j * (self._freqs @ y)), dim=self._dim)

    def max_abs_diff(self, other: "TrigPoly") -> float:
        """Largest coefficient-wise absolute difference."""
        diff = self - other
        return float(np.abs(diff.coeffs).max()) if len(diff) else 0.0

    def to_json(self) -> str:
        entries = [[k.tolist(), float(c.real), float(c.imag)] for k, c in zip(self._freqs, self._coeffs)]
        return json.dumps({"dim": self._dim, "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "TrigPoly":
        obj = json.loads(text)
        dim = int(obj["dim"])
        entries = obj["entries"]
        if not entries:
            return cls(np.zeros((0, dim), dtype=np.int64), [], dim=dim)
        freqs = np.array([e[0] for e in entries], dtype=np.int64).reshape(-1, dim)
        coeffs = np.array([complex(e[1], e[2]) for e in entries])
        return cls(freqs, coeffs, dim=dim)

    def __repr__(self) -> str:
        return f"TrigPoly(dim={self._dim}, terms={len(self)})"


def _check_same_dim(f: TrigPoly, g: TrigPoly) -> None:
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")


def _locate(sorted_freqs: np.ndarray, ks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Positions of rows ``ks`` inside lexicographically sorted ``sorted_freqs``."""
    n = sorted_freqs.shape[0]
    keys, _, _ = _row_keys(np.vstack([sorted_freqs, ks]))
    mine, other = keys[:n], keys[n:]
    pos = np.minimum(np.searchsorted(mine, other), n - 1)
    return pos, mine[pos] == other


def exponential(k) -> TrigPoly:
    """The character ``exp(i (k, x))``."""
    k = np.asarray(k, dtype=np.int64).reshape(1, -1)
    return TrigPoly(k, [1.0])


def constant(c: complex, dim: int) -> TrigPoly:
    return TrigPoly(np.zeros((1, dim), dtype=np.int64), [c], dim=dim)


def evaluate(f: TrigPoly, x) -> np.ndarray | complex:
    """Evaluate ``sum_k c_k exp(i (k, x))`` at one point or an ``(n, d)`` array."""
    x_arr = np.asarray(x, dtype=float)
    single = x_arr.ndim <= 1 and (x_arr.size == f.dim)
    X = check_points(x_arr.reshape(1, -1) if single else x_arr, f.dim)
    out = np.zeros(X.shape[0], dtype=np.complex128)
    if len(f):
        step = max(1, _EVAL_BLOCK // len(f))
        kt = f.freqs.T.astype(float)
        for start in range(0, X.shape[0], step):
            phase = X[start:start + step] @ kt
            out[start:start + step] = np.exp(1j * phase) @ f.coeffs
    return complex(out[0]) if single else out


def convolve(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Exact convolution on the torus: coefficients multiply pointwise."""
    _check_same_dim(f, g)
    if len(f) == 0 or len(g) == 0:
        return TrigPoly(np.zeros((0, f.dim), dtype=np.int64), [], dim=f.dim)
    idx, found = _locate(f.freqs, g.freqs)
    return TrigPoly(g.freqs[found], g.coeffs[found] * f.coeffs[idx[found]], dim=f.dim)


def autocorrelate(f: TrigPoly) -> TrigPoly:
    """``f * f``, whose coefficients are the squared coefficients of f."""
    return TrigPoly(f.freqs, f.coeffs**2, dim=f.dim)


def tensor_product(*factors: TrigPoly) -> TrigPoly:
    """``F(x) = prod_i F_i(x_i)`` for univariate (or lower-dimensional) factors."""
    if not factors:
        raise ValueError("need at least one factor")
    freqs, coeffs = factors[0].freqs, factors[0].coeffs
    for g in factors[1:]:
        n1, n2 = freqs.shape[0], g.freqs.shape[0]
        freqs = np.hstack([np.repeat(freqs, n2, axis=0), np.tile(g.freqs, (n1, 1))])
        coeffs = np.outer(coeffs, g.coeffs).reshape(-1)
    dim = sum(g.dim for g in factors)
    return TrigPoly(freqs.reshape(-1, dim), coeffs, dim=dim)


@dataclass(frozen=True)
class GridSpec:
    """Equispaced product grid with nodes ``2 pi m / M_i``, ``m = 0..M_i-1``."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(int(M) < 1 for M in self.sizes):
            raise ValueError("grid sizes must be >= 1")

    def nodes(self) -> list[np.ndarray]:
        return [2 * np.pi * np.arange(M) / M for M in self.sizes]

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.nodes(), indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)


def grid_values(f: TrigPoly, sizes: Sequence[int], real: bool | None = None) -> np.ndarray:
    """Values of f on the grid ``GridSpec(sizes)`` as a dense array.

    Exact for every grid size: frequencies are folded modulo ``M_i`` before the
    inverse FFT, which is the identity ``exp(i k x) = exp(i (k mod M) x)`` on
    the nodes.  Real-valued polynomials go through ``irfftn`` and return a
    float array.
    """
    sizes = tuple(int(M) for M in sizes)
    if len(sizes) != f.dim:
        raise ValueError("grid dimension mismatch")
    total = float(np.prod(sizes, dtype=float))
    if real is None:
        real = f.is_real()
    idx = np.mod(f.freqs, np.array(sizes, dtype=np.int64))
    if real:
        half = sizes[:-1] + (sizes[-1] // 2 + 1,)
        spec = np.zeros(half, dtype=np.complex128)
        keep = idx[:, -1] <= sizes[-1] // 2
        np.add.at(spec, tuple(idx[keep].T), f.coeffs[keep])
        return np.fft.irfftn(spec, s=sizes, axes=tuple(range(len(sizes)))) * total
    spec = np.zeros(sizes, dtype=np.complex128)
    np.add.at(spec, tuple(idx.T), f.coeffs)
    return np.fft.ifftn(spec) * total


def _auto_sizes(f: TrigPoly, p: float, oversample: int) -> tuple[int, ...]:
    deg = f.degrees()
    if p != np.inf and float(p).is_integer() and int(p) % 2 == 0:
        return tuple(int(p) * int(K) + 1 for K in deg)
    return tuple(max(oversample * int(K), MIN_GRID) if K > 0 else 1 for K in deg)


def norm_method(f: TrigPoly, p: float) -> str:
    """How :func:`lp_norm` computes the p-norm: ``exact`` or ``grid-estimated``."""
    p = check_exponent(p)
    if p == 2 or (p != np.inf and p.is_integer() and int(p) % 2 == 0):
        return "exact"
    return "grid-estimated"


def lp_norm(f: TrigPoly, p: float, grid: GridSpec | Sequence[int] | None = None,
            oversample: int = DEFAULT_OVERSAMPLE) -> float:
    """L_p norm of f with respect to the normalized Lebesgue measure.

    ``p = 2`` uses Parseval. Even integer p integrates ``|f|^p`` exactly on a
    grid with ``M_i = p max|k_i| + 1`` nodes, since ``|f|^p`` is itself a
    trigonometric polynomial of degree ``p max|k_i|``.  Any other p, and
    ``p = inf``, is estimated on a grid oversampled ``oversample`` times
    the largest frequency in each coordinate.  An explicit ``grid`` overrides
    the automatic choice for every p except 2.
    """
    p = check_exponent(p)
    if len(f) == 0:
        return 0.0
    if p == 2 and grid is None:
        return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2)))
    if grid is None:
        sizes = _auto_sizes(f, p, oversample)
    else:
        sizes = grid.sizes if isinstance(grid, GridSpec) else tuple(grid)
    vals = np.abs(grid_values(f, sizes))
    if p == np.inf:
        return float(vals.max())
    if p == 1:
        return float(vals.mean())
    peak = vals.max()
    if peak == 0:
        return 0.0
    return float(peak * np.mean((vals / peak) ** p) ** (1.0 / p))


def random_poly(Q: FreqSet, seed: int, law: str = "complex-gaussian") -> TrigPoly:
    """Random polynomial on Q; coefficient i goes to the i-th member of Q.

    ``complex-gaussian`` draws ``(N(0,1) + i N(0,1)) / sqrt(2)``;
    ``unimodular`` draws ``exp(2 pi i U)`` with U uniform on [0, 1).
    """
    rng = np.random.default_rng(seed)
    n = len(Q)
    if law == "complex-gaussian":
        c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    elif law == "unimodular":
        c = np.exp(2j * np.pi * rng.random(n))
    else:
        raise ValueError(f"unknown law {law!r}")
    return TrigPoly(Q.freqs, c, dim=Q.dim)
