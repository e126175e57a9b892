"""Classical and hyperbolic-cross summation kernels as :class:`TrigPoly` objects.

Univariate kernels: Dirichlet ``D_j``, Fejer ``K_j`` (degree ``j - 1``),
de la Vallee Poussin ``V_j = 2 K_{2j} - K_j`` and the dyadic blocks
``A_s``.  Multivariate kernels are tensor products of these, plus the
hyperbolic-cross kernel ``V_{Q_r} = sum_{|s|_1 <= r} A_s`` and its
increment ``V_{Q_r} - V_{Q_{r-1}}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import check_int_vector
from .freqsets import level_vectors
from .trigpoly import TrigPoly, constant, tensor_product

__all__ = [
    "KernelId",
    "dirichlet",
    "fejer",
    "vallee_poussin",
    "block_A",
    "tensor_kernel",
    "hc_vallee_poussin",
    "hc_vallee_poussin_collapsed",
    "delta_hc_vp",
    "delta_hc_vp_blocks",
    "build_kernel",
    "dirichlet_closed",
    "fejer_closed",
    "vallee_poussin_closed",
]


def _nonneg(j, name: str, minimum: int = 0) -> int:
    if int(j) != j or j < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {j!r}")
    return int(j)


@lru_cache(maxsize=None)
def dirichlet(j: int) -> TrigPoly:
    """``D_j(x) = sum_{|k| <= j} exp(i k x)``."""
    j = _nonneg(j, "j")
    k = np.arange(-j, j + 1)
    return TrigPoly(k.reshape(-1, 1), np.ones(k.size))


@lru_cache(maxsize=None)
def fejer(j: int) -> TrigPoly:
    """Fejer kernel of order ``j - 1``: weights ``1 - |k|/j`` for ``|k| <= j - 1``."""
    j = _nonneg(j, "j", 1)
    k = np.arange(-(j - 1), j)
    return TrigPoly(k.reshape(-1, 1), 1.0 - np.abs(k) / j)


@lru_cache(maxsize=None)
def vallee_poussin(j: int) -> TrigPoly:
    """``V_j``: coefficient 1 for ``|k| <= j``, ``(2j - |k|)/j`` for ``j < |k| < 2j``."""
    j = _nonneg(j, "j", 1)
    k = np.arange(-(2 * j - 1), 2 * j)
    a = np.abs(k)
    c = np.where(a <= j, 1.0, (2 * j - a) / j)
    return TrigPoly(k.reshape(-1, 1), c)


def _vp_dyadic(t: int) -> TrigPoly:
    # V_{2^t}, with V_{2^{-1}} := 1
    return constant(1.0, 1) if t < 0 else vallee_poussin(2**t)


@lru_cache(maxsize=None)
def block_A(s: int) -> TrigPoly:
    """Dyadic block: ``A_0 = 1``, ``A_1 = V_1 - 1``, ``A_s = V_{2^(s-1)} - V_{2^(s-2)}``."""
    s = _nonneg(s, "s")
    if s == 0:
        return constant(1.0, 1)
    return _vp_dyadic(s - 1) - _vp_dyadic(s - 2)


_UNIVARIATE = {
    "dirichlet": dirichlet,
    "fejer": fejer,
    "vallee_poussin": vallee_poussin,
    "block_A": block_A,
}


@dataclass(frozen=True)
class KernelId:
    """Hashable kernel descriptor.

    ``kind`` is one of ``dirichlet``, ``fejer``, ``vallee_poussin``,
    ``block_A`` (tensor kernels with one parameter per coordinate in
    ``params``), ``hc_vallee_poussin`` or ``delta_hc_vp`` (``params = (r,)``
    and ``dim = d``).
    """

    kind: str
    params: tuple[int, ...]
    dim: int | None = None

    def __post_init__(self):
        if self.kind in _UNIVARIATE:
            minimum = 1 if self.kind in ("fejer", "vallee_poussin") else 0
            check_int_vector(self.params, "params", minimum=minimum)
        elif self.kind in ("hc_vallee_poussin", "delta_hc_vp"):
            if len(self.params) != 1 or self.dim is None or self.dim < 1:
                raise ValueError(f"{self.kind} needs params=(r,) and dim >= 1")
            if self.params[0] < (1 if self.kind == "delta_hc_vp" else 0):
                raise ValueError(f"invalid r for {self.kind}: {self.params[0]}")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    def label(self) -> str:
        args = ",".join(str(p) for p in self.params)
        return f"{self.kind}({args})" + (f"[d={self.dim}]" if self.dim else "")


@lru_cache(maxsize=256)
def build_kernel(kid: KernelId) -> TrigPoly:
    """Materialize a kernel from its descriptor (cached)."""
    if kid.kind in _UNIVARIATE:
        return tensor_kernel(kid.kind, kid.params)
    if kid.kind == "hc_vallee_poussin":
        return hc_vallee_poussin(kid.params[0], kid.dim)
    return delta_hc_vp(kid.params[0], kid.dim)


def tensor_kernel(kind: str, params) -> TrigPoly:
    """``F(x) = prod_i F_{params_i}(x_i)`` for a univariate kernel family."""
    if kind not in _UNIVARIATE:
        raise ValueError(f"no tensor form for kernel kind {kind!r}")
    params = check_int_vector(params, "params", minimum=0)
    return tensor_product(*(_UNIVARIATE[kind](int(p)) for p in params))


@lru_cache(maxsize=64)
def hc_vallee_poussin(r: int, d: int) -> TrigPoly:
    """Hyperbolic-cross kernel ``V_{Q_r} = sum_{|s|_1 <= r} A_s`` (block sum)."""
    r = _nonneg(r, "r")
    d = _nonneg(d, "d", 1)
    return _sum_blocks(level_vectors(r, d), d)


def hc_vallee_poussin_collapsed(r: int, d: int) -> TrigPoly:
    """``V_{Q_r}`` from the collapsed form: the last coordinate's blocks telescope to
    ``V_{2^(r - |s'|_1 - 1)}`` for each head index ``s'`` of the first d-1 coordinates.
    """
    r = _nonneg(r, "r")
    d = _nonneg(d, "d", 1)
    if d == 1:
        return _vp_dyadic(r - 1)
    terms = []
    for head in level_vectors(r, d - 1):
        factors = [block_A(s) for s in head] + [_vp_dyadic(r - sum(head) - 1)]
        terms.append(tensor_product(*factors))
    return _concat(terms, d)


@lru_cache(maxsize=64)
def delta_hc_vp(r: int, d: int) -> TrigPoly:
    """``V_{Q_r} - V_{Q_{r-1}}``."""
    r = _nonneg(r, "r", 1)
    return hc_vallee_poussin(r, d) - hc_vallee_poussin(r - 1, d)


def delta_hc_vp_blocks(r: int, d: int) -> TrigPoly:
    """``sum_{|s|_1 = r} A_s``; equal to :func:`delta_hc_vp`."""
    r = _nonneg(r, "r", 1)
    return _sum_blocks(level_vectors(r, d, exact=True), d)


def _sum_blocks(levels, d: int) -> TrigPoly:
    return _concat([tensor_product(*(block_A(s) for s in lv)) for lv in levels], d)


def _concat(terms: list[TrigPoly], d: int) -> TrigPoly:
    return TrigPoly(np.vstack([t.freqs for t in terms]),
                    np.concatenate([t.coeffs for t in terms]), dim=d)


# closed forms, with the removable singularity at x = 0 (mod 2 pi) filled by the limit

def _near_zero(x: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    return np.abs(np.sin(x / 2)) < tol


def dirichlet_closed(j: int, x) -> np.ndarray:
    """``sin((j + 1/2) x) / sin(x / 2)``."""
    x = np.asarray(x, dtype=float)
    sing = _near_zero(x)
    den = np.where(sing, 1.0, np.sin(x / 2))
    return np.where(sing, 2 * j + 1.0, np.sin((j + 0.5) * x) / den)


def fejer_closed(j: int, x) -> np.ndarray:
    """``sin(j x / 2)^2 / (j sin(x / 2)^2)``."""
    x = np.asarray(x, dtype=float)
    sing = _near_zero(x)
    den = np.where(sing, 1.0, j * np.sin(x / 2) ** 2)
    return np.where(sing, float(j), np.sin(j * x / 2) ** 2 / den)


def vallee_poussin_closed(j: int, x) -> np.ndarray:
    return 2 * fejer_closed(2 * j, x) - fejer_closed(j, x)
