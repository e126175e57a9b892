"""Finite sets of integer frequency vectors.

Every set is stored as a lexicographically sorted ``(n, d)`` int64 array, so
iteration order is deterministic and identical across runs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from ._validation import check_int_vector, check_positive_int

__all__ = [
    "FreqSet",
    "build_rectangle",
    "build_hyperbolic_cross",
    "build_dyadic_block",
    "build_step_hyperbolic_cross",
    "difference_set",
    "explicit_set",
    "lex_sort_unique",
]


def _row_keys(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Encode integer rows as int64 keys whose order is lexicographic."""
    arr = np.asarray(arr, dtype=np.int64)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(arr.shape[1], np.int64), np.ones(arr.shape[1], np.int64)
    lo = arr.min(axis=0)
    span = arr.max(axis=0) - lo + 1
    radix = np.ones_like(span)
    for i in range(arr.shape[1] - 2, -1, -1):
        radix[i] = radix[i + 1] * span[i + 1]
    if float(np.prod(span.astype(float))) >= 2.0**62:
        raise OverflowError("frequency range too large for key encoding")
    return (arr - lo) @ radix, lo, radix


def lex_sort_unique(arr: np.ndarray, return_inverse: bool = False):
    """Sort rows lexicographically and drop duplicates."""
    arr = np.asarray(arr, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D array of frequency vectors")
    if arr.shape[0] == 0:
        return (arr, np.zeros(0, dtype=np.int64)) if return_inverse else arr
    keys, _, _ = _row_keys(arr)
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    out = arr[first]
    return (out, inverse) if return_inverse else out


@dataclass(frozen=True, eq=False)
class FreqSet:
    """A finite, immutable set of frequency vectors in Z^d.

    Parameters
    ----------
    dim : int
        Ambient dimension d.
    kind : str
        One of ``rectangle``, ``hyperbolic_cross``, ``dyadic_block``,
        ``step_hyperbolic_cross`` or ``explicit``.
    params : dict
        Construction parameters of the set (``j``, ``N``, ``s`` or ``r``).
    freqs : numpy.ndarray
        Lexicographically sorted members, shape ``(n, dim)``.
    """

    dim: int
    kind: str
    params: dict
    freqs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.freqs.setflags(write=False)

    def __len__(self) -> int:
        return int(self.freqs.shape[0])

    @property
    def cardinality(self) -> int:
        return len(self)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.freqs:
            yield tuple(int(v) for v in row)

    def __contains__(self, k) -> bool:
        return self.contains(k)

    def contains(self, k: Sequence[int]) -> bool:
        k = np.asarray(k, dtype=np.int64).reshape(-1)
        if k.shape[0] != self.dim:
            raise ValueError(f"expected a {self.dim}-vector, got {k.shape[0]} entries")
        return bool(self.contains_many(k[None, :])[0])

    def contains_many(self, ks: np.ndarray) -> np.ndarray:
        """Vectorized membership test for an ``(n, dim)`` array."""
        ks = np.atleast_2d(np.asarray(ks, dtype=np.int64))
        a = np.abs(ks)
        if self.kind == "rectangle":
            return np.all(a < np.asarray(self.params["j"]), axis=1)
        if self.kind == "hyperbolic_cross":
            return np.prod(np.maximum(a, 1).astype(float), axis=1) <= self.params["N"]
        if self.kind == "dyadic_block":
            s = np.asarray(self.params["s"])
            lo = np.array([2 ** (si - 1) if si >= 1 else 0 for si in s])
            return np.all((a >= lo) & (a < 2**s), axis=1)
        if self.kind == "step_hyperbolic_cross":
            return np.sum(_dyadic_level(a), axis=1) <= self.params["r"]
        if len(self) == 0:
            return np.zeros(ks.shape[0], dtype=bool)
        both = np.vstack([self.freqs, ks])
        keys, _, _ = _row_keys(both)
        mine, other = keys[: len(self)], keys[len(self):]
        pos = np.searchsorted(mine, other)
        pos = np.minimum(pos, len(mine) - 1)
        return mine[pos] == other

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "kind": self.kind,
                           "params": {k: (list(v) if isinstance(v, tuple) else v)
                                      for k, v in self.params.items()},
                           "freqs": self.freqs.tolist()})

    def __repr__(self) -> str:
        return f"FreqSet(dim={self.dim}, kind={self.kind!r}, params={self.params}, n={len(self)})"


def _dyadic_level(a: np.ndarray) -> np.ndarray:
    """Dyadic level s with [2^(s-1)] <= a < 2^s, elementwise for a >= 0 (the bit length)."""
    a = np.asarray(a, dtype=np.int64)
    # frexp gives a = mant 2^e with mant in [0.5, 1), so e is the bit length (exact below 2^53)
    return np.where(a > 0, np.frexp(a.astype(float))[1], 0).astype(np.int64)


def _product_grid(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Cartesian product of sorted 1-D integer arrays, lexicographic order."""
    if any(len(f) == 0 for f in factors):
        return np.zeros((0, len(factors)), dtype=np.int64)
    mesh = np.meshgrid(*factors, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1).astype(np.int64)


def build_rectangle(j) -> FreqSet:
    """Rectangle ``{k : |k_i| < j_i}`` with ``prod(2 j_i - 1)`` members."""
    j = check_int_vector(j, "j", minimum=1)
    freqs = _product_grid([np.arange(-ji + 1, ji) for ji in j])
    return FreqSet(len(j), "rectangle", {"j": tuple(int(v) for v in j)}, freqs)


def _cross_rows(N: int, d: int) -> list[tuple[int, ...]]:
    # recursive per-coordinate enumeration pruned by the remaining product budget
    if d == 0:
        return [()]
    out = []
    for k in range(-N, N + 1):
        budget = N // max(abs(k), 1)
        for tail in _cross_rows(budget, d - 1):
            out.append((k,) + tail)
    return out


def build_hyperbolic_cross(N: int, d: int) -> FreqSet:
    """Hyperbolic cross ``{k : prod max(|k_j|, 1) <= N}`` in dimension d."""
    N = check_positive_int(N, "N")
    d = check_positive_int(d, "d")
    rows = _cross_rows(N, d)
    freqs = lex_sort_unique(np.array(rows, dtype=np.int64).reshape(-1, d))
    return FreqSet(d, "hyperbolic_cross", {"N": N, "d": d}, freqs)


def _block_factor(s: int) -> np.ndarray:
    if s == 0:
        return np.array([0], dtype=np.int64)
    lo, hi = 2 ** (s - 1), 2**s
    pos = np.arange(lo, hi, dtype=np.int64)
    return np.concatenate([-pos[::-1], pos])


def build_dyadic_block(s) -> FreqSet:
    """Dyadic block ``{k : [2^(s_j - 1)] <= |k_j| < 2^(s_j)}``."""
    s = check_int_vector(s, "s", minimum=0)
    freqs = _product_grid([_block_factor(int(si)) for si in s])
    return FreqSet(len(s), "dyadic_block", {"s": tuple(int(v) for v in s)}, freqs)


def level_vectors(r: int, d: int, exact: bool = False) -> list[tuple[int, ...]]:
    """All ``s`` in Z_+^d with ``|s|_1 <= r`` (or ``== r``), lexicographic."""
    out = []
    for s in itertools.product(range(r + 1), repeat=d):
        t = sum(s)
        if t == r or (not exact and t < r):
            out.append(s)
    return out


def build_step_hyperbolic_cross(r: int, d: int) -> FreqSet:
    """Step hyperbolic cross: the disjoint union of dyadic blocks with ``|s|_1 <= r``."""
    if int(r) != r or r < 0:
        raise ValueError(f"r must be a nonnegative integer, got {r!r}")
    d = check_positive_int(d, "d")
    r = int(r)
    blocks = [build_dyadic_block(s).freqs for s in level_vectors(r, d)]
    freqs = lex_sort_unique(np.vstack(blocks))
    return FreqSet(d, "step_hyperbolic_cross", {"r": r, "d": d}, freqs)


def explicit_set(freqs, dim: int | None = None) -> FreqSet:
    arr = np.asarray(freqs, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, dim or 1)
    if dim is not None and arr.shape[1] != dim:
        raise ValueError("dimension mismatch")
    return FreqSet(arr.shape[1], "explicit", {}, lex_sort_unique(arr))


def difference_set(Q: FreqSet) -> FreqSet:
    """All differences ``k - l`` with ``k, l`` in Q, deduplicated."""
    f = Q.freqs
    if len(f) == 0:
        return explicit_set(np.zeros((0, Q.dim), dtype=np.int64), Q.dim)
    diffs = (f[:, None, :] - f[None, :, :]).reshape(-1, Q.dim)
    return explicit_set(diffs, Q.dim)
