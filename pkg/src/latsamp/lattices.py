"""Rank-1 lattice point sets (Fibonacci and Korobov) and their dual lattices.

A rank-1 lattice with modulus ``m`` and generating vector ``h`` has points
``w^mu = 2 pi {mu h / m}``, ``mu = 1..m``.  Its cubature rule integrates
``exp(i (k, x))`` to 1 when ``(h, k) = 0 mod m`` and to 0 otherwise, so
exactness questions reduce to the dual lattice ``{k : (h, k) = 0 mod m}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_int_vector, check_positive_int
from .freqsets import FreqSet, build_hyperbolic_cross

__all__ = [
    "INT64_MAX",
    "fibonacci_number",
    "is_prime",
    "next_prime",
    "PointSet",
    "FibonacciGenerator",
    "KorobovGenerator",
    "DualLattice",
    "fibonacci_points",
    "korobov_points",
    "dual_contains",
    "min_product",
    "max_exact_cross",
    "gamma_scan",
    "is_exact_on",
    "korobov_search",
    "KorobovSearchError",
]

INT64_MAX = 2**63 - 1


def fibonacci_number(n: int) -> int:
    """``b_n`` with ``b_0 = b_1 = 1``.  Values beyond int64 are rejected."""
    n = check_positive_int(n, "n", minimum=0)
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
        if b > INT64_MAX:
            raise OverflowError(f"b_{n} exceeds the 64-bit integer range")
    return b if n >= 1 else a


def is_prime(m: int) -> bool:
    """Deterministic trial division."""
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    for q in range(3, math.isqrt(m) + 1, 2):
        if m % q == 0:
            return False
    return True


def next_prime(m: int) -> int:
    """Smallest prime ``>= m``."""
    m = max(int(m), 2)
    while not is_prime(m):
        m += 1
    return m


@dataclass(frozen=True)
class DualLattice:
    """``{k in Z^d : (h, k) = 0 mod m}``."""

    m: int
    h: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.h)

    def contains(self, k) -> bool:
        return bool(self.contains_many(np.asarray(k).reshape(1, -1))[0])

    def contains_many(self, ks) -> np.ndarray:
        ks = np.atleast_2d(np.asarray(ks, dtype=np.int64))
        return self.residues(ks) == 0

    def residues(self, ks) -> np.ndarray:
        """``(h, k) mod m`` for each row of ``ks``, without int64 overflow."""
        ks = np.atleast_2d(np.asarray(ks, dtype=np.int64))
        h = np.mod(np.asarray(self.h, dtype=np.int64), self.m)
        acc = np.zeros(ks.shape[0], dtype=np.int64)
        for i in range(self.dim):
            acc = np.mod(acc + np.mod(ks[:, i], self.m) * h[i], self.m)
        return acc


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite point set in ``[0, 2 pi)^d``.

    For rank-1 lattices, ``numerators`` holds the integers ``mu h mod m`` so
    that ``points == 2 pi numerators / m`` exactly up to rounding; ``h`` and
    ``modulus`` are then set.  ``provenance`` describes the generator.
    """

    points: np.ndarray = field(repr=False)
    modulus: int | None = None
    h: tuple[int, ...] | None = None
    numerators: np.ndarray | None = field(default=None, repr=False)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points.setflags(write=False)
        if self.numerators is not None:
            self.numerators.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def is_lattice(self) -> bool:
        return self.modulus is not None and self.numerators is not None

    def dual(self) -> DualLattice:
        if not self.is_lattice:
            raise ValueError("point set is not a rank-1 lattice")
        return DualLattice(self.modulus, self.h)

    def unit_coordinates(self) -> np.ndarray:
        """Coordinates divided by 2 pi (exact rationals for lattices)."""
        if self.is_lattice:
            return self.numerators / self.modulus
        return self.points / (2 * np.pi)

    @classmethod
    def from_unit_coordinates(cls, u, provenance: dict | None = None) -> "PointSet":
        """Rebuild a point set from coordinates in ``[0, 1)``.

        Lattice structure is recovered when the rows are ``{mu h / m}`` for
        ``mu = 1..m`` in order, which is how :func:`lattice_points` emits them.
        """
        u = np.atleast_2d(np.asarray(u, dtype=float))
        m = u.shape[0]
        num = np.rint(u * m)
        if np.all(np.abs(u * m - num) < 1e-6):
            num = np.mod(num.astype(np.int64), m)
            h = tuple(int(v) for v in num[0])
            mu = np.arange(1, m + 1, dtype=np.int64)[:, None]
            if np.array_equal(num, np.mod(mu * np.array(h, dtype=np.int64), m)):
                return lattice_points(m, h, provenance)
        return cls(points=2 * np.pi * np.mod(u, 1.0), provenance=dict(provenance or {}))


def lattice_points(m: int, h, provenance: dict | None = None) -> PointSet:
    m = check_positive_int(m, "m")
    h = check_int_vector(h, "h")
    mu = np.arange(1, m + 1, dtype=np.int64)[:, None]
    num = np.mod(mu * np.mod(h, m)[None, :], m)
    pts = 2 * np.pi * num / m
    return PointSet(pts, m, tuple(int(v) for v in h), num, dict(provenance or {}))


@dataclass(frozen=True)
class FibonacciGenerator:
    """Fibonacci lattice: ``m = b_n``, ``h = (1, b_{n-1})``."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Fibonacci point sets need n >= 2")

    @property
    def modulus(self) -> int:
        return fibonacci_number(self.n)

    @property
    def h(self) -> tuple[int, int]:
        return (1, fibonacci_number(self.n - 1))

    def dual(self) -> DualLattice:
        return DualLattice(self.modulus, self.h)

    def points(self) -> PointSet:
        return fibonacci_points(self.n)

    def describe(self) -> dict:
        return {"type": "fibonacci", "n": self.n, "m": self.modulus, "h": list(self.h)}


@dataclass(frozen=True)
class KorobovGenerator:
    """Korobov lattice with modulus m and generating vector h.

    ``KorobovGenerator.special(m, h, d)`` builds ``(1, h, h^2, ..., h^(d-1)) mod m``.
    """

    m: int
    h: tuple[int, ...]
    special_h: int | None = None

    @classmethod
    def special(cls, m: int, h: int, d: int) -> "KorobovGenerator":
        vec = tuple(pow(int(h), i, int(m)) for i in range(d))
        return cls(int(m), vec, int(h))

    @property
    def modulus(self) -> int:
        return self.m

    def dual(self) -> DualLattice:
        return DualLattice(self.m, self.h)

    def points(self) -> PointSet:
        return korobov_points(self.m, self.h)

    def describe(self) -> dict:
        out = {"type": "korobov", "m": self.m, "h": list(self.h)}
        if self.special_h is not None:
            out["special_h"] = self.special_h
        return out


def fibonacci_points(n: int) -> PointSet:
    """``y^mu = (2 pi mu / b_n, 2 pi {mu b_{n-1} / b_n})``, ``mu = 1..b_n``."""
    gen = FibonacciGenerator(check_positive_int(n, "n", minimum=2))
    return lattice_points(gen.modulus, gen.h, gen.describe())


def korobov_points(m: int, h, d: int | None = None) -> PointSet:
    """``w^mu = 2 pi {mu h / m}``.  A scalar h with ``d`` gives the special form."""
    h_arr = np.atleast_1d(np.asarray(h))
    if h_arr.size == 1 and d is not None and d > 1:
        gen = KorobovGenerator.special(m, int(h_arr[0]), d)
    else:
        gen = KorobovGenerator(int(m), tuple(int(v) for v in h_arr))
    return lattice_points(gen.m, gen.h, gen.describe())


def dual_contains(L: DualLattice, k) -> bool:
    return L.contains(k)


def _as_dual(obj) -> DualLattice:
    if isinstance(obj, DualLattice):
        return obj
    if isinstance(obj, PointSet):
        return obj.dual()
    return obj.dual()


def min_product(L, return_vector: bool = False):
    """Minimal ``prod max(|k_j|, 1)`` over nonzero dual vectors, d = 2.

    Scans ``k_2 = 0, 1, 2, ...``; in each row the best ``k_1`` is the residue of
    ``-h_1^{-1} h_2 k_2`` of least absolute value.  The scan stops once
    ``k_2`` alone reaches the current best product.  Negative ``k_2`` mirror
    positive ones through ``k -> -k``.
    """
    L = _as_dual(L)
    if L.dim != 2:
        raise ValueError("min_product is defined for two-dimensional lattices")
    m = L.m
    h1, h2 = L.h[0] % m, L.h[1] % m
    if math.gcd(h1, m) != 1:
        raise ValueError("h_1 must be invertible modulo m")
    step = (-pow(h1, -1, m) * h2) % m
    best, arg = m, (m, 0)
    k2 = 1
    while k2 < best:
        r = (step * k2) % m
        k1 = r if r <= m - r else r - m
        prod = max(abs(k1), 1) * k2
        if prod < best:
            best, arg = prod, (k1, k2)
        k2 += 1
    return (best, arg) if return_vector else best


def max_exact_cross(L) -> int:
    """Largest N with ``Gamma(N, 2)`` free of nonzero dual vectors."""
    return min_product(L) - 1


def gamma_scan(n_min: int, n_max: int) -> list[dict]:
    """Rows ``(n, b_n, N_max, N_max / b_n)`` for Fibonacci lattices."""
    rows = []
    for n in range(max(int(n_min), 2), int(n_max) + 1):
        gen = FibonacciGenerator(n)
        N = max_exact_cross(gen.dual())
        rows.append({"n": n, "b_n": gen.modulus, "N_max": N, "ratio": N / gen.modulus})
    return rows


def is_exact_on(gen, Q: FreqSet | np.ndarray) -> bool:
    """True iff no nonzero frequency of Q lies in the dual lattice of ``gen``."""
    L = _as_dual(gen)
    freqs = Q.freqs if isinstance(Q, FreqSet) else np.atleast_2d(np.asarray(Q, dtype=np.int64))
    if freqs.shape[0] == 0:
        return True
    if freqs.shape[1] != L.dim:
        raise ValueError("dimension mismatch between lattice and frequency set")
    nonzero = np.any(freqs != 0, axis=1)
    return not bool(np.any(L.contains_many(freqs[nonzero])))


class KorobovSearchError(RuntimeError):
    """No admissible h was found although the cardinality condition holds."""


def _first_admissible_h(ks: np.ndarray, m: int, block: int = 256) -> int | None:
    """Smallest h in [1, m) with ``k_1 + h k_2 + ... + h^(d-1) k_d != 0 mod m`` for all rows."""
    d = ks.shape[1]
    kmod = np.mod(ks, m)
    for start in range(1, m, block):
        h = np.arange(start, min(start + block, m), dtype=np.int64)[:, None]
        val = np.broadcast_to(kmod[:, d - 1][None, :], (h.shape[0], ks.shape[0])).copy()
        for i in range(d - 2, -1, -1):
            val = np.mod(val * h + kmod[:, i][None, :], m)
        ok = ~np.any(val == 0, axis=1)
        if ok.any():
            return int(h[np.argmax(ok), 0])
    return None


def korobov_search(L: int, d: int) -> dict:
    """Smallest prime m with ``|Gamma(L, d)| < (m - 1)/d`` and the smallest valid h.

    Returns a dict with ``m``, ``h``, ``card_gamma``, the generator and a
    ``verified`` flag from an independent exactness check on ``Gamma(L, d)``.
    """
    L = check_positive_int(L, "L")
    d = check_positive_int(d, "d", minimum=2)
    cross = build_hyperbolic_cross(L, d)
    card = len(cross)
    m = next_prime(d * card + 2)
    ks = cross.freqs[np.any(cross.freqs != 0, axis=1)]
    h = _first_admissible_h(ks, m)
    if h is None:
        raise KorobovSearchError(
            f"no h in [1, {m}) avoids the dual lattice on Gamma({L}, {d}) "
            f"(|Gamma| = {card}, m = {m}); this contradicts the cardinality bound"
        )
    gen = KorobovGenerator.special(m, h, d)
    return {
        "L": L,
        "d": d,
        "card_gamma": card,
        "m": m,
        "h": h,
        "generator": gen,
        "verified": is_exact_on(gen, cross),
    }
