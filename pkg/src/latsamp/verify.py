"""Brute-force oracles and the acceptance-suite runner.

The oracles here deliberately avoid the code paths they check: dual vectors
are found by enumerating a box rather than by the pruned row scan, and grid
norms are computed by separable direct summation on successively doubled
grids instead of the FFT with a fixed oversampling factor.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .discretize import (
    ShiftOperator,
    cubature,
    discretized_convolution,
    exponential_sums,
    gram_eigenvalues,
    op_norm,
    rectangle_collection,
    shift_abs_sum,
    universal_check,
)
from .freqsets import build_hyperbolic_cross, build_rectangle
from .kernels import (
    block_A,
    delta_hc_vp,
    fejer,
    hc_vallee_poussin,
    tensor_kernel,
    vallee_poussin,
)
from .lattices import (
    DualLattice,
    FibonacciGenerator,
    PointSet,
    fibonacci_points,
    gamma_scan,
    is_exact_on,
    korobov_points,
    korobov_search,
    min_product,
)
from .trigpoly import (
    RNG_ALGORITHM,
    TrigPoly,
    autocorrelate,
    convolve,
    exponential,
    lp_norm,
    random_poly,
)

__all__ = [
    "oracle_dual_enumeration",
    "oracle_min_product",
    "oracle_grid_norm",
    "SuiteConfig",
    "ConfigError",
    "CRITERIA",
    "run_criterion",
    "run_suite",
    "report_numeric_fields",
]


# ---------------------------------------------------------------- oracles

def oracle_dual_enumeration(L: DualLattice, box: int) -> np.ndarray:
    """Every ``k`` in ``[-box, box]^d`` with ``(h, k) = 0 mod m``, lexicographic.

    Plain Python integer arithmetic on each coordinate row, no modular
    shortcuts from :mod:`lattices`.
    """
    box = int(box)
    if box < 0:
        raise ValueError("box must be >= 0")
    d, m = len(L.h), int(L.m)
    axis = np.arange(-box, box + 1, dtype=np.int64)
    if d == 1:
        rows = [(int(k),) for k in axis if (int(k) * L.h[0]) % m == 0]
        return np.array(rows, dtype=np.int64).reshape(-1, 1)
    found = []
    # enumerate the leading d-1 coordinates explicitly, vectorize the last one
    head_axes = [range(-box, box + 1)] * (d - 1)
    last = axis * int(L.h[-1])
    for head in itertools.product(*head_axes):
        partial = sum(int(k) * int(h) for k, h in zip(head, L.h[:-1]))
        hits = axis[(partial + last) % m == 0]
        for k in hits:
            found.append(head + (int(k),))
    return np.array(found, dtype=np.int64).reshape(-1, d)


def oracle_min_product(L: DualLattice, box: int | None = None) -> tuple[int, tuple[int, int]]:
    """Minimal ``prod max(|k_j|, 1)`` over nonzero dual vectors by box enumeration.

    ``(m, 0)`` is always a dual vector with product m, so every minimizer lies
    in the box ``[-m, m]^2``.
    """
    box = L.m if box is None else box
    dual = oracle_dual_enumeration(L, box)
    dual = dual[np.any(dual != 0, axis=1)]
    prods = np.prod(np.maximum(np.abs(dual), 1), axis=1)
    i = int(np.argmin(prods))
    return int(prods[i]), tuple(int(v) for v in dual[i])


def _separable_grid_abs(f: TrigPoly, sizes: tuple[int, ...], rows: slice) -> np.ndarray:
    """|f| on a block of grid rows (first axis), by dense separable summation."""
    deg = f.degrees()
    shape = tuple(2 * int(K) + 1 for K in deg)
    dense = np.zeros(shape, dtype=np.complex128)
    dense[tuple((f.freqs + deg).T)] = f.coeffs
    out = dense
    for axis, (M, K) in enumerate(zip(sizes, deg)):
        nodes = 2 * np.pi * np.arange(M) / M
        if axis == 0:
            nodes = nodes[rows]
        E = np.exp(1j * np.outer(nodes, np.arange(-K, K + 1)))
        out = np.moveaxis(np.tensordot(E, out, axes=([1], [axis])), 0, axis)
    return np.abs(out)


def oracle_grid_norm(f: TrigPoly, p: float, levels: int = 4, base: int = 2) -> list[float]:
    """L_p estimates on grids with ``base (2K_i + 1) 2^l`` nodes, ``l = 0..levels-1``."""
    if levels < 2:
        raise ValueError("need at least two refinement levels")
    p = float(p)
    deg = f.degrees()
    estimates = []
    for lev in range(levels):
        sizes = tuple(base * (2 * int(K) + 1) * 2**lev if K > 0 else 1 for K in deg)
        total, peak, count = 0.0, 0.0, 0
        block = max(1, 4_000_000 // max(1, int(np.prod(sizes[1:]))))
        for start in range(0, sizes[0], block):
            vals = _separable_grid_abs(f, sizes, slice(start, start + block))
            if p == math.inf:
                peak = max(peak, float(vals.max()))
            else:
                total += float(np.sum(vals**p))
            count += vals.size
        estimates.append(peak if p == math.inf else (total / count) ** (1.0 / p))
    return estimates


# ----------------------------------------------------------------- config

class ConfigError(ValueError):
    """Raised for an invalid suite configuration."""


def _default_tolerances() -> dict:
    return {
        "exact": 1e-12,
        "convolution": 1e-10,
        "aliasing": 1e-3,
        "growth_factor": 4.0,
        "al2_bound": 9.0,
        "vp_l1_bound": 3.0,
        "l2_universal": 1e-10,
        "power_iteration": 1e-11,
        "chain_slack": 0.05,
    }


@dataclass
class SuiteConfig:
    """Parameters of the acceptance suite; every range is inclusive."""

    seed: int = 0
    gamma_n_range: tuple[int, int] = (3, 25)
    gamma_bruteforce_n_max: int = 18
    cubature_fibonacci_n_max: int = 13
    cubature_korobov: tuple[tuple[int, int], ...] = ((1, 3), (2, 3))
    convolution_pairs: int = 200
    convolution_fibonacci_n_range: tuple[int, int] = (8, 16)
    convolution_korobov_L_range: tuple[int, int] = (1, 4)
    al2_n_range: tuple[int, int] = (5, 16)
    growth_n: int = 16
    fsv_n: int = 16
    korobov_L_range: tuple[int, int] = (2, 8)
    korobov_d: int = 3
    kernel_j_max: int = 64
    kernel_s_max: int = 8
    universal_n: int = 14
    universal_p: tuple[float, ...] = (2.0, 4.0, math.inf)
    universal_trials: int = 3
    oversample: int = 8
    tolerances: dict = field(default_factory=_default_tolerances)
    criteria: tuple[int, ...] = tuple(range(1, 11))
    output: str | None = None

    def validate(self) -> "SuiteConfig":
        for key, val in self.tolerances.items():
            if not (isinstance(val, (int, float)) and val > 0):
                raise ConfigError(f"tolerance {key!r} must be > 0, got {val!r}")
        for name in ("gamma_n_range", "convolution_fibonacci_n_range", "convolution_korobov_L_range",
                     "al2_n_range", "korobov_L_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} is empty: {lo} > {hi}")
        if not self.universal_p or self.universal_trials < 1 or self.convolution_pairs < 1:
            raise ConfigError("universal_p, universal_trials and convolution_pairs must be nonempty/positive")
        unknown = set(self.criteria) - set(CRITERIA)
        if unknown:
            raise ConfigError(f"unknown criteria {sorted(unknown)}")
        return self

    @classmethod
    def from_dict(cls, obj: dict) -> "SuiteConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(obj) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        obj = dict(obj)
        tol = _default_tolerances()
        tol.update(obj.pop("tolerances", {}) or {})
        for key, val in list(obj.items()):
            if isinstance(val, list):
                obj[key] = tuple(tuple(v) if isinstance(v, list) else _as_float_inf(v) for v in val)
        return cls(tolerances=tol, **obj)

    @classmethod
    def from_file(cls, path) -> "SuiteConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["universal_p"] = [_json_float(p) for p in self.universal_p]
        return out


def _as_float_inf(v):
    return math.inf if v in ("inf", "Infinity") else v


def _json_float(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


# --------------------------------------------------------------- criteria

@dataclass
class _Result:
    passed: bool = True
    measured: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            self.passed = False
            self.failures.append(message)


def _admissible_r(n: int, divisor: int = 1) -> list[int]:
    N = min_product(FibonacciGenerator(n).dual()) - 1
    return [r for r in range(2, 64) if 2**r * divisor <= N]


def criterion_1(cfg: SuiteConfig) -> _Result:
    """Dual-lattice exactness: N_max values, positive floor, pruned = brute force."""
    res = _Result()
    lo, hi = cfg.gamma_n_range
    rows = gamma_scan(lo, hi)
    by_n = {r["n"]: r for r in rows}
    for n, expected in ((3, 0), (4, 1), (5, 2)):
        if n in by_n:
            res.check(by_n[n]["N_max"] == expected, f"N_max({n}) = {by_n[n]['N_max']}, expected {expected}")
    floor_rows = [r for r in rows if r["n"] >= 5]
    floor = min(r["ratio"] for r in floor_rows) if floor_rows else None
    res.check(floor is not None and floor > 0, "N_max/b_n floor is not positive")
    mismatches = []
    for n in range(max(lo, 3), min(hi, cfg.gamma_bruteforce_n_max) + 1):
        L = FibonacciGenerator(n).dual()
        fast = min_product(L)
        brute, _ = oracle_min_product(L)
        if fast != brute:
            mismatches.append((n, fast, brute))
    res.check(not mismatches, f"pruned/brute-force mismatch: {mismatches}")
    res.measured = {
        "scan": [[r["n"], r["b_n"], r["N_max"], r["ratio"]] for r in rows],
        "ratio_floor_n_ge_5": floor,
        "bruteforce_checked_up_to": min(hi, cfg.gamma_bruteforce_n_max),
    }
    return res


def _exhaustive_exponential_check(points: PointSet) -> tuple[float, int]:
    """Max ``|S(k) - [k in dual]|`` over ``|k_i| <= 2m``; also counts dual vectors."""
    m, d = points.modulus, points.dim
    table = exponential_sums(points)
    h = np.mod(np.asarray(points.h, dtype=np.int64), m)
    ks = np.arange(-2 * m, 2 * m + 1, dtype=np.int64)
    kmod = np.mod(ks, m)
    worst, members = 0.0, 0
    if d == 2:
        res = np.mod(kmod[:, None] * h[0] + kmod[None, :] * h[1], m)
        vals = table[kmod[:, None], kmod[None, :]]
        worst = float(np.abs(vals - (res == 0)).max())
        return worst, int((res == 0).sum())
    if d != 3:
        raise ValueError("exhaustive check implemented for d = 2, 3")
    tail = np.mod(kmod[:, None] * h[1] + kmod[None, :] * h[2], m)
    for k1 in kmod:
        res = np.mod(tail + k1 * h[0], m) == 0
        vals = table[k1][kmod[:, None], kmod[None, :]]
        worst = max(worst, float(np.abs(vals - res).max()))
        members += int(res.sum())
    return worst, members


def criterion_2(cfg: SuiteConfig) -> _Result:
    """Cubature of exp(i(k,x)) equals the dual-lattice indicator over |k_i| <= 2m."""
    res = _Result()
    tol = cfg.tolerances["exact"]
    rng = np.random.default_rng(cfg.seed)
    cases = [fibonacci_points(n) for n in range(2, cfg.cubature_fibonacci_n_max + 1)]
    for L, d in cfg.cubature_korobov:
        found = korobov_search(L, d)
        cases.append(korobov_points(found["m"], found["h"], d))
    rows = []
    for pts in cases:
        worst, members = _exhaustive_exponential_check(pts)
        # spot check the FFT table against direct point sums
        m = pts.modulus
        ks = rng.integers(-2 * m, 2 * m + 1, size=(200, pts.dim))
        dual = pts.dual()
        direct = max(abs(cubature(pts, exponential(k)) - float(dual.contains(k))) for k in ks)
        rows.append({"generator": pts.provenance, "max_error": worst,
                     "direct_max_error": direct, "dual_vectors_in_box": members})
        res.check(worst <= tol, f"{pts.provenance}: exhaustive error {worst:.3e} > {tol}")
        res.check(direct <= tol, f"{pts.provenance}: direct-sum error {direct:.3e} > {tol}")
    res.measured = {"cases": rows}
    return res


def _random_pair(R, rng) -> tuple[TrigPoly, TrigPoly]:
    s1, s2 = (int(v) for v in rng.integers(0, 2**31, size=2))
    return random_poly(R, s1), random_poly(R, s2)


def _admissible_rectangles(points: PointSet, d: int, limit: int) -> list[tuple[int, ...]]:
    out = []
    for j in rectangle_collection(limit, d):
        if is_exact_on(points, build_rectangle(tuple(2 * v - 1 for v in j))):
            out.append(j)
    return out


def criterion_3(cfg: SuiteConfig) -> _Result:
    """Discretized convolution equals exact convolution in the exactness regime."""
    res = _Result()
    tol, alias_tol = cfg.tolerances["convolution"], cfg.tolerances["aliasing"]
    rng = np.random.default_rng(cfg.seed + 3)
    settings = []
    lo, hi = cfg.convolution_fibonacci_n_range
    for n in range(lo, hi + 1):
        pts = fibonacci_points(n)
        N = min_product(pts.dual()) - 1
        settings.append((pts, _admissible_rectangles(pts, 2, max(1, N // 4))))
    lo, hi = cfg.convolution_korobov_L_range
    for L in range(lo, hi + 1):
        found = korobov_search(L, 3)
        pts = korobov_points(found["m"], found["h"], 3)
        settings.append((pts, _admissible_rectangles(pts, 3, L)))
    settings = [(p, js) for p, js in settings if js]
    worst, count = 0.0, 0
    for i in range(cfg.convolution_pairs):
        pts, js = settings[i % len(settings)]
        j = js[int(rng.integers(len(js)))]
        f, g = _random_pair(build_rectangle(j), rng)
        err = discretized_convolution(f, g, pts).max_abs_diff(convolve(f, g))
        worst = max(worst, err)
        count += 1
    res.check(worst <= tol, f"discretized convolution error {worst:.3e} > {tol}")
    # aliasing witnesses: the smallest non-admissible rectangle per point set
    witnesses = []
    for pts, js in settings:
        d = pts.dim
        j = tuple(max(v) + 1 for v in zip(*js)) if d == 2 else (max(v[0] for v in js) + 2,) + (2,) * (d - 1)
        while is_exact_on(pts, build_rectangle(tuple(2 * v - 1 for v in j))):
            j = tuple(2 * v for v in j)
        f, g = _random_pair(build_rectangle(j), rng)
        err = discretized_convolution(f, g, pts).max_abs_diff(convolve(f, g))
        witnesses.append({"generator": pts.provenance, "j": list(j), "error": err})
        res.check(err >= alias_tol, f"aliasing witness {pts.provenance} j={j} error {err:.3e} < {alias_tol}")
    res.measured = {"pairs": count, "max_error": worst, "aliasing_witnesses": witnesses,
                    "point_sets": [p.provenance for p, _ in settings]}
    return res


def criterion_4(cfg: SuiteConfig) -> _Result:
    """Operator norms of tensor de la Vallee Poussin shifts are at most 9."""
    res = _Result()
    bound = cfg.tolerances["al2_bound"]
    rows = []
    lo, hi = cfg.al2_n_range
    for n in range(lo, hi + 1):
        pts = fibonacci_points(n)
        N = min_product(pts.dual()) - 1
        for a in range(0, 32):
            for b in range(0, 32):
                j = (2**a, 2**b)
                if 4 * j[0] * j[1] > N:
                    continue
                op = ShiftOperator(tensor_kernel("vallee_poussin", j), pts)
                norms = {
                    "1": op_norm(op, 1, oversample=cfg.oversample),
                    "inf": op_norm(op, math.inf, oversample=cfg.oversample),
                    "2": op_norm(op, 2, tol=cfg.tolerances["power_iteration"]),
                }
                rows.append({"n": n, "j": list(j), **norms})
                for p, v in norms.items():
                    res.check(v <= bound, f"n={n} j={j} p={p}: op norm {v:.4f} > {bound}")
    res.check(bool(rows), "no admissible dyadic rectangles")
    res.measured = {
        "cases": len(rows),
        "max": {p: max(r[p] for r in rows) for p in ("1", "2", "inf")} if rows else {},
        "rows": rows,
    }
    return res


def _growth_check(res: _Result, values: dict, exponent: Callable[[int], float], label: str,
                  factor: float) -> dict:
    ratios = {r: v / r ** exponent(r) for r, v in values.items()}
    spread = max(ratios.values()) / min(ratios.values())
    res.check(spread <= factor, f"{label}: normalized growth varies by {spread:.3f} > {factor}")
    return {"values": {str(r): v for r, v in values.items()},
            "normalized": {str(r): v for r, v in ratios.items()}, "spread": spread}


def criterion_5(cfg: SuiteConfig) -> _Result:
    """Hyperbolic-cross shift operator norms grow like r^theta(p)."""
    res = _Result()
    factor = cfg.tolerances["growth_factor"]
    n = cfg.growth_n
    pts = fibonacci_points(n)
    b = len(pts)
    rs = _admissible_r(n)
    norms = {"1": {}, "2": {}, "inf": {}}
    for r in rs:
        op = ShiftOperator(hc_vallee_poussin(r, 2), pts)
        norms["1"][r] = op_norm(op, 1, oversample=cfg.oversample)
        norms["inf"][r] = op_norm(op, math.inf, oversample=cfg.oversample)
        norms["2"][r] = op_norm(op, 2, tol=cfg.tolerances["power_iteration"])
    theta = {"1": 1.0, "2": 0.5, "inf": 1.0}
    growth = {p: _growth_check(res, norms[p], lambda r, t=theta[p]: t, f"p={p}", factor) for p in norms}
    # single-spike probe at the largest admissible r against b^(1-1/p) (log b)^(1/p) / b
    r_top = rs[-1]
    V = hc_vallee_poussin(r_top, 2)
    probe = {}
    for label, p in (("1", 1.0), ("2", 2.0), ("inf", math.inf)):
        spike = lp_norm(V, p, oversample=cfg.oversample) / b
        scale = b ** (1 - 1 / p) * math.log(b) ** (1 / p) / b
        ratio = spike / scale
        probe[label] = {"spike_norm": spike, "scale": scale, "ratio": ratio}
        res.check(1 / factor <= ratio <= factor, f"spike probe p={label}: ratio {ratio:.3f} outside [1/{factor}, {factor}]")
    res.measured = {"n": n, "b_n": b, "r_range": [rs[0], rs[-1]], "growth": growth, "spike_probe": probe}
    return res


def criterion_6(cfg: SuiteConfig) -> _Result:
    """Increment kernel: L_2 operator norm grows like r^(1/2)."""
    res = _Result()
    n = cfg.growth_n
    pts = fibonacci_points(n)
    rs = _admissible_r(n, divisor=4)
    vals = {r: op_norm(ShiftOperator(delta_hc_vp(r, 2), pts), 2, tol=cfg.tolerances["power_iteration"])
            for r in rs}
    growth = _growth_check(res, vals, lambda r: 0.5, "delta p=2", cfg.tolerances["growth_factor"])
    res.measured = {"n": n, "r_range": [rs[0], rs[-1]], "growth": growth}
    return res


def criterion_7(cfg: SuiteConfig) -> _Result:
    """Fibonacci sums of V_{Q_r} and of its autocorrelation are of order r."""
    res = _Result()
    n = cfg.fsv_n
    pts = fibonacci_points(n)
    rs = _admissible_r(n)
    norms = {"1": {}, "2": {}, "inf": {}}
    auto = {}
    for r in rs:
        V = hc_vallee_poussin(r, 2)
        fsv = shift_abs_sum(V, pts, oversample=cfg.oversample, fundamental=True)
        norms["1"][r] = float(fsv.mean()) / r
        norms["2"][r] = float(np.sqrt(np.mean(fsv**2))) / r
        norms["inf"][r] = float(fsv.max()) / r
        del fsv
        auto[r] = float(shift_abs_sum(autocorrelate(V), pts, oversample=cfg.oversample,
                                         fundamental=True).max()) / r
    bounds = {p: [min(v.values()), max(v.values())] for p, v in norms.items()}
    for p, (c, C) in bounds.items():
        res.check(0 < c <= C < math.inf, f"FSV p={p}: bounds [{c}, {C}] not in (0, inf)")
    c_star = max(auto.values())
    res.check(0 < c_star < math.inf, "autocorrelation sum constant not finite and positive")
    res.measured = {
        "n": n,
        "r_range": [rs[0], rs[-1]],
        "fsv_over_r": {p: {str(r): v for r, v in vals.items()} for p, vals in norms.items()},
        "fsv_bounds": bounds,
        "autocorrelation_sum_over_r": {str(r): v for r, v in auto.items()},
        "C_star": c_star,
        "method": "grid-estimated",
        "oversample": cfg.oversample,
    }
    return res


def criterion_8(cfg: SuiteConfig) -> _Result:
    """Exact kernel identities."""
    res = _Result()
    tol = cfg.tolerances["exact"]
    worst = {"fejer_l1": 0.0, "fejer_linf": 0.0, "vp_identity": 0.0, "block_sum": 0.0}
    vp_l1 = 0.0
    for j in range(1, cfg.kernel_j_max + 1):
        K = fejer(j)
        worst["fejer_l1"] = max(worst["fejer_l1"], abs(lp_norm(K, 1) - 1.0))
        worst["fejer_linf"] = max(worst["fejer_linf"], abs(lp_norm(K, math.inf) - j) / j)
        combo = 2 * fejer(2 * j) - fejer(j)
        worst["vp_identity"] = max(worst["vp_identity"], vallee_poussin(j).max_abs_diff(combo))
        vp_l1 = max(vp_l1, lp_norm(vallee_poussin(j), 1))
    for s in range(0, cfg.kernel_s_max + 1):
        total = block_A(0)
        for t in range(1, s + 1):
            total = total + block_A(t)
        target = vallee_poussin(2 ** (s - 1)) if s >= 1 else block_A(0)
        worst["block_sum"] = max(worst["block_sum"], total.max_abs_diff(target))
    for key, val in worst.items():
        res.check(val <= tol, f"{key}: deviation {val:.3e} > {tol}")
    res.check(vp_l1 <= cfg.tolerances["vp_l1_bound"], f"max ||V_j||_1 = {vp_l1:.4f} > 3")
    overlaps = []
    for s in range(0, cfg.kernel_s_max + 1):
        for t in range(s + 2, cfg.kernel_s_max + 1):
            if len(convolve(block_A(s), block_A(t))) != 0:
                overlaps.append((s, t))
    res.check(not overlaps, f"blocks with overlapping spectra: {overlaps}")
    res.measured = {**worst, "max_vp_l1": vp_l1, "block_pairs_checked": "all |s-s'| >= 2"}
    return res


def criterion_9(cfg: SuiteConfig) -> _Result:
    """Korobov generating-vector search."""
    res = _Result()
    d = cfg.korobov_d
    rows = []
    lo, hi = cfg.korobov_L_range
    for L in range(lo, hi + 1):
        found = korobov_search(L, d)
        cross = build_hyperbolic_cross(L, d)
        # independent check with Python integers
        h = found["generator"].h
        bad = [k for k in cross if any(k) and sum(ki * hi_ for ki, hi_ in zip(k, h)) % found["m"] == 0]
        normalized = found["m"] / (L * (math.log(L) + 1) ** (d - 1))
        rows.append({"L": L, "card_gamma": found["card_gamma"], "m": found["m"], "h": found["h"],
                     "verified": found["verified"] and not bad, "m_over_L_log": normalized})
        res.check(found["card_gamma"] < (found["m"] - 1) / d, f"L={L}: cardinality condition violated")
        res.check(not bad and found["verified"], f"L={L}: dual vectors {bad[:3]} in Gamma")
        if L == 2 and d == 3:
            res.check(found["m"] == 251, f"korobov_search(2, 3) gave m = {found['m']}, expected 251")
    res.measured = {"d": d, "rows": rows, "C_trend": max(r["m_over_L_log"] for r in rows)}
    return res


def criterion_10(cfg: SuiteConfig) -> _Result:
    """Universal two-sided discretization over all rectangles with j_1 j_2 <= N."""
    res = _Result()
    n = cfg.universal_n
    pts = fibonacci_points(n)
    N = (min_product(pts.dual()) - 1) // 9
    collection = rectangle_collection(N, 2)
    slack = cfg.tolerances["chain_slack"]
    reports = {}
    for p in cfg.universal_p:
        rep = universal_check(collection, pts, p, trials=cfg.universal_trials, seed=cfg.seed,
                              oversample=cfg.oversample)
        label = "inf" if math.isinf(p) else f"{p:g}"
        res.check(rep["all_exact"], f"p={label}: collection not in the exactness regime")
        res.check(rep["max_representation_error"] <= cfg.tolerances["convolution"],
                  f"p={label}: representation error {rep['max_representation_error']:.3e}")
        if p == 2:
            tol = cfg.tolerances["l2_universal"]
            res.check(abs(rep["lower"] - 1) <= tol and abs(rep["upper"] - 1) <= tol,
                      f"p=2: constants [{rep['lower']}, {rep['upper']}] differ from 1 by more than {tol}")
        else:
            for row in rep["rows"]:
                lo_ok = row["ratio_min"] >= row["chain_lower"] * (1 - slack)
                hi_ok = row["ratio_max"] <= row["chain_upper"] * (1 + slack)
                res.check(lo_ok and hi_ok, f"p={label} j={row['j']}: ratios outside the bounds "
                                           f"[{row['chain_lower']:.4g}, {row['chain_upper']:.4g}]")
            res.check(0 < rep["lower"] <= rep["upper"] < math.inf, f"p={label}: constants not bounded")
        rep = dict(rep)
        rep.pop("rows")
        reports[label] = rep
    res.measured = {"n": n, "N": N, "collection_size": len(collection), "by_p": reports}
    return res


CRITERIA: dict[int, tuple[str, Callable[[SuiteConfig], _Result], float]] = {
    1: ("dual-lattice exactness scan", criterion_1, 30),
    2: ("cubature identity", criterion_2, 60),
    3: ("discretized convolution", criterion_3, 120),
    4: ("tensor de la Vallee Poussin bound", criterion_4, 120),
    5: ("hyperbolic-cross operator growth", criterion_5, 300),
    6: ("increment operator growth", criterion_6, 180),
    7: ("Fibonacci sums", criterion_7, 180),
    8: ("kernel identities", criterion_8, 30),
    9: ("Korobov search", criterion_9, 120),
    10: ("universal discretization", criterion_10, 300),
}


def run_criterion(cid: int, cfg: SuiteConfig) -> dict:
    name, func, budget = CRITERIA[cid]
    start = time.perf_counter()
    try:
        res = func(cfg)
    except Exception as exc:  # a crashing criterion is a failed criterion
        res = _Result(False, {}, [f"{type(exc).__name__}: {exc}"])
    elapsed = time.perf_counter() - start
    within = elapsed <= budget
    return {
        "id": cid,
        "name": name,
        "passed": res.passed and within,
        "measured": _jsonable(res.measured),
        "failures": res.failures + ([] if within else [f"runtime {elapsed:.1f}s > budget {budget}s"]),
        "timing": {"seconds": elapsed, "budget": budget},
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return "inf" if math.isinf(v) else v
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def run_suite(config: SuiteConfig | dict | None = None) -> tuple[dict, int]:
    """Run the selected criteria; returns ``(report, exit_code)``.

    Exit code 0 iff every criterion passed, 1 on any failure and 2 for an
    invalid configuration.
    """
    try:
        cfg = config if isinstance(config, SuiteConfig) else SuiteConfig.from_dict(config or {})
        cfg.validate()
    except (ConfigError, TypeError) as exc:
        return {"status": "invalid-config", "error": str(exc), "passed": False}, 2
    results = [run_criterion(cid, cfg) for cid in cfg.criteria]
    passed = all(r["passed"] for r in results)
    report = {
        "status": "pass" if passed else "fail",
        "passed": passed,
        "version": __version__,
        "rng": RNG_ALGORITHM,
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "criteria": results,
        "failing_cases": [{"id": r["id"], "failures": r["failures"]} for r in results if not r["passed"]],
    }
    if cfg.output:
        Path(cfg.output).write_text(json.dumps(report, indent=2))
    return report, 0 if passed else 1


def report_numeric_fields(report: dict) -> list:
    """The measured values of a report, without timings, for determinism audits."""
    return [(r["id"], r["measured"]) for r in report.get("criteria", [])]
