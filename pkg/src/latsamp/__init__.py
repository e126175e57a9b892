"""Lattice sampling, discretization and hyperbolic-cross kernels on the torus."""

__version__ = "0.1.0"

from .freqsets import (
    FreqSet,
    build_dyadic_block,
    build_hyperbolic_cross,
    build_rectangle,
    build_step_hyperbolic_cross,
    difference_set,
    explicit_set,
)
from .trigpoly import TrigPoly, evaluate, lp_norm, random_poly
from .kernels import (
    KernelId,
    block_A,
    build_kernel,
    delta_hc_vp,
    dirichlet,
    fejer,
    hc_vallee_poussin,
    vallee_poussin,
)
from .lattices import (
    DualLattice,
    FibonacciGenerator,
    KorobovGenerator,
    PointSet,
    fibonacci_points,
    korobov_points,
    korobov_search,
    max_exact_cross,
    min_product,
)
from .discretize import (
    ShiftOperator,
    apply_shift,
    cubature,
    discretized_convolution,
    op_norm,
    universal_check,
)

__all__ = [
    "__version__",
    "FreqSet", "build_rectangle", "build_hyperbolic_cross", "build_dyadic_block",
    "build_step_hyperbolic_cross", "explicit_set", "difference_set",
    "TrigPoly", "evaluate", "lp_norm", "random_poly",
    "KernelId", "build_kernel", "dirichlet", "fejer", "vallee_poussin", "block_A",
    "hc_vallee_poussin", "delta_hc_vp",
    "DualLattice", "PointSet", "FibonacciGenerator", "KorobovGenerator",
    "fibonacci_points", "korobov_points", "korobov_search", "min_product", "max_exact_cross",
    "ShiftOperator", "apply_shift", "cubature", "discretized_convolution", "op_norm",
    "universal_check",
]
