"""Optimal-dimensionality sphere sampling and fast spherical harmonic transforms."""

from .blocks import (
    CoefficientSlice,
    GVector,
    LegendreBlock,
    block_for_thetas,
    build_block,
    condition_number,
    solve,
)
from .legendre import (
    LegendreColumn,
    SpinColumn,
    legendre_column,
    legendre_direct,
    legendre_table,
    spin_column,
    spin_direct,
    spin_table,
    wigner_d_direct,
)
from .reference import dense_lsq_analysis, direct_synthesis, synthesis_matrix
from .sampling import (
    ColatitudeGrid,
    Measure,
    Ordering,
    RingLongitudes,
    candidates,
    equiangular_candidates,
    interleaved_order,
    load_grid,
    make_grid,
    measure_candidates,
    optimize_order,
    ring_longitudes,
    save_grid,
)
from .transform import (
    HarmonicCoefficients,
    SpatialSamples,
    TransformStats,
    forward_sht,
    inverse_sht,
    ring_analysis,
    spin_forward_sht,
    spin_inverse_sht,
)

__all__ = [
    "CoefficientSlice",
    "ColatitudeGrid",
    "GVector",
    "HarmonicCoefficients",
    "LegendreBlock",
    "LegendreColumn",
    "Measure",
    "Ordering",
    "RingLongitudes",
    "SpatialSamples",
    "SpinColumn",
    "TransformStats",
    "block_for_thetas",
    "build_block",
    "candidates",
    "condition_number",
    "dense_lsq_analysis",
    "direct_synthesis",
    "equiangular_candidates",
    "forward_sht",
    "interleaved_order",
    "inverse_sht",
    "legendre_column",
    "legendre_direct",
    "legendre_table",
    "load_grid",
    "make_grid",
    "measure_candidates",
    "optimize_order",
    "ring_analysis",
    "ring_longitudes",
    "save_grid",
    "solve",
    "spin_column",
    "spin_direct",
    "spin_forward_sht",
    "spin_inverse_sht",
    "spin_table",
    "synthesis_matrix",
    "wigner_d_direct",
]

__version__ = "0.1.0"
