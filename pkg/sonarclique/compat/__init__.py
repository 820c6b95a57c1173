from .coplanarity import (
    AffineMap2D,
    BaryCoeffs,
    CoplanarityVerdict,
    RApprox,
    bary_coeffs,
    build_hypergraph,
    chi2_threshold,
    coplanarity_statistic,
    coplanarity_test,
    fit_affine,
    r_approx,
    residual_and_variance,
)
from .graphs import CompatibilityGraph, Hypergraph4
from .in_range import (
    FeasibleInterval,
    build_pairwise_graph,
    in_range_test,
    length_bounds_noiseless,
    length_bounds_noisy,
)
from .segments import Segment2D, segment_max_distance, segment_min_distance

__all__ = [
    "AffineMap2D",
    "BaryCoeffs",
    "CompatibilityGraph",
    "CoplanarityVerdict",
    "FeasibleInterval",
    "Hypergraph4",
    "RApprox",
    "Segment2D",
    "bary_coeffs",
    "build_hypergraph",
    "build_pairwise_graph",
    "chi2_threshold",
    "coplanarity_statistic",
    "coplanarity_test",
    "fit_affine",
    "in_range_test",
    "length_bounds_noiseless",
    "length_bounds_noisy",
    "r_approx",
    "residual_and_variance",
    "segment_max_distance",
    "segment_min_distance",
]
