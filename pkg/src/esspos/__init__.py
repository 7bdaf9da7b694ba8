"""Numerical essential-positivity toolkit.

A self-adjoint operator is essentially positive when its essential spectrum
sits in ``[0, inf)``, equivalently when some compact perturbation makes it
positive.  This package computes the objects that make that notion concrete
at desk scale: eigenvalue sequences of radial Bergman-space Toeplitz
operators, Berezin transforms with certified tail bounds, Carleson-measure
tests, Hardy-symbol essential ranges, finite-section probes, and a small
description grammar with a deterministic report emitter on top.
"""

__version__ = "0.1.0"

from .berezin import (
    BerezinProfile,
    BoundaryLimit,
    DifferenceCoefficients,
    a_n_integral_form,
    abel_mean,
    berezin_disk_quadrature,
    berezin_liminf_estimate,
    berezin_profile_quadrature,
    berezin_profile_series,
    berezin_series,
    boundary_limit,
    cesaro_means,
    classify_radial,
    difference_coeffs,
)
from .carleson import (
    CarlesonReport,
    WeightedImplicationReport,
    annulus_mass,
    carleson_report,
    moment_ratio_sup,
    paper_criterion_sup,
    weight_norm,
    weighted_implication_check,
)
from .classify import Classification, Verdict, classify_diagonal, window_schedule
from .config import ToleranceConfig, load_config
from .errors import (
    CarlesonHypothesisError,
    ConsistencyError,
    EssposError,
    QuadratureError,
    SeriesTailError,
    SymbolParseError,
)
from .hardy import (
    CircleSymbol,
    EssentialRangeEstimate,
    HullCheckReport,
    classify_hardy,
    essential_range_bounds,
    hull_cross_check,
    toeplitz_truncation,
)
from .radial import (
    DiskMoment,
    RadialProfileMeasure,
    disk_moment,
    disk_to_profile,
    eigenvalue_sequence,
    lacunary_operator,
    moment,
    zhao_zheng_symbol,
)
from .sequences import (
    DEFAULT_EPS,
    EigenvalueSequence,
    LacunaryGenerator,
    PerturbedGenerator,
    PolyAtomGenerator,
    SequenceGenerator,
    boundedness_check,
    constant_sequence,
    explicit_sequence,
    split_positive_compact,
    tail_infimum,
)
from .symbolspec import SymbolSpec, parse_symbol, render_symbol
from .truncation import (
    FiniteRankPerturbation,
    HermitianTruncation,
    NegativeCountProfile,
    apply_finite_rank,
    basis_weyl_probe,
    hermitian_eigensystem,
    negative_count_profile,
)

__all__ = [
    "BerezinProfile",
    "BoundaryLimit",
    "CarlesonHypothesisError",
    "CarlesonReport",
    "CircleSymbol",
    "Classification",
    "ConsistencyError",
    "DEFAULT_EPS",
    "DifferenceCoefficients",
    "DiskMoment",
    "EigenvalueSequence",
    "EssentialRangeEstimate",
    "EssposError",
    "FiniteRankPerturbation",
    "HermitianTruncation",
    "HullCheckReport",
    "LacunaryGenerator",
    "NegativeCountProfile",
    "PerturbedGenerator",
    "PolyAtomGenerator",
    "QuadratureError",
    "RadialProfileMeasure",
    "SequenceGenerator",
    "SeriesTailError",
    "SymbolParseError",
    "SymbolSpec",
    "ToleranceConfig",
    "Verdict",
    "WeightedImplicationReport",
    "a_n_integral_form",
    "abel_mean",
    "annulus_mass",
    "apply_finite_rank",
    "basis_weyl_probe",
    "berezin_disk_quadrature",
    "berezin_liminf_estimate",
    "berezin_profile_quadrature",
    "berezin_profile_series",
    "berezin_series",
    "boundary_limit",
    "boundedness_check",
    "carleson_report",
    "cesaro_means",
    "classify_diagonal",
    "classify_hardy",
    "classify_radial",
    "constant_sequence",
    "difference_coeffs",
    "disk_moment",
    "disk_to_profile",
    "eigenvalue_sequence",
    "essential_range_bounds",
    "explicit_sequence",
    "hermitian_eigensystem",
    "hull_cross_check",
    "lacunary_operator",
    "load_config",
    "moment",
    "moment_ratio_sup",
    "negative_count_profile",
    "parse_symbol",
    "paper_criterion_sup",
    "render_symbol",
    "split_positive_compact",
    "tail_infimum",
    "toeplitz_truncation",
    "weight_norm",
    "weighted_implication_check",
    "window_schedule",
    "zhao_zheng_symbol",
]
