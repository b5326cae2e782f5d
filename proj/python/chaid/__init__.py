"""CHAID classification trees (C++ core)."""

from ._chaid import (
    ChaidError,
    ChiSquareResult,
    ClassDistribution,
    GrowthParams,
    Scale,
    Tree,
    __version__,
    bin_numeric,
    bonferroni_multiplier,
    chi_square_p_value,
    chi_square_test,
    train,
)

__all__ = [
    "ChaidError",
    "ChiSquareResult",
    "ClassDistribution",
    "GrowthParams",
    "Scale",
    "Tree",
    "__version__",
    "bin_numeric",
    "bonferroni_multiplier",
    "chi_square_p_value",
    "chi_square_test",
    "train",
]
