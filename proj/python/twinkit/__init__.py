"""Statistically similar data splits, subsamples and cross-validation folds."""

from ._core import (
    DataError,
    IoError,
    UsageError,
    energy_between,
    energy_full,
    energy_plot_metric,
    generate_mvn,
    generate_parabola,
    load_csv,
    multiplets,
    standardize,
    twin,
    twin_compress,
    verify_proposition1,
)

__all__ = [
    "DataError",
    "IoError",
    "UsageError",
    "energy_between",
    "energy_full",
    "energy_plot_metric",
    "generate_mvn",
    "generate_parabola",
    "load_csv",
    "multiplets",
    "standardize",
    "twin",
    "twin_compress",
    "verify_proposition1",
]
