"""On-line conformal predictors for linear regression."""

import math

from ._core import (
    DataError,
    Error,
    Forecast,
    Interval,
    NumericalError,
    Predictor,
    Region,
    UsageError,
    binomial_band,
    coefficients,
    generate,
    independence_test,
    read_stream,
    run_online,
    t_cdf,
    t_sf,
    t_upper_point,
    uniformity_test,
    write_stream,
)


def first_bounded_step(result, epsilon):
    """Smallest 1-based step with a finite interval length, or None."""
    return _first_finite(result, "length", epsilon)


def first_finite_median_step(result, epsilon):
    """Smallest 1-based step with a finite median length, or None."""
    return _first_finite(result, "median", epsilon)


def _first_finite(result, column, epsilon):
    j = result["epsilons"].index(epsilon)
    for n, v in enumerate(result[column][:, j], start=1):
        if math.isfinite(v):
            return n
    return None


__all__ = [
    "DataError",
    "Error",
    "Forecast",
    "Interval",
    "NumericalError",
    "Predictor",
    "Region",
    "UsageError",
    "binomial_band",
    "coefficients",
    "first_bounded_step",
    "first_finite_median_step",
    "generate",
    "independence_test",
    "read_stream",
    "run_online",
    "t_cdf",
    "t_sf",
    "t_upper_point",
    "uniformity_test",
    "write_stream",
]
