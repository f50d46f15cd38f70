"""Capacity of one-bit transceiver arrays in Rayleigh fading."""

from ._core import (
    BoundaryError,
    ConvergenceError,
    FeasibilityError,
    capacity,
    capacity_complex,
    capacity_db,
    contour,
    contour_point,
    e_for_capacity,
    exact_capacity,
    fit_quadratic_e,
    high_snr_capacity,
    large_alpha_capacity,
    low_snr_capacity,
    output_distribution,
    quadratic_e,
    saturation_alpha,
    single_transceiver_capacity,
    small_alpha_capacity,
    snr_for_contour_approx,
    sweep,
)

__all__ = [
    "BoundaryError",
    "ConvergenceError",
    "FeasibilityError",
    "capacity",
    "capacity_complex",
    "capacity_db",
    "contour",
    "contour_point",
    "e_for_capacity",
    "exact_capacity",
    "fit_quadratic_e",
    "high_snr_capacity",
    "large_alpha_capacity",
    "low_snr_capacity",
    "output_distribution",
    "quadratic_e",
    "saturation_alpha",
    "single_transceiver_capacity",
    "small_alpha_capacity",
    "snr_for_contour_approx",
    "sweep",
]
