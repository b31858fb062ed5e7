"""Weighted minimum-contrast drift estimation for diagonal fractional SPDEs."""

from ._wmce import (
    Estimate,
    NumericError,
    Paths,
    SpectralModel,
    ValidationError,
    canonical_autocov,
    coordinate_autocov,
    heat_eigenvalues,
    heat_model,
    normalize_config,
    predicted_alpha_var_discrete,
    predicted_var_yn_discrete,
    run_experiment,
    sample_paths,
    two_term_drift,
    unweighted_mce,
    wmce_continuous,
    wmce_discrete,
)

__all__ = [
    "Estimate",
    "NumericError",
    "Paths",
    "SpectralModel",
    "ValidationError",
    "canonical_autocov",
    "coordinate_autocov",
    "heat_eigenvalues",
    "heat_model",
    "normalize_config",
    "predicted_alpha_var_discrete",
    "predicted_var_yn_discrete",
    "run_experiment",
    "sample_paths",
    "two_term_drift",
    "unweighted_mce",
    "wmce_continuous",
    "wmce_discrete",
]
