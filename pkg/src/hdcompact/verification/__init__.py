"""Numerical certification: axioms D1-D4, Haar exponent, bracket filtration."""

from .axioms import (
    b_transitivity_rank,
    b_transitivity_report,
    bracket_filtration_check,
    bracket_report,
    bracket_violations,
    curve_limit_report,
    inversion_diffeo_check,
    inversion_discrepancy,
    isotropy_vanishing_check,
    left_flag_velocity,
    minimality_probe,
    minimality_report,
    near_boundary_point,
    vanishing_exponent_table,
)
from .haar import haar_exponent_fit, haar_report, log_haar_density
from .reports import AxiomReport, SlopeFit, fit_slope

__all__ = [
    "AxiomReport",
    "SlopeFit",
    "fit_slope",
    "haar_exponent_fit",
    "haar_report",
    "log_haar_density",
    "inversion_diffeo_check",
    "inversion_discrepancy",
    "isotropy_vanishing_check",
    "left_flag_velocity",
    "vanishing_exponent_table",
    "b_transitivity_rank",
    "b_transitivity_report",
    "near_boundary_point",
    "minimality_probe",
    "minimality_report",
    "bracket_filtration_check",
    "bracket_violations",
    "bracket_report",
    "curve_limit_report",
]
