"""q-series invariants of plumbed three-manifolds: false-theta side, mock side,
Dehn surgery cross-checks and radial-limit diagnostics."""

from .engine import F_series, false_theta, p_polynomial, zhat_negative_definite, zhat_three_star
from .indefinite import IndefThetaSpec, mock_F0_reference, rho_regularizer, vartheta_indefinite, zhat_reversed
from .lattice import box_points, lattice_points
from .modular import (PeriodicSign, RadialReport, asymptotic_coeffs, false_mock_zero_report, radial_extrapolate,
                      wrt_radial, x_matrix)
from .plumbing import (PlumbingError, PlumbingGraph, SpincLabel, adjacency_matrix, inertia, parse_plumbing,
                       sigma237, spinc_labels, three_star_params)
from .series import QSeries, WLaurentQSeries, eta_series, format_series, series_invert
from .surgery import KnotSeries, SurgerySlope, alexander_boundary_check, figure_eight_FK, surgery_zhat

__all__ = [
    "F_series", "IndefThetaSpec", "KnotSeries", "PeriodicSign", "PlumbingError", "PlumbingGraph", "QSeries",
    "RadialReport", "SpincLabel", "SurgerySlope", "WLaurentQSeries", "adjacency_matrix", "alexander_boundary_check",
    "asymptotic_coeffs", "box_points", "eta_series", "false_mock_zero_report", "false_theta", "figure_eight_FK",
    "format_series", "inertia", "lattice_points", "mock_F0_reference", "p_polynomial", "parse_plumbing",
    "radial_extrapolate", "rho_regularizer", "series_invert", "sigma237", "spinc_labels", "surgery_zhat",
    "three_star_params", "vartheta_indefinite", "wrt_radial", "x_matrix", "zhat_negative_definite",
    "zhat_reversed", "zhat_three_star",
]
