"""Periodized Alber stability kernel and instability detection."""

from .detect import (ContourSpec, IndeterminateVerdict, default_xi_range,
                     detect_instability_contour, detect_instability_gridscan, image_curve,
                     refine_root, winding_number)
from .duhamel import reconstruct_r
from .kernel import (KernelDomainError, KernelParams, active_modes, h_delta_spectrum, h_infinity,
                     h_tilde_L, h_tilde_L_derivative, pole_frequencies, riemann_convergence_study,
                     to_kernel_coefficients)
from .oracle import block_eigenvalues, block_matrix, eigenvalue_oracle, required_truncation
from .verdict import StabilityVerdict, Witness

__all__ = [
    "ContourSpec", "IndeterminateVerdict", "KernelDomainError", "KernelParams",
    "StabilityVerdict", "Witness", "active_modes", "block_eigenvalues", "block_matrix",
    "default_xi_range", "detect_instability_contour",
    "detect_instability_gridscan", "eigenvalue_oracle", "h_delta_spectrum", "h_infinity",
    "h_tilde_L", "h_tilde_L_derivative", "image_curve", "pole_frequencies", "reconstruct_r",
    "refine_root", "required_truncation",
    "riemann_convergence_study", "to_kernel_coefficients", "winding_number",
]
