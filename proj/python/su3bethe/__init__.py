"""Scalar products, norms and form factors in SU(3)-invariant integrable models.

Thin re-export of the compiled extension. Exact rationals cross the boundary
as "p/q" strings; complex numbers map to Python complex.
"""

from ._core import (
    NoConvergenceError,
    PoleError,
    SingularError,
    Su3BetheError,
    dwpf,
    dwpf_exact,
    eval_kernel,
    eval_kernel_exact,
    form_factor_e22,
    highest_coeff,
    highest_coeff_exact,
    norm_det,
    norm_det_exact,
    rtt_defect,
    run_suite,
    scalar_product,
    scalar_product_exact,
    sector_spectrum,
    solve_bethe,
    suite_names,
    transfer_eigenvalue,
)

__all__ = [
    "NoConvergenceError",
    "PoleError",
    "SingularError",
    "Su3BetheError",
    "dwpf",
    "dwpf_exact",
    "eval_kernel",
    "eval_kernel_exact",
    "form_factor_e22",
    "highest_coeff",
    "highest_coeff_exact",
    "norm_det",
    "norm_det_exact",
    "rtt_defect",
    "run_suite",
    "scalar_product",
    "scalar_product_exact",
    "sector_spectrum",
    "solve_bethe",
    "suite_names",
    "transfer_eigenvalue",
]
