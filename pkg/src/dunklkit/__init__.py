"""Numerical toolkit for Dunkl analysis on Z2^d: kernel, intertwiner,
transform, translation and convolution, and hypoellipticity checks."""
from .foundation import GroupConfig, QuadRule, QuadratureError, mehta_constant, normalized_bessel, weight
from .functions import SampledFunction, gaussian, hermite_gaussian, make_function
from .kernel import KernelValue, kernel_1d, kernel_1d_integral, kernel_product, kernel_values
from .polyalg import MultiPoly, RationalK, dunkl_apply, dunkl_laplacian, parse_poly
from .intertwine import MomentTable, tvk_function_1d, vk_function, vk_inverse_poly, vk_poly, vk_transmutation_solver
from .transform import (
    TransformResult,
    dunkl_transform,
    inverse_dunkl_transform,
    plancherel_defect,
    radial_transform,
)
from .convolve import BumpFunction, approx_identity, dunkl_convolve, translate_1d, translate_radial
from .hypo import HReport, Symbol, check_growth, check_zero_growth, energy_bound_check, symbol_of, verdict

__version__ = "0.1.0"
