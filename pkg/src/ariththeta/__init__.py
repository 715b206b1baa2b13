"""Exact arithmetic toolkit for rank-1 and mixed theta-Eisenstein series over imaginary quadratic fields."""
from .symnum import SymNumber
from .cmfield import CMField, class_group
from .hlattice import HermitianLattice, SchwartzWeight, theta_qexp
from .lwhittaker import LocalSpace1, WhittakerPoly, whittaker_value0, whittaker_deriv0
from .series import QExpansion, GlobalSpaceData, verify_suite

__all__ = [
    "SymNumber", "CMField", "class_group", "HermitianLattice", "SchwartzWeight", "theta_qexp",
    "LocalSpace1", "WhittakerPoly", "whittaker_value0", "whittaker_deriv0",
    "QExpansion", "GlobalSpaceData", "verify_suite",
]

__version__ = "0.1.0"
