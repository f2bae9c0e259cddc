"""Exact toric and torus-quotient computations: GIT chambers of torus actions,
fans and Cox presentations, weighted blow ups and normal forms."""

from .exact import Cone, cone_intersect, feasible, hermite_normal_form, integer_kernel
from .fan import CoxPresentation, Fan, cox_of_fan, fan_of_cox
from .torus import TorusAction, OrbitClass, nonqp_certificate, separated_pairs

__all__ = [
    "Cone", "cone_intersect", "feasible", "hermite_normal_form", "integer_kernel",
    "CoxPresentation", "Fan", "cox_of_fan", "fan_of_cox",
    "TorusAction", "OrbitClass", "nonqp_certificate", "separated_pairs",
]
__version__ = "0.1.0"
