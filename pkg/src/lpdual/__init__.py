"""Period function and solution classification for the planar isotropic L_p dual Minkowski problem."""

from .branches import SolutionBranch, admissible_m, enumerate_branches, find_root, monotone_class
from .classify import ClassificationReport, Qualifier, classify_embedded, classify_immersed
from .period import ExponentPair, PeriodValue, QuadratureConfig, theta, theta_value, xi
from .reconstruct import SupportProfile, assemble_closed, integrate_arc, support_to_curve

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "ExponentPair",
    "PeriodValue",
    "Qualifier",
    "QuadratureConfig",
    "SolutionBranch",
    "SupportProfile",
    "admissible_m",
    "assemble_closed",
    "classify_embedded",
    "classify_immersed",
    "enumerate_branches",
    "find_root",
    "integrate_arc",
    "monotone_class",
    "support_to_curve",
    "theta",
    "theta_value",
    "xi",
]
