"""Exact computations with quadratic quiver algebras, their universal flat
deformations, localization algebras and the arrangements they define."""

from .linalg import RationalMatrix, Subspace
from .quiver import Arrow, Quiver, QuadraticPresentation, quadratic_dual, opposite
from .algebra import GradedAlgebra, build_graded_algebra, CapExceeded
from .highest_weight import OrderedPresentation, koszul_certificate
from .deformation import universal_deformation, build_deformed_algebra
from .localization import localization_algebra, koszul_duality, diagnostics
from .arrangements import FiberedArrangement, LocalizationAlgebra, check_duality
from .polarized import PolarizedArrangement, enumerate_chambers, gale_dual
from .blocks import BlockPair, Composition, index_set

__version__ = "0.1.0"

__all__ = [
    "RationalMatrix", "Subspace", "Arrow", "Quiver", "QuadraticPresentation", "quadratic_dual", "opposite",
    "GradedAlgebra", "build_graded_algebra", "CapExceeded", "OrderedPresentation", "koszul_certificate",
    "universal_deformation", "build_deformed_algebra", "localization_algebra", "koszul_duality", "diagnostics",
    "FiberedArrangement", "LocalizationAlgebra", "check_duality", "PolarizedArrangement", "enumerate_chambers",
    "gale_dual", "BlockPair", "Composition", "index_set",
]
