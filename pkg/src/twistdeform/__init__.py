"""Twist deformations of Poisson and symplectic structures under Lie group actions.

Exact structure-constant Lie algebras and exterior algebra, admissibility of
twisted complements, chart geometry on CP^n, deformed volumes on CP^1 and the
canonical r-matrix on complex Grassmannians.
"""

__version__ = "0.1.0"

from .lie import (  # noqa: E402
    LieAlgebra,
    LieAlgebraError,
    ValidationReport,
    basis_vector,
    bracket,
    build_abelian,
    build_su,
    build_torus,
    from_matrix_basis,
    validate,
    vector,
)
from .exterior import (  # noqa: E402
    Multivector,
    SubalgebraBasisSet,
    ad_derivation,
    decomposable_twist,
    is_r_matrix,
    quotient_project,
    schouten_square,
    twist,
    wedge,
)

__all__ = [
    "__version__",
    "LieAlgebra",
    "LieAlgebraError",
    "ValidationReport",
    "basis_vector",
    "bracket",
    "build_abelian",
    "build_su",
    "build_torus",
    "from_matrix_basis",
    "validate",
    "vector",
    "Multivector",
    "SubalgebraBasisSet",
    "ad_derivation",
    "decomposable_twist",
    "is_r_matrix",
    "quotient_project",
    "schouten_square",
    "twist",
    "wedge",
]
