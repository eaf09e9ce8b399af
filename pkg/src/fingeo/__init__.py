"""Finite-geometry toolkit.

Builds linear representations of point sets at infinity, the geometry
X(n, t, q) of skew subspaces, and its matrix coset model; realises the
explicit isomorphisms between them; and verifies automorphism-group order
identities by independent brute force at small parameters.
"""

from ._jit import JIT_ENABLED
from .errors import BudgetExceededError, FingeoError, VerificationError
from .fields import GF, CompanionAlgebra, FieldElement, parse_field_spec
from .incidence import Graph, IncidenceStructure
from .isomaps import GeometryMap
from .pointsets import PointSet
from .projgeom import ProjSpace, Subspace, gaussian_binomial

__version__ = "0.1.0"

__all__ = [
    "JIT_ENABLED",
    "FingeoError",
    "BudgetExceededError",
    "VerificationError",
    "GF",
    "FieldElement",
    "CompanionAlgebra",
    "parse_field_spec",
    "ProjSpace",
    "Subspace",
    "gaussian_binomial",
    "IncidenceStructure",
    "Graph",
    "PointSet",
    "GeometryMap",
    "__version__",
]
