"""Exact para-quaternionic linear algebra, the graded algebra sl(2+n) with its
twistor structures and harmonic curvature, and a binary64 Nijenhuis checker."""

from . import kostant, parabolic, paraquat, pq_linear, rational, type_decomp
from .kostant import kostant_harmonics, no_invisible_torsion, phi_counterexample
from .parabolic import (
    J_eps,
    build_algebra,
    invariance_check,
    invariant_complement,
    invariant_structure_space,
    kerJ0_projects_to_V,
    nijenhuis_identities,
    p_action_on_qstd,
    scaling_element,
    stabilizer_on_D,
    subalgebras,
)
from .paraquat import ParaQuaternion
from .pq_linear import EpsilonStructure, make_structure
from .type_decomp import BilinearMap

__version__ = "0.1.0"

__all__ = [
    "kostant",
    "parabolic",
    "paraquat",
    "pq_linear",
    "rational",
    "type_decomp",
    "ParaQuaternion",
    "EpsilonStructure",
    "BilinearMap",
    "make_structure",
    "build_algebra",
    "subalgebras",
    "p_action_on_qstd",
    "J_eps",
    "invariance_check",
    "invariant_structure_space",
    "nijenhuis_identities",
    "invariant_complement",
    "kerJ0_projects_to_V",
    "stabilizer_on_D",
    "scaling_element",
    "kostant_harmonics",
    "phi_counterexample",
    "no_invisible_torsion",
]
