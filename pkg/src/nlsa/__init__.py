"""Exact workbench for first-class n-Lie superalgebras.

Structure constants over the rationals, axiom verification, graded
representations, supercochain cohomology, abelian extensions, and
T*-extensions with the nilpotent reconstruction pipeline.
"""

from .algebra import (AxiomReport, NLieSuperalgebra, SeriesReport,
                      bracket_span, centralizer, direct_sum, ideal_centralizer,
                      is_abelian_ideal, is_graded_ideal, quotient, series)
from .cohomology import (Cochain, CohomologyDims, coboundary,
                         coboundary_matrix, cohomology_dims,
                         is_wedge_compatible, project_wedge,
                         wedge_cocycle_basis)
from .extensions import ExtensionData, build_extension, extract_cocycle
from .linalg import (GradedSubspace, GradedVectorSpace, intersect,
                     orthogonal_complement)
from .metric import (BilinearForm, MetricAlgebra, TStarExtension,
                     centralizer_duality, cyclic_cocycle_basis, extend_by_line,
                     form_properties, is_cyclic, isotropic_complement,
                     isotropic_ideal_abelian_check, maximal_isotropic_stable,
                     nilpotent_pipeline, reconstruct_tstar, tstar_equivalence,
                     tstar_extension, tstar_length_report)
from .representation import (Representation, adjoint, check_representation,
                             coadjoint, semidirect, trivial)
from .wedge import FundamentalObject, WedgeBasis, act, canonicalize_word, compose

__all__ = [
    "AxiomReport", "BilinearForm", "Cochain", "CohomologyDims",
    "ExtensionData", "FundamentalObject", "GradedSubspace",
    "GradedVectorSpace", "MetricAlgebra", "NLieSuperalgebra",
    "Representation", "SeriesReport", "TStarExtension", "WedgeBasis", "act",
    "adjoint", "bracket_span", "build_extension", "canonicalize_word",
    "centralizer", "centralizer_duality", "check_representation", "coadjoint",
    "coboundary", "coboundary_matrix", "cohomology_dims", "compose",
    "cyclic_cocycle_basis", "direct_sum", "extend_by_line", "extract_cocycle",
    "form_properties", "ideal_centralizer", "intersect", "is_abelian_ideal",
    "is_cyclic", "is_graded_ideal", "is_wedge_compatible",
    "isotropic_complement", "isotropic_ideal_abelian_check",
    "maximal_isotropic_stable", "nilpotent_pipeline", "orthogonal_complement",
    "project_wedge", "quotient", "reconstruct_tstar", "semidirect", "series",
    "trivial", "tstar_equivalence", "tstar_extension", "tstar_length_report",
    "wedge_cocycle_basis",
]
