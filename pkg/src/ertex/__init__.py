"""Exact formal calculus and embeddings of vertex algebras without vacuum."""

from .algebra_model import (Presentation, canonical_derivation, exp_D, mode_apply, validate,
                            vertex_series)
from .axiom_checker import (check_D_compat, check_injectivity, check_jacobi, check_skew_symmetry,
                            check_truncation, check_vacuum_creation, check_vfss, run_suite)
from .constructions import (ClosureTrace, Embedding, EmbeddingWitness, adjoin_vacuum, check_hom,
                            d_closure, embed, factor_through_closure, factor_through_embedding,
                            factor_through_vacuum, forget)
from .definition_file import (parse_map, parse_presentation, serialize_map,
                              serialize_presentation)
from .errors import ErtexError
from .fixtures import commutative_va, naive_truncated_va, strip_to_ertex, zero_algebra
from .formal_calculus import DegreeWindow, DeltaExpr, LaurentPoly
from .linear_space import LinearMap, VectorElem
from .report import Report, Violation

__version__ = "0.1.0"

__all__ = [
    "Presentation", "canonical_derivation", "exp_D", "mode_apply", "validate", "vertex_series",
    "check_D_compat", "check_injectivity", "check_jacobi", "check_skew_symmetry", "check_truncation",
    "check_vacuum_creation", "check_vfss", "run_suite",
    "ClosureTrace", "Embedding", "EmbeddingWitness", "adjoin_vacuum", "check_hom", "d_closure", "embed",
    "factor_through_closure", "factor_through_embedding", "factor_through_vacuum", "forget",
    "parse_map", "parse_presentation", "serialize_map", "serialize_presentation",
    "ErtexError", "commutative_va", "naive_truncated_va", "strip_to_ertex", "zero_algebra",
    "DegreeWindow", "DeltaExpr", "LaurentPoly", "LinearMap", "VectorElem", "Report", "Violation",
]
