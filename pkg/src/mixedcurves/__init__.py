"""Mixed polar weighted homogeneous polynomials, their projective curves and invariants."""

from .families import FamilyKind, FamilyParams
from .invariants import InvariantReport, invariant_report, plan_embedding
from .mixed import MixedPolynomial, canonicalize, evaluate
from .verify import VerifyConfig, VerifyOutcome
from .weights import WeightSystem, check_weights, infer_weights

__all__ = [
    "FamilyKind", "FamilyParams", "InvariantReport", "MixedPolynomial", "VerifyConfig",
    "VerifyOutcome", "WeightSystem", "canonicalize", "check_weights", "evaluate",
    "infer_weights", "invariant_report", "plan_embedding",
]
