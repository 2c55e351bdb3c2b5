"""Slice language, evaluation of ribbon and bichrome graphs, and surgery invariants."""
from .engine import DEFAULT_CAP, SizeCapError, StateBatch
from .evaluate import CouponRegistry, EvaluationError, evaluate_bichrome, evaluate_rt, renorm_eval
from .parser import TangleAST, TangleError, TangleSyntaxError, TangleTypeError, parse_tangle
from .surgery import SurgeryError, SurgeryPresentation, linking_signature, parse_surgery, surgery_invariant

__all__ = [
    "DEFAULT_CAP",
    "SizeCapError",
    "StateBatch",
    "CouponRegistry",
    "EvaluationError",
    "evaluate_bichrome",
    "evaluate_rt",
    "renorm_eval",
    "TangleAST",
    "TangleError",
    "TangleSyntaxError",
    "TangleTypeError",
    "parse_tangle",
    "SurgeryError",
    "SurgeryPresentation",
    "linking_signature",
    "parse_surgery",
    "surgery_invariant",
]
