"""Size-relation and resource-bound inference over HC IR programs."""
from .engine import (ENERGY, STEPS, AnalysisResult, Analyzer, PredResult, analyze_program,
                     trivial)
from .recurrence import (Case, ClosedForm, Recurrence, Unsupported, solve_recurrence,
                         unroll, widen)
from .sizes import UNKNOWN, SizeBound

__all__ = [
    "ENERGY", "STEPS", "AnalysisResult", "Analyzer", "PredResult", "analyze_program",
    "trivial", "Case", "ClosedForm", "Recurrence", "Unsupported", "solve_recurrence",
    "unroll", "widen", "UNKNOWN", "SizeBound",
]
