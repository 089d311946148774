"""Energy assertion language: pragmas, internal assertions, spec files."""
from .internal import (InternalAssertion, TranslationError, domain_precond,
                       from_internal, parse_internal, print_internal, to_internal)
from .specfile import SpecFile, SpecItem, read_spec
from .syntax import (ENERGY, CostBounds, Precond, PragmaSyntaxError, Status,
                     XCAssertion, parse_expr, parse_pragma, print_pragma)

__all__ = [
    "InternalAssertion", "TranslationError", "domain_precond", "from_internal",
    "parse_internal", "print_internal", "to_internal", "SpecFile", "SpecItem",
    "read_spec", "ENERGY", "CostBounds", "Precond", "PragmaSyntaxError", "Status",
    "XCAssertion", "parse_expr", "parse_pragma", "print_pragma",
]
