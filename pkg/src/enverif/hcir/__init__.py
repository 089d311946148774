"""Horn-clause intermediate representation: data model, parser, printer."""
from .graph import SCC, Diagnostic, call_graph, call_graph_sccs, validate
from .interp import ExecutionError, Interpreter, measure
from .parser import HCParseError, parse_clause, parse_program, parse_term, tokenize
from .printer import clause_text, literal_text, print_program, term_text
from .terms import (BUILTINS, COMPARISONS, Builtin, Call, Clause, Int, Literal,
                    Program, Struct, Term, Var, cons, is_cons, is_ground, is_nil,
                    make_list, nil, pred_key, split_key, term_vars)

__all__ = [
    "SCC", "Diagnostic", "call_graph", "call_graph_sccs", "validate",
    "ExecutionError", "Interpreter", "measure",
    "HCParseError", "parse_clause", "parse_program", "parse_term", "tokenize",
    "clause_text", "literal_text", "print_program", "term_text",
    "BUILTINS", "COMPARISONS", "Builtin", "Call", "Clause", "Int", "Literal",
    "Program", "Struct", "Term", "Var", "cons", "is_cons", "is_ground", "is_nil",
    "make_list", "nil", "pred_key", "split_key", "term_vars",
]
