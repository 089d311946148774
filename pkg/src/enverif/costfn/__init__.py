"""Symbolic bound functions: expressions, exact evaluation, normal forms."""
from .expr import (Add, ArrayMax, ArrayMin, Const, Div, Expr, Inf, Log, Mul, NEG_INF,
                   POS_INF, Power, Prod, Sub, Sum, Var, as_expr, free_vars, render,
                   rename, subst)
from .evaluate import (DomainError, Enclosure, EvalError, Indeterminate, UnboundVariable,
                       evaluate, evaluate_number, ln_enclosure, sign_of)
from .poly import (BoundFn, DisjointDomains, DomainSet, FunctionClass, IntervalFn, Poly,
                   classify, normalize, subtract, to_poly)
from .taylor import DEFAULT_ORDER, factorial, taylor_exp, taylor_expand

__all__ = [
    "Add", "ArrayMax", "ArrayMin", "Const", "Div", "Expr", "Inf", "Log", "Mul", "NEG_INF",
    "POS_INF", "Power", "Prod", "Sub", "Sum", "Var", "as_expr", "free_vars", "render",
    "rename", "subst", "DomainError", "Enclosure", "EvalError", "Indeterminate",
    "UnboundVariable", "evaluate", "evaluate_number", "ln_enclosure", "sign_of", "BoundFn",
    "DisjointDomains", "DomainSet", "FunctionClass", "IntervalFn", "Poly", "classify",
    "normalize", "subtract", "to_poly", "DEFAULT_ORDER", "factorial", "taylor_exp",
    "taylor_expand",
]
