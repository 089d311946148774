"""Call graph, strongly connected components and program validation."""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .terms import Call, Program, Var, split_key


@dataclass(frozen=True)
class SCC:
    preds: tuple
    recursive: bool

    def __contains__(self, key):
        return key in self.preds


def call_graph(p: Program) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(p.predicates)
    for key, clauses in p.predicates.items():
        for c in clauses:
            for lit in c.calls():
                if p.defines(lit.key):
                    g.add_edge(key, lit.key)
    return g


def call_graph_sccs(p: Program):
    """SCCs of the defined predicates, callees before callers."""
    g = call_graph(p)
    cond = nx.condensation(g)
    members = nx.get_node_attributes(cond, "members")
    order = list(nx.lexicographical_topological_sort(
        cond, key=lambda n: min(members[n])))
    out = []
    for n in reversed(order):
        preds = tuple(sorted(members[n]))
        recursive = len(preds) > 1 or g.has_edge(preds[0], preds[0])
        out.append(SCC(preds, recursive))
    return out


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    pos: tuple | None = None

    def __str__(self):
        where = f"{self.pos[0]}:{self.pos[1]}: " if self.pos else ""
        return f"{where}{self.message}"


def validate(p: Program, model=None):
    """Undefined call targets, arity mismatches and repeated head variables."""
    known = set(p.predicates)
    if model is not None:
        known |= set(model.entries)
    names = {}
    for key in known:
        name, arity = split_key(key)
        names.setdefault(name, set()).add(arity)
    out = []
    for key in p.entries:
        if key not in known:
            out.append(Diagnostic("undefined-entry", f"entry {key} is not defined"))
    for c in p.all_clauses():
        seen = set()
        # a repeated variable next to structured arguments is ordinary
        # unification (append([],S,S)); block heads are variables only
        block_head = all(isinstance(t, Var) for t in c.params)
        for t in c.params if block_head else ():
            if isinstance(t, Var) and t.name != "_":
                if t.name in seen:
                    out.append(Diagnostic(
                        "repeated-parameter",
                        f"head of {c.key} repeats parameter {t.name}", c.pos))
                seen.add(t.name)
        for lit in c.body:
            if not isinstance(lit, Call) or lit.key in known:
                continue
            other = names.get(lit.name)
            if other:
                arities = ", ".join(f"{lit.name}/{a}" for a in sorted(other))
                out.append(Diagnostic(
                    "arity-mismatch",
                    f"call to {lit.key} but only {arities} is defined", lit.pos))
            else:
                out.append(Diagnostic(
                    "undefined", f"call to undefined predicate {lit.key}", lit.pos))
    return out
