"""Instruction-level energy models.

JSON schema::

    {"model_name": "toy", "unit": "nJ",
     "instructions": {"add/3": {"lower": 2, "upper": 2},
                      "mul/3": {"cost": 5}}}

Keys of ``instructions`` are ``name/arity``.  Costs are non-negative
numbers (or ``"p/q"`` strings) read as exact rationals.  ``{"cost": c}`` is
shorthand for ``lower == upper == c``.  Builtins (``is/2``, ``=</2``, ...)
cost 0 unless the model lists them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .hcir.terms import Builtin, Call, split_key

TOP_KEYS = {"model_name", "unit", "instructions"}
BOUND_KEYS = {"lower", "upper"}


class ModelError(ValueError):
    pass


class MissingCost(KeyError):
    """A leaf call has no entry in the energy model."""


@dataclass(frozen=True)
class EnergyModel:
    model_name: str
    unit: str
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))
        for key, (lo, hi) in self.entries.items():
            if lo < 0 or hi < 0:
                raise ModelError(f"{key}: negative cost")
            if lo > hi:
                raise ModelError(f"{key}: lower cost {lo} exceeds upper cost {hi}")

    def __hash__(self):
        return hash((self.model_name, self.unit, tuple(sorted(self.entries))))

    def __contains__(self, key):
        return key in self.entries

    def cost(self, key: str, bound: str = "upper") -> Fraction:
        if bound not in BOUND_KEYS:
            raise ValueError("bound must be 'lower' or 'upper'")
        lo, hi = self.entries[key]
        return lo if bound == "lower" else hi


def _number(key, what, v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, float, Fraction, str)):
        raise ModelError(f"{key}: {what} must be a number")
    try:
        x = Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"{key}: bad {what} {v!r}") from exc
    if x < 0:
        raise ModelError(f"{key}: negative cost")
    return x


def model_from_dict(doc) -> EnergyModel:
    if not isinstance(doc, dict):
        raise ModelError("model must be a JSON object")
    extra = set(doc) - TOP_KEYS
    if extra:
        raise ModelError(f"unknown top-level keys: {', '.join(sorted(extra))}")
    if "unit" not in doc:
        raise ModelError("missing 'unit'")
    if "instructions" not in doc:
        raise ModelError("missing 'instructions'")
    unit = doc["unit"]
    name = doc.get("model_name", "")
    if not isinstance(unit, str) or not isinstance(name, str):
        raise ModelError("'model_name' and 'unit' must be strings")
    instrs = doc["instructions"]
    if not isinstance(instrs, dict):
        raise ModelError("'instructions' must be an object")
    entries = {}
    for key, spec in instrs.items():
        try:
            split_key(key)
        except ValueError as exc:
            raise ModelError(f"instruction key {key!r} is not name/arity") from exc
        if not isinstance(spec, dict):
            raise ModelError(f"{key}: entry must be an object")
        if set(spec) == {"cost"}:
            c = _number(key, "cost", spec["cost"])
            entries[key] = (c, c)
        elif set(spec) == BOUND_KEYS:
            entries[key] = (_number(key, "lower", spec["lower"]),
                            _number(key, "upper", spec["upper"]))
        else:
            raise ModelError(f"{key}: entry needs 'lower' and 'upper', or 'cost' alone")
    return EnergyModel(name, unit, entries)


def load_model(text: str) -> EnergyModel:
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ModelError(f"model is not valid JSON: {exc}") from exc
    return model_from_dict(doc)


def _json_number(x: Fraction):
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def serialize_model(m: EnergyModel) -> str:
    doc = {
        "model_name": m.model_name,
        "unit": m.unit,
        "instructions": {k: {"lower": _json_number(lo), "upper": _json_number(hi)}
                         for k, (lo, hi) in sorted(m.entries.items())},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def lookup(m: EnergyModel, lit, bound: str = "upper") -> Fraction:
    """Cost of one literal at the requested endpoint."""
    if bound not in BOUND_KEYS:
        raise ValueError("bound must be 'lower' or 'upper'")
    key = lit if isinstance(lit, str) else lit.key
    if key in m.entries:
        return m.cost(key, bound)
    if isinstance(lit, Builtin):
        return Fraction(0)
    if isinstance(lit, Call) or isinstance(lit, str):
        raise MissingCost(key)
    raise TypeError(f"cannot price {lit!r}")
