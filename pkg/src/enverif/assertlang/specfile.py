"""Spec files: ``#pragma`` assertions (and ``:- pred`` resource assertions)
mixed with arbitrary other lines.

An assertion starts on a line beginning with ``#pragma`` or ``:-`` and
continues over the following non-blank lines that are indented or that
follow a line ending in a backslash.  All other lines are kept verbatim so
an annotated copy of the file can be written back.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SpecItem:
    """One assertion in a spec file: its kind (``pragma`` or ``pred``), the
    joined text, and the 1-based line range it occupied."""

    kind: str
    text: str
    first_line: int
    last_line: int


@dataclass(frozen=True)
class SpecFile:
    path: str
    lines: tuple
    items: tuple


def _starts_item(line):
    s = line.lstrip()
    if line[:1].isspace():
        return None
    if s.startswith("#pragma"):
        return "pragma"
    if s.startswith(":-"):
        return "pred"
    return None


def read_spec(text: str, path: str = "<spec>") -> SpecFile:
    lines = text.splitlines()
    items = []
    i = 0
    while i < len(lines):
        kind = _starts_item(lines[i])
        if kind is None:
            i += 1
            continue
        start = i
        parts = [lines[i].rstrip()]
        i += 1
        while i < len(lines):
            prev = parts[-1]
            nxt = lines[i]
            if prev.endswith("\\") or (nxt.strip() and nxt[:1].isspace()):
                parts[-1] = prev.rstrip("\\").rstrip()
                parts.append(nxt.strip())
                i += 1
            else:
                break
        parts[-1] = parts[-1].rstrip("\\").rstrip()
        items.append(SpecItem(kind, " ".join(p for p in parts if p), start + 1, i))
    return SpecFile(path, tuple(lines), tuple(items))
