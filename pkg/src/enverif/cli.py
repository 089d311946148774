"""Command-line driver.

Exit codes:

===  ==========================================================
0    every assertion is checked on its whole domain
1    some region is false
2    some region is still ``check`` (see ``--exit-on-check``)
3    usage error or unreadable input file; nothing is written
4    syntax error in the program, a spec or the signatures
5    invalid energy model
6    an assertion cannot be verified (unknown predicate, ...)
===  ==========================================================
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

from .assertlang import PragmaSyntaxError, Status, TranslationError
from .assertlang.specfile import read_spec
from .compare.partition import DEFAULT_SCAN_LIMIT
from .compare.roots import DEFAULT_MAX_DEGREE
from .costfn import render
from .costfn.taylor import DEFAULT_ORDER
from .costmodel import ModelError, load_model
from .hcir import HCParseError, parse_program, validate
from .sizedtypes import SignatureError, Signatures, parse_signatures
from .verifier import (Report, VerificationInputError, entries_from_spec, render_outcome,
                       verify_program)

EXIT_OK, EXIT_FALSE, EXIT_CHECK = 0, 1, 2
EXIT_USAGE, EXIT_PARSE, EXIT_MODEL, EXIT_INPUT = 3, 4, 5, 6
FORMATS = ("pragmas", "summary", "both")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    program: str
    model: str | None = None
    specs: list = field(default_factory=list)
    signatures: str | None = None
    out: str | None = None
    format: str = "pragmas"
    taylor_order: int = DEFAULT_ORDER
    max_degree: int = DEFAULT_MAX_DEGREE
    max_sample: int = DEFAULT_SCAN_LIMIT
    exit_on_check: int = EXIT_CHECK

    def __post_init__(self):
        if self.taylor_order < 1:
            raise UsageError("--taylor-order must be at least 1")
        if self.max_sample < 1:
            raise UsageError("--max-sample must be at least 1")
        if self.max_degree < 1:
            raise UsageError("--max-degree must be at least 1")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="enverif", description="Verify energy and step-count assertions "
                "of HC IR programs against statically inferred cost bounds.")
    p.add_argument("--program", required=True, help="HC IR program (.hcir)")
    p.add_argument("--model", help="energy model (JSON)")
    p.add_argument("--specs", action="append", default=[], metavar="FILE",
                   help="spec file with assertions; may be repeated")
    p.add_argument("--signatures", help="types and predicate signatures")
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--format", choices=FORMATS, default="pragmas")
    p.add_argument("--taylor-order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE,
                   help="highest polynomial degree solved in closed form")
    p.add_argument("--max-sample", type=int, default=DEFAULT_SCAN_LIMIT,
                   help="largest size range decided by exact scanning")
    p.add_argument("--exit-on-check", type=int, default=EXIT_CHECK, metavar="CODE",
                   help="exit code when some region remains unverified")
    return p


def config_from_args(argv) -> RunConfig:
    a = build_parser().parse_args(argv)
    return RunConfig(a.program, a.model, a.specs, a.signatures, a.out, a.format,
                     a.taylor_order, a.max_degree, a.max_sample, a.exit_on_check)


# ---------------------------------------------------------------------------
# rendering

def _comment(kind):
    return "//" if kind == "pragma" else "%"


def render_pragmas(report: Report, specs) -> str:
    """Spec files with every checked assertion replaced by its results."""
    by_item = {}
    for o, e in zip(report.outcomes, report.checked_entries):
        by_item[id(e.item)] = o
    chunks = []
    for spec in specs:
        out = []
        if len(specs) > 1:
            out.append(f"// file: {spec.path}")
        starts = {it.first_line: it for it in spec.items}
        skip_until = 0
        for no, line in enumerate(spec.lines, 1):
            if no <= skip_until:
                continue
            item = starts.get(no)
            if item is None or id(item) not in by_item:
                out.append(line)
                continue
            skip_until = item.last_line
            o = by_item[id(item)]
            out.extend(render_outcome(o))
            c = _comment(item.kind)
            if o.whole is Status.CHECK:
                out.append(f"{c} warning: could not prove or disprove this assertion")
            for d in o.diagnostics:
                out.append(f"{c} note: {d.message}")
        chunks.append("\n".join(out))
    text = "\n".join(chunks)
    return text + "\n" if text else ""


def _num(x):
    if x == math.inf:
        return None
    return int(x)


def summary(report: Report) -> dict:
    items = []
    for o, entry in zip(report.outcomes, report.checked_entries):
        ia = o.assertion
        items.append({
            "predicate": ia.key,
            "resource": ia.resource,
            "input_status": str(entry.assertion.status),
            "source_line": entry.item.first_line if entry.item is not None else None,
            "size_var": o.var,
            "inferred": None if o.inferred is None else {
                "lower": render(o.inferred.lower.expr),
                "upper": render(o.inferred.upper.expr)},
            "verdicts": [{"lo": _num(r.lo), "hi": _num(r.hi), "status": str(r.status)}
                         for r in o.verdicts],
            "output": render_outcome(o),
            "diagnostics": [d.message for d in o.diagnostics],
        })
    return {
        "all_verified": report.all_verified,
        "counts": report.counts(),
        "assertions": items,
        "diagnostics": [{"code": d.code, "message": str(d)} for d in report.diagnostics],
    }


def render_report(report: Report, specs, fmt: str = "pragmas") -> str:
    if fmt == "pragmas":
        return render_pragmas(report, specs)
    js = json.dumps(summary(report), indent=2, ensure_ascii=False) + "\n"
    if fmt == "summary":
        return js
    return render_pragmas(report, specs) + js


def exit_code(report: Report, on_check: int = EXIT_CHECK) -> int:
    if report.any_false:
        return EXIT_FALSE
    if report.any_check:
        return on_check
    return EXIT_OK


# ---------------------------------------------------------------------------

def _read(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path}: {exc.strerror}") from exc


def execute(cfg: RunConfig):
    """(report, output text) for a configuration; raises on input errors."""
    texts = {"program": _read(cfg.program, "program")}
    if cfg.model:
        texts["model"] = _read(cfg.model, "model")
    if cfg.signatures:
        texts["signatures"] = _read(cfg.signatures, "signatures")
    spec_texts = [(p, _read(p, "spec file")) for p in cfg.specs]
    program = parse_program(texts["program"])
    sigs = parse_signatures(texts["signatures"]) if cfg.signatures else Signatures()
    model = load_model(texts["model"]) if cfg.model else None
    specs = [read_spec(t, p) for p, t in spec_texts]
    entries = []
    for s in specs:
        entries += entries_from_spec(s, sigs)
    report = verify_program(program, sigs, model, entries, cfg.max_degree, cfg.max_sample,
                            cfg.taylor_order)
    for d in validate(program, model):
        if d.code != "undefined" or model is not None:
            report.diagnostics.append(d)
    return report, render_report(report, specs, cfg.format)


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = config_from_args(argv)
        report, text = execute(cfg)
    except UsageError as exc:
        print(f"enverif: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HCParseError, PragmaSyntaxError, SignatureError) as exc:
        print(f"enverif: syntax error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ModelError as exc:
        print(f"enverif: model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (VerificationInputError, TranslationError) as exc:
        print(f"enverif: cannot verify: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"enverif: error: cannot write {cfg.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return exit_code(report, cfg.exit_on_check)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
