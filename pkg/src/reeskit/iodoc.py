"""Input documents and report serialization for the command-line front end.

An input document is a single JSON object: the ring (variable names), the
presentation matrix as expression strings, the declared cokernel rank, an
optional rational coordinate change, and options.  All rational numbers in
machine reports are exact "p/q" strings; machine reports contain no wall-clock
data, so identical input and seed give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .hypotheses import HypothesisReport, PresentationInput
from .polymatrix import matrix_from_strings
from .polyring import PolyParseError, UnknownVariable, VarSet, poly_to_text
from .rees import Certificate, t_names


class DocumentError(ValueError):
    """Malformed input document (operational failure, exit code 2)."""


@dataclass
class InputDocument:
    ring: VarSet
    matrix_text: list
    rank: int
    coordinate_change: list | None = None
    order: str = "degrevlex"
    seed: int = 1
    tier: str = "fast"
    name: str | None = None
    expect: list = field(default_factory=list)

    def presentation(self) -> PresentationInput:
        matrix = matrix_from_strings(self.ring, self.matrix_text)
        return PresentationInput(self.ring, matrix, self.rank)


def parse_fraction(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text)
    raise DocumentError(f"expected an integer or 'p/q' string, got {text!r}")


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def load_document(data: dict, name: str | None = None) -> InputDocument:
    if not isinstance(data, dict):
        raise DocumentError("document root must be a JSON object")
    try:
        vars_ = data["ring"]["vars"]
        matrix = data["matrix"]
        rank = data["rank"]
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"missing required field: {exc}") from exc
    if not isinstance(vars_, list) or len(vars_) < 3:
        raise DocumentError("ring.vars must list at least 3 variable names")
    if not isinstance(rank, int) or rank < 1:
        raise DocumentError("rank must be a positive integer")
    if not isinstance(matrix, list) or not matrix or not all(isinstance(r, list) for r in matrix):
        raise DocumentError("matrix must be a nonempty array of arrays of expression strings")
    width = len(matrix[0])
    if any(len(r) != width for r in matrix):
        raise DocumentError("matrix rows have unequal lengths")
    reserved = set(t_names(len(matrix)))
    clash = [v for v in vars_ if v in reserved]
    if clash:
        raise DocumentError(f"ring variables {clash} collide with reserved generator names")
    try:
        ring = VarSet(tuple(vars_))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    cc = data.get("coordinate_change")
    if cc is not None:
        d = len(vars_)
        if len(cc) != d or any(len(r) != d for r in cc):
            raise DocumentError("coordinate_change must be a d x d array")
        cc = [[parse_fraction(v) for v in row] for row in cc]
    options = data.get("options", {}) or {}
    doc = InputDocument(
        ring=ring,
        matrix_text=matrix,
        rank=rank,
        coordinate_change=cc,
        order=options.get("order", "degrevlex"),
        seed=int(options.get("seed", 1)),
        tier=options.get("tier", options.get("tiers", "fast")),
        name=name or data.get("name"),
        expect=data.get("expect", []),
    )
    if doc.order not in ("degrevlex", "lex"):
        raise DocumentError(f"unknown order {doc.order!r}")
    return doc


def load_document_file(path: str) -> InputDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON in {path}: {exc}") from exc
    return load_document(data, name=path)


# ------------------------------------------------------------- serialization

def report_json(report: HypothesisReport) -> dict:
    out = {
        "passed": report.passed,
        "prime": list(report.prime) if report.prime else None,
        "checks": [
            {"name": c.name, "passed": c.passed, "witness": c.witness} for c in report.checks
        ],
    }
    if report.normalized is not None:
        nf = report.normalized
        out["normalized"] = {
            "permutation": list(nf.permutation),
            "U": [[fraction_str(v) for v in row] for row in nf.U],
            "V": [[fraction_str(v) for v in row] for row in nf.V],
            "matrix": [
                [poly_to_text(p) for p in row] for row in nf.presentation.matrix.entries
            ],
        }
    return out


def certificate_json(cert: Certificate) -> dict:
    return {
        "kind": cert.kind,
        "verdict": cert.verdict,
        "notes": list(cert.notes),
        "identities": [
            {"name": r.name, "passed": r.passed, "details": r.details}
            for r in cert.identities
        ],
    }


def dump_json(obj: dict) -> str:
    """Deterministic rendering: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
