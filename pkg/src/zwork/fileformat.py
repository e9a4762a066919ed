"""Line-oriented text format for graded presentations.

::

    name: P2
    field: Q
    window: -4 4
    horizon: 3            # optional

    [generators]
    x0 1
    g 2 @ 0,1,2           # optional object list

    [relations]
    x0.x1 - x1.x0
    x.g @ 3               # explicit source object

    [deformation]         # optional, one line per relation, same order
    x0.x1 - x1.x0 - eps*x1.x0

Words are read in composition order (``x.y`` applies ``y`` first).  A term
is ``[rational*][eps*]word``; ``#`` starts a comment.  The grammar is
given in EBNF in the README.  ``print_algebra`` emits the canonical form and
``parse_algebra(print_algebra(a)) == a``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Optional

from .algebra import GeneratorScheme, GradedPresentation, PresentationError, RelationScheme
from .exact import DualScalar, Field, field_from_spec


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class AlgebraFile:
    presentation: GradedPresentation
    lo: int
    hi: int


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_TERM = re.compile(rf"^(?:(\d+(?:/\d+)?)\*)?(?:(eps)\*)?({_IDENT}(?:\.{_IDENT})*)$")
_SECTIONS = ("generators", "relations", "deformation")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_sum(text: str, field: Field, lineno: int, allow_eps: bool):
    body, source = text, None
    if "@" in text:
        body, src = text.rsplit("@", 1)
        try:
            source = int(src.strip())
        except ValueError:
            raise FormatError(f"bad source object {src.strip()!r}", lineno) from None
    tokens = body.replace("+", " + ").replace("-", " - ").split()
    if not tokens:
        raise FormatError("empty relation", lineno)
    terms = []
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in ("+", "-"):
            # after a term this is the separator, otherwise a unary sign
            if tok == "-":
                sign = -sign
            expect_term = True
            continue
        m = _TERM.match(tok)
        if not m or not expect_term:
            raise FormatError(f"cannot read term {tok!r}", lineno)
        if m.group(2) and not allow_eps:
            raise FormatError("eps is only allowed in the [deformation] section", lineno)
        terms.append((field(m.group(1) or 1) * sign, bool(m.group(2)), tuple(m.group(3).split("."))))
        sign = 1
        expect_term = False
    if expect_term:
        raise FormatError("relation ends with an operator", lineno)
    return terms, source


def _base_terms(terms):
    out = {}
    for c, eps, word in terms:
        if not eps:
            out[word] = out.get(word, 0) + c
    return tuple((c, w) for w, c in out.items() if c != 0)


def _dual_terms(terms, field: Field):
    out = {}
    for c, eps, word in terms:
        x = DualScalar(field.zero, c) if eps else DualScalar(c, field.zero)
        out[word] = out.get(word, DualScalar(field.zero, field.zero)) + x
    return tuple((c, w) for w, c in out.items() if c != 0)


def parse_algebra(text: str, field_override: Optional[str] = None) -> AlgebraFile:
    header = {}
    sections = {s: [] for s in _SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            if m.group(1) not in sections:
                raise FormatError(f"unknown section [{m.group(1)}]", lineno)
            current = m.group(1)
            continue
        if current is None:
            key, sep, value = line.partition(":")
            if not sep:
                raise FormatError(f"expected 'key: value', got {line!r}", lineno)
            header[key.strip()] = (value.strip(), lineno)
        else:
            sections[current].append((line, lineno))
    for key in ("name", "field", "window"):
        if key not in header:
            raise FormatError(f"missing header field {key!r}")
    unknown = set(header) - {"name", "field", "window", "horizon"}
    if unknown:
        raise FormatError(f"unknown header field(s) {sorted(unknown)}")
    override = field_override if field_override is not None else os.environ.get("ZWORK_FIELD")
    try:
        field = field_from_spec(override or header["field"][0])
    except ValueError as exc:
        raise FormatError(str(exc), header["field"][1]) from None
    try:
        lo, hi = (int(x) for x in header["window"][0].split())
    except ValueError:
        raise FormatError("window must be two integers", header["window"][1]) from None
    if lo > hi:
        raise FormatError("window is empty", header["window"][1])
    horizon = int(header["horizon"][0]) if "horizon" in header else None

    gens = []
    for line, lineno in sections["generators"]:
        body, _, objs = line.partition("@")
        parts = body.split()
        if len(parts) != 2 or not re.fullmatch(_IDENT, parts[0]):
            raise FormatError(f"expected 'label degree', got {line!r}", lineno)
        try:
            degree = int(parts[1])
            objects = frozenset(int(x) for x in objs.split(",")) if objs.strip() else None
        except ValueError:
            raise FormatError(f"bad integer in {line!r}", lineno) from None
        gens.append(GeneratorScheme(parts[0], degree, objects))
    rels = []
    for line, lineno in sections["relations"]:
        terms, source = _parse_sum(line, field, lineno, allow_eps=False)
        rels.append(RelationScheme(_base_terms(terms), source))
    deformed = None
    if sections["deformation"]:
        deformed = []
        for line, lineno in sections["deformation"]:
            terms, source = _parse_sum(line, field, lineno, allow_eps=True)
            deformed.append(RelationScheme(_dual_terms(terms, field), source))
        deformed = tuple(deformed)
    pres = GradedPresentation(header["name"][0], tuple(gens), tuple(rels), field, horizon, deformed)
    return AlgebraFile(pres, lo, hi)


def load_algebra(path: str, field_override: Optional[str] = None) -> AlgebraFile:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read(), field_override)


def _coeff_str(field: Field, c) -> str:
    return field.to_str(c)


def _format_terms(terms, field: Field, dual: bool) -> str:
    parts = []
    for c, word in terms:
        pieces = [(c.a, False), (c.b, True)] if dual else [(c, False)]
        for x, eps in pieces:
            if x == 0:
                continue
            if field.characteristic == 0:
                neg = x < 0
                mag = -x if neg else x
            else:
                neg, mag = False, x
            s = "" if mag == 1 else _coeff_str(field, mag) + "*"
            if eps:
                s += "eps*"
            s += ".".join(word)
            parts.append(("-" if neg else "+", s))
    if not parts:
        raise PresentationError("cannot print an empty relation")
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


def print_algebra(a: AlgebraFile) -> str:
    p = a.presentation
    lines = [f"name: {p.name}", f"field: {p.field.name}", f"window: {a.lo} {a.hi}"]
    if p.degree_horizon is not None:
        lines.append(f"horizon: {p.degree_horizon}")
    lines += ["", "[generators]"]
    for g in p.generators:
        line = f"{g.label} {g.degree}"
        if g.objects is not None:
            line += " @ " + ",".join(str(o) for o in sorted(g.objects))
        lines.append(line)
    lines += ["", "[relations]"]
    for r in p.relations:
        line = _format_terms(r.terms, p.field, dual=False)
        if r.source is not None:
            line += f" @ {r.source}"
        lines.append(line)
    if p.deformed_relations is not None:
        lines += ["", "[deformation]"]
        for r in p.deformed_relations:
            line = _format_terms(r.terms, p.field, dual=True)
            if r.source is not None:
                line += f" @ {r.source}"
            lines.append(line)
    return "\n".join(lines) + "\n"
