"""Line-oriented text format for presentations and linear maps.

    algebra NAME
    kind ertex|d-ertex|vertex
    basis ID ID ...
    mode I J N = TERM + TERM ...      # (e_I)_N e_J
    D I = 0 | TERM + TERM ...
    vacuum ID
    support I J LO HI                 # optional declared mode range

A TERM is ``[RATIONAL*]ID``. Map files hold lines ``ID -> 0 | TERM + ...``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra_model import KINDS, Presentation
from .errors import DuplicateBasisId, ParseError, UnknownIdentifier
from .linear_space import LinearMap, VectorElem

ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.'^]*\Z")
TERM_RE = re.compile(r"(?:(-?\d+(?:/\d+)?)\*)?([A-Za-z_][A-Za-z0-9_.'^]*)\Z")
INT_RE = re.compile(r"-?\d+\Z")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _parse_terms(text: str, lineno: int, col0: int) -> List[Tuple[Fraction, str, int]]:
    """Parse ``0`` or ``TERM (+ TERM)*``; returns (coefficient, id, column)."""
    if text.strip() == "0":
        return []
    if not text.strip():
        raise ParseError("expected a linear combination", lineno, col0 + 1)
    out = []
    pos = 0
    for piece in text.split("+"):
        lead = len(piece) - len(piece.lstrip())
        col = col0 + pos + lead + 1
        body = piece.strip()
        m = TERM_RE.match(body)
        if not m:
            raise ParseError(f"malformed term {body!r}", lineno, col)
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        out.append((coeff, m.group(2), col))
        pos += len(piece) + 1
    return out


def _token_columns(text: str) -> List[int]:
    """1-based starting column of each whitespace-separated token."""
    return [m.start() + 1 for m in re.finditer(r"\S+", text)]


def parse_presentation(source: str) -> Presentation:
    name = None
    kind = None
    basis: Optional[List[str]] = None
    vacuum = None
    pending_modes = []
    pending_d = []
    pending_support = []

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        words = line.split()
        key = words[0]
        if key == "algebra":
            if len(words) != 2:
                raise ParseError("expected 'algebra NAME'", lineno, indent + 1)
            name = words[1]
        elif key == "kind":
            if len(words) != 2 or words[1] not in KINDS:
                raise ParseError("expected 'kind ertex|d-ertex|vertex'", lineno, indent + 1)
            kind = words[1]
        elif key == "basis":
            if basis is not None:
                raise ParseError("basis declared twice", lineno, indent + 1)
            if len(words) < 2:
                raise ParseError("empty basis", lineno, len(line) + 1)
            basis = []
            for w, col in zip(words[1:], _token_columns(line)[1:]):
                if not ID_RE.match(w):
                    raise ParseError(f"invalid identifier {w!r}", lineno, col)
                if w in basis:
                    raise DuplicateBasisId(f"duplicate basis identifier {w!r}", lineno, col)
                basis.append(w)
        elif key == "vacuum":
            if len(words) != 2:
                raise ParseError("expected 'vacuum ID'", lineno, indent + 1)
            vacuum = (words[1], lineno, _token_columns(line)[1])
        elif key == "mode":
            lhs, eq, rhs = line.partition("=")
            parts = lhs.split()
            if not eq or len(parts) != 4 or not INT_RE.match(parts[3]):
                raise ParseError("expected 'mode I J N = TERMS'", lineno, indent + 1)
            pending_modes.append((parts[1], parts[2], int(parts[3]),
                                  _parse_terms(rhs, lineno, len(lhs) + 1), lineno, lhs))
        elif key == "D":
            lhs, eq, rhs = line.partition("=")
            parts = lhs.split()
            if not eq or len(parts) != 2:
                raise ParseError("expected 'D I = TERMS'", lineno, indent + 1)
            pending_d.append((parts[1], _parse_terms(rhs, lineno, len(lhs) + 1), lineno, lhs))
        elif key == "support":
            if len(words) != 5 or not (INT_RE.match(words[3]) and INT_RE.match(words[4])):
                raise ParseError("expected 'support I J LO HI'", lineno, indent + 1)
            pending_support.append((words[1], words[2], int(words[3]), int(words[4]), lineno, line))
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, indent + 1)

    if kind is None:
        raise ParseError("missing 'kind' line")
    if basis is None:
        raise ParseError("missing 'basis' line")
    known = set(basis)

    def need(ident, lineno, text, token):
        if ident not in known:
            raise UnknownIdentifier(f"unknown identifier {ident!r}", lineno, _token_columns(text)[token])

    def combo(terms, lineno, text):
        coords: Dict[str, Fraction] = {}
        for c, ident, col in terms:
            if ident not in known:
                raise UnknownIdentifier(f"unknown identifier {ident!r}", lineno, col)
            coords[ident] = coords.get(ident, 0) + c
        return VectorElem(coords)

    modes = {}
    for i, j, n, terms, lineno, lhs in pending_modes:
        need(i, lineno, lhs, 1)
        need(j, lineno, lhs, 2)
        if (i, j, n) in modes:
            raise ParseError(f"mode {i} {j} {n} given twice", lineno, 1)
        modes[(i, j, n)] = combo(terms, lineno, lhs)

    derivation = None
    if pending_d:
        images = {}
        for i, terms, lineno, lhs in pending_d:
            need(i, lineno, lhs, 1)
            if i in images:
                raise ParseError(f"D {i} given twice", lineno, 1)
            images[i] = combo(terms, lineno, lhs)
        for b in basis:
            images.setdefault(b, VectorElem())
        derivation = LinearMap({b: images[b] for b in basis})

    support = None
    if pending_support:
        support = {}
        for i, j, lo, hi, lineno, text in pending_support:
            need(i, lineno, text, 1)
            need(j, lineno, text, 2)
            support[(i, j)] = (lo, hi)

    vac = None
    if vacuum is not None:
        vac, lineno, col = vacuum
        if vac not in known:
            raise UnknownIdentifier(f"unknown identifier {vac!r}", lineno, col)

    return Presentation(name or "unnamed", kind, tuple(basis), modes, derivation, vac, support)


def serialize_presentation(p: Presentation) -> str:
    order = p.basis
    pos = p.position
    lines = [f"algebra {p.name}", f"kind {p.kind}", "basis " + " ".join(p.basis)]
    if p.vacuum is not None:
        lines.append(f"vacuum {p.vacuum}")
    for (i, j, n) in sorted(p.modes, key=lambda k: (pos[k[0]], pos[k[1]], -k[2])):
        lines.append(f"mode {i} {j} {n} = {p.modes[(i, j, n)].format(order)}")
    if p.derivation is not None:
        for b in p.basis:
            lines.append(f"D {b} = {p.derivation.images.get(b, VectorElem()).format(order)}")
    if p.support:
        for (i, j) in sorted(p.support, key=lambda k: (pos[k[0]], pos[k[1]])):
            lo, hi = p.support[(i, j)]
            lines.append(f"support {i} {j} {lo} {hi}")
    return "\n".join(lines) + "\n"


def parse_map(source: str, domain: Optional[Sequence[str]] = None,
              codomain: Optional[Iterable[str]] = None) -> LinearMap:
    """Parse ``ID -> TERMS`` lines; identifiers are checked when bases are given."""
    images: Dict[str, VectorElem] = {}
    cod = set(codomain) if codomain is not None else None
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        lhs, arrow, rhs = line.partition("->")
        src = lhs.strip()
        if not arrow or not ID_RE.match(src):
            raise ParseError("expected 'ID -> TERMS'", lineno, 1)
        if domain is not None and src not in domain:
            raise UnknownIdentifier(f"unknown identifier {src!r}", lineno, line.find(src) + 1)
        if src in images:
            raise ParseError(f"{src} mapped twice", lineno, 1)
        coords: Dict[str, Fraction] = {}
        for c, ident, col in _parse_terms(rhs, lineno, len(lhs) + 2):
            if cod is not None and ident not in cod:
                raise UnknownIdentifier(f"unknown identifier {ident!r}", lineno, col)
            coords[ident] = coords.get(ident, 0) + c
        images[src] = VectorElem(coords)
    if domain is not None:
        missing = [b for b in domain if b not in images]
        if missing:
            raise ParseError("map is not given on " + ", ".join(missing))
        images = {b: images[b] for b in domain}
    return LinearMap(images)


def serialize_map(m: LinearMap, order: Optional[Sequence[str]] = None) -> str:
    return "".join(f"{b} -> {v.format(order)}\n" for b, v in m.images.items())
