"""Line-oriented document format for polytopes and framings.

::

    # comment
    kind framed dim 2 sqrt 2
    name example
    base 0 0
    dir 1 0
    facet 1 0 : 0
    facet -2 -1 : -2

``kind`` is one of ``polytope-h`` (rows ``ineq u : c`` meaning u.x >= c and
``eq u : c``), ``polytope-v`` (rows ``vertex x``) or ``framed`` (one
``base`` row, ``dir`` rows and ``facet u : c`` rows meaning u.x >= c).
"""

from __future__ import annotations

from dataclasses import dataclass

from fpt.framing import FramedPolytope, FramingError
from fpt.polytope import HPolyhedron, PolyhedronError, VPolytope
from fpt.scalar import (Quad, RadicandError, ScalarSyntaxError, format_scalar,
                        parse_scalar)

KINDS = ("polytope-h", "polytope-v", "framed")


class DocumentError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}" + (f", column {col}" if col else "") if line else ""
        super().__init__(f"{where}: {msg}" if where else msg)
        self.line, self.col = line, col


@dataclass(frozen=True)
class Document:
    kind: str
    dim: int
    payload: object          # HPolyhedron | VPolytope | FramedPolytope
    name: str = ""
    radicand: int | None = None

    @classmethod
    def of(cls, obj, name: str = "") -> "Document":
        if isinstance(obj, FramedPolytope):
            kind = "framed"
            name = name or obj.name
        elif isinstance(obj, HPolyhedron):
            kind = "polytope-h"
        elif isinstance(obj, VPolytope):
            kind = "polytope-v"
        else:
            raise TypeError(f"cannot wrap {type(obj).__name__} in a document")
        return cls(kind, obj.ambient_dim, obj, name, _radicand_of(obj))


def _scalars_of(obj):
    if isinstance(obj, FramedPolytope):
        yield from obj.base
        for d in obj.directions:
            yield from d
        for u, c in obj.germ:
            yield from u
            yield c
    elif isinstance(obj, HPolyhedron):
        for u, c in tuple(obj.inequalities) + tuple(obj.equalities):
            yield from u
            yield c
    else:
        for v in obj.vertices:
            yield from v


def _radicand_of(obj):
    for x in _scalars_of(obj):
        if isinstance(x, Quad):
            return x.m
    return None


# -- parsing ------------------------------------------------------------------

class _Reader:
    def __init__(self, radicand):
        self.radicand = radicand

    def scalar(self, tok, line, col):
        try:
            x = parse_scalar(tok, self.radicand)
        except ScalarSyntaxError as exc:
            raise DocumentError(str(exc), line, col) from None
        except (RadicandError, ValueError) as exc:
            raise DocumentError(f"radicand: {exc}", line, col) from None
        if isinstance(x, Quad) and self.radicand is None:
            self.radicand = x.m
        return x


def _tokens(raw):
    """(token, 1-based column) pairs."""
    out, i = [], 0
    while i < len(raw):
        if raw[i].isspace():
            i += 1
            continue
        j = i
        while j < len(raw) and not raw[j].isspace():
            j += 1
        out.append((raw[i:j], i + 1))
        i = j
    return out


def parse_document(text: str) -> Document:
    header = None
    name = ""
    rows = {"ineq": [], "eq": [], "vertex": [], "base": [], "dir": [], "facet": []}
    reader = None
    for ln, raw in enumerate(text.splitlines(), 1):
        raw = raw.split("#", 1)[0]
        toks = _tokens(raw)
        if not toks:
            continue
        key = toks[0][0]
        if header is None:
            if key != "kind":
                raise DocumentError("expected header 'kind <k> dim <N> [sqrt <m>]'", ln, 1)
            header = _parse_header(toks, ln)
            reader = _Reader(header[2])
            continue
        if key == "name":
            name = raw.strip()[len("name"):].strip()
            continue
        if key not in rows:
            raise DocumentError(f"unknown row keyword {key!r}", ln, toks[0][1])
        rows[key].append((ln, toks[1:]))
    if header is None:
        raise DocumentError("empty document")
    kind, N, _ = header
    allowed = {"polytope-h": {"ineq", "eq"}, "polytope-v": {"vertex"},
               "framed": {"base", "dir", "facet"}}[kind]
    for key, items in rows.items():
        if items and key not in allowed:
            raise DocumentError(f"row {key!r} not allowed in a {kind} document", items[0][0], 1)

    def vector(ln, toks, n=N):
        if len(toks) != n:
            raise DocumentError(f"expected {n} entries, found {len(toks)}", ln,
                                toks[0][1] if toks else None)
        return tuple(reader.scalar(t, ln, c) for t, c in toks)

    def row(ln, toks):
        seps = [i for i, (t, _) in enumerate(toks) if t == ":"]
        if len(seps) != 1 or seps[0] != N or len(toks) != N + 2:
            raise DocumentError(f"expected '{N} entries : constant'", ln,
                                toks[0][1] if toks else None)
        return vector(ln, toks[:N]), reader.scalar(toks[-1][0], ln, toks[-1][1])

    try:
        if kind == "polytope-h":
            payload = HPolyhedron(N, tuple(row(*r) for r in rows["ineq"]),
                                  tuple(row(*r) for r in rows["eq"]))
        elif kind == "polytope-v":
            payload = VPolytope(N, tuple(vector(*r) for r in rows["vertex"]))
        else:
            if len(rows["base"]) != 1:
                raise DocumentError("a framed document needs exactly one base row")
            base = vector(*rows["base"][0])
            dirs = tuple(vector(*r) for r in rows["dir"])
            germ = tuple(row(*r) for r in rows["facet"])
            payload = FramedPolytope(N, base, dirs, germ, name)
    except (PolyhedronError, FramingError) as exc:
        raise DocumentError(f"shape: {exc}") from None
    return Document(kind, N, payload, name, reader.radicand)


def _parse_header(toks, ln):
    words = [t for t, _ in toks]
    if len(words) not in (4, 6) or words[2] != "dim" or (len(words) == 6 and words[4] != "sqrt"):
        raise DocumentError("malformed header", ln, 1)
    if words[1] not in KINDS:
        raise DocumentError(f"unknown kind {words[1]!r}", ln, toks[1][1])
    try:
        N = int(words[3])
        m = int(words[5]) if len(words) == 6 else None
    except ValueError:
        raise DocumentError("dimension and radicand must be integers", ln, toks[3][1]) from None
    if N < 0:
        raise DocumentError("dimension must be nonnegative", ln, toks[3][1])
    return words[1], N, m


# -- emission -----------------------------------------------------------------

def _vec(v):
    return " ".join(format_scalar(x) for x in v)


def emit_document(doc: Document) -> str:
    obj = doc.payload
    m = _radicand_of(obj) or doc.radicand
    head = f"kind {doc.kind} dim {doc.dim}" + (f" sqrt {m}" if m else "")
    lines = [head]
    name = doc.name or getattr(obj, "name", "")
    if name:
        lines.append(f"name {name}")
    if doc.kind == "polytope-h":
        H = obj.canonical()
        for u, c in H.inequalities:
            lines.append(f"ineq {_vec(u)} : {format_scalar(c)}")
        for u, c in sorted(H.equalities):
            lines.append(f"eq {_vec(u)} : {format_scalar(c)}")
    elif doc.kind == "polytope-v":
        for v in obj.vertices:
            lines.append(f"vertex {_vec(v)}")
    else:
        F = obj.normalized()
        lines.append(f"base {_vec(F.base)}")
        for d in F.directions:
            lines.append(f"dir {_vec(d)}")
        for u, c in F.germ:
            lines.append(f"facet {_vec(u)} : {format_scalar(c)}")
    return "\n".join(lines) + "\n"


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def dump(obj, path, name: str = "") -> None:
    doc = obj if isinstance(obj, Document) else Document.of(obj, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_document(doc))
