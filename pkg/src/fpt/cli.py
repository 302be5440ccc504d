"""Command line interface: ``fpt <command> ...``.

Text reports are tab-separated ``key<TAB>value`` lines; ``--json`` switches
to a single JSON object.  Exit status is 0 for success or a true verdict,
1 for a false verdict and 2 for errors, which print one line
``error: <code>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from fpt import __version__
from fpt.docfmt import Document, DocumentError, emit_document, load
from fpt.framing import (FramedPolytope, FramingError, IrrationalityReport,
                         is_delzant, irrationality_degree, is_rational_faced,
                         validate)
from fpt.lattice import LatticeError
from fpt.lift import LiftError, lift_and_frame, make_qpq
from fpt.morita import (CrossedProductError, IntegralAffineMap, MoritaError,
                        crossed_product, decide_morita, facet_weights,
                        framed_iso, is_rational_slice, polytope_iso)
from fpt.normal_form import face_of_vertex, local_model
from fpt.polytope import (HPolyhedron, NotAFaceError, PolyhedronError,
                          UnboundedError, VPolytope, dimension, enumerate_vertices,
                          irredundant_hrep, is_simple)
from fpt.render import RenderError, write_svg
from fpt.scalar import RadicandError, ScalarSyntaxError, format_scalar, parse_scalar


class CliError(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


_ERROR_CODES = [
    (DocumentError, "syntax"),
    (ScalarSyntaxError, "syntax"),
    (RadicandError, "radicand"),
    (UnboundedError, "unbounded"),
    (NotAFaceError, "face"),
    (CrossedProductError, "crossed-product"),
    (LiftError, "lift"),
    (RenderError, "render"),
    (FramingError, "framing"),
    (MoritaError, "morita"),
    (PolyhedronError, "polyhedron"),
    (LatticeError, "lattice"),
    (OSError, "io"),
]


# -- helpers ------------------------------------------------------------------

def _s(x) -> str:
    return format_scalar(x)


def _vec(v) -> str:
    return " ".join(_s(x) for x in v)


def _row(u, c) -> str:
    return f"{_vec(u)} : {_s(c)}"


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonify(x) for x in items]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    return _s(obj)


def _emit(args, pairs, out=None):
    """Write ordered (key, value) pairs as TSV or JSON."""
    out = out or sys.stdout
    if args.json:
        out.write(json.dumps(_jsonify(dict(pairs)), sort_keys=False) + "\n")
        return
    for k, v in pairs:
        if isinstance(v, (list, tuple)) and v and isinstance(v[0], (list, tuple)):
            for item in v:
                out.write(k + "\t" + "\t".join(str(x) for x in item) + "\n")
        else:
            if isinstance(v, bool):
                v = str(v).lower()
            out.write(f"{k}\t{v}\n")


def _load(path) -> Document:
    return load(path)


def _as_vpolytope(doc: Document) -> VPolytope:
    if doc.kind == "polytope-v":
        return doc.payload
    if doc.kind == "polytope-h":
        V = enumerate_vertices(doc.payload)
        if V.is_empty:
            raise CliError("empty", "polytope is empty")
        return V
    return doc.payload.polytope


def _as_framed(doc: Document) -> FramedPolytope:
    if doc.kind != "framed":
        raise CliError("kind", f"expected a framed document, got {doc.kind}")
    return doc.payload


def _map_pairs(phi: IntegralAffineMap, prefix="map"):
    rows = [(f"{prefix}.row", _vec(r)) for r in phi.linear]
    return rows + [(f"{prefix}.translation", _vec(phi.translation))]


# -- commands -----------------------------------------------------------------

def _check_pairs(path):
    doc = _load(path)
    pairs = [("file", path), ("kind", doc.kind), ("dim", doc.dim)]
    if doc.kind == "framed":
        F = doc.payload
        rep = validate(F)
        pairs += [("slice_dim", F.dim), ("germ_facets", len(F.germ))]
        for flag in rep.FLAGS:
            pairs.append((flag, getattr(rep, flag)))
        for k, w in sorted(rep.witnesses.items()):
            pairs.append((f"witness.{k}", _jsonify(w)))
        if rep.bounded and rep.nonempty:
            pairs.append(("vertices", len(F.local_vertices)))
            pairs.append(("degree", irrationality_degree(F.polytope).degree))
            if rep.ok and is_rational_slice(F):
                pairs.append(("weights", " ".join(map(str, facet_weights(F)))))
        pairs.append(("ok", rep.ok))
        return pairs, rep.ok
    P = _as_vpolytope(doc)
    d = dimension(P)
    simple, _ = is_simple(P) if d > 0 else (True, None)
    rf = is_rational_faced(P)[0] if d > 0 else True
    pairs += [("vertices", len(P.vertices)), ("polytope_dim", d),
              ("simple", simple), ("rational_faced", rf),
              ("degree", irrationality_degree(P).degree)]
    ok = True
    if d == P.ambient_dim and d > 0:
        rep = is_delzant(P)
        pairs.append(("delzant", rep.ok))
        if rep.witness_vertex is not None:
            pairs.append(("witness.vertex", _vec(rep.witness_vertex)))
        if rep.witness_det is not None:
            pairs.append(("witness.det", rep.witness_det))
        ok = rep.ok
    pairs.append(("ok", ok))
    return pairs, ok


def cmd_check(args):
    files = args.files
    if len(files) == 1:
        pairs, ok = _check_pairs(files[0])
        _emit(args, pairs)
        return 0 if ok else 1
    # independent files checked concurrently; output in argument order
    with ThreadPoolExecutor(max_workers=min(8, len(files))) as pool:
        futures = [pool.submit(_safe_check, f) for f in files]
        results = [f.result() for f in futures]
    all_ok, any_err = True, False
    if args.json:
        out = []
        for path, (pairs, ok, err) in zip(files, results):
            out.append(_jsonify(dict(pairs)) if err is None else
                       {"file": path, "error": err})
        sys.stdout.write(json.dumps(out) + "\n")
    for path, (pairs, ok, err) in zip(files, results):
        if err is not None:
            any_err = True
            if not args.json:
                sys.stdout.write(f"file\t{path}\nerror\t{err}\n")
            continue
        all_ok &= ok
        if not args.json:
            _emit(args, pairs)
    return 2 if any_err else (0 if all_ok else 1)


def _safe_check(path):
    try:
        pairs, ok = _check_pairs(path)
        return pairs, ok, None
    except Exception as exc:  # reported per file in batch mode
        return [], False, f"{_code(exc)}: {exc}"


def cmd_lift(args):
    doc = _load(args.file)
    if doc.kind == "polytope-h":
        H = doc.payload
    elif doc.kind == "polytope-v":
        H = irredundant_hrep(doc.payload)
    else:
        raise CliError("kind", "lift needs a polytope document")
    res = lift_and_frame(H, strip_redundant=args.strip_redundant, name=doc.name)
    text = emit_document(Document.of(res.framed))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        pairs = [("output", args.output), ("M", res.M),
                 ("weights", " ".join(map(str, res.weights))),
                 ("integral_iso", res.is_integral_iso),
                 ("bijective", res.projection_bijective())]
        _emit(args, pairs)
    elif args.json:
        _emit(args, [("document", text), ("M", res.M),
                     ("weights", list(res.weights)),
                     ("integral_iso", res.is_integral_iso)])
    else:
        sys.stdout.write(text)
    return 0


def cmd_weights(args):
    F = _as_framed(_load(args.file))
    w = facet_weights(F)
    rows = [(i, _row(u, c), wi) for i, ((u, c), wi) in enumerate(zip(F.germ, w))]
    _emit(args, [("facet", rows)] if not args.json else
          [("facets", [{"index": i, "facet": r, "weight": wi} for i, r, wi in rows])])
    return 0


def cmd_iso(args):
    a, b = _load(args.a), _load(args.b)
    if (a.kind == "framed") != (b.kind == "framed"):
        raise CliError("kind", "iso compares two polytopes or two framings")
    if a.kind == "framed":
        phi = framed_iso(a.payload, b.payload)
    else:
        phi = polytope_iso(_as_vpolytope(a), _as_vpolytope(b))
    pairs = [("isomorphic", phi is not None)]
    if phi is not None:
        pairs += _map_pairs(phi)
    _emit(args, pairs)
    return 0 if phi is not None else 1


def cmd_morita(args):
    F1, F2 = _as_framed(_load(args.a)), _as_framed(_load(args.b))
    v = decide_morita(F1, F2)
    pairs = [("verdict", v.status), ("reason", v.reason)]
    if v.weights:
        pairs += [("weights.a", " ".join(map(str, v.weights[0]))),
                  ("weights.b", " ".join(map(str, v.weights[1])))]
    if v.witness is not None:
        pairs += _map_pairs(v.witness.embed_1, "embed.a")
        pairs += _map_pairs(v.witness.embed_2, "embed.b")
        if args.witness:
            with open(args.witness, "w", encoding="utf-8") as fh:
                fh.write(emit_document(Document.of(v.witness.third)))
            pairs.append(("witness", args.witness))
    _emit(args, pairs)
    return 0 if v.equivalent else 1


def cmd_crossed(args):
    F1, F2 = _as_framed(_load(args.a)), _as_framed(_load(args.b))
    wit = crossed_product(F1, F2)
    text = emit_document(Document.of(wit.third))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit(args, [("output", args.output)] + _map_pairs(wit.embed_1, "embed.a")
              + _map_pairs(wit.embed_2, "embed.b"))
    else:
        sys.stdout.write(text)
    return 0


def _parse_face(F: FramedPolytope, text: str):
    text = text.strip()
    if text == "interior":
        return frozenset()
    kind, _, rest = text.partition(":")
    try:
        if kind == "vertex":
            k = int(rest)
            if not 0 <= k < len(F.local_vertices):
                raise CliError("face", f"vertex index {k} out of range")
            return face_of_vertex(F, k)
        if kind == "facets":
            return frozenset(int(x) for x in rest.split(",") if x.strip())
    except ValueError:
        pass
    raise CliError("face", f"bad face {text!r} (interior | vertex:K | facets:I,J)")


def cmd_local_model(args):
    F = _as_framed(_load(args.file))
    m = local_model(F, _parse_face(F, args.face))
    pairs = [("face", " ".join(map(str, m.face)) or "-"),
             ("vertices", " ".join(map(str, m.vertices))),
             ("face_dim", m.face_dim), ("corank", m.corank),
             ("isotropy", [(_vec(u),) for u in m.isotropy_basis] or "-"),
             ("m_star", [(_vec(u),) for u in m.m_star_basis] or "-"),
             ("l", [(_vec(u),) for u in m.l_basis] or "-"),
             ("l_cap_m_star", [(_vec(u),) for u in m.face_directions] or "-"),
             ("smith", " ".join(map(str, m.smith)) or "-"),
             ("transversal", m.transversal)]
    _emit(args, pairs)
    return 0


def cmd_degree(args):
    doc = _load(args.file)
    P = _as_vpolytope(doc)
    rep: IrrationalityReport = irrationality_degree(P)
    _emit(args, [("dim", rep.dim_P), ("daff_rank", rep.daff_rank),
                 ("degree", rep.degree),
                 ("basis", [(_vec(h),) for h in rep.daff_basis] or "-")])
    return 0


def cmd_render(args):
    doc = _load(args.file)
    obj = doc.payload if doc.kind == "framed" else _as_vpolytope(doc)
    proj = None
    if args.project:
        try:
            i, j = (int(x) for x in args.project.split(","))
        except ValueError:
            raise CliError("render", "--project expects I,J") from None
        proj = (i, j)
    write_svg(obj, args.output, projection=proj, title=doc.name or None)
    _emit(args, [("output", args.output), ("kind", doc.kind)])
    return 0


def cmd_qpq(args):
    a = parse_scalar(args.a)
    F = make_qpq(a, args.p, args.q)
    text = emit_document(Document.of(F))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit(args, [("output", args.output)])
    else:
        sys.stdout.write(text)
    return 0


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpt", description="Framed polytope toolkit")
    p.add_argument("--version", action="version", version=f"fpt {__version__}")
    p.add_argument("--json", action="store_true", help="structured JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)
        return sp

    sp = add("check", cmd_check, "validate documents and report")
    sp.add_argument("files", nargs="+")
    sp = add("lift", cmd_lift, "lift a polytope to a framing of a box slice")
    sp.add_argument("file")
    sp.add_argument("--strip-redundant", action="store_true")
    sp.add_argument("-o", "--output")
    sp = add("weights", cmd_weights, "facet weights of a framing")
    sp.add_argument("file")
    sp = add("iso", cmd_iso, "integral affine isomorphism search")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("morita", cmd_morita, "decide Morita equivalence")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--witness", help="write the crossed product framing here")
    sp = add("crossed-product", cmd_crossed, "crossed product of two framings")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("-o", "--output")
    sp = add("local-model", cmd_local_model, "local model data at a face")
    sp.add_argument("file")
    sp.add_argument("--face", required=True, help="interior | vertex:K | facets:I,J")
    sp = add("degree", cmd_degree, "degree of irrationality")
    sp.add_argument("file")
    sp = add("render", cmd_render, "draw a planar polytope or framing as SVG")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--project", help="coordinate pair I,J for ambient dimension > 2")
    sp = add("qpq", cmd_qpq, "emit the framed segment Q_{p,q}")
    sp.add_argument("-a", required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("-o", "--output")
    return p


def _code(exc) -> str:
    if isinstance(exc, CliError):
        return exc.code
    for cls, code in _ERROR_CODES:
        if isinstance(exc, cls):
            return code
    return "internal"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, ZeroDivisionError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"error: {_code(exc)}: {msg}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
