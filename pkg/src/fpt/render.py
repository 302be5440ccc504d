"""Deterministic SVG drawings of planar polytopes and framings."""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from fpt.framing import FramedPolytope  # noqa: E402
from fpt.polytope import VPolytope  # noqa: E402


class RenderError(ValueError):
    pass


_RC = {"svg.hashsalt": "fpt", "svg.fonttype": "none", "path.simplify": False}


def _f(x) -> float:
    return float(x)


def _ordered_polygon(pts):
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def _bounds(pts, pad=0.6):
    xs = [p[0] for p in pts] or [0.0]
    ys = [p[1] for p in pts] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    m = pad * span
    return min(xs) - m, max(xs) + m, min(ys) - m, max(ys) + m


def _clip_line(point, direction, box):
    """Segment of the line point + s*direction inside the box."""
    x0, x1, y0, y1 = box
    px, py = point
    dx, dy = direction
    lo, hi = -math.inf, math.inf
    for p, d, a, b in ((px, dx, x0, x1), (py, dy, y0, y1)):
        if abs(d) < 1e-15:
            if not a <= p <= b:
                return None
            continue
        s1, s2 = (a - p) / d, (b - p) / d
        lo, hi = max(lo, min(s1, s2)), min(hi, max(s1, s2))
    if lo > hi:
        return None
    return (px + lo * dx, px + hi * dx), (py + lo * dy, py + hi * dy)


def _draw_points(ax, pts, color="#4c72b0"):
    if len(pts) == 1:
        ax.plot([pts[0][0]], [pts[0][1]], "o", color=color)
    elif len(pts) == 2 or _collinear(pts):
        pts = sorted(pts)
        ax.plot([pts[0][0], pts[-1][0]], [pts[0][1], pts[-1][1]], "-", lw=4, color=color)
    else:
        poly = _ordered_polygon(pts)
        ax.fill([p[0] for p in poly], [p[1] for p in poly], color=color, alpha=0.45, lw=1.5,
                edgecolor=color)


def _collinear(pts):
    (ax_, ay), (bx, by) = pts[0], pts[1]
    return all(abs((bx - ax_) * (p[1] - ay) - (by - ay) * (p[0] - ax_)) < 1e-12 for p in pts)


def _project(points, proj):
    if proj is None:
        return [tuple(_f(x) for x in p) + (0.0,) * (2 - len(p)) for p in points]
    i, j = proj
    return [(_f(p[i]), _f(p[j])) for p in points]


def render_svg(obj, projection=None, title: str | None = None, weights=None) -> str:
    """SVG text drawing a VPolytope or FramedPolytope.  Ambient dimension
    above 2 requires ``projection=(i, j)`` naming two coordinates."""
    N = obj.ambient_dim
    if projection is None and N > 2:
        raise RenderError(f"cannot draw ambient dimension {N} without a projection")
    if projection is not None:
        i, j = projection
        if not (0 <= i < N and 0 <= j < N and i != j):
            raise RenderError(f"bad projection {projection} for dimension {N}")
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        try:
            if isinstance(obj, FramedPolytope):
                _draw_framed(ax, obj, projection, weights)
                title = title if title is not None else obj.name
            else:
                _draw_vpolytope(ax, obj, projection)
            if title:
                ax.set_title(title)
            ax.set_aspect("equal", adjustable="box")
            ax.grid(True, lw=0.3, color="#cccccc")
            buf = io.StringIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buf.getvalue()


def _draw_vpolytope(ax, P: VPolytope, proj):
    pts = _project(P.vertices, proj)
    if not pts:
        raise RenderError("empty polytope")
    _draw_points(ax, pts)
    x0, x1, y0, y1 = _bounds(pts)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)


def _draw_framed(ax, F: FramedPolytope, proj, weights):
    from fpt.morita import IrrationalSliceError, facet_weights

    verts = F.vertex_points
    pts = _project(verts, proj)
    box = _bounds(pts)
    if weights is None:
        try:
            weights = facet_weights(F)
        except IrrationalSliceError:
            weights = None
    if proj is None and F.ambient_dim <= 2:
        base = _project([F.base], None)[0]
        for d in F.directions[:1] if F.dim == 1 else []:
            seg = _clip_line(base, _project([d], None)[0], box)
            if seg:
                ax.plot(*seg, "-", color="#333333", lw=1, label="L")
        for k, (u, c) in enumerate(F.germ):
            uu = _project([u], None)[0]
            n2 = uu[0] ** 2 + uu[1] ** 2
            p = (_f(c) * uu[0] / n2, _f(c) * uu[1] / n2)
            seg = _clip_line(p, (-uu[1], uu[0]), box)
            if seg:
                ax.plot(*seg, "--", color="#c44e52", lw=1)
    _draw_points(ax, pts)
    for k in range(len(F.germ)):
        fv = [pts[i] for i in sorted(F.facet_vertices(k))]
        if not fv:
            continue
        cx = sum(p[0] for p in fv) / len(fv)
        cy = sum(p[1] for p in fv) / len(fv)
        label = str(weights[k]) if weights is not None else f"F{k}"
        ax.annotate(label, (cx, cy), textcoords="offset points", xytext=(6, 6),
                    color="#c44e52", fontsize=11)
    ax.set_xlim(box[0], box[1])
    ax.set_ylim(box[2], box[3])


def write_svg(obj, path, **kwargs) -> None:
    text = render_svg(obj, **kwargs)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
