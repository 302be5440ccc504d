"""Exact framed polytopes, box lifting, and Morita equivalence of the
toric quotients they classify."""

__version__ = "0.1.0"

from fpt.scalar import Quad, parse_scalar, format_scalar, sqrt  # noqa: E402,F401
from fpt.polytope import HPolyhedron, VPolytope, enumerate_vertices, irredundant_hrep  # noqa: E402,F401
from fpt.framing import FramedPolytope, validate  # noqa: E402,F401
