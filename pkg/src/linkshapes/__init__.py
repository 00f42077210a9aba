"""Shapings of link diagrams.

A shaping assigns ``(a, b, m)`` to every segment of an oriented diagram so
that the braiding relation holds at each crossing.  It determines an
SL2(C)-representation of the link group, tetrahedron shapes of the
octahedral decomposition and meridian/longitude eigenvalues.
"""

from .biquandle import Shape, Shaping, braid, shaping_from_b, verify_shaping
from .catalog import (figure_eight_diagram, figure_eight_shaping, trefoil_diagram,
                      trefoil_shaping, unknot_diagram)
from .decoration import eigenvalue_decoration
from .diagram import Crossing, LinkDiagram, from_braid_word, from_pd_code, parse_diagram
from .errors import (DegenerateCrossing, InvalidDiagram, NonConvergence, PinchedCrossing,
                     ShapingError, SingularBraiding)
from .gluing import build_a_system, build_b_system, build_lifted_b_system
from .holonomy import evaluate_path, verify_holonomy
from .octahedra import verify_gluing_equations, volume
from .solver import ShapingSolver, SolveConfig, enumerate_solutions
from .twist import TorusKnotFamily, riley_roots, torus_knot_diagram, torus_knot_shaping
from .weyl import weyl_center_braid

__version__ = "0.1.0"

__all__ = [
    "Crossing", "DegenerateCrossing", "InvalidDiagram", "LinkDiagram", "NonConvergence",
    "PinchedCrossing", "Shape", "Shaping", "ShapingError", "ShapingSolver", "SingularBraiding",
    "SolveConfig", "TorusKnotFamily", "braid", "build_a_system", "build_b_system",
    "build_lifted_b_system", "eigenvalue_decoration", "enumerate_solutions", "evaluate_path",
    "figure_eight_diagram", "figure_eight_shaping", "from_braid_word", "from_pd_code",
    "parse_diagram", "riley_roots", "shaping_from_b", "torus_knot_diagram",
    "torus_knot_shaping", "trefoil_diagram", "trefoil_shaping", "unknot_diagram",
    "verify_gluing_equations", "verify_holonomy", "verify_shaping", "volume",
    "weyl_center_braid",
]
