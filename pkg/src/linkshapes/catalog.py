"""Worked examples: diagrams with known shapings and region solutions."""

from __future__ import annotations

import numpy as np

from .biquandle import Shaping, shaping_from_b
from .diagram import Crossing, LinkDiagram, from_braid_word
from .errors import SingularTwist
from .numeric import EPS_SING

__all__ = [
    "FIGURE_EIGHT_LAMBDAS",
    "TREFOIL_REGION_ORDER",
    "figure_eight_b_values",
    "figure_eight_diagram",
    "figure_eight_shaping",
    "kink_diagram",
    "trefoil_b_values",
    "trefoil_diagram",
    "trefoil_region_abelian",
    "trefoil_region_nonabelian",
    "trefoil_shaping",
    "unknot_diagram",
]

FIGURE_EIGHT_LAMBDAS = (np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3))

# position k holds the region id (in trefoil_diagram) of the region labelled k
# in the standard picture of the trefoil's five faces
TREFOIL_REGION_ORDER = (0, 1, 2, 4, 3)


def unknot_diagram() -> LinkDiagram:
    return LinkDiagram([])


def kink_diagram(sign: int = 1) -> LinkDiagram:
    """One-crossing diagram of the unknot."""
    return LinkDiagram([Crossing(sign, 0, 1, 1, 0)])


def trefoil_diagram() -> LinkDiagram:
    """Closure of ``sigma_1^3``; segment ``k - 1`` carries ``b_k``."""
    return from_braid_word("aaa")


def trefoil_b_values(m, b1, b2, b3) -> np.ndarray:
    """Trefoil b-values; ``b1, b2, b3`` are free and fix the gauge."""
    m, b1, b2, b3 = (complex(v) for v in (m, b1, b2, b3))
    d = b1 + m * b2 - b3
    scale = max(abs(b1), abs(m * b2), abs(b3))
    if min(abs(d), abs(m * b2 - b3)) <= EPS_SING * scale:
        raise SingularTwist("trefoil closed form is singular: b1 + m b2 - b3 or m b2 - b3 vanishes")
    b4 = b1 * (m * b2 - b3) / (m * d)
    b5 = m * b1 * b2 / d
    b6 = -b1 * b3 / (m * (m * b2 - b3))
    return np.array([b1, b2, b3, b4, b5, b6])


def trefoil_shaping(m, b1=1.0, b2=1.5 - 0.5j, b3=0.5 + 1.0j,
                    diagram: LinkDiagram | None = None) -> Shaping:
    diagram = trefoil_diagram() if diagram is None else diagram
    return shaping_from_b(diagram, trefoil_b_values(m, b1, b2, b3), m)


def _place_regions(values) -> np.ndarray:
    r = np.zeros(5, dtype=complex)
    for label, rid in enumerate(TREFOIL_REGION_ORDER):
        r[rid] = values[label]
    return r


def trefoil_region_nonabelian(p, q) -> np.ndarray:
    """Region values (indexed by region id) of the nonabelian family at ``m = 1``."""
    p, q = complex(p), complex(q)
    d = 1 + q - p
    return _place_regions([1, (q - p) / d, (q - p + p * q) / d, (1 + 2 * q + p * q) / d,
                           (1 + q + p * q) / d])


def trefoil_region_abelian(p) -> np.ndarray:
    p = complex(p)
    return _place_regions([1, p, 1, 1, 2 - p])


def figure_eight_diagram() -> LinkDiagram:
    """Standard alternating diagram; segment ``k - 1`` carries ``b_k``."""
    rows = [(-1, 3, 6, 4, 7), (-1, 7, 2, 8, 3), (1, 4, 1, 5, 2), (1, 8, 5, 1, 6)]
    return LinkDiagram([Crossing(s, i1 - 1, i2 - 1, o1 - 1, o2 - 1) for s, i1, i2, o1, o2 in rows])


def figure_eight_b_values(p, q, r, Lambda) -> np.ndarray:
    """Boundary-parabolic b-values; ``Lambda`` is a primitive cube root of unity."""
    p, q, r, L = (complex(v) for v in (p, q, r, Lambda))
    return np.array([
        p * r,
        p * r * (1 + q * L),
        -p * r * L * (1 + q * L) / (1 - p),
        p * q * r / (1 - p),
        -q * r,
        r - q * r,
        -p * r * (1 - q) * L ** 2 / (1 + p * L),
        p * r / (1 + p * L),
    ])


def figure_eight_shaping(p=0.5, q=2.0, r=1.0, Lambda=FIGURE_EIGHT_LAMBDAS[0],
                         diagram: LinkDiagram | None = None) -> Shaping:
    diagram = figure_eight_diagram() if diagram is None else diagram
    return shaping_from_b(diagram, figure_eight_b_values(p, q, r, Lambda), 1.0)
