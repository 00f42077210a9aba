"""Ideal octahedra at the crossings of a shaped diagram.

Every crossing carries a twisted ideal octahedron with vertices ``P1``,
``P2`` (on the two strands) and ``P+``, ``P+'``, ``P-``, ``P-'`` (the extra
points above and below the diagram).  Its edges receive shapes from the
crossing's shapes; it can be cut into four tetrahedra around the diagonal
``P1 P2`` (governed by the b-values) or into five tetrahedra (governed by
the a-values).

Vertex names are written ``P1 P2 P+ P+' P- P-'`` throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .biquandle import CrossingShapes, Shaping
from .diagram import LinkDiagram
from .errors import DegenerateCrossing, DegenerateTetrahedron, PinchedCrossing
from .holonomy import mobius, x_minus, x_plus
from .numeric import EPS_SING, cjson, default_tol, rel_diff

__all__ = [
    "INF",
    "GluingReport",
    "OctahedronShapes",
    "TetShape",
    "bloch_wigner",
    "compare_decompositions",
    "cross_ratio",
    "decompose_crossing",
    "face_map_check",
    "octahedron_edge_shapes",
    "segment_hyperbolicity",
    "vertical_ratios",
    "verify_gluing_equations",
    "volume",
]

INF = math.inf
SHAPE_FLOOR = 1e-8


def _is_inf(z) -> bool:
    return z is None or (not isinstance(z, str) and np.isinf(complex(z)))


def cross_ratio(p0, p1, p2, p3, tol: float = 1e-12) -> complex:
    """``(p0 - p3)(p1 - p2) / ((p0 - p2)(p1 - p3))`` on the Riemann sphere.

    At most one point may be :data:`INF` (or ``None``); factors containing it
    cancel in the limit.
    """
    pts = [p0, p1, p2, p3]
    inf = [i for i, p in enumerate(pts) if _is_inf(p)]
    if len(inf) > 1:
        raise DegenerateTetrahedron("two vertices at infinity")
    finite = [complex(p) for i, p in enumerate(pts) if i not in inf]
    for u, v in itertools.combinations(finite, 2):
        if abs(u - v) <= tol * max(1.0, abs(u), abs(v)):
            raise DegenerateTetrahedron(f"coincident vertices at {u}")
    if not inf:
        q0, q1, q2, q3 = (complex(p) for p in pts)
        return (q0 - q3) * (q1 - q2) / ((q0 - q2) * (q1 - q3))
    k = inf[0]
    q = [None if i == k else complex(p) for i, p in enumerate(pts)]
    if k == 0:
        return (q[1] - q[2]) / (q[1] - q[3])
    if k == 1:
        return (q[0] - q[3]) / (q[0] - q[2])
    if k == 2:
        return (q[0] - q[3]) / (q[1] - q[3])
    return (q[1] - q[2]) / (q[0] - q[2])


def _next_shape(z: complex, sign: int) -> complex:
    return 1 / (1 - z) if sign > 0 else 1 - 1 / z


# edge (i, j) of a labeled tetrahedron -> index k of the shape z^k it carries
_EDGE_INDEX = {(0, 1): 0, (2, 3): 0, (1, 2): 1, (0, 3): 1, (0, 2): 2, (1, 3): 2}


@dataclass(frozen=True)
class TetShape:
    """A labeled ideal tetrahedron: ordered vertices, a sign and ``z^0``."""

    label: str
    sign: int
    vertices: tuple[str, str, str, str]
    z0: complex
    points: tuple | None = None

    @property
    def shapes(self) -> tuple[complex, complex, complex]:
        z1 = _next_shape(self.z0, self.sign)
        return self.z0, z1, _next_shape(z1, self.sign)

    @property
    def z1(self) -> complex:
        return self.shapes[1]

    @property
    def z2(self) -> complex:
        return self.shapes[2]

    def edge_shapes(self) -> dict[frozenset, complex]:
        z = self.shapes
        return {frozenset((self.vertices[i], self.vertices[j])): z[k]
                for (i, j), k in _EDGE_INDEX.items()}

    def is_degenerate(self, floor: float = SHAPE_FLOOR) -> bool:
        z = self.z0
        return not (abs(z) > floor and abs(z - 1) > floor and abs(z) < 1 / floor)

    def to_dict(self) -> dict:
        out = {"label": self.label, "sign": self.sign, "vertices": list(self.vertices),
               "z0": cjson(self.z0)}
        if self.points is not None:
            out["points"] = [None if _is_inf(p) else cjson(p) for p in self.points]
        return out


@dataclass(frozen=True)
class OctahedronShapes:
    o1: complex
    o2: complex
    o1p: complex
    o2p: complex
    N: complex
    W: complex
    S: complex
    E: complex

    def vertical(self) -> dict[str, complex]:
        return {"o1": self.o1, "o2": self.o2, "o1'": self.o1p, "o2'": self.o2p}

    def horizontal(self) -> dict[str, complex]:
        return {"N": self.N, "W": self.W, "S": self.S, "E": self.E}

    def to_dict(self) -> dict:
        return {k: cjson(v) for k, v in {**self.vertical(), **self.horizontal()}.items()}


def octahedron_edge_shapes(cs: CrossingShapes) -> OctahedronShapes:
    """Vertical shapes from the a-values, horizontal shapes from the b-values."""
    a1, b1, m1 = cs.chi1
    a2, b2, m2 = cs.chi2
    a2p, b2p, _ = cs.chi2p
    a1p, b1p, _ = cs.chi1p
    if cs.sign > 0:
        vert = (a1 / m1, 1 / (m2 * a2), m1 / a1p, m2 * a2p)
    else:
        vert = (1 / (m1 * a1), a2 / m2, m1 * a1p, m2 / a2p)
    return OctahedronShapes(*vert, N=b2p / b1, W=m1 * b1 / b2,
                            S=m2 * b2 / (m1 * b1p), E=b1p / (m2 * b2p))


def _edge(u: str, v: str) -> frozenset:
    return frozenset((u, v))


# Which octahedron edge carries which shape, per decomposition and sign.
# "1" marks an interior edge whose total shape must be 1; edges absent from a
# table are not fixed by any local identity.
def _expected_edges(kind: str, sign: int) -> dict[frozenset, str]:
    if kind == "four":
        q0, q1 = ("P2", "P1") if sign > 0 else ("P1", "P2")
        return {
            _edge(q0, "P+"): "o1", _edge(q1, "P-"): "o2",
            _edge(q0, "P+'"): "o1'", _edge(q1, "P-'"): "o2'",
            _edge("P-'", "P+"): "N", _edge("P-", "P+"): "W",
            _edge("P-", "P+'"): "S", _edge("P-'", "P+'"): "E",
            _edge("P1", "P2"): "1",
        }
    if sign > 0:
        vert = {_edge("P1", "P-"): "o1", _edge("P2", "P+"): "o2",
                _edge("P1", "P-'"): "o1'", _edge("P2", "P+'"): "o2'"}
        horiz = {_edge("P+'", "P-"): "N", _edge("P+", "P-'"): "S"}
    else:
        vert = {_edge("P1", "P+"): "o1", _edge("P2", "P-"): "o2",
                _edge("P1", "P+'"): "o1'", _edge("P2", "P-'"): "o2'"}
        horiz = {_edge("P+", "P-'"): "N", _edge("P+'", "P-"): "S"}
    return {**vert, **horiz, _edge("P+", "P-"): "W", _edge("P+'", "P-'"): "E",
            _edge("P+", "P+'"): "1", _edge("P-", "P-'"): "1"}


def _four_term(cs: CrossingShapes) -> list[TetShape]:
    a1, b1, m1 = cs.chi1
    a2, b2, m2 = cs.chi2
    _, b2p, _ = cs.chi2p
    _, b1p, _ = cs.chi1p
    # (label, base sign, P1 point, P2 point, bottom vertex, top vertex, z0)
    rows = [
        ("N", 1, -1 / b1, -1 / b2p, "P-'", "P+", b2p / b1),
        ("W", -1, -1 / (m1 * b1), -1 / b2, "P-", "P+", m1 * b1 / b2),
        ("S", 1, -1 / (m1 * b1p), -1 / (m2 * b2), "P-", "P+'", m2 * b2 / (m1 * b1p)),
        ("E", -1, -1 / b1p, -1 / (m2 * b2p), "P-'", "P+'", b1p / (m2 * b2p)),
    ]
    tets = []
    for label, eps, p1, p2, low, high, z0 in rows:
        # P- sits at 0 and P+ at infinity; the leading pair is ordered so that
        # the cross-ratio of the points reproduces z0
        if cs.sign > 0:
            names, pts = ("P2", "P1", low, high), (p2, p1, 0.0, INF)
        else:
            names, pts = ("P1", "P2", low, high), (p1, p2, 0.0, INF)
        tets.append(TetShape(label, eps * cs.sign, names, complex(z0), pts))
    return tets


def _five_term(cs: CrossingShapes) -> list[TetShape]:
    a1, _, m1 = cs.chi1
    a2, _, m2 = cs.chi2
    a2p = cs.chi2p.a
    a1p = cs.chi1p.a
    if cs.sign > 0:
        rows = [
            ("1", 1, ("P1", "P-", "P+", "P+'"), a1 / m1),
            ("2", 1, ("P2", "P+", "P-", "P-'"), 1 / (m2 * a2)),
            ("1'", -1, ("P1", "P-'", "P+", "P+'"), m1 / a1p),
            ("2'", -1, ("P2", "P+'", "P-", "P-'"), m2 * a2p),
            ("m", 1, ("P-", "P-'", "P+", "P+'"), a1p / a1),
        ]
    else:
        rows = [
            ("1", -1, ("P1", "P+", "P-", "P-'"), 1 / (a1 * m1)),
            ("2", -1, ("P2", "P-", "P+", "P+'"), a2 / m2),
            ("1'", 1, ("P1", "P+'", "P-", "P-'"), m1 * a1p),
            ("2'", 1, ("P2", "P-'", "P+", "P+'"), m2 / a2p),
            ("m", -1, ("P-", "P-'", "P+", "P+'"), a1 / a1p),
        ]
    return [TetShape(label, eps, verts, complex(z0)) for label, eps, verts, z0 in rows]


def decompose_crossing(cs: CrossingShapes, kind: str = "five",
                       check: bool = True) -> list[TetShape]:
    """Tetrahedra of the four-term or five-term decomposition of a crossing.

    The four-term decomposition needs a non-pinched crossing, the five-term
    one a non-degenerate crossing; ``check`` enforces this.
    """
    if kind == "four":
        if check and cs.flags().pinched:
            raise PinchedCrossing("four-term decomposition is degenerate at a pinched crossing")
        return _four_term(cs)
    if kind == "five":
        if check and rel_diff(cs.chi1.a, cs.chi1p.a) < EPS_SING:
            raise DegenerateCrossing("the five-term decomposition degenerates at a "
                                     "degenerate crossing")
        return _five_term(cs)
    raise ValueError("kind must be 'four' or 'five'")


def edge_products(tets: Iterable[TetShape]) -> dict[frozenset, complex]:
    out: dict[frozenset, complex] = {}
    for t in tets:
        for e, z in t.edge_shapes().items():
            out[e] = out.get(e, 1.0) * z
    return out


def _edge_residuals(cs: CrossingShapes, kind: str) -> tuple[dict[str, float], list[str]]:
    tets = decompose_crossing(cs, kind)
    prods = edge_products(tets)
    target = {**octahedron_edge_shapes(cs).vertical(), **octahedron_edge_shapes(cs).horizontal(),
              "1": 1.0}
    expected = _expected_edges(kind, cs.sign)
    res, uncovered = {}, []
    for e, value in prods.items():
        name = "-".join(sorted(e))
        if e in expected:
            res[f"{name}={expected[e]}"] = rel_diff(value, target[expected[e]])
        else:
            uncovered.append(name)
    return res, sorted(uncovered)


# The positive-crossing tables of the two decompositions name the octahedron
# vertices differently; this relabeling takes the four-term names to the
# five-term ones.
_FOUR_TO_FIVE_POSITIVE = {"P1": "P2", "P2": "P1", "P+": "P-", "P-": "P+",
                          "P+'": "P-'", "P-'": "P+'"}


def compare_decompositions(cs: CrossingShapes) -> float:
    """Largest disagreement between the two decompositions on shared edges.

    This also covers the four pole edges that no local identity fixes.
    """
    four = edge_products(decompose_crossing(cs, "four"))
    five = edge_products(decompose_crossing(cs, "five"))
    worst = 0.0
    for e, value in four.items():
        if cs.sign > 0:
            e = frozenset(_FOUR_TO_FIVE_POSITIVE[v] for v in e)
        if e in five:
            worst = max(worst, rel_diff(value, five[e]))
    return worst


def vertical_ratios(diagram: LinkDiagram, shaping: Shaping) -> tuple[np.ndarray, np.ndarray]:
    """Per-segment ratio of vertical shapes along each segment, and its expected value.

    ``o`` is the vertical shape where the segment leaves a crossing and ``o'``
    the one where it enters the next.  On over-over and under-under segments
    the shared edge is seen from the opposite side at the far end, so ``o'``
    is inverted there.  The ratio is ``m^2`` on over-under and under-over
    segments and 1 on the others.
    """
    ratio = np.ones(diagram.n_segments, dtype=complex)
    expected = np.ones(diagram.n_segments, dtype=complex)
    if not diagram.crossings:
        return ratio, expected
    octs = [octahedron_edge_shapes(shaping.crossing_shapes(diagram, c))
            for c in range(diagram.n_crossings)]
    for seg in range(diagram.n_segments):
        t, h = diagram.tail[seg], diagram.head[seg]
        o_tail = octs[t.crossing].o1p if t.slot == 2 else octs[t.crossing].o2p
        o_head = octs[h.crossing].o1 if h.slot == 0 else octs[h.crossing].o2
        m = shaping.m[seg]
        if diagram.segment_eta(seg) != 0:
            ratio[seg], expected[seg] = o_tail / o_head, m * m
        else:
            ratio[seg] = o_tail * o_head
    return ratio, expected


def segment_hyperbolicity(diagram: LinkDiagram, shaping: Shaping) -> np.ndarray:
    """Per-segment residual of the m-hyperbolicity condition."""
    ratio, expected = vertical_ratios(diagram, shaping)
    return np.array([rel_diff(r, e) for r, e in zip(ratio, expected)])


@dataclass
class GluingReport:
    ok: bool
    kind: str
    max_residual: float
    region_residuals: list[float]
    segment_residuals: list[float]
    edge_residuals: list[dict[str, float]]
    uncovered_edges: list[list[str]] = field(default_factory=list)
    degenerate_tetrahedra: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "kind": self.kind,
            "max_residual": self.max_residual,
            "region_residuals": self.region_residuals,
            "segment_residuals": self.segment_residuals,
            "edge_residuals": self.edge_residuals,
            "uncovered_edges": self.uncovered_edges,
            "degenerate_tetrahedra": self.degenerate_tetrahedra,
        }


def verify_gluing_equations(diagram: LinkDiagram, shaping: Shaping, kind: str = "five",
                            tol: float | None = None) -> GluingReport:
    """Region products, segment conditions and per-octahedron edge identities.

    Raises :class:`PinchedCrossing` (four-term) or :class:`DegenerateCrossing`
    (five-term) if a crossing falls outside the decomposition's domain.
    """
    tol = default_tol() if tol is None else tol
    region_prod = np.ones(diagram.n_regions, dtype=complex)
    edge_res, uncovered, degenerate = [], [], []
    for c in range(diagram.n_crossings):
        cs = shaping.crossing_shapes(diagram, c)
        octa = octahedron_edge_shapes(cs).horizontal()
        for sector, value in octa.items():
            region_prod[diagram.corner_region[(c, sector)]] *= value
        res, unc = _edge_residuals(cs, kind)
        edge_res.append(res)
        uncovered.append(unc)
        degenerate += [f"c{c}:{t.label}" for t in decompose_crossing(cs, kind, check=False)
                       if t.is_degenerate()]
    regions = np.abs(region_prod - 1).tolist() if diagram.crossings else [0.0] * diagram.n_regions
    segments = segment_hyperbolicity(diagram, shaping).tolist()
    worst = max([*regions, *segments, *(v for r in edge_res for v in r.values())], default=0.0)
    ok = worst <= tol and not degenerate
    return GluingReport(ok, kind, worst, regions, segments, edge_res, uncovered, degenerate)


def face_map_check(cs: CrossingShapes) -> dict[str, float]:
    """Check that four holonomy matrices act as the face maps of the four-term tetrahedra.

    Each map is determined by three points; the residual is the largest
    relative deviation over them.  Only positive crossings are covered.
    """
    if cs.sign < 0:
        raise ValueError("face maps are tabulated for positive crossings only")
    if cs.flags().pinched:
        raise PinchedCrossing("face maps are undefined at a pinched crossing")
    a1, b1, m1 = cs.chi1
    a2, b2, m2 = cs.chi2
    _, b2p, _ = cs.chi2p
    _, b1p, _ = cs.chi1p
    checks = {
        "x2+": (x_plus(cs.chi2), [(None, None), (-1 / b2, -1 / (m2 * b2)),
                                  (-1 / (m1 * b1), -1 / (m1 * b1p))]),
        "(x1-)^-1": (np.linalg.inv(x_minus(cs.chi1)), [(0.0, 0.0), (-1 / (m1 * b1), -1 / b1),
                                                       (-1 / b2, -1 / b2p)]),
        "x2'+": (x_plus(cs.chi2p), [(None, None), (-1 / b2p, -1 / (m2 * b2p)),
                                    (-1 / b1, -1 / b1p)]),
        "(x1'-)^-1": (np.linalg.inv(x_minus(cs.chi1p)), [(0.0, 0.0), (-1 / (m1 * b1p), -1 / b1p),
                                                         (-1 / (m2 * b2), -1 / (m2 * b2p))]),
    }
    out = {}
    for name, (mat, pairs) in checks.items():
        worst = 0.0
        for src, dst in pairs:
            img = mobius(src, mat)
            if dst is None or img is None:
                worst = max(worst, 0.0 if dst is img else float("inf"))
            else:
                worst = max(worst, abs(img - dst) / max(1.0, abs(dst)))
        out[name] = worst
    return out


def _li2_series(w: complex) -> complex:
    # Bernoulli-accelerated series in u = -log(1 - w), fine for |u| well below 2 pi
    u = -np.log(1 - w)
    total = u - u * u / 4
    power = u
    for k, b in enumerate(_BERNOULLI_EVEN, start=1):
        power = power * u * u
        term = b * power / math.factorial(2 * k + 1)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)):
            break
    return total


_BERNOULLI_EVEN = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
                   43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730, 8553103 / 6,
                   -23749461029 / 870, 8615841276005 / 14322]


def bloch_wigner(z: complex) -> float:
    """``D(z) = Im Li2(z) + arg(1 - z) log|z|``; zero on the real line."""
    z = complex(z)
    if z.imag == 0 or z == 0 or z == 1:
        return 0.0
    # D is invariant up to sign under the anharmonic group; move z to the
    # image closest to 0, where the series converges fast
    images = [(z, 1), (1 / z, -1), (1 - z, -1), (1 / (1 - z), 1), (1 - 1 / z, 1), (z / (z - 1), -1)]
    w, sgn = min(images, key=lambda t: abs(t[0]))
    li2 = _li2_series(w)
    return sgn * (li2.imag + np.angle(1 - w) * np.log(abs(w)))


def volume(diagram: LinkDiagram, shaping: Shaping, kind: str = "five") -> float:
    """Sum of Bloch-Wigner values of the shapes ``z0`` over all tetrahedra.

    ``z0`` already carries the tetrahedron's sign, so each term is the
    oriented volume of that tetrahedron.
    """
    total = 0.0
    for c in range(diagram.n_crossings):
        for t in decompose_crossing(shaping.crossing_shapes(diagram, c), kind):
            if t.is_degenerate():
                raise DegenerateTetrahedron(f"tetrahedron {t.label} at crossing {c} is degenerate")
            total += bloch_wigner(t.z0)
    return float(total)


def tetrahedra(diagram: LinkDiagram, shaping: Shaping, kind: str = "five") -> list[dict]:
    """All tetrahedra as JSON-ready records."""
    out = []
    for c in range(diagram.n_crossings):
        for t in decompose_crossing(shaping.crossing_shapes(diagram, c), kind):
            out.append({"crossing": c, **t.to_dict()})
    return out
