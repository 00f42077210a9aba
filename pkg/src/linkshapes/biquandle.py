"""Shapes, the shape biquandle and shapings of a diagram.

A shape is a triple ``(a, b, m)`` of nonzero complex numbers attached to a
segment.  At a crossing with incoming shapes ``chi1`` (top-left) and ``chi2``
(bottom-left) the braiding returns ``(chi2', chi1')``, the shapes of the
top-right and bottom-right segments.  The positive map is used when strand 1
passes over strand 2, the inverse map otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .diagram import LinkDiagram
from .errors import (InconsistentCrossing, InconsistentPropagation, PinchedCrossing,
                     SingularBraiding)
from .numeric import EPS_SING, cjson, default_tol, from_cjson, rel_diff

__all__ = [
    "CrossingFlags",
    "CrossingShapes",
    "Shape",
    "Shaping",
    "ShapingReport",
    "a_from_b",
    "b_ratios_from_a",
    "braid",
    "braid_arrays",
    "crossing_flags",
    "pinch_residuals",
    "shaping_from_b",
    "verify_shaping",
]


@dataclass(frozen=True)
class Shape:
    a: complex
    b: complex
    m: complex

    def __post_init__(self):
        for name in ("a", "b", "m"):
            v = complex(getattr(self, name))
            if v == 0 or not np.isfinite(v):
                raise ValueError(f"shape coordinate {name} must be finite and nonzero")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.a, self.b, self.m))

    def to_dict(self) -> dict:
        return {"a": cjson(self.a), "b": cjson(self.b), "m": cjson(self.m)}

    @classmethod
    def from_dict(cls, d) -> "Shape":
        return cls(from_cjson(d["a"]), from_cjson(d["b"]), from_cjson(d["m"]))


def braid_arrays(sign: int, a1, b1, m1, a2, b2, m2):
    """Vectorised braiding without singularity checks.

    Returns ``(a2p, b2p, a1p, b1p, A)`` where ``A`` is the factor relating
    ``a1' = a1 / A`` and ``a2' = a2 * A``.
    """
    if sign > 0:
        A = 1 - (m1 * b1 / b2) * (1 - a1 / m1) * (1 - 1 / (m2 * a2))
        b1p = (m2 * b2 / m1) / (1 - m2 * a2 * (1 - b2 / (m1 * b1)))
        b2p = b1 * (1 - (m1 / a1) * (1 - b2 / (m1 * b1)))
    else:
        A = 1 - (b2 / (m1 * b1)) * (1 - m1 * a1) * (1 - m2 / a2)
        b1p = (m2 * b2 / m1) * (1 - (a2 / m2) * (1 - m1 * b1 / b2))
        b2p = b1 / (1 - (1 / (m1 * a1)) * (1 - m1 * b1 / b2))
    return a2 * A, b2p, a1 / A, b1p, A


def braid(sign: int, chi1: Shape, chi2: Shape, eps: float = EPS_SING) -> tuple[Shape, Shape]:
    """Apply the positive braiding (``sign=+1``) or its inverse to a pair.

    Returns ``(chi2', chi1')``; strand 1 keeps ``m1`` and strand 2 keeps
    ``m2``.  Raises :class:`SingularBraiding` when a denominator or an
    output coordinate vanishes to within ``eps``.
    """
    # numpy scalars so that a zero denominator yields inf instead of raising
    a1, b1, m1 = (np.complex128(v) for v in chi1)
    a2, b2, m2 = (np.complex128(v) for v in chi2)
    if sign > 0:
        dens = [1 - m2 * a2 * (1 - b2 / (m1 * b1))]
    else:
        dens = [1 - (1 / (m1 * a1)) * (1 - m1 * b1 / b2)]
    with np.errstate(all="ignore"):
        a2p, b2p, a1p, b1p, A = braid_arrays(sign, a1, b1, m1, a2, b2, m2)
    if abs(A) < eps or any(abs(d) < eps for d in dens):
        raise SingularBraiding("braiding denominator vanishes")
    if abs(b1p) < eps * abs(b2) or abs(b2p) < eps * abs(b1):
        raise SingularBraiding("braiding output has a vanishing b coordinate")
    if not all(np.isfinite(v) for v in (a1p, a2p, b1p, b2p)):
        raise SingularBraiding("braiding output is not finite")
    return Shape(a2p, b2p, m2), Shape(a1p, b1p, m1)


def pinch_residuals(chi1: Shape, chi2: Shape, chi2p: Shape, chi1p: Shape) -> np.ndarray:
    """Relative residuals of the four pinch equations at a crossing."""
    m1, m2 = chi1.m, chi2.m
    pairs = [
        (chi2.b, m1 * chi1.b),
        (m2 * chi2.b, m1 * chi1p.b),
        (chi2p.b, chi1.b),
        (m2 * chi2p.b, chi1p.b),
    ]
    return np.array([rel_diff(x, y) for x, y in pairs])


@dataclass(frozen=True)
class CrossingFlags:
    pinched: bool
    degenerate: bool
    pinch_residuals: tuple[float, ...]
    degeneracy_residual: float


def crossing_flags(chi1: Shape, chi2: Shape, chi2p: Shape, chi1p: Shape,
                   tol: float = EPS_SING) -> CrossingFlags:
    """Classify a braided crossing as pinched and/or degenerate.

    The four pinch equations hold together on any braided quadruple; a split
    verdict raises :class:`InconsistentCrossing`.
    """
    res = pinch_residuals(chi1, chi2, chi2p, chi1p)
    hits = res < tol
    if hits.any() and not hits.all():
        raise InconsistentCrossing(f"pinch equations disagree: residuals {res.tolist()}")
    degen = rel_diff(chi1.a, chi1p.a)
    return CrossingFlags(bool(hits.all()), bool(degen < tol), tuple(res.tolist()), degen)


def a_from_b(sign: int, b1, b2, b2p, b1p, m1, m2, eps: float = EPS_SING):
    """Recover ``(a1, a2, a1', a2')`` from the four b-values of a crossing.

    Only defined away from pinched crossings.
    """
    if not all(np.all(np.isfinite(v)) for v in (b1, b2, b2p, b1p, m1, m2)):
        raise PinchedCrossing("b-values must be finite")
    d1 = b2 - m1 * b1
    d2 = b2p - b1
    d3 = m2 * b2p - b1p
    if min(abs(d1) / max(abs(b2), 1e-300), abs(d2) / max(abs(b1), 1e-300),
           abs(d3) / max(abs(b1p), 1e-300)) < eps:
        raise PinchedCrossing("a-values are undetermined at a pinched crossing")
    n_top = m2 * b2 - m1 * b1p
    if sign > 0:
        a1 = d1 / d2
        a1p = n_top / d3
        a2 = (b1 / (m2 * b1p)) * n_top / d1
        a2p = (b1 / (m2 * b1p)) * d3 / d2
    else:
        k = b2p / (m1 * b2)
        a1 = k * d1 / d2
        a1p = k * n_top / d3
        a2 = n_top / d1
        a2p = d3 / d2
    return a1, a2, a1p, a2p


def b_ratios_from_a(sign: int, a1, a2, a1p, a2p, m1, m2) -> dict[str, complex]:
    """The four b-ratios of a crossing expressed through its a-values.

    Keys are the sectors: ``W = b2/(m1 b1)``, ``E = m2 b2'/b1'``,
    ``N = b1/b2'`` and ``S = m1 b1'/(m2 b2)``.
    """
    if sign > 0:
        return {
            "W": (1 - a1 / m1) * (1 - 1 / (m2 * a2)) / (1 - a1 / a1p),
            "E": (1 - m1 / a1p) * (1 - m2 * a2p) / (1 - a1 / a1p),
            "N": (1 - a1p / a1) / ((1 - m1 / a1) * (1 - 1 / (m2 * a2p))),
            "S": (1 - a1p / a1) / ((1 - a1p / m1) * (1 - m2 * a2)),
        }
    return {
        "W": (1 - a1 / a1p) / ((1 - a1 * m1) * (1 - m2 / a2)),
        "E": (1 - a1 / a1p) / ((1 - 1 / (m1 * a1p)) * (1 - a2p / m2)),
        "N": (1 - 1 / (m1 * a1)) * (1 - m2 / a2p) / (1 - a1p / a1),
        "S": (1 - m1 * a1p) * (1 - a2 / m2) / (1 - a1p / a1),
    }


class CrossingShapes(NamedTuple):
    """The four shapes around one crossing together with its sign."""

    sign: int
    chi1: Shape
    chi2: Shape
    chi2p: Shape
    chi1p: Shape

    def flags(self, tol: float = EPS_SING) -> CrossingFlags:
        return crossing_flags(self.chi1, self.chi2, self.chi2p, self.chi1p, tol)


class Shaping:
    """Shapes on every segment of a diagram, stored as complex arrays."""

    def __init__(self, a, b, m):
        self.a = np.asarray(a, dtype=complex).copy()
        self.b = np.asarray(b, dtype=complex).copy()
        self.m = np.asarray(m, dtype=complex).copy()
        if not (self.a.shape == self.b.shape == self.m.shape) or self.a.ndim != 1:
            raise ValueError("a, b and m must be 1-d arrays of equal length")

    @classmethod
    def from_shapes(cls, shapes: Sequence[Shape]) -> "Shaping":
        return cls([s.a for s in shapes], [s.b for s in shapes], [s.m for s in shapes])

    def __len__(self):
        return len(self.a)

    def __getitem__(self, seg: int) -> Shape:
        return Shape(self.a[seg], self.b[seg], self.m[seg])

    def shapes(self) -> list[Shape]:
        return [self[k] for k in range(len(self))]

    def crossing(self, diagram: LinkDiagram, c: int) -> tuple[Shape, Shape, Shape, Shape]:
        """Shapes ``(chi1, chi2, chi2', chi1')`` around crossing ``c``."""
        x = diagram.crossings[c]
        return self[x.in1], self[x.in2], self[x.out2], self[x.out1]

    def crossing_shapes(self, diagram: LinkDiagram, c: int) -> CrossingShapes:
        return CrossingShapes(diagram.crossings[c].sign, *self.crossing(diagram, c))

    def component_m(self, diagram: LinkDiagram) -> np.ndarray:
        return np.array([self.m[comp[0]] for comp in diagram.components])

    def to_dict(self) -> dict:
        return {"segments": [s.to_dict() for s in self.shapes()]}

    @classmethod
    def from_dict(cls, d) -> "Shaping":
        items = d["segments"] if isinstance(d, dict) else d
        return cls.from_shapes([Shape.from_dict(s) for s in items])

    def __repr__(self):
        return f"Shaping(segments={len(self)})"


def _segment_m(diagram: LinkDiagram, m) -> np.ndarray:
    m_arr = np.atleast_1d(np.asarray(m, dtype=complex))
    if m_arr.size == 1:
        m_arr = np.repeat(m_arr, diagram.n_components)
    if m_arr.size != diagram.n_components:
        raise ValueError(f"need one m per component ({diagram.n_components}), got {m_arr.size}")
    return m_arr[list(diagram.component_of)]


def shaping_from_b(diagram: LinkDiagram, b, m, tol: float | None = None,
                   check: bool = True) -> Shaping:
    """Complete b-values to a shaping by solving for the a-values.

    Each segment receives an a-value at both of its ends; with ``check`` the
    two must agree to ``tol`` or :class:`InconsistentPropagation` is raised.
    """
    tol = default_tol() if tol is None else tol
    b = np.asarray(b, dtype=complex)
    ms = _segment_m(diagram, m)
    if not diagram.crossings:
        return Shaping(ms.copy(), b, ms)
    at_head = np.zeros(diagram.n_segments, dtype=complex)
    at_tail = np.zeros(diagram.n_segments, dtype=complex)
    zero = np.flatnonzero(~(np.abs(b) > EPS_SING * max(1.0, float(np.abs(b).max()))))
    if zero.size:
        raise PinchedCrossing(f"b-value of segment {int(zero[0])} vanishes")
    for c, x in enumerate(diagram.crossings):
        try:
            a1, a2, a1p, a2p = a_from_b(x.sign, b[x.in1], b[x.in2], b[x.out2], b[x.out1],
                                        ms[x.in1], ms[x.in2])
        except PinchedCrossing as exc:
            raise PinchedCrossing(f"crossing {c}: {exc}") from None
        at_head[x.in1], at_head[x.in2] = a1, a2
        at_tail[x.out1], at_tail[x.out2] = a1p, a2p
    if check:
        err = rel_diff(at_head, at_tail)
        if err > tol:
            raise InconsistentPropagation(f"segment a-values disagree (relative {err:.3g})")
    return Shaping(at_head, b, ms)


@dataclass
class ShapingReport:
    ok: bool
    max_residual: float
    crossing_residuals: list[float]
    m_residual: float
    pinched: list[bool]
    degenerate: list[bool]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "max_residual": self.max_residual,
            "crossing_residuals": self.crossing_residuals,
            "m_residual": self.m_residual,
            "pinched": self.pinched,
            "degenerate": self.degenerate,
        }


def verify_shaping(diagram: LinkDiagram, shaping: Shaping,
                   tol: float | None = None) -> ShapingReport:
    """Check the braiding relation at every crossing and constancy of m."""
    tol = default_tol() if tol is None else tol
    m_res = 0.0
    for comp in diagram.components:
        m_res = max(m_res, rel_diff(shaping.m[list(comp)], shaping.m[comp[0]]))
    residuals, pinched, degenerate = [], [], []
    for c, x in enumerate(diagram.crossings):
        chi1, chi2, chi2p, chi1p = shaping.crossing(diagram, c)
        try:
            out2, out1 = braid(x.sign, chi1, chi2, eps=0.0)
            res = rel_diff([out2.a, out2.b, out1.a, out1.b],
                           [chi2p.a, chi2p.b, chi1p.a, chi1p.b])
        except (SingularBraiding, ValueError, ZeroDivisionError):
            res = float("inf")
        residuals.append(res)
        try:
            flags = crossing_flags(chi1, chi2, chi2p, chi1p)
            pinched.append(flags.pinched)
            degenerate.append(flags.degenerate)
        except InconsistentCrossing:
            pinched.append(False)
            degenerate.append(False)
    worst = max(residuals + [m_res], default=0.0)
    return ShapingReport(worst <= tol, worst, residuals, m_res, pinched, degenerate)
