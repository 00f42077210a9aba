"""Polynomial systems whose solutions are shapings of a diagram.

Two systems are produced:

* the **b-system**, with one unknown per segment.  The a-value of a segment
  is computed from the b-values at both of its end crossings and the two
  results are equated (denominators cleared);
* the **a-system**, with one unknown per region.  Every region contributes
  the equation "product of corner terms = 1".

Both are returned as :class:`RationalSystem` objects carrying the
non-degeneracy guards that separate genuine solutions from points where a
cleared denominator vanished.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .biquandle import Shaping, _segment_m
from .diagram import CORNERS, LinkDiagram
from .errors import InconsistentPropagation, InvalidDiagram
from .numeric import EPS_SING, cjson, default_tol, from_cjson, rel_diff
from .polynomial import CompiledSystem, Poly

__all__ = [
    "GAUGE_VALUES",
    "Guard",
    "RationalSystem",
    "build_a_system",
    "build_b_system",
    "build_lifted_b_system",
    "corner_terms",
    "gauge_candidates",
    "region_residuals",
    "regions_from_shaping",
    "shaping_from_regions",
]

# Generic values for the three gauge-fixed b's, chosen away from any pinch
# locus for real or small-integer m.
GAUGE_VALUES = (1.0 + 0.0j, 1.7 + 0.6j, 0.4 - 1.3j)


@dataclass
class Guard:
    """Non-degeneracy condition ``lhs != rhs`` (or ``lhs != 0``)."""

    name: str
    lhs: Poly
    rhs: Poly | None = None

    def separation(self, x) -> float:
        u = self.lhs(x)
        if self.rhs is None:
            return abs(u)
        v = self.rhs(x)
        scale = max(abs(u), abs(v), 1e-300)
        return abs(u - v) / scale

    def substitute(self, values, keep) -> "Guard":
        rhs = None if self.rhs is None else self.rhs.substitute(values, keep)
        return Guard(self.name, self.lhs.substitute(values, keep), rhs)

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs.to_list(),
                "rhs": None if self.rhs is None else self.rhs.to_list()}


@dataclass
class RationalSystem:
    """Cleared-denominator equations in the free variables plus guards."""

    kind: str
    variables: list[str]
    equations: list[Poly]
    guards: list[Guard]
    fixed: dict[str, complex] = field(default_factory=dict)
    all_variables: list[str] = field(default_factory=list)
    isolated: bool = True
    m: list[complex] | None = None
    _compiled: CompiledSystem | None = field(default=None, repr=False, compare=False)
    _guard_compiled: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def compiled(self) -> CompiledSystem:
        if self._compiled is None:
            self._compiled = CompiledSystem(self.equations, self.n_vars)
        return self._compiled

    def residuals(self, x) -> np.ndarray:
        return self.compiled.values(x)

    def jacobian(self, x) -> np.ndarray:
        return self.compiled.jacobian(x)

    def guard_separations(self, x) -> np.ndarray:
        """Vectorised :meth:`Guard.separation` over all guards."""
        if not self.guards:
            return np.zeros(0)
        if self._guard_compiled is None:
            zero = Poly(self.n_vars)
            self._guard_compiled = (
                CompiledSystem([g.lhs for g in self.guards], self.n_vars),
                CompiledSystem([zero if g.rhs is None else g.rhs for g in self.guards],
                               self.n_vars),
                np.array([g.rhs is not None for g in self.guards]),
            )
        lhs, rhs, two_sided = self._guard_compiled
        u, v = lhs.values(x), rhs.values(x)
        scale = np.maximum(np.maximum(np.abs(u), np.abs(v)), 1e-300)
        return np.where(two_sided, np.abs(u - v) / scale, np.abs(u))

    def full_point(self, x) -> dict[str, complex]:
        out = dict(self.fixed)
        out.update({name: complex(v) for name, v in zip(self.variables, x)})
        return {name: out[name] for name in self.all_variables}

    def free_point(self, values: dict[str, complex]) -> np.ndarray:
        return np.array([values[name] for name in self.variables], dtype=complex)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "variables": self.variables,
            "all_variables": self.all_variables,
            "fixed": {k: cjson(v) for k, v in self.fixed.items()},
            "isolated": self.isolated,
            "m": None if self.m is None else [cjson(v) for v in self.m],
            "equations": [p.to_list() for p in self.equations],
            "guards": [g.to_dict() for g in self.guards],
        }

    def to_json(self) -> str:
        # json writes floats with repr, the shortest string that round-trips
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d) -> "RationalSystem":
        n = len(d["variables"])
        guards = [Guard(g["name"], Poly.from_list(n, g["lhs"]),
                        None if g["rhs"] is None else Poly.from_list(n, g["rhs"]))
                  for g in d["guards"]]
        return cls(
            kind=d["kind"],
            variables=list(d["variables"]),
            equations=[Poly.from_list(n, p) for p in d["equations"]],
            guards=guards,
            fixed={k: from_cjson(v) for k, v in d["fixed"].items()},
            all_variables=list(d["all_variables"]),
            isolated=bool(d["isolated"]),
            m=None if d["m"] is None else [from_cjson(v) for v in d["m"]],
        )

    @classmethod
    def from_json(cls, text: str) -> "RationalSystem":
        return cls.from_dict(json.loads(text))


def _reduce(kind, names, equations, guards, fixed_idx: dict[int, complex], isolated, m):
    keep = [i for i in range(len(names)) if i not in fixed_idx]
    eqs = [p.substitute(fixed_idx, keep) for p in equations]
    eqs = [p for p in eqs if not p.is_zero()]
    return RationalSystem(
        kind=kind,
        variables=[names[i] for i in keep],
        equations=eqs,
        guards=[g.substitute(fixed_idx, keep) for g in guards],
        fixed={names[i]: complex(v) for i, v in fixed_idx.items()},
        all_variables=list(names),
        isolated=isolated,
        m=m,
    )


# -- b-system ---------------------------------------------------------------

def gauge_candidates(diagram: LinkDiagram) -> list[tuple[int, int, int]]:
    """Triples of segments to gauge-fix, most preferred first.

    For each crossing the two incoming segments and the top outgoing one.
    """
    out = []
    for x in diagram.crossings:
        triple = (x.in1, x.in2, x.out2)
        if len(set(triple)) == 3 and triple not in out:
            out.append(triple)
    if not out and diagram.n_segments >= 3:
        out.append((0, 1, 2))
    return out


def _a_fraction(sign, b1, b2, b2p, b1p, m1, m2):
    """(numerator, denominator) of (a1, a2, a1', a2') as polynomials."""
    d1 = b2 - m1 * b1
    d2 = b2p - b1
    d3 = m2 * b2p - b1p
    top = m2 * b2 - m1 * b1p
    if sign > 0:
        return [(d1, d2), (b1 * top, m2 * b1p * d1), (top, d3), (b1 * d3, m2 * b1p * d2)]
    return [(b2p * d1, m1 * b2 * d2), (top, d1), (b2p * top, m1 * b2 * d3), (d3, d2)]


def build_b_system(diagram: LinkDiagram, m=None, gauge: Sequence[int] | None = None,
                   gauge_values: Sequence[complex] = GAUGE_VALUES) -> RationalSystem:
    """Segment equations in the b-variables.

    Parameters
    ----------
    m : complex, sequence of complex or None
        Meridian eigenvalue per component.  ``None`` makes every ``m_j`` an
        unknown; that mode is exploratory and produces a positive-dimensional
        solution set.
    gauge : three segment ids, optional
        Segments whose b-values are fixed to ``gauge_values``; defaults to
        the first of :func:`gauge_candidates`.
    """
    s = diagram.n_segments
    k = diagram.n_components
    m_free = m is None
    names = [f"b{j}" for j in range(s)] + ([f"m{j}" for j in range(k)] if m_free else [])
    n = len(names)
    b = [Poly.var(n, j) for j in range(s)]
    if m_free:
        mvals = None
        m_comp = [Poly.var(n, s + j) for j in range(k)]
    else:
        mvals = [complex(v) for v in np.broadcast_to(np.asarray(m, dtype=complex), (k,))]
        m_comp = [Poly.const(n, v) for v in mvals]
    m_seg = [m_comp[diagram.component_of[j]] for j in range(s)]

    head: list = [None] * s
    tail: list = [None] * s
    guards = []
    for c, x in enumerate(diagram.crossings):
        m1, m2 = m_seg[x.in1], m_seg[x.in2]
        b1, b2, b2p, b1p = b[x.in1], b[x.in2], b[x.out2], b[x.out1]
        fr = _a_fraction(x.sign, b1, b2, b2p, b1p, m1, m2)
        head[x.in1], head[x.in2], tail[x.out1], tail[x.out2] = fr
        guards += [
            Guard(f"pinch c{c}: b2 = m1 b1", b2, m1 * b1),
            Guard(f"pinch c{c}: b2' = b1", b2p, b1),
            Guard(f"pinch c{c}: m2 b2' = b1'", m2 * b2p, b1p),
            Guard(f"pinch c{c}: m2 b2 = m1 b1'", m2 * b2, m1 * b1p),
        ]
    guards += [Guard(f"b{j} != 0", b[j]) for j in range(s)]
    if m_free:
        guards += [Guard(f"m{j} != 0", m_comp[j]) for j in range(k)]
    equations = []
    if diagram.crossings:
        for j in range(s):
            (nt, dt), (nh, dh) = tail[j], head[j]
            equations.append(nt * dh - nh * dt)

    if gauge is None:
        cands = gauge_candidates(diagram)
        gauge = cands[0] if cands else tuple(range(min(3, s)))
    gauge = tuple(gauge)
    if len(set(gauge)) != len(gauge) or any(not 0 <= g < s for g in gauge):
        raise InvalidDiagram(f"bad gauge segments {gauge}")
    fixed = {g: complex(v) for g, v in zip(gauge, gauge_values)}
    return _reduce("b", names, equations, guards, fixed, isolated=not m_free, m=mvals)


def build_lifted_b_system(diagram: LinkDiagram, m, gauge: Sequence[int] | None = None,
                          gauge_values: Sequence[complex] = GAUGE_VALUES) -> RationalSystem:
    """The b-system with the a-values kept as auxiliary unknowns.

    Every segment contributes ``a * den - num = 0`` at both of its ends, so
    eliminating ``a`` gives back :func:`build_b_system`.  The equations
    have much lower degree, which makes Newton iteration from random starts
    converge far more often.
    """
    s = diagram.n_segments
    k = diagram.n_components
    names = [f"b{j}" for j in range(s)] + [f"a{j}" for j in range(s)]
    n = len(names)
    b = [Poly.var(n, j) for j in range(s)]
    a = [Poly.var(n, s + j) for j in range(s)]
    mvals = [complex(v) for v in np.broadcast_to(np.asarray(m, dtype=complex), (k,))]
    m_seg = [Poly.const(n, mvals[diagram.component_of[j]]) for j in range(s)]
    equations, guards = [], []
    for c, x in enumerate(diagram.crossings):
        m1, m2 = m_seg[x.in1], m_seg[x.in2]
        b1, b2, b2p, b1p = b[x.in1], b[x.in2], b[x.out2], b[x.out1]
        fr = _a_fraction(x.sign, b1, b2, b2p, b1p, m1, m2)
        for seg, (num, den) in zip((x.in1, x.in2, x.out1, x.out2), fr):
            equations.append(a[seg] * den - num)
        guards += [
            Guard(f"pinch c{c}: b2 = m1 b1", b2, m1 * b1),
            Guard(f"pinch c{c}: b2' = b1", b2p, b1),
            Guard(f"pinch c{c}: m2 b2' = b1'", m2 * b2p, b1p),
            Guard(f"pinch c{c}: m2 b2 = m1 b1'", m2 * b2, m1 * b1p),
        ]
    guards += [Guard(f"b{j} != 0", b[j]) for j in range(s)]
    guards += [Guard(f"a{j} != 0", a[j]) for j in range(s)]
    if gauge is None:
        cands = gauge_candidates(diagram)
        gauge = cands[0] if cands else tuple(range(min(3, s)))
    gauge = tuple(gauge)
    if len(set(gauge)) != len(gauge) or any(not 0 <= g < s for g in gauge):
        raise InvalidDiagram(f"bad gauge segments {gauge}")
    fixed = {g: complex(v) for g, v in zip(gauge, gauge_values)}
    return _reduce("ab", names, equations, guards, fixed, isolated=True, m=mvals)


# -- a-system ---------------------------------------------------------------

def _corner_factors(sign, rN, rW, rS, rE, m1, m2):
    """Corner terms as (numerator factors, denominator factors) per sector."""
    if sign > 0:
        return {
            "N": ([rW * rE - rN * rS], [rW - m1 * rN, rE - rN * (1 / m2)]),
            "W": ([rN - rW * (1 / m1), rS - rW * (1 / m2)], [rN * rS - rW * rE]),
            "S": ([rW * rE - rN * rS], [rE - rS * (1 / m1), rW - m2 * rS]),
            "E": ([rS - m1 * rE, rN - m2 * rE], [rN * rS - rW * rE]),
        }
    return {
        "N": ([rW - rN * (1 / m1), rE - m2 * rN], [rW * rE - rN * rS]),
        "W": ([rN * rS - rW * rE], [rN - m1 * rW, rS - m2 * rW]),
        "S": ([rE - m1 * rS, rW - rS * (1 / m2)], [rW * rE - rN * rS]),
        "E": ([rN * rS - rW * rE], [rS - rE * (1 / m1), rN - rE * (1 / m2)]),
    }


def _crossing_regions(diagram: LinkDiagram, c: int) -> tuple[int, int, int, int]:
    reg = diagram.corner_region
    return reg[(c, "N")], reg[(c, "W")], reg[(c, "S")], reg[(c, "E")]


def _crossing_m(diagram: LinkDiagram, c: int, m_comp) -> tuple:
    j1, j2 = diagram.strand_components(c)
    return m_comp[j1], m_comp[j2]


def build_a_system(diagram: LinkDiagram, m) -> RationalSystem:
    """Region equations with the unbounded region fixed to 1."""
    k = diagram.n_components
    mvals = [complex(v) for v in np.broadcast_to(np.asarray(m, dtype=complex), (k,))]
    n = diagram.n_regions
    names = [f"r{j}" for j in range(n)]
    r = [Poly.var(n, j) for j in range(n)]
    num = [Poly.const(n, 1) for _ in range(n)]
    den = [Poly.const(n, 1) for _ in range(n)]
    guards = []
    for c, x in enumerate(diagram.crossings):
        iN, iW, iS, iE = _crossing_regions(diagram, c)
        m1, m2 = _crossing_m(diagram, c, mvals)
        factors = _corner_factors(x.sign, r[iN], r[iW], r[iS], r[iE], m1, m2)
        for sector in CORNERS:
            rid = diagram.corner_region[(c, sector)]
            nf, df = factors[sector]
            for f in nf:
                num[rid] = num[rid] * f
            for f in df:
                den[rid] = den[rid] * f
        guards.append(Guard(f"degenerate c{c}: rW rE = rN rS", r[iW] * r[iE], r[iN] * r[iS]))
        for sector in ("N", "S") if x.sign > 0 else ("W", "E"):
            for f in factors[sector][1]:
                guards.append(Guard(f"corner c{c}{sector} denominator", f))
        for sector in ("W", "E") if x.sign > 0 else ("N", "S"):
            for f in factors[sector][0]:
                guards.append(Guard(f"corner c{c}{sector} numerator", f))
    guards += [Guard(f"r{j} != 0", r[j]) for j in range(n)]
    equations = [num[j] - den[j] for j in range(n)] if diagram.crossings else []
    fixed = {diagram.unbounded_region: 1.0}
    return _reduce("a", names, equations, guards, fixed, isolated=False, m=mvals)


def corner_terms(diagram: LinkDiagram, r, m) -> dict[tuple[int, str], complex]:
    """Numerical corner terms for region values ``r`` (one per region)."""
    r = np.asarray(r, dtype=complex)
    k = diagram.n_components
    mvals = np.broadcast_to(np.asarray(m, dtype=complex), (k,))
    out = {}
    for c, x in enumerate(diagram.crossings):
        iN, iW, iS, iE = _crossing_regions(diagram, c)
        m1, m2 = _crossing_m(diagram, c, mvals)
        factors = _corner_factors(x.sign, r[iN], r[iW], r[iS], r[iE], m1, m2)
        for sector, (nf, df) in factors.items():
            out[(c, sector)] = np.prod(nf) / np.prod(df)
    return out


def region_residuals(diagram: LinkDiagram, r, m) -> np.ndarray:
    """``|prod of corner terms - 1|`` for every region."""
    terms = corner_terms(diagram, r, m)
    out = np.ones(diagram.n_regions, dtype=complex)
    for (c, sector), v in terms.items():
        out[diagram.corner_region[(c, sector)]] *= v
    return np.abs(out - 1)


def shaping_from_regions(diagram: LinkDiagram, r, m, b_seed: complex = 1.0,
                         tol: float | None = None) -> Shaping:
    """Lift region values to a shaping.

    The a-value of a segment is ``r(right) / r(left)``; b-values are
    propagated from ``b_seed`` on segment 0 using the corner terms, which
    are the b-ratios of each crossing.
    """
    tol = default_tol() if tol is None else tol
    r = np.asarray(r, dtype=complex)
    ms = _segment_m(diagram, m)
    a = np.array([r[diagram.right_region[j]] / r[diagram.left_region[j]]
                  for j in range(diagram.n_segments)])
    if not diagram.crossings:
        return Shaping(a, [b_seed], ms)
    terms = corner_terms(diagram, r, [ms[comp[0]] for comp in diagram.components])
    local = []
    for c, x in enumerate(diagram.crossings):
        m1, m2 = ms[x.in1], ms[x.in2]
        fN, fW, fS, fE = (terms[(c, s)] for s in ("N", "W", "S", "E"))
        l1 = 1.0
        l2 = fW * m1 * l1
        l2p = l1 / fN
        l1p = fS * m2 * l2 / m1
        err = rel_diff(m2 * l2p / l1p, fE)
        if err > tol:
            raise InconsistentPropagation(f"corner terms at crossing {c} are inconsistent "
                                          f"(relative {err:.3g})")
        local.append({x.in1: l1, x.in2: l2, x.out2: l2p, x.out1: l1p})
    b = np.full(diagram.n_segments, np.nan + 0j)
    b[0] = b_seed
    touching = [[] for _ in range(diagram.n_segments)]
    for c, x in enumerate(diagram.crossings):
        for seg in x.slots:
            touching[seg].append(c)
    stack = [0]
    while stack:
        seg = stack.pop()
        for c in touching[seg]:
            scale = b[seg] / local[c][seg]
            for other, rel in local[c].items():
                value = scale * rel
                if np.isnan(b[other]):
                    b[other] = value
                    stack.append(other)
                elif rel_diff(b[other], value) > tol:
                    raise InconsistentPropagation(f"b-value of segment {other} does not "
                                                  "close up")
    return Shaping(a, b, ms)


def regions_from_shaping(diagram: LinkDiagram, shaping: Shaping,
                         tol: float | None = None) -> np.ndarray:
    """Region values with the unbounded region set to 1."""
    tol = default_tol() if tol is None else tol
    r = np.full(diagram.n_regions, np.nan + 0j)
    r[diagram.unbounded_region] = 1.0
    stack = [diagram.unbounded_region]
    while stack:
        reg = stack.pop()
        for seg, other, direction in diagram.region_neighbours(reg):
            value = r[reg] * shaping.a[seg] ** direction
            if np.isnan(r[other]):
                r[other] = value
                stack.append(other)
            elif rel_diff(r[other], value) > tol:
                raise InconsistentPropagation(f"region {other} receives inconsistent values")
    return r
