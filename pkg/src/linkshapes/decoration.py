"""Meridian and longitude eigenvalues of a shaped diagram.

For component ``j`` the meridian eigenvalue is ``m_j`` and the longitude
eigenvalue is ``m_j^(-w_j) * prod_k b_k^eta_k`` over the component's
segments, where ``eta_k`` is +1 on over-under segments, -1 on under-over
segments and 0 otherwise.  The cusp holonomies of the small curves around
each crossing give an independent route to the square of that number.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .biquandle import CrossingShapes, Shaping
from .diagram import LinkDiagram
from .errors import DegenerateCrossing
from .holonomy import evaluate_path, longitude_word, meridian_loop
from .numeric import EPS_SING, cjson, default_tol, rel_diff

__all__ = [
    "CURVES",
    "ComponentDecoration",
    "EigenDecoration",
    "blackboard_longitude_holonomy",
    "cusp_curve_holonomy",
    "eigenvalue_decoration",
    "longitude_eigenvalue",
    "segment_eta",
]

PARABOLIC_TOL = 1e-6
CURVES = ("sigma+", "sigma-", "tau+", "tau-", "beta+", "beta-")


def segment_eta(diagram: LinkDiagram, seg: int) -> int:
    return diagram.segment_eta(seg)


def cusp_curve_holonomy(cs: CrossingShapes, curve: str, check: bool = True) -> complex:
    """Holonomy of one of the short cusp curves at a crossing.

    ``sigma`` and ``tau`` run across the vertical edges where the over
    (``+``) or under (``-``) strand enters and leaves; ``beta`` follows
    the over or under strand through the crossing.
    """
    if curve not in CURVES:
        raise ValueError(f"curve must be one of {CURVES}")
    a1, b1, m1 = cs.chi1
    a2, b2, m2 = cs.chi2
    a2p, b2p, _ = cs.chi2p
    a1p, b1p, _ = cs.chi1p
    if check and rel_diff(a1, a1p) < EPS_SING:
        raise DegenerateCrossing("cusp curves are undefined at a degenerate crossing")
    if cs.sign > 0:
        table = {
            "sigma+": m1 / a1, "tau+": m1 / a1p,
            "sigma-": m2 * a2, "tau-": m2 * a2p,
            "beta+": a2 * b1p / b1, "beta-": (1 / a1p) * (b2 / b2p),
        }
    else:
        table = {
            "sigma+": m2 / a2, "tau+": m2 / a2p,
            "sigma-": m1 * a1, "tau-": m1 * a1p,
            "beta+": (1 / a1p) * (b2p / b2), "beta-": a2 * b1 / b1p,
        }
    return complex(table[curve])


def blackboard_longitude_holonomy(diagram: LinkDiagram, shaping: Shaping,
                                  component: int) -> complex:
    """Product of ``beta`` holonomies along a component's passes through crossings."""
    total = 1.0 + 0j
    if not diagram.crossings:
        return total
    for seg in diagram.components[component]:
        h = diagram.head[seg]
        cs = shaping.crossing_shapes(diagram, h.crossing)
        over = diagram.over_at_head(seg)
        total *= cusp_curve_holonomy(cs, "beta+" if over else "beta-", check=False)
    return total


def longitude_eigenvalue(diagram: LinkDiagram, shaping: Shaping, component: int) -> complex:
    comp = diagram.components[component]
    m = shaping.m[comp[0]]
    eta = np.array([diagram.segment_eta(k) for k in comp])
    return complex(m ** (-diagram.writhe(component)) * np.prod(shaping.b[list(comp)] ** eta))


@dataclass
class ComponentDecoration:
    m: complex
    ell: complex
    writhe: int
    checks: dict[str, float] = field(default_factory=dict)
    near_parabolic: bool = False

    def to_dict(self) -> dict:
        return {"m": cjson(self.m), "ell": cjson(self.ell), "writhe": self.writhe,
                "checks": self.checks, "near_parabolic": self.near_parabolic}


@dataclass
class EigenDecoration:
    components: list[ComponentDecoration]
    ok: bool
    max_residual: float

    @property
    def m(self) -> list[complex]:
        return [c.m for c in self.components]

    @property
    def ell(self) -> list[complex]:
        return [c.ell for c in self.components]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "max_residual": self.max_residual,
                "components": [c.to_dict() for c in self.components]}


def _shared_eigenvalue(M: np.ndarray, L: np.ndarray, m: complex) -> tuple[complex, float]:
    # row eigenvector of M for the eigenvalue m (matrices act on row vectors)
    vals, vecs = np.linalg.eig(M.T)
    v = vecs[:, int(np.argmin(np.abs(vals - m)))]
    w = v @ L
    lam = complex(np.vdot(v, w) / np.vdot(v, v))
    return lam, float(np.linalg.norm(w - lam * v) / max(np.linalg.norm(w), 1e-300))


def eigenvalue_decoration(diagram: LinkDiagram, shaping: Shaping, tol: float | None = None,
                          matrix_checks: bool = True) -> EigenDecoration:
    """Eigenvalues of meridians and zero-framed longitudes, with consistency checks.

    Checks per component: ``ell^2`` against the product of cusp holonomies,
    ``m^2`` against the cusp holonomy of the meridian, and (with
    ``matrix_checks``) that the holonomy matrices of the meridian and the
    longitude commute, that the longitude has trace ``ell + 1/ell`` and,
    away from ``m = +-1``, that the two share an eigenvector with
    eigenvalues ``m`` and ``ell``.
    """
    tol = default_tol() if tol is None else tol
    comps = []
    worst = 0.0
    for j, comp in enumerate(diagram.components):
        m = complex(shaping.m[comp[0]])
        w = diagram.writhe(j)
        ell = longitude_eigenvalue(diagram, shaping, j)
        checks = {}
        hol_bb = blackboard_longitude_holonomy(diagram, shaping, j)
        checks["ell_squared"] = rel_diff(ell ** 2, m ** (-2 * w) * hol_bb)
        if diagram.crossings:
            seg = comp[0]
            t, h = diagram.tail[seg], diagram.head[seg]
            leave = "tau+" if diagram.over_at_tail(seg) else "tau-"
            enter = "sigma-" if diagram.over_at_tail(seg) else "sigma+"
            # the meridian crosses the segment once; on over-under and
            # under-over segments that is the product of a tau and a sigma
            if diagram.segment_eta(seg) != 0:
                hol_m = (cusp_curve_holonomy(shaping.crossing_shapes(diagram, t.crossing), leave,
                                             check=False)
                         * cusp_curve_holonomy(shaping.crossing_shapes(diagram, h.crossing), enter,
                                               check=False))
                checks["m_squared"] = rel_diff(hol_m, m * m)
        if matrix_checks:
            M = evaluate_path(diagram, shaping, meridian_loop(diagram, comp[0], at="right"))
            L = evaluate_path(diagram, shaping, longitude_word(diagram, j))
            checks["commute"] = float(np.linalg.norm(M @ L - L @ M) /
                                      max(np.linalg.norm(M) * np.linalg.norm(L), 1e-300))
            checks["longitude_trace"] = rel_diff(np.trace(L), ell + 1 / ell)
        near = min(abs(m - 1), abs(m + 1)) < PARABOLIC_TOL
        if matrix_checks and not near:
            # a parabolic meridian has a defective eigenspace, so the
            # eigenvector comparison is only meaningful away from m = +-1
            lam, vec_res = _shared_eigenvalue(M, L, m)
            checks["shared_eigenvector"] = vec_res
            checks["ell_eigenvalue"] = rel_diff(lam, ell)
        comps.append(ComponentDecoration(m, ell, w, checks, near))
        worst = max([worst, *checks.values()])
    return EigenDecoration(comps, worst <= tol, worst)
