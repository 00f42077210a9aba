"""Numerical solution of the gluing systems.

Damped Gauss-Newton from random starts, with solutions deduplicated by
conjugation invariants of the resulting holonomy representation rather than
by their raw coordinates (which carry a gauge freedom).
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .biquandle import Shaping, shaping_from_b, verify_shaping
from .decoration import longitude_eigenvalue
from .diagram import LinkDiagram
from .errors import NonConvergence, ShapingError
from .gluing import (RationalSystem, build_a_system, build_b_system, build_lifted_b_system,
                     gauge_candidates, shaping_from_regions)
from .holonomy import GroupoidPath, evaluate_path, verify_holonomy, wirtinger_meridian
from .numeric import cjson, random_annulus

__all__ = [
    "NewtonResult",
    "ShapingSolver",
    "Solution",
    "SolutionSet",
    "SolveConfig",
    "enumerate_solutions",
    "invariant_signature",
    "newton_solve",
    "shaping_from_point",
]

log = logging.getLogger(__name__)

COND_MAX = 1e12


@dataclass(frozen=True)
class SolveConfig:
    restarts: int = 200
    seed: int = 42
    newton_tol: float = 1e-10
    max_iters: int = 60
    guard_floor: float = 1e-8
    dedupe_tol: float = 1e-6
    start_inner: float = 0.2
    start_outer: float = 5.0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        for name in ("newton_tol", "guard_floor", "dedupe_tol", "start_inner"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iters < 1 or self.start_outer <= self.start_inner:
            raise ValueError("max_iters must be positive and start_outer > start_inner")


@dataclass
class NewtonResult:
    x: np.ndarray
    residual: float
    iterations: int


def _relative_residual(system: RationalSystem, x) -> float:
    values = system.residuals(x)
    if values.size == 0:
        return 0.0
    scale = np.maximum(system.compiled.magnitudes(x), 1e-300)
    return float(np.max(np.abs(values) / scale))


def newton_solve(system: RationalSystem, start, cfg: SolveConfig = SolveConfig()) -> NewtonResult:
    """Damped Gauss-Newton iteration from ``start``.

    The residual is measured per equation relative to the size of its
    terms.  Steps are least-squares solutions of the linearised system and
    are halved until the residual norm drops.  Raises
    :class:`NonConvergence` when ``max_iters`` is exhausted, a guard falls
    below ``guard_floor``, or (for systems with isolated solutions) the
    Jacobian condition number exceeds 1e12.
    """
    x = np.asarray(start, dtype=complex).copy()
    if system.n_vars == 0 or not system.equations:
        return NewtonResult(x, _relative_residual(system, x), 0)
    f = system.residuals(x)
    norm = np.linalg.norm(f)
    for it in range(1, cfg.max_iters + 1):
        J = system.jacobian(x)
        step, _, _, sv = np.linalg.lstsq(J, -f, rcond=None)
        if system.isolated and sv[-1] <= sv[0] / COND_MAX:
            raise NonConvergence(f"Jacobian condition number above {COND_MAX:.0e} "
                                 f"at iteration {it}")
        t = 1.0
        while True:
            trial = x + t * step
            f_trial = system.residuals(trial)
            n_trial = np.linalg.norm(f_trial)
            if np.isfinite(n_trial) and n_trial < norm:
                break
            t /= 2
            if t < 1e-6:
                raise NonConvergence(f"line search stalled at iteration {it}")
        x, f, norm = trial, f_trial, n_trial
        if system.guards and system.guard_separations(x).min() < cfg.guard_floor:
            raise NonConvergence(f"iterate violates a guard at iteration {it}")
        res = _relative_residual(system, x)
        if res < cfg.newton_tol:
            return NewtonResult(x, res, it)
    raise NonConvergence(f"no convergence in {cfg.max_iters} iterations")


def shaping_from_point(diagram: LinkDiagram, system: RationalSystem, x) -> Shaping:
    """Full shaping from a solution of a b- or a-system."""
    point = system.full_point(x)
    k = diagram.n_components
    if system.m is not None:
        m = system.m
    else:
        m = [point[f"m{j}"] for j in range(k)]
    if system.kind in ("b", "ab"):
        b = [point[f"b{j}"] for j in range(diagram.n_segments)]
        return shaping_from_b(diagram, b, m)
    r = [point[f"r{j}"] for j in range(diagram.n_regions)]
    return shaping_from_regions(diagram, r, m)


def _probe_words(diagram: LinkDiagram) -> list[GroupoidPath]:
    if not diagram.crossings:
        return []
    x = diagram.crossings[0]
    mu1 = wirtinger_meridian(diagram, x.in1)
    mu2 = wirtinger_meridian(diagram, x.in2)
    mu3 = wirtinger_meridian(diagram, x.out2)
    return [mu1 + mu2, mu1 + mu2 + mu3]


def invariant_signature(diagram: LinkDiagram, shaping: Shaping) -> np.ndarray:
    """Conjugation-invariant fingerprint of a shaping.

    Per component the meridian and longitude eigenvalues, then the traces
    of two fixed products of Wirtinger meridians based at the unbounded
    region.
    """
    values = []
    for j, comp in enumerate(diagram.components):
        values.append(shaping.m[comp[0]])
        values.append(longitude_eigenvalue(diagram, shaping, j))
    for word in _probe_words(diagram):
        values.append(np.trace(evaluate_path(diagram, shaping, word)))
    return np.array(values, dtype=complex)


@dataclass
class Solution:
    point: dict[str, complex]
    shaping: Shaping
    signature: np.ndarray
    residual: float
    restart: int
    iterations: int
    pinched: list[bool]
    multiplicity: int = 1

    def to_dict(self) -> dict:
        return {
            "point": {k: cjson(v) for k, v in self.point.items()},
            "shaping": self.shaping.to_dict(),
            "signature": [cjson(v) for v in self.signature],
            "residual": self.residual,
            "restart": self.restart,
            "iterations": self.iterations,
            "pinched": self.pinched,
            "multiplicity": self.multiplicity,
        }


@dataclass
class SolutionSet:
    solutions: list[Solution]
    config: SolveConfig
    converged: int = 0
    rejected: int = 0
    failures: dict[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    @property
    def signatures(self) -> list[np.ndarray]:
        return [s.signature for s in self.solutions]

    def to_dict(self) -> dict:
        return {
            "n_classes": len(self.solutions),
            "converged": self.converged,
            "rejected": self.rejected,
            "failures": self.failures,
            "config": asdict(self.config),
            "solutions": [s.to_dict() for s in self.solutions],
        }


def _same_class(u: np.ndarray, v: np.ndarray, tol: float) -> bool:
    if u.shape != v.shape:
        return False
    scale = np.maximum(np.maximum(np.abs(u), np.abs(v)), 1.0)
    return bool(np.all(np.abs(u - v) <= tol * scale))


def _sort_key(sig: np.ndarray) -> tuple:
    return tuple(v for z in sig for v in (round(z.real, 6), round(z.imag, 6)))


def enumerate_solutions(system: RationalSystem, cfg: SolveConfig = SolveConfig(),
                        diagram: LinkDiagram | None = None) -> SolutionSet:
    """Run ``cfg.restarts`` Newton solves and merge the results into classes.

    With a ``diagram`` every converged point is turned into a shaping,
    re-verified at ``10 * newton_tol`` and classified by
    :func:`invariant_signature`; without one, points are compared by their
    coordinates.  Each restart draws its start from its own child of
    ``cfg.seed``, so the output does not depend on the order of restarts.
    """
    verify_tol = 10 * cfg.newton_tol
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    found: list[Solution] = []
    out = SolutionSet([], cfg)
    n_restarts = 1 if system.n_vars == 0 else cfg.restarts
    for k in range(n_restarts):
        rng = np.random.default_rng(children[k])
        start = random_annulus(rng, system.n_vars, cfg.start_inner, cfg.start_outer)
        try:
            res = newton_solve(system, start, cfg)
        except NonConvergence as exc:
            reason = str(exc).split(" at ")[0]
            out.failures[reason] = out.failures.get(reason, 0) + 1
            continue
        if system.guards and system.guard_separations(res.x).min() < cfg.guard_floor:
            out.failures["guard violated"] = out.failures.get("guard violated", 0) + 1
            continue
        out.converged += 1
        point = system.full_point(res.x)
        if diagram is None:
            signature = res.x.copy()
            shaping = None
            pinched: list[bool] = []
        else:
            try:
                shaping = shaping_from_point(diagram, system, res.x)
                rep = verify_shaping(diagram, shaping, tol=verify_tol)
                hol = verify_holonomy(diagram, shaping, tol=verify_tol)
                if not (rep.ok and hol.ok):
                    raise ShapingError("shaping fails re-verification")
                signature = invariant_signature(diagram, shaping)
            except (ShapingError, ValueError, ZeroDivisionError) as exc:
                log.debug("restart %d rejected: %s", k, exc)
                out.rejected += 1
                continue
            pinched = rep.pinched
        for sol in found:
            if _same_class(sol.signature, signature, cfg.dedupe_tol):
                sol.multiplicity += 1
                break
        else:
            found.append(Solution(point, shaping, signature, res.residual, k, res.iterations,
                                  pinched))
    out.solutions = sorted(found, key=lambda s: _sort_key(s.signature))
    return out


class ShapingSolver:
    """Estimator-style front end: configure, ``fit(diagram)``, read results.

    Parameters
    ----------
    kind : {'b', 'a'}
        Solve the segment equations in b-variables or the region equations.
    m : complex, sequence of complex or None
        Meridian eigenvalue per component; ``None`` (b-system only) leaves
        them free.
    gauge : three segment ids or None
        Gauge-fixed segments for the b-system.  When ``None`` the candidates
        of :func:`gauge_candidates` are tried in order until one yields a
        solution.
    lifted : bool
        Solve the b-system with the a-values as auxiliary unknowns (see
        :func:`build_lifted_b_system`).  Needs fixed ``m``.

    Attributes set by ``fit``
    -------------------------
    solutions_ : list of Solution
    signatures_ : list of ndarray
    n_classes_ : int
    system_ : RationalSystem
    gauge_ : tuple or None
    result_ : SolutionSet
    """

    _PARAMS = ("kind", "m", "restarts", "seed", "newton_tol", "max_iters", "guard_floor",
               "dedupe_tol", "gauge", "lifted")

    def __init__(self, kind: str = "b", m=1.0, restarts: int = 200, seed: int = 42,
                 newton_tol: float = 1e-10, max_iters: int = 60, guard_floor: float = 1e-8,
                 dedupe_tol: float = 1e-6, gauge: Sequence[int] | None = None,
                 lifted: bool = True):
        self.kind = kind
        self.m = m
        self.restarts = restarts
        self.seed = seed
        self.newton_tol = newton_tol
        self.max_iters = max_iters
        self.guard_floor = guard_floor
        self.dedupe_tol = dedupe_tol
        self.gauge = gauge
        self.lifted = lifted

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._PARAMS}

    def set_params(self, **params) -> "ShapingSolver":
        for name, value in params.items():
            if name not in self._PARAMS:
                raise ValueError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"ShapingSolver({args})"

    @property
    def config(self) -> SolveConfig:
        return SolveConfig(restarts=self.restarts, seed=self.seed, newton_tol=self.newton_tol,
                           max_iters=self.max_iters, guard_floor=self.guard_floor,
                           dedupe_tol=self.dedupe_tol)

    def _systems(self, diagram: LinkDiagram):
        if self.kind == "a":
            if self.m is None:
                raise ValueError("the region system needs fixed meridian eigenvalues")
            yield None, build_a_system(diagram, self.m)
            return
        if self.kind != "b":
            raise ValueError("kind must be 'b' or 'a'")
        if diagram.n_segments < 3 or not diagram.crossings:
            yield None, build_b_system(diagram, self.m, gauge=())
            return
        gauges = [tuple(self.gauge)] if self.gauge is not None else gauge_candidates(diagram)
        build = build_lifted_b_system if self.lifted and self.m is not None else build_b_system
        for g in gauges:
            yield g, build(diagram, self.m, gauge=g)

    def fit(self, diagram: LinkDiagram) -> "ShapingSolver":
        cfg = self.config
        result, system, gauge = None, None, None
        for gauge, system in self._systems(diagram):
            result = enumerate_solutions(system, cfg, diagram)
            if len(result):
                break
            log.info("no solutions with gauge %s", gauge)
        self.system_ = system
        self.gauge_ = gauge
        self.result_ = result
        self.solutions_ = result.solutions
        self.signatures_ = result.signatures
        self.n_classes_ = len(result.solutions)
        return self

    def shapings(self) -> list[Shaping]:
        self._check_fitted()
        return [s.shaping for s in self.solutions_]

    def _check_fitted(self):
        if not hasattr(self, "solutions_"):
            raise RuntimeError("call fit(diagram) first")
