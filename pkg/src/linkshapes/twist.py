"""Closed-form shapings of parallel twist regions and (2, 2n+1)-torus knots.

The b-values along a twist region of ``N`` positive crossings, written
``x_i`` (top strand) and ``y_i`` (bottom strand), are ratios of
``W``-Fibonacci sequences.  Closing the region up into a torus knot forces
``W^2`` to be a root of the Riley polynomial.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import comb

import numpy as np

from .biquandle import Shaping, shaping_from_b
from .diagram import LinkDiagram, from_braid_word
from .errors import RileyResidual, SingularTwist

__all__ = [
    "FibSequence",
    "MIXED_RECURRENCE_ENV",
    "TorusKnotFamily",
    "fibonacci_poly",
    "fibonacci_poly_coefficients",
    "mixed_recurrence",
    "riley_polynomial",
    "riley_roots",
    "torus_knot_b_values",
    "torus_knot_diagram",
    "torus_knot_shaping",
    "twist_solution",
]

MIXED_RECURRENCE_ENV = "LINKSHAPES_MIXED_TWIST"
_SING = 1e-12


@dataclass(frozen=True)
class FibSequence:
    """``F_{i+1} = W F_i + F_{i-1}`` with seeds ``F_0`` and ``F_1``."""

    W: complex
    F0: complex = 0.0
    F1: complex = 1.0

    def __getitem__(self, i: int) -> complex:
        prev, cur = complex(self.F0), complex(self.F1)
        if i >= 0:
            for _ in range(i):
                prev, cur = cur, self.W * cur + prev
            return prev
        for _ in range(-i):
            prev, cur = cur - self.W * prev, prev
        return prev

    def values(self, start: int, stop: int) -> np.ndarray:
        return np.array([self[i] for i in range(start, stop)], dtype=complex)


def fibonacci_poly(i: int, W) -> complex:
    """The base sequence ``B_i(W)`` with ``B_0 = 0``, ``B_1 = 1``; any integer ``i``."""
    return FibSequence(complex(W))[i]


def fibonacci_poly_coefficients(i: int) -> list[int]:
    """Integer coefficients of ``B_i`` in ``W``, lowest degree first (``i >= 0``)."""
    if i < 0:
        raise ValueError("coefficients are tabulated for i >= 0")
    prev, cur = [0], [1]
    if i == 0:
        return prev
    for _ in range(i - 1):
        shifted = [0] + cur
        nxt = [x + (prev[k] if k < len(prev) else 0) for k, x in enumerate(shifted)]
        prev, cur = cur, nxt
    return cur


def twist_solution(x1, x2, y1, y2, m, i: int, W: complex | None = None) -> tuple[complex, complex]:
    """``(x_i, y_i)`` along a parallel positive twist region.

    ``W`` defaults to the principal square root of
    ``(m y1 - x2)(1/x1 - 1/(m y2))``; the result does not depend on the
    branch.
    """
    x1, x2, y1, y2, m = (complex(v) for v in (x1, x2, y1, y2, m))
    if W is None:
        W = np.sqrt((m * y1 - x2) * (1 / x1 - 1 / (m * y2)))
    W = complex(W)
    if abs(W) < _SING:
        raise SingularTwist("W vanishes; the twist region is pinched")
    B = FibSequence(W)
    g = x2 - m * y1
    num_x = m * x1 * y1 * W * B[i - 1] + x1 * g * B[i]
    den_x = g * B[i - 2] + x1 * W * B[i - 1]
    num_y = m * x1 * y1 * W * B[i - 2] + x1 * g * B[i - 1]
    den_y = g * B[i - 1] + x1 * W * B[i]
    scale = max(abs(num_x), abs(num_y), abs(x1 * g), 1.0)
    if abs(den_x) < _SING * scale or abs(den_y) < _SING * scale:
        raise SingularTwist(f"vanishing denominator at twist index {i}")
    return num_x / den_x, num_y / (m * den_y)


def mixed_recurrence(W, m_values, A0, A1, count: int) -> np.ndarray:
    """Terms of ``A_{i+1} = W A_i + (m_i / m_{i+1}) A_{i-1}``, index of ``m`` taken mod 2.

    ``m_values`` are the eigenvalues of the two strands.  Only the recurrence
    is provided; no closed-form twist solution is built on it.  Enabled by
    setting ``LINKSHAPES_MIXED_TWIST=1``.
    """
    if os.environ.get(MIXED_RECURRENCE_ENV, "0") not in ("1", "true", "yes"):
        raise NotImplementedError(f"set {MIXED_RECURRENCE_ENV}=1 to use the mixed recurrence")
    ms = tuple(complex(v) for v in m_values)
    if len(ms) != 2:
        raise ValueError("m_values holds the eigenvalues of the two strands")
    out = [complex(A0), complex(A1)]
    for i in range(1, count - 1):
        out.append(W * out[i] + ms[i % 2] / ms[(i + 1) % 2] * out[i - 1])
    return np.array(out[:count], dtype=complex)


def riley_polynomial(n: int) -> list[int]:
    """Coefficients of ``sum_j C(2n-j, j) L^(n-j)``, highest power first."""
    if n < 1:
        raise ValueError("n must be positive")
    return [comb(2 * n - j, j) for j in range(n + 1)]


def riley_roots(n: int) -> np.ndarray:
    """Roots sorted by (real, imag) so that root indices are reproducible."""
    roots = np.roots(riley_polynomial(n)).astype(complex)
    return np.array(sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9))))


@dataclass(frozen=True)
class TorusKnotFamily:
    """Parameters of the closed-form shapings of the (2, 2n+1)-torus knot."""

    n: int
    m: complex
    Lambda: complex
    p: complex = 1.0
    q: complex = 1.0 + 0.5j
    r: complex = 0.7 - 0.4j

    @classmethod
    def from_root(cls, n: int, m, root: int = 0, p=1.0, q=1.0 + 0.5j, r=0.7 - 0.4j):
        roots = riley_roots(n)
        if not 0 <= root < len(roots):
            raise ValueError(f"root index {root} out of range 0..{len(roots) - 1}")
        return cls(n, complex(m), complex(roots[root]), complex(p), complex(q), complex(r))

    @property
    def N(self) -> int:
        return 2 * self.n + 1

    def riley_residual(self) -> float:
        coeffs = riley_polynomial(self.n)
        value = np.polyval(coeffs, self.Lambda)
        scale = sum(c * abs(self.Lambda) ** (self.n - j) for j, c in enumerate(coeffs))
        return float(abs(value) / scale)

    def check(self, tol: float = 1e-10) -> None:
        if self.riley_residual() > tol:
            raise RileyResidual(f"Lambda = {self.Lambda} is not a Riley root "
                                f"(residual {self.riley_residual():.3g})")
        if min(abs(self.p), abs(self.q), abs(self.r), abs(self.m)) < _SING:
            raise SingularTwist("p, q, r and m must be nonzero")


def torus_knot_diagram(n: int) -> LinkDiagram:
    return from_braid_word("a" * (2 * n + 1))


def torus_knot_b_values(fam: TorusKnotFamily) -> np.ndarray:
    """b-values on the closure of ``sigma_1^N``.

    ``x_i`` sits on segment ``2i-2`` and ``y_i`` on ``2i-1``.
    """
    fam.check()
    s = np.sqrt(complex(fam.Lambda))
    B = FibSequence(s)
    p, q, r, m = fam.p, fam.q, fam.r, fam.m
    b = np.zeros(2 * fam.N, dtype=complex)
    for i in range(1, fam.N + 1):
        den_x = r * B[i - 2] + s * B[i - 1]
        den_y = r * B[i - 1] + s * B[i]
        if abs(den_x) < _SING or abs(den_y) < _SING:
            raise SingularTwist(f"vanishing denominator at twist index {i}")
        b[2 * (i - 1)] = (q * s * B[i - 1] + p * r * B[i]) / den_x
        b[2 * i - 1] = (q * s * B[i - 2] + p * r * B[i - 1]) / (m * den_y)
    return b


def torus_knot_shaping(fam: TorusKnotFamily, diagram: LinkDiagram | None = None) -> Shaping:
    """Full shaping of the closure of ``sigma_1^(2n+1)`` for one family member."""
    diagram = torus_knot_diagram(fam.n) if diagram is None else diagram
    return shaping_from_b(diagram, torus_knot_b_values(fam), fam.m)
