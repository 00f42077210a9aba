"""Braiding of central characters of the Weyl algebra presentation.

A central character is determined by its values ``(xN, yN, zN)`` on the
central elements ``x^N, y^N, z^N``; it corresponds to the shape
``(a, b, m) = (xN, yN, zN)``.  The R-matrix acts on the center of the
tensor square by explicit rational maps, and pulling characters back along
its inverse recovers the shape braiding.  Nothing here reuses the formulas
of :mod:`linkshapes.biquandle`, which makes it usable as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularBraiding
from .numeric import EPS_SING

__all__ = [
    "CentralCharacter",
    "phi_character",
    "r_action",
    "r_inverse_action",
    "weyl_center_braid",
]


@dataclass(frozen=True)
class CentralCharacter:
    xN: complex
    yN: complex
    zN: complex

    def __iter__(self):
        return iter((self.xN, self.yN, self.zN))

    @classmethod
    def from_shape(cls, shape) -> "CentralCharacter":
        a, b, m = shape
        return cls(complex(a), complex(b), complex(m))


def _factor(lead, x1, y1, z1, x2, y2, z2):
    return 1 + (1 / lead) * (y1 / y2) * (x1 - z1) * (x2 - 1 / z2)


def r_action(c1, c2):
    """Image of the central generators under the R-matrix, as characters.

    Returns the characters on the first and second tensor factor.
    """
    x1, y1, z1 = c1
    x2, y2, z2 = c2
    g = _factor(x1, x1, y1, z1, x2, y2, z2)
    first = (x1 * g, 1 / (1 / y2 + (1 / y1 - 1 / (y2 * z2)) / x2), z1)
    second = (x2 / g, (z1 / z2) * y1 + (y2 - y1 / z2) * x1, z2)
    return first, second, g


def r_inverse_action(c1, c2):
    """Image of the central generators under the inverse R-matrix."""
    x1, y1, z1 = c1
    x2, y2, z2 = c2
    g = _factor(x2, x1, y1, z1, x2, y2, z2)
    first = (x1 / g, 1 / ((z1 / z2) / y2 + (1 / y1 - z1 / y2) * x2), z1)
    second = (x2 * g, y1 + (y2 - z1 * y1) / x1, z2)
    return first, second, g


def weyl_center_braid(sign: int, chi1, chi2, eps: float = EPS_SING):
    """Braid two central characters; returns ``(chi2', chi1')``.

    At a positive crossing the outgoing pair is the pullback of the
    incoming pair along the inverse R-matrix.  At a negative crossing the
    R-matrix itself is used, with the tensor factors taken in the opposite
    order.
    """
    c1 = CentralCharacter.from_shape(chi1)
    c2 = CentralCharacter.from_shape(chi2)
    try:
        if sign > 0:
            out1, out2, g = r_inverse_action(c1, c2)
        else:
            out2, out1, g = r_action(c2, c1)
    except ZeroDivisionError:
        raise SingularBraiding("central factor has a vanishing denominator") from None
    if abs(g) < eps:
        raise SingularBraiding("central factor vanishes")
    values = [*out1, *out2]
    if not all(np.isfinite(v) and abs(v) > 0 for v in values):
        raise SingularBraiding("braided character is singular")
    return CentralCharacter(*out2), CentralCharacter(*out1)


def phi_character(chi) -> tuple[np.ndarray, np.ndarray]:
    """The pair of triangular matrices attached to a central character.

    ``K^N -> a``, ``E^N -> b (a - m)`` and ``F^N -> (1 - 1/(m a)) / b``.
    """
    a, b, m = CentralCharacter.from_shape(chi)
    e = b * (a - m)
    f = (1 - 1 / (m * a)) / b
    return (np.array([[a, 0], [a * f, 1]], dtype=complex),
            np.array([[1, e], [0, a]], dtype=complex))
