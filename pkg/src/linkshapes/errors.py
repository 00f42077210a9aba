"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ShapingError(Exception):
    """Base class for all errors raised by :mod:`linkshapes`."""


class InvalidDiagram(ShapingError, ValueError):
    """The diagram description is malformed, non-planar or split."""


class SingularBraiding(ShapingError, ArithmeticError):
    """A braiding denominator or an output coordinate vanished."""


class InconsistentCrossing(ShapingError):
    """The four pinch equations at a crossing disagree."""


class PinchedCrossing(ShapingError):
    """An operation requires a non-pinched crossing."""


class DegenerateCrossing(ShapingError):
    """An operation requires a non-degenerate crossing."""


class InconsistentPropagation(ShapingError):
    """Propagated region or segment values do not close up consistently."""


class NonConvergence(ShapingError):
    """Newton iteration failed to reach the residual tolerance."""


class InvalidPath(ShapingError, ValueError):
    """A groupoid word whose letters do not compose region to region."""


class DegenerateTetrahedron(ShapingError):
    """An ideal tetrahedron has coincident vertices or a shape in {0, 1, inf}."""


class SingularTwist(ShapingError, ArithmeticError):
    """A twist-region or torus-knot formula hit a vanishing denominator."""


class RileyResidual(ShapingError):
    """A supplied value is not a root of the Riley polynomial."""
