"""Holonomy of a shaping on the region groupoid of a diagram.

Every segment ``j`` carries two generators, ``(j, '+')`` passing above it and
``(j, '-')`` passing below it, both running from the region on the left of
the segment to the region on its right.  Matrices act on the right by
Mobius transformations, so a word is evaluated as the ordinary product of
its letters from left to right.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .biquandle import Shape, Shaping
from .diagram import LinkDiagram
from .errors import InvalidPath
from .numeric import default_tol

__all__ = [
    "GroupoidPath",
    "HolonomyReport",
    "Letter",
    "evaluate_path",
    "longitude_word",
    "meridian_loop",
    "meridian_matrix",
    "mobius",
    "region_path",
    "verify_holonomy",
    "wirtinger_meridian",
    "x_minus",
    "x_plus",
]


def x_plus(shape: Shape) -> np.ndarray:
    a, b, m = shape
    return np.array([[a, 0], [(a - 1 / m) / b, 1]], dtype=complex)


def x_minus(shape: Shape) -> np.ndarray:
    a, b, m = shape
    return np.array([[1, (a - m) * b], [0, a]], dtype=complex)


def meridian_matrix(shape: Shape) -> np.ndarray:
    """Image of the loop ``x+ (x-)^-1`` around a segment; its trace is ``m + 1/m``."""
    a, b, m = shape
    return np.array([[a, -(a - m) * b], [(a - 1 / m) / b, m + 1 / m - a]], dtype=complex)


def mobius(z, matrix):
    """Right action ``z . [[a, b], [c, d]] = (a z + c) / (b z + d)``; ``None`` is infinity."""
    (a, b), (c, d) = matrix
    if z is None:
        return None if b == 0 else a / b
    den = b * z + d
    return None if den == 0 else (a * z + c) / den


@dataclass(frozen=True)
class Letter:
    segment: int
    level: str  # '+' above the segment, '-' below it
    power: int = 1

    def __post_init__(self):
        if self.level not in ("+", "-"):
            raise InvalidPath(f"level must be '+' or '-', got {self.level!r}")
        if self.power not in (1, -1):
            raise InvalidPath(f"power must be +1 or -1, got {self.power!r}")

    def inverse(self) -> "Letter":
        return Letter(self.segment, self.level, -self.power)

    def __str__(self):
        return f"x{self.segment}{self.level}" + ("" if self.power == 1 else "^-1")


class GroupoidPath:
    """A word in the groupoid generators."""

    _TOKEN = re.compile(r"x?(\d+)([+-])(\^-1)?")

    def __init__(self, letters: Iterable[Letter | tuple] = ()):
        self.letters = tuple(l if isinstance(l, Letter) else Letter(*l) for l in letters)

    @classmethod
    def parse(cls, text: str) -> "GroupoidPath":
        """Read words such as ``"x1+ x2+ x2-^-1"``."""
        letters = []
        for tok in text.split():
            m = cls._TOKEN.fullmatch(tok)
            if not m:
                raise InvalidPath(f"cannot read letter {tok!r}")
            letters.append(Letter(int(m.group(1)), m.group(2), -1 if m.group(3) else 1))
        return cls(letters)

    def __add__(self, other: "GroupoidPath") -> "GroupoidPath":
        return GroupoidPath(self.letters + other.letters)

    def inverse(self) -> "GroupoidPath":
        return GroupoidPath(l.inverse() for l in reversed(self.letters))

    def power(self, k: int) -> "GroupoidPath":
        base = self if k >= 0 else self.inverse()
        return GroupoidPath(base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return " ".join(str(l) for l in self.letters)

    def __repr__(self):
        return f"GroupoidPath({str(self)!r})"


def _letter_ends(diagram: LinkDiagram, letter: Letter) -> tuple[int, int]:
    left, right = diagram.left_region[letter.segment], diagram.right_region[letter.segment]
    return (left, right) if letter.power == 1 else (right, left)


def path_regions(diagram: LinkDiagram, path: GroupoidPath) -> tuple[int, int]:
    """Start and end region of a composable word."""
    if not path.letters:
        raise InvalidPath("empty word has no well-defined regions")
    start, current = None, None
    for k, letter in enumerate(path):
        if not 0 <= letter.segment < diagram.n_segments:
            raise InvalidPath(f"letter {k}: segment {letter.segment} out of range")
        src, dst = _letter_ends(diagram, letter)
        if current is not None and src != current:
            raise InvalidPath(f"letter {k} ({letter}) starts in region {src}, "
                              f"previous letter ended in region {current}")
        if start is None:
            start = src
        current = dst
    return start, current


def evaluate_path(diagram: LinkDiagram, shaping: Shaping, path: GroupoidPath | str) -> np.ndarray:
    """Holonomy matrix of a groupoid word."""
    if isinstance(path, str):
        path = GroupoidPath.parse(path)
    if not path.letters:
        return np.eye(2, dtype=complex)
    path_regions(diagram, path)
    out = np.eye(2, dtype=complex)
    for letter in path:
        shape = shaping[letter.segment]
        mat = x_plus(shape) if letter.level == "+" else x_minus(shape)
        if letter.power == -1:
            mat = np.linalg.inv(mat)
        out = out @ mat
    return out


def region_path(diagram: LinkDiagram, start: int, end: int) -> GroupoidPath:
    """Shortest path above the diagram between two regions.

    Breadth-first search on the dual graph, ties broken by lowest segment id.
    """
    if start == end:
        return GroupoidPath()
    prev: dict[int, tuple[int, Letter]] = {start: None}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for seg, other, direction in sorted(diagram.region_neighbours(r)):
            if other in prev:
                continue
            prev[other] = (r, Letter(seg, "+", direction))
            if other == end:
                letters = []
                node = end
                while prev[node] is not None:
                    node, letter = prev[node]
                    letters.append(letter)
                return GroupoidPath(reversed(letters))
            queue.append(other)
    raise InvalidPath(f"regions {start} and {end} are not connected")


def meridian_loop(diagram: LinkDiagram, seg: int, at: str = "left") -> GroupoidPath:
    """Small loop around a segment based on its left or right region."""
    up, down = Letter(seg, "+"), Letter(seg, "-")
    if at == "left":
        return GroupoidPath([up, down.inverse()])
    return GroupoidPath([down.inverse(), up])


def wirtinger_meridian(diagram: LinkDiagram, seg: int, base: int | None = None) -> GroupoidPath:
    """Meridian of a segment conjugated back to a base region (default unbounded)."""
    base = diagram.unbounded_region if base is None else base
    approach = region_path(diagram, base, diagram.left_region[seg])
    return approach + meridian_loop(diagram, seg) + approach.inverse()


def longitude_word(diagram: LinkDiagram, component: int = 0, framing: str = "zero") -> GroupoidPath:
    """Longitude of a component based on the region right of its first segment.

    The blackboard push-off follows the component on its right-hand side,
    crossing the other strand above or below according to the component's
    own pass.  With ``framing='zero'`` the writhe is removed by appending
    meridian loops.
    """
    comp = diagram.components[component]
    letters = []
    for seg in comp:
        if not diagram.crossings:
            break
        h = diagram.head[seg]
        x = diagram.crossings[h.crossing]
        if h.slot == 0:
            letters.append(Letter(x.in2, "+" if x.sign > 0 else "-", 1))
        else:
            letters.append(Letter(x.out1, "-" if x.sign > 0 else "+", -1))
    word = GroupoidPath(letters)
    if framing == "zero":
        w = diagram.writhe(component)
        word = word + meridian_loop(diagram, comp[0], at="right").power(-w)
    elif framing != "blackboard":
        raise ValueError("framing must be 'zero' or 'blackboard'")
    return word


@dataclass
class HolonomyReport:
    ok: bool
    max_residual: float
    crossing_residuals: list[float]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "max_residual": self.max_residual,
                "crossing_residuals": self.crossing_residuals}


def _rel_mat(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.linalg.norm(x - y) / max(np.linalg.norm(x), np.linalg.norm(y), 1e-300))


def verify_holonomy(diagram: LinkDiagram, shaping: Shaping,
                    tol: float | None = None) -> HolonomyReport:
    """Check the three groupoid relations at every crossing.

    Above and below both strands, and in the layer between the strands,
    which lies below strand 1 at a positive crossing and above it otherwise.
    """
    tol = default_tol() if tol is None else tol
    residuals = []
    for c, x in enumerate(diagram.crossings):
        s1, s2, s2p, s1p = shaping.crossing(diagram, c)
        if x.sign > 0:
            mixed = (x_minus(s1) @ x_plus(s2), x_plus(s2p) @ x_minus(s1p))
        else:
            mixed = (x_plus(s1) @ x_minus(s2), x_minus(s2p) @ x_plus(s1p))
        res = max(
            _rel_mat(x_plus(s1) @ x_plus(s2), x_plus(s2p) @ x_plus(s1p)),
            _rel_mat(x_minus(s1) @ x_minus(s2), x_minus(s2p) @ x_minus(s1p)),
            _rel_mat(*mixed),
        )
        residuals.append(res)
    worst = max(residuals, default=0.0)
    return HolonomyReport(worst <= tol, worst, residuals)
