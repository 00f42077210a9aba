"""Oriented planar link diagrams.

A diagram is a list of crossings.  Every crossing lists its four incident
segments in counterclockwise order ``(in1, in2, out1, out2)``: strand 1 runs
``in1 -> out1`` and strand 2 runs ``in2 -> out2``.  Drawn with both strands
heading right, strand 1 enters top-left and leaves bottom-right while strand 2
enters bottom-left and leaves top-right.  The sign is ``+1`` exactly when
strand 1 passes over strand 2.

The four angular sectors of a crossing are named after compass points::

        in1 \\   N   / out2
             \\     /
          W     X     E
             /     \\
        in2 /   S   \\ out1

Sector ``k`` lies counterclockwise between slot ``k`` and slot ``k + 1``, so
the sectors in slot order are ``W, S, E, N``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Mapping, Sequence

from .errors import InvalidDiagram

__all__ = [
    "CORNERS",
    "SLOTS",
    "Crossing",
    "LinkDiagram",
    "diagram_stats",
    "from_braid_word",
    "from_pd_code",
    "parse_braid_word",
    "parse_diagram",
]

SLOTS = ("in1", "in2", "out1", "out2")
CORNERS = ("W", "S", "E", "N")


@dataclass(frozen=True)
class Crossing:
    """One crossing of an oriented diagram."""

    sign: int
    in1: int
    in2: int
    out1: int
    out2: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidDiagram(f"crossing sign must be +1 or -1, got {self.sign!r}")

    @property
    def slots(self) -> tuple[int, int, int, int]:
        return (self.in1, self.in2, self.out1, self.out2)

    @property
    def over_strand(self) -> int:
        return 1 if self.sign > 0 else 2

    def to_dict(self) -> dict:
        return {"sign": self.sign, "in1": self.in1, "in2": self.in2,
                "out1": self.out1, "out2": self.out2}


@dataclass(frozen=True)
class SegmentEnd:
    crossing: int
    slot: int

    @property
    def role(self) -> str:
        return SLOTS[self.slot]


class LinkDiagram:
    """Combinatorial data derived from a list of crossings.

    Parameters
    ----------
    crossings : sequence of Crossing
        Segment ids must be ``0 .. s-1``; every id appears once as an
        incoming and once as an outgoing slot.
    unbounded_region : int, optional
        Region drawn as the unbounded face.  Defaults to the region with
        the most corners (lowest id on ties).
    n_segments : int, optional
        Only used for the crossingless unknot, which has one segment.

    Attributes
    ----------
    head, tail : list of SegmentEnd
        Crossing and slot where each segment ends and starts.
    components : list of tuple of int
        Segment ids of each component in traversal order.
    regions : list of tuple of (int, str)
        Corners ``(crossing, sector)`` bounding each region.
    left_region, right_region : list of int
        Regions on either side of each segment, relative to its orientation.
    """

    def __init__(self, crossings: Sequence[Crossing], unbounded_region: int | None = None,
                 n_segments: int | None = None):
        self.crossings = tuple(crossings)
        if not self.crossings:
            self._init_crossingless(n_segments, unbounded_region)
            return
        self.n_segments = 2 * len(self.crossings)
        if n_segments is not None and n_segments != self.n_segments:
            raise InvalidDiagram(f"{len(self.crossings)} crossings need {self.n_segments} "
                                 f"segments, got {n_segments}")
        self._index_segments()
        self._trace_components()
        self._check_connected()
        self._trace_regions()
        self.unbounded_region = self._pick_unbounded(unbounded_region)

    def _init_crossingless(self, n_segments, unbounded_region):
        if n_segments not in (None, 1):
            raise InvalidDiagram("a crossingless diagram must be a single unknotted circle")
        self.n_segments = 1
        self.head = [None]
        self.tail = [None]
        self.components = [(0,)]
        self.component_of = (0,)
        self.regions = [(), ()]
        self.corner_region = {}
        self.left_region = [0]
        self.right_region = [1]
        self.unbounded_region = 0 if unbounded_region is None else int(unbounded_region)
        if self.unbounded_region not in (0, 1):
            raise InvalidDiagram("unbounded_region out of range")

    def _index_segments(self):
        s = self.n_segments
        head: list[SegmentEnd | None] = [None] * s
        tail: list[SegmentEnd | None] = [None] * s
        for c, x in enumerate(self.crossings):
            for slot, seg in enumerate(x.slots):
                if not isinstance(seg, int) or not 0 <= seg < s:
                    raise InvalidDiagram(f"crossing {c}: segment id {seg!r} not in 0..{s - 1}")
                table = head if slot < 2 else tail
                if table[seg] is not None:
                    kind = "incoming" if slot < 2 else "outgoing"
                    raise InvalidDiagram(f"segment {seg} appears twice as {kind}")
                table[seg] = SegmentEnd(c, slot)
        missing = [k for k in range(s) if head[k] is None or tail[k] is None]
        if missing:
            raise InvalidDiagram(f"segments {missing} lack an incoming or outgoing end")
        self.head = head
        self.tail = tail

    def _trace_components(self):
        component_of = [-1] * self.n_segments
        components = []
        for start in range(self.n_segments):
            if component_of[start] >= 0:
                continue
            comp = []
            seg = start
            while component_of[seg] < 0:
                component_of[seg] = len(components)
                comp.append(seg)
                seg = self.next_segment(seg)
            components.append(tuple(comp))
        self.components = components
        self.component_of = tuple(component_of)

    def _check_connected(self):
        parent = list(range(len(self.crossings)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for seg in range(self.n_segments):
            a, b = find(self.head[seg].crossing), find(self.tail[seg].crossing)
            parent[a] = b
        if len({find(i) for i in range(len(parent))}) > 1:
            raise InvalidDiagram("split diagrams are not supported")

    def _trace_regions(self):
        corner_region: dict[tuple[int, str], int] = {}
        regions = []
        for c in range(len(self.crossings)):
            for k in range(4):
                if (c, CORNERS[k]) in corner_region:
                    continue
                rid = len(regions)
                corners = []
                cc, kk = c, k
                while (cc, CORNERS[kk]) not in corner_region:
                    corner_region[(cc, CORNERS[kk])] = rid
                    corners.append((cc, CORNERS[kk]))
                    cc, kk = self._opposite_end(cc, (kk + 1) % 4)
                if (cc, kk) != (c, k):
                    raise InvalidDiagram("inconsistent rotation system")
                regions.append(tuple(corners))
        expected = len(self.crossings) + 2
        if len(regions) != expected:
            raise InvalidDiagram(f"diagram is not planar: {len(regions)} faces, "
                                 f"expected {expected}")
        self.regions = regions
        self.corner_region = corner_region
        left, right = [], []
        for seg in range(self.n_segments):
            h = self.head[seg]
            left.append(corner_region[(h.crossing, CORNERS[(h.slot - 1) % 4])])
            right.append(corner_region[(h.crossing, CORNERS[h.slot])])
        self.left_region = left
        self.right_region = right

    def _opposite_end(self, crossing: int, slot: int) -> tuple[int, int]:
        seg = self.crossings[crossing].slots[slot]
        end = self.tail[seg] if slot < 2 else self.head[seg]
        return end.crossing, end.slot

    def _pick_unbounded(self, requested):
        if requested is not None:
            if not 0 <= int(requested) < len(self.regions):
                raise InvalidDiagram(f"unbounded_region {requested} out of range")
            return int(requested)
        sizes = [len(r) for r in self.regions]
        return sizes.index(max(sizes))

    # -- queries ---------------------------------------------------------

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def next_segment(self, seg: int) -> int:
        h = self.head[seg]
        x = self.crossings[h.crossing]
        return x.out1 if h.slot == 0 else x.out2

    def strand_components(self, crossing: int) -> tuple[int, int]:
        """Components carrying strand 1 and strand 2 through a crossing."""
        x = self.crossings[crossing]
        return self.component_of[x.in1], self.component_of[x.in2]

    def over_at_head(self, seg: int) -> bool:
        h = self.head[seg]
        return (h.slot == 0) == (self.crossings[h.crossing].sign > 0)

    def over_at_tail(self, seg: int) -> bool:
        t = self.tail[seg]
        return (t.slot == 2) == (self.crossings[t.crossing].sign > 0)

    def segment_kind(self, seg: int) -> str:
        """One of ``'over-under'``, ``'under-over'``, ``'over-over'``, ``'under-under'``.

        The first word describes the crossing the segment leaves, the second
        the crossing it enters.
        """
        if not self.crossings:
            return "over-over"
        first = "over" if self.over_at_tail(seg) else "under"
        second = "over" if self.over_at_head(seg) else "under"
        return f"{first}-{second}"

    def segment_eta(self, seg: int) -> int:
        return {"over-under": 1, "under-over": -1}.get(self.segment_kind(seg), 0)

    def writhe(self, component: int | None = None):
        """Writhe of one component, or the list of all writhes."""
        if component is None:
            return [self.writhe(j) for j in range(self.n_components)]
        total = 0
        for c, x in enumerate(self.crossings):
            if self.strand_components(c) == (component, component):
                total += x.sign
        return total

    def region_neighbours(self, region: int) -> list[tuple[int, int, int]]:
        """Adjacent regions as ``(segment, other_region, direction)``.

        ``direction`` is ``+1`` when moving from the left to the right side
        of the segment.
        """
        out = []
        for seg in range(self.n_segments):
            if self.left_region[seg] == region:
                out.append((seg, self.right_region[seg], 1))
            if self.right_region[seg] == region:
                out.append((seg, self.left_region[seg], -1))
        return out

    def to_dict(self) -> dict:
        return {
            "crossings": [x.to_dict() for x in self.crossings],
            "n_segments": self.n_segments,
            "unbounded_region": self.unbounded_region,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __repr__(self):
        return (f"LinkDiagram(crossings={self.n_crossings}, segments={self.n_segments}, "
                f"components={self.n_components})")


def diagram_stats(diagram: LinkDiagram) -> dict:
    return {
        "crossings": diagram.n_crossings,
        "segments": diagram.n_segments,
        "regions": diagram.n_regions,
        "components": diagram.n_components,
        "writhe": diagram.writhe(),
        "signs": [x.sign for x in diagram.crossings],
    }


# -- constructors ------------------------------------------------------------

def _crossings_from_dicts(items: Iterable[Mapping]) -> list[Crossing]:
    out = []
    for k, item in enumerate(items):
        try:
            out.append(Crossing(int(item["sign"]), int(item["in1"]), int(item["in2"]),
                                int(item["out1"]), int(item["out2"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDiagram(f"crossing {k}: {exc}") from None
    return out


def from_pd_code(pd: Sequence[Sequence[int]], orientations: Sequence[int] | None = None,
                 unbounded_region: int | None = None) -> LinkDiagram:
    """Build a diagram from a standard PD code.

    Each 4-tuple lists edge labels counterclockwise starting from the
    incoming under-edge.  ``orientations[k] = +1`` means the over-strand runs
    from the second entry to the fourth.  When omitted the direction is read
    off consecutive labelling (``d == b + 1`` cyclically), which is the usual
    convention for knots.
    """
    labels = sorted({int(e) for quad in pd for e in quad})
    relabel = {e: k for k, e in enumerate(labels)}
    n = len(labels)
    crossings = []
    for k, quad in enumerate(pd):
        if len(quad) != 4:
            raise InvalidDiagram(f"PD entry {k} does not have four labels")
        a, b, c, d = (relabel[int(e)] for e in quad)
        if orientations is not None:
            forward = int(orientations[k]) > 0
        elif (d - b) % n == 1:
            forward = True
        elif (b - d) % n == 1:
            forward = False
        else:
            raise InvalidDiagram(f"PD entry {k}: over-strand direction is ambiguous, "
                                 "pass orientations")
        if forward:
            crossings.append(Crossing(-1, a, b, c, d))
        else:
            crossings.append(Crossing(1, d, a, b, c))
    return LinkDiagram(crossings, unbounded_region=unbounded_region)


def parse_braid_word(word: str | Sequence[int]) -> list[int]:
    """Read a braid word into signed generator indices (1-based).

    Accepts ``"s1 s2^-1"``, compact letters ``"aAbB"`` (lowercase is
    positive) and whitespace or comma separated signed integers.
    """
    if not isinstance(word, str):
        gens = [int(g) for g in word]
    else:
        gens = []
        for chunk in re.split(r"[\s,]+", word.strip()):
            if not chunk:
                continue
            m = re.fullmatch(r"([sS])(\d+)(\^\{?-1\}?|')?", chunk)
            if m:
                g = int(m.group(2))
                gens.append(-g if (m.group(3) or m.group(1) == "S") else g)
            elif re.fullmatch(r"-?\d+", chunk):
                gens.append(int(chunk))
            elif chunk.isalpha():
                for ch in chunk:
                    g = ord(ch.lower()) - ord("a") + 1
                    gens.append(g if ch.islower() else -g)
            else:
                raise InvalidDiagram(f"cannot read braid generator {chunk!r}")
    if any(g == 0 for g in gens):
        raise InvalidDiagram("braid generators are numbered from 1")
    return gens


def from_braid_word(word: str | Sequence[int], n_strands: int | None = None,
                    unbounded_region: int | None = None) -> LinkDiagram:
    """Diagram of the closure of a braid.

    Strands run left to right and position 1 is on top.  The generator
    ``s_i`` crosses positions ``i`` and ``i + 1`` with the top-left strand
    passing over.  Segments at the left end are numbered ``0 .. n-1`` by
    position; each crossing then numbers its top output before its bottom
    output.
    """
    gens = parse_braid_word(word)
    needed = max((abs(g) for g in gens), default=0) + 1
    n = needed if n_strands is None else int(n_strands)
    if n < needed:
        raise InvalidDiagram(f"generator s{needed - 1} needs at least {needed} strands")
    if not gens:
        if n != 1:
            raise InvalidDiagram("the closure of an empty braid on several strands is split")
        return LinkDiagram([], n_segments=1, unbounded_region=unbounded_region)
    current = list(range(n))
    next_id = n
    raw = []
    for g in gens:
        i = abs(g) - 1
        top_in, bottom_in = current[i], current[i + 1]
        top_out, bottom_out = next_id, next_id + 1
        next_id += 2
        raw.append([1 if g > 0 else -1, top_in, bottom_in, bottom_out, top_out])
        current[i], current[i + 1] = top_out, bottom_out
    identify = {}
    for pos in range(n):
        if current[pos] == pos:
            raise InvalidDiagram(f"strand position {pos + 1} never crosses: split closure")
        identify[current[pos]] = pos
    used = sorted({identify.get(s, s) for row in raw for s in row[1:]})
    compact = {s: k for k, s in enumerate(used)}
    crossings = [Crossing(row[0], *(compact[identify.get(s, s)] for s in row[1:]))
                 for row in raw]
    return LinkDiagram(crossings, unbounded_region=unbounded_region)


def parse_diagram(source) -> LinkDiagram:
    """Build a diagram from JSON text, a path, a mapping or a braid word.

    The mapping form is ``{"crossings": [{"sign", "in1", "in2", "out1",
    "out2"}, ...], "unbounded_region": k}``; ``{"pd": [...], "orientations":
    [...]}`` and ``{"braid": "s1 s1 s1", "strands": 2}`` are also accepted.
    """
    if isinstance(source, LinkDiagram):
        return source
    if isinstance(source, PathLike):
        with open(source, encoding="utf-8") as fh:
            source = json.load(fh)
    elif isinstance(source, str):
        text = source.strip()
        if text.startswith("{"):
            try:
                source = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidDiagram(f"bad JSON: {exc}") from None
        elif text.endswith(".json"):
            with open(text, encoding="utf-8") as fh:
                source = json.load(fh)
        else:
            return from_braid_word(text)
    if not isinstance(source, Mapping):
        raise InvalidDiagram(f"cannot build a diagram from {type(source).__name__}")
    unbounded = source.get("unbounded_region")
    if "crossings" in source:
        crossings = _crossings_from_dicts(source["crossings"])
        return LinkDiagram(crossings, unbounded_region=unbounded,
                           n_segments=source.get("n_segments"))
    if "pd" in source:
        return from_pd_code(source["pd"], source.get("orientations"), unbounded)
    if "braid" in source:
        return from_braid_word(source["braid"], source.get("strands"), unbounded)
    raise InvalidDiagram("expected a 'crossings', 'pd' or 'braid' entry")
