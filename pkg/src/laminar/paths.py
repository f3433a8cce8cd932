"""Paths in D(p/q) built from edges, Delman channels and half channels.

A channel spans two adjacent triangles (start, x, y) and (end, x, y) of the
diagram, so Delta(start, end) = 2 and x, y are its cusps.  Only the
interface data matter here: which cusp the path leaves toward and which
cusp it arrives from.  The upper cusp is the one lying on the left of the
oriented Farey chord start -> end (in the model position 1/0 => 1/2 it is
1/1, the lower cusp being 0/1).

    kind      departs toward   arrives from
    A, a1, a2, ra2   upper          lower
    B, b1, b2, rb2   lower          upper
    a3               upper          upper
    b3               lower          lower

``ra2``/``rb2`` are the upside-down a2 gadget (and its mirror) used to
start the two-half-channel paths for (q-1)/q with q even.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .farey import (
    DegenerateTarget,
    FareyDiagram,
    boundary_paths,
    build_diagram,
    fan_corner,
)
from .rational import (
    INFINITY,
    ParityPair,
    Slope,
    SlopeError,
    cyclic_orientation,
    delta,
    from_fraction,
    make_slope,
    parity_pair,
)


class Kind(str, Enum):
    EDGE = "edge"
    CHANNEL_A = "A"
    CHANNEL_B = "B"
    HALF = "half"


class Context(str, Enum):
    KNOT = "knot"
    TANGLE = "tangle"


HALF_SUBTYPES = ("a1", "a2", "a3", "b1", "b2", "b3", "ra2", "rb2")
UPWARD = frozenset({"b1", "a2", "a3"})
DOWNWARD = frozenset({"a1", "b2", "b3"})

# (departs toward upper cusp, arrives from upper cusp)
_SIDES = {
    "A": (True, False), "a1": (True, False), "a2": (True, False), "ra2": (True, False),
    "B": (False, True), "b1": (False, True), "b2": (False, True), "rb2": (False, True),
    "a3": (True, True),
    "b3": (False, False),
}
_SWAP = {"A": "B", "B": "A", "a1": "b1", "b1": "a1", "a2": "b2", "b2": "a2",
         "a3": "b3", "b3": "a3", "ra2": "rb2", "rb2": "ra2"}


def swap_tag(tag: str) -> str:
    """Channel label after reversing every oriented sink mark."""
    return _SWAP[tag]


class PathError(ValueError):
    pass


class EnumerationGuard(RuntimeError):
    pass


def max_q() -> int:
    return int(os.environ.get("LAMINAR_MAX_Q", "64"))


def channel_cusps(start: Slope, end: Slope) -> tuple[Slope, Slope]:
    """(upper, lower) cusps of a channel: the two common Farey neighbours."""
    if delta(start, end) != 2:
        raise PathError(f"channel {start} => {end} needs Delta 2, got {delta(start, end)}")
    c1 = make_slope((start.p + end.p) // 2, (start.q + end.q) // 2)
    c2 = make_slope((start.p - end.p) // 2, (start.q - end.q) // 2)
    if cyclic_orientation(start, c1, end) < 0:
        return c1, c2
    return c2, c1


@dataclass(frozen=True)
class PathElement:
    kind: Kind
    start: Slope
    end: Slope
    subtype: str | None = None
    upper_cusp: Slope | None = None
    lower_cusp: Slope | None = None

    @property
    def is_channel(self) -> bool:
        return self.kind in (Kind.CHANNEL_A, Kind.CHANNEL_B)

    @property
    def is_half(self) -> bool:
        return self.kind is Kind.HALF

    @property
    def tag(self) -> str:
        """'edge', 'A', 'B' or the half-channel subtype."""
        return self.subtype if self.is_half else self.kind.value

    @property
    def meridional_cusps(self) -> int:
        return 2 if self.is_channel else 1 if self.is_half else 0

    def departure(self) -> Slope:
        """Vertex the first segment of the element points at."""
        if self.kind is Kind.EDGE:
            return self.end
        return self.upper_cusp if _SIDES[self.tag][0] else self.lower_cusp

    def arrival(self) -> Slope:
        """Vertex the last segment of the element comes from."""
        if self.kind is Kind.EDGE:
            return self.start
        return self.upper_cusp if _SIDES[self.tag][1] else self.lower_cusp

    def cusps(self) -> tuple[Slope, ...]:
        return () if self.kind is Kind.EDGE else (self.upper_cusp, self.lower_cusp)

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "start": str(self.start), "end": str(self.end)}
        if self.is_half:
            out["subtype"] = self.subtype
        if self.kind is not Kind.EDGE:
            out["upper_cusp"] = str(self.upper_cusp)
            out["lower_cusp"] = str(self.lower_cusp)
        return out


def edge(a: Slope, b: Slope) -> PathElement:
    if delta(a, b) != 1:
        raise PathError(f"{a} and {b} are not Farey neighbours")
    return PathElement(Kind.EDGE, a, b)


def channel(tag: str, start: Slope, end: Slope) -> PathElement:
    """A Delman channel ('A'/'B') or a half channel (subtype name)."""
    up, lo = channel_cusps(start, end)
    if tag in ("A", "B"):
        return PathElement(Kind(tag), start, end, None, up, lo)
    if tag not in HALF_SUBTYPES:
        raise PathError(f"unknown channel type {tag!r}")
    return PathElement(Kind.HALF, start, end, tag, up, lo)


def edges_along(vertices: Sequence[Slope]) -> list[PathElement]:
    return [edge(a, b) for a, b in zip(vertices, vertices[1:])]


@dataclass(frozen=True)
class GammaPath:
    elements: tuple[PathElement, ...]
    target: Slope
    context: Context = Context.TANGLE

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise PathError("empty path")
        if self.elements[0].start != INFINITY:
            raise PathError("a path starts at 1/0")
        if self.elements[-1].end != self.target:
            raise PathError(f"path ends at {self.elements[-1].end}, not {self.target}")
        for a, b in zip(self.elements, self.elements[1:]):
            if a.end != b.start:
                raise PathError(f"element ending at {a.end} is followed by one starting at {b.start}")

    @property
    def vertices(self) -> tuple[Slope, ...]:
        return tuple(e.start for e in self.elements) + (self.target,)

    @property
    def half_channels(self) -> list[PathElement]:
        return [e for e in self.elements if e.is_half]

    @property
    def channels(self) -> list[PathElement]:
        return [e for e in self.elements if e.is_channel]

    @property
    def meridional_cusps(self) -> int:
        return sum(e.meridional_cusps for e in self.elements)

    def __str__(self) -> str:
        parts = [str(self.elements[0].start)]
        for e in self.elements:
            parts.append(("->" if e.kind is Kind.EDGE else f"={e.tag}=>") + str(e.end))
        return "".join(parts)

    def to_json(self) -> dict:
        try:
            cs = list(corners_of(self))
        except PathError:
            cs = None
        return {
            "target": str(self.target),
            "context": self.context.value,
            "elements": [e.to_json() for e in self.elements],
            "corners": cs,
        }


def path_from_json(data: dict) -> GammaPath:
    from .rational import parse_slope

    elems = []
    for e in data["elements"]:
        a, b = parse_slope(e["start"]), parse_slope(e["end"])
        if e["kind"] == "edge":
            elems.append(edge(a, b))
        elif e["kind"] == "half":
            elems.append(channel(e["subtype"], a, b))
        else:
            elems.append(channel(e["kind"], a, b))
    return GammaPath(tuple(elems), parse_slope(data["target"]), Context(data.get("context", "tangle")))


diagram_for = lru_cache(maxsize=512)(build_diagram)


# corners and validation ------------------------------------------------------


def element_embeds(e: PathElement, d: FareyDiagram) -> bool:
    if e.kind is Kind.EDGE:
        return d.has_edge(e.start, e.end)
    return d.has_triangle(e.start, e.upper_cusp, e.lower_cusp) and d.has_triangle(
        e.end, e.upper_cusp, e.lower_cusp
    )


def corners_of(gamma: GammaPath, d: FareyDiagram | None = None) -> tuple[int, ...]:
    """Corner numbers at the interior vertices, channel interiors excluded."""
    d = d or diagram_for(gamma.target)
    for e in gamma.elements:
        if not element_embeds(e, d):
            raise PathError(f"{e.tag} {e.start} -> {e.end} does not embed in D({d.target})")
    els = gamma.elements
    return tuple(
        fan_corner(d, els[i].start, els[i - 1].arrival(), els[i].departure())
        for i in range(1, len(els))
    )


class Rule(str, Enum):
    ADJACENCY = "Adjacency"
    STRUCTURE = "Structure"
    MINIMAL_CORNER = "MinimalCorner"
    PARITY = "ParityCondition"
    ORIENTATION = "OrientationRequirement"


@dataclass(frozen=True)
class Violation:
    rule: Rule
    location: str


@dataclass
class PathVerdict:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: Rule, location: str):
        self.violations.append(Violation(rule, location))

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [{"rule": v.rule.value, "location": v.location} for v in self.violations]}


def _common_checks(gamma: GammaPath, d: FareyDiagram, verdict: PathVerdict) -> tuple[int, ...] | None:
    bad = [e for e in gamma.elements if not element_embeds(e, d)]
    for e in bad:
        verdict.add(Rule.ADJACENCY, f"{e.tag} {e.start} -> {e.end}")
    verts = gamma.vertices
    if len(set(verts)) != len(verts):
        verdict.add(Rule.STRUCTURE, "path revisits a vertex")
    if bad:
        return None
    cs = corners_of(gamma, d)
    for v, c in zip(verts[1:-1], cs):
        if abs(c) < 2:
            verdict.add(Rule.MINIMAL_CORNER, f"corner {c} at {v}")
    return cs


def validate_allowable(gamma: GammaPath, d: FareyDiagram | None = None) -> PathVerdict:
    d = d or diagram_for(gamma.target)
    verdict = PathVerdict()
    if gamma.half_channels:
        verdict.add(Rule.STRUCTURE, "allowable paths carry no half channel")
    _common_checks(gamma, d, verdict)
    ends = {parity_pair(v) for e in gamma.channels for v in (e.start, e.end)}
    if len(ends) > 1:
        verdict.add(Rule.PARITY, "channel ending points have different parity pairs")
    target_pp = parity_pair(gamma.target)
    if target_pp in ends:
        verdict.add(Rule.PARITY, f"a channel ending point shares the parity pair {target_pp.value} of the target")
    if gamma.context is Context.KNOT and ParityPair.OE in ends:
        verdict.add(Rule.PARITY, "a channel ending point has the parity pair of 1/0")
    return verdict


def orientation_ok(tau: PathElement, target: Slope) -> bool:
    return not (tau.subtype in ("a1", "b1") and parity_pair(tau.start) == parity_pair(target))


def validate_semi_allowable(gamma: GammaPath, d: FareyDiagram | None = None, max_half: int = 1) -> PathVerdict:
    """``max_half=2`` admits the two-half-channel paths used for (q-1)/q."""
    d = d or diagram_for(gamma.target)
    verdict = PathVerdict()
    halves = gamma.half_channels
    if not 1 <= len(halves) <= max_half:
        verdict.add(Rule.STRUCTURE, f"{len(halves)} half channels")
    if gamma.channels:
        verdict.add(Rule.STRUCTURE, "semi-allowable paths carry no full channel")
    _common_checks(gamma, d, verdict)
    for tau in halves:
        if not orientation_ok(tau, gamma.target):
            verdict.add(Rule.ORIENTATION, f"{tau.subtype} starting at {tau.start}")
    return verdict


def is_genuine_path(gamma: GammaPath, d: FareyDiagram | None = None) -> bool:
    return any(abs(c) >= 3 for c in corners_of(gamma, d))


def is_upward(gamma: GammaPath) -> bool:
    halves = gamma.half_channels
    if len(halves) != 1:
        raise PathError(f"direction needs exactly one half channel, found {len(halves)}")
    return halves[0].subtype in UPWARD


def starting_slope(gamma: GammaPath) -> Slope:
    return gamma.elements[0].departure()


# transforms ----------------------------------------------------------------


def transform_path(gamma: GammaPath, f: Callable[[Slope], Slope], reverses: bool) -> GammaPath:
    """Image of ``gamma`` under a Farey automorphism fixing 1/0.

    ``reverses`` marks orientation-reversing maps, which exchange upper and
    lower cusps and hence the a/b (A/B) labels.
    """
    out = []
    for e in gamma.elements:
        a, b = f(e.start), f(e.end)
        if e.kind is Kind.EDGE:
            out.append(edge(a, b))
        else:
            out.append(channel(_SWAP[e.tag] if reverses else e.tag, a, b))
    return GammaPath(tuple(out), f(gamma.target), gamma.context)


def _reflect(r: Slope) -> Slope:
    return r if r.is_infinite else from_fraction(1 - r.fraction)


def _negate(r: Slope) -> Slope:
    return r if r.is_infinite else make_slope(-r.p, r.q)


def reflect_path(gamma: GammaPath) -> GammaPath:
    """r -> 1 - r."""
    return transform_path(gamma, _reflect, True)


def mirror_path(gamma: GammaPath) -> GammaPath:
    """r -> -r."""
    return transform_path(gamma, _negate, True)


# builders ------------------------------------------------------------------


def _tail_from(path: Sequence[Slope], v: Slope) -> tuple[Slope, ...]:
    return tuple(path[path.index(v):])


def _require_unit_interval(target: Slope):
    if target.is_infinite or not 0 < target.fraction < 1:
        raise SlopeError(f"target {target} must lie strictly between 0 and 1")


def _pick(candidates: Iterable[GammaPath], validate) -> GammaPath | None:
    """Best candidate passing ``validate``: genuine first, then larger corners."""
    best, best_key = None, None
    for i, g in enumerate(candidates):
        if not validate(g).ok:
            continue
        cs = corners_of(g)
        key = (is_genuine_path(g), max((abs(c) for c in cs), default=0), -i)
        if best_key is None or key > best_key:
            best, best_key = g, key
    return best


def _prop65_upward_one(target: Slope) -> GammaPath:
    d = diagram_for(target)
    upper, lower = boundary_paths(d)
    half = make_slope(1, 2)
    if target.fraction >= Fraction(1, 2):
        elems = [channel("a2", INFINITY, half)] + edges_along(_tail_from(lower, half))
    else:
        elems = [channel("a3", INFINITY, half)] + edges_along(_tail_from(upper, half))
    return GammaPath(tuple(elems), target, Context.KNOT)


def _half_channels_from(d: FareyDiagram, s: Slope) -> list[tuple[Slope, Slope, Slope]]:
    """(end, x, y) for every channel s => end across an interior edge {x, y}."""
    out = []
    for t in d.triangles:
        if s not in t:
            continue
        x, y = sorted(t - {s})
        for z in d.third_vertices(x, y):
            if z != s:
                out.append((z, x, y))
    return sorted(out)


def _prop65_downward_one(target: Slope) -> GammaPath | None:
    """Upper-boundary prefix, one downward half channel, then a boundary
    suffix.  a1 is tried first; away from the model position the same gadget
    can carry the b2 label under our cusp convention."""
    d = diagram_for(target)
    upper, lower = boundary_paths(d)

    def candidates():
        for k in range(len(upper) - 1):
            s = upper[k]
            prefix = edges_along(upper[: k + 1])
            for end, _, _ in _half_channels_from(d, s):
                for tag in ("a1", "b2", "b3"):
                    tau = channel(tag, s, end)
                    for side in (upper, lower):
                        if end in side:
                            tail = edges_along(_tail_from(side, end))
                            yield GammaPath(tuple(prefix + [tau] + tail), target, Context.KNOT)

    one = make_slope(1)
    return _pick(
        (g for g in candidates() if starting_slope(g) == one),
        lambda g: validate_semi_allowable(g, d),
    )


def build_prop65(target: Slope, variant: int) -> GammaPath | None:
    """Semi-allowable path of the requested variant, or None when absent.

    1: upward, starting slope 1     2: downward, starting slope 1
    3: downward, starting slope 0   4: upward, starting slope 0
    Variants 3 and 4 are the reflections r -> 1 - r of 1 and 2.
    """
    _require_unit_interval(target)
    if variant == 1:
        return _prop65_upward_one(target)
    if variant == 2:
        return _prop65_downward_one(target)
    if variant in (3, 4):
        g = build_prop65(_reflect(target), variant - 2)
        return None if g is None else reflect_path(g)
    raise ValueError(f"variant must be 1..4, got {variant}")


def build_lemma84(target: Slope, kind: str) -> GammaPath | None:
    """Allowable tangle path starting with a channel of type ``kind``."""
    _require_unit_interval(target)
    if target.q % 2 == 0 or target.q < 3:
        return None
    x = target.fraction
    if kind == "B":
        g = build_lemma84(_reflect(target), "A")
        return None if g is None else reflect_path(g)
    if kind != "A":
        raise ValueError(f"channel type must be A or B, got {kind!r}")
    if not Fraction(1, 3) < x < 1:
        return None
    d = diagram_for(target)
    upper, lower = boundary_paths(d)
    half = make_slope(1, 2)
    side = lower if x > Fraction(1, 2) else upper
    elems = [channel("A", INFINITY, half)] + edges_along(_tail_from(side, half))
    return GammaPath(tuple(elems), target, Context.TANGLE)


def build_fig64(target: Slope) -> GammaPath:
    """Two-half-channel path for (q-1)/q, q even: an upside-down a2 from 1/0
    to 1/2, lower boundary edges, then a b2 ending at the target."""
    p, q = target.p, target.q
    if q % 2 or q < 4 or p != q - 1:
        raise PathError(f"{target} is not (q-1)/q with q even and at least 4")
    d = diagram_for(target)
    _, lower = boundary_paths(d)
    last = make_slope(q - 3, q - 2)
    elems = [channel("ra2", INFINITY, make_slope(1, 2))]
    elems += edges_along(lower[lower.index(make_slope(1, 2)): lower.index(last) + 1])
    elems.append(channel("b2", last, target))
    return GammaPath(tuple(elems), target, Context.KNOT)


def build_cor69(n: int) -> GammaPath:
    """Path in D(1/n) used for the twisted-band construction."""
    if abs(n) <= 2:
        raise PathError(f"|n| must exceed 2, got {n}")
    if n < 0:
        return mirror_path(build_cor69(-n))
    target = make_slope(1, n)
    if n % 2 == 0:
        g = reflect_path(build_fig64(make_slope(n - 1, n)))
        return GammaPath(g.elements, g.target, Context.TANGLE)
    upper, _ = boundary_paths(diagram_for(target))
    half = make_slope(1, 2)
    elems = [channel("B", INFINITY, half)] + edges_along(_tail_from(upper, half))
    return GammaPath(tuple(elems), target, Context.TANGLE)


# exhaustive enumeration -------------------------------------------------------


@dataclass(frozen=True)
class PathConstraints:
    kind: str = "allowable"  # or "semi"
    context: Context = Context.TANGLE
    require_genuine: bool = False
    starting_slope: Slope | None = None
    direction: str | None = None  # "up" / "down", semi-allowable only
    first_channel: str | None = None  # "A" / "B": path must open with this channel


def enumerate_paths(d: FareyDiagram, constraints: PathConstraints = PathConstraints()) -> list[GammaPath]:
    """Every valid path in ``d`` matching ``constraints``, by depth-first search.

    Paths are simple, and a channel's cusps may not be visited by the rest
    of the path.  Corners are checked as soon as the next element is known.
    """
    if d.target.q > max_q():
        raise EnumerationGuard(f"q = {d.target.q} exceeds LAMINAR_MAX_Q = {max_q()}")
    semi = constraints.kind == "semi"
    target = d.target
    target_pp = parity_pair(target)
    if semi:
        tags = ("a1", "a2", "a3", "b1", "b2", "b3")
        if constraints.direction == "up":
            tags = tuple(t for t in tags if t in UPWARD)
        elif constraints.direction == "down":
            tags = tuple(t for t in tags if t in DOWNWARD)
    else:
        tags = ("A", "B")
    out: list[GammaPath] = []
    elems: list[PathElement] = []
    seen: set[Slope] = {INFINITY}
    channel_pp: list[ParityPair] = []

    def allowed(e: PathElement, pos: int) -> bool:
        if e.kind is Kind.EDGE:
            return True
        if semi:
            if any(x.is_half for x in elems):
                return False
            return orientation_ok(e, target)
        if pos == 0 and constraints.first_channel and e.tag != constraints.first_channel:
            return False
        pp = parity_pair(e.start)
        if pp == target_pp or (constraints.context is Context.KNOT and pp is ParityPair.OE):
            return False
        return not channel_pp or channel_pp[0] == pp

    def options(v: Slope):
        for w in d.neighbors(v):
            yield edge(v, w)
        for end, _, _ in _half_channels_from(d, v):
            for t in tags:
                yield channel(t, v, end)

    def walk(v: Slope):
        if v == target:
            if semi and not any(x.is_half for x in elems):
                return
            g = GammaPath(tuple(elems), target, constraints.context)
            if constraints.require_genuine and not any(abs(c) >= 3 for c in corners_of(g, d)):
                return
            out.append(g)
            return
        for e in options(v):
            if not elems:
                if constraints.first_channel and e.tag != constraints.first_channel:
                    continue
                if constraints.starting_slope is not None and e.departure() != constraints.starting_slope:
                    continue
            fresh = (e.end,) + e.cusps()
            if any(x in seen for x in fresh) or not allowed(e, len(elems)):
                continue
            if elems and abs(fan_corner(d, v, elems[-1].arrival(), e.departure())) < 2:
                continue
            elems.append(e)
            seen.update(fresh)
            if e.is_channel:
                channel_pp.append(parity_pair(e.start))
            walk(e.end)
            if e.is_channel:
                channel_pp.pop()
            seen.difference_update(fresh)
            elems.pop()

    walk(INFINITY)
    return out
