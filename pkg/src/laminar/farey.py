"""The Hatcher-Thurston diagram D(p/q) and corner numbers of paths in it.

D(p/q) is the union of all minimal Farey paths from 1/0 to p/q.  It is a
triangulated polygon whose vertices all lie on its boundary; we build it by
Stern-Brocot descent, which visits exactly the triangles crossed by the
hyperbolic geodesic from 1/0 to p/q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .rational import (
    INFINITY,
    ContFrac,
    Slope,
    delta,
    eval_bracket,
    from_fraction,
    make_slope,
)


class DegenerateTarget(ValueError):
    """Raised for integral or infinite targets, whose diagram is one edge."""


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class FareyDiagram:
    target: Slope
    vertices: tuple[Slope, ...]  # boundary cycle: 1/0, upper side, target, lower side
    edges: frozenset[frozenset[Slope]]
    triangles: frozenset[frozenset[Slope]]
    _neighbors: dict = field(default_factory=dict, compare=False, repr=False)

    @cached_property
    def position(self) -> dict[Slope, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def neighbors(self, v: Slope) -> tuple[Slope, ...]:
        """Neighbors of ``v`` in fan order: one boundary neighbor first, the
        other last, consecutive entries spanning a triangle."""
        if v not in self._neighbors:
            n = len(self.vertices)
            pos = self.position
            nbrs = [u for e in self.edges if v in e for u in e if u != v]
            nbrs.sort(key=lambda u: (pos[u] - pos[v]) % n)
            self._neighbors[v] = tuple(nbrs)
        return self._neighbors[v]

    def degree(self, v: Slope) -> int:
        return len(self.neighbors(v))

    def has_edge(self, a: Slope, b: Slope) -> bool:
        return frozenset((a, b)) in self.edges

    def has_triangle(self, a: Slope, b: Slope, c: Slope) -> bool:
        return frozenset((a, b, c)) in self.triangles

    def is_upper(self, v: Slope) -> bool:
        """True for vertices strictly above the target (1/0 excluded)."""
        if v.is_infinite or v == self.target:
            return False
        return v.fraction > self.target.fraction

    def third_vertices(self, a: Slope, b: Slope) -> list[Slope]:
        """Vertices ``c`` with ``{a, b, c}`` a triangle of the diagram."""
        return [c for t in self.triangles if a in t and b in t for c in t if c not in (a, b)]

    def to_json(self) -> dict:
        upper, lower = boundary_paths(self)
        return {
            "target": str(self.target),
            "vertices": [str(v) for v in self.vertices],
            "edges": sorted([sorted(str(v) for v in e) for e in self.edges]),
            "triangles": sorted([sorted(str(v) for v in t) for t in self.triangles]),
            "upper": [str(v) for v in upper],
            "lower": [str(v) for v in lower],
            "forks": [str(v) for v in sorted(fork_vertices(self))],
        }

    def to_dot(self) -> str:
        upper, lower = boundary_paths(self)
        boundary = {frozenset(e) for path in (upper, lower) for e in zip(path, path[1:])}
        lines = [f'graph "D({self.target})" {{']
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in sorted(self.edges, key=lambda e: sorted(x.sort_key() for x in e)):
            a, b = sorted(e)
            style = ' [style=bold, color=black]' if e in boundary else ' [style=dashed, color=gray]'
            lines.append(f'  "{a}" -- "{b}"{style};')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_diagram(target: Slope) -> FareyDiagram:
    """Stern-Brocot descent from the triangle (1/0, m, m+1) down to ``target``."""
    if target.is_infinite or target.q <= 1:
        raise DegenerateTarget(f"D({target}) degenerates to a single edge")
    x = target.fraction
    m = math.floor(x)
    lo, hi = make_slope(m), make_slope(m + 1)
    tris = [frozenset((INFINITY, lo, hi))]
    while True:
        med = make_slope(lo.p + hi.p, lo.q + hi.q)
        tris.append(frozenset((lo, hi, med)))
        if med == target:
            break
        if x < med.fraction:
            hi = med
        else:
            lo = med
    verts = set().union(*tris)
    edges = {frozenset((a, b)) for t in tris for a in t for b in t if a != b}
    finite = sorted(v for v in verts if not v.is_infinite)
    upper = [v for v in finite if v.fraction > x]
    lower = [v for v in finite if v.fraction < x]
    # 1/0, upper side walking down toward the target, target, lower side walking back
    cycle = (INFINITY, *reversed(upper), target, *reversed(lower))
    return FareyDiagram(target, tuple(cycle), frozenset(edges), frozenset(tris))


def boundary_paths(d: FareyDiagram) -> tuple[tuple[Slope, ...], tuple[Slope, ...]]:
    k = d.position[d.target]
    upper = d.vertices[: k + 1]
    lower = (INFINITY, *reversed(d.vertices[k + 1:]), d.target)
    return tuple(upper), tuple(lower)


def fork_vertices(d: FareyDiagram) -> set[Slope]:
    return {v for v in d.vertices if d.degree(v) >= 4}


def fan_corner(d: FareyDiagram, v: Slope, incoming: Slope, outgoing: Slope) -> int:
    """Signed number of triangles at ``v`` between the edges to ``incoming``
    and ``outgoing``; positive when ``v`` lies below the target, i.e. the
    triangles sit above the path."""
    nb = d.neighbors(v)
    try:
        i, j = nb.index(incoming), nb.index(outgoing)
    except ValueError:
        raise PathError(f"{incoming} or {outgoing} is not adjacent to {v} in D({d.target})")
    t = abs(i - j)
    return -t if d.is_upper(v) else t


def corner_number(d: FareyDiagram, path: Sequence[Slope], i: int) -> int:
    if not 0 < i < len(path) - 1:
        raise PathError(f"index {i} is an endpoint of the path")
    for a, b in zip(path, path[1:]):
        if not d.has_edge(a, b):
            raise PathError(f"{a} and {b} are not adjacent in D({d.target})")
    return fan_corner(d, path[i], path[i - 1], path[i + 1])


def corners(d: FareyDiagram, path: Sequence[Slope]) -> tuple[int, ...]:
    return tuple(corner_number(d, path, i) for i in range(1, len(path) - 1))


def path_from_corners(target: Slope, cf: ContFrac) -> tuple[Slope, ...]:
    verts = [INFINITY, make_slope(cf.v1)]
    for i in range(1, len(cf.cs) + 1):
        v = from_fraction(cf.v1 + eval_bracket(cf.cs[:i]))
        if delta(verts[-1], v) != 1:
            raise PathError(f"prefix {i} gives {v}, not adjacent to {verts[-1]}")
        verts.append(v)
    if verts[-1] != target:
        raise PathError(f"expansion evaluates to {verts[-1]}, not {target}")
    return tuple(verts)


def enumerate_minimal_paths(d: FareyDiagram) -> list[tuple[Slope, ...]]:
    """All simple edge paths 1/0 -> target whose successive edges never
    span a triangle (every corner has magnitude at least 2)."""
    out = []

    def walk(path: list[Slope], seen: set[Slope]):
        v = path[-1]
        if v == d.target:
            out.append(tuple(path))
            return
        for w in d.neighbors(v):
            if w in seen:
                continue
            if len(path) >= 2 and d.has_triangle(path[-2], v, w):
                continue
            path.append(w)
            seen.add(w)
            walk(path, seen)
            path.pop()
            seen.discard(w)

    walk([INFINITY], {INFINITY})
    out.sort(key=lambda p: [v.sort_key() for v in p])
    return out


def reflect_slope(r: Slope) -> Slope:
    """r -> 1 - r, fixing 1/0."""
    return r if r.is_infinite else from_fraction(1 - r.fraction)


def negate_slope(r: Slope) -> Slope:
    return r if r.is_infinite else make_slope(-r.p, r.q)
