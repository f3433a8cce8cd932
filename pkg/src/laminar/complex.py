"""Sink-marked 2-complexes: local validity, singular-point types, extension
of marks over sphere boundaries, and the pre-laminar check.

Local model at a singular point: four branch arcs e1..e4 meeting at the
point and six local sectors A_ij, one for each pair of arcs.  Every arc
lies on exactly three sectors and its sink direction picks one of them.

Geometry is fixed once and for all in two coordinate models (a sphere
boundary circle on a tube, and a crossing of two disk arcs inside a sphere)
and marks are turned into sink directions with the right-hand rule: an
oriented arc on sheet S_j, with attached sheet S_i, sinks into the side of
S_j given by ``tangent x n`` where ``n`` points from the arc into S_i.
``chirality = -1`` uses the opposite hand (mirror image).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

DIAMOND = "diamond"
MARKS = (DIAMOND, "+", "-")
ARROWS = ("+", "-")


def flip(mark: str) -> str:
    return {"+": "-", "-": "+"}.get(mark, mark)


# abstract local configurations ---------------------------------------------------


@dataclass(frozen=True)
class LocalSingularConfig:
    """Four arcs, sectors keyed by the pair of arcs bounding them, and the
    sector each arc sinks into."""

    arcs: tuple[str, str, str, str]
    sectors: Mapping[str, frozenset[str]]
    sink_dir: Mapping[str, str]

    def __post_init__(self):
        for a in self.arcs:
            around = [s for s, pair in self.sectors.items() if a in pair]
            if len(around) != 3:
                raise ValueError(f"arc {a} lies on {len(around)} sectors, expected 3")
            if self.sink_dir[a] not in around:
                raise ValueError(f"arc {a} sinks into {self.sink_dir[a]}, which does not contain it")

    def sink_count(self, sector: str) -> int:
        return sum(1 for a in self.sectors[sector] if self.sink_dir[a] == sector)

    def census(self) -> dict[str, str]:
        """sector -> 'sink' / 'passing' / 'source'."""
        names = {2: "sink", 1: "passing", 0: "source"}
        return {s: names[self.sink_count(s)] for s in self.sectors}

    def sector_of(self, a: str, b: str) -> str:
        pair = frozenset((a, b))
        return next(s for s, arcs in self.sectors.items() if arcs == pair)


def check_local_config(cfg: LocalSingularConfig) -> bool:
    """Some labelling e1..e4 makes A12 the sink, A23 and A14 passing and the
    other three sectors sources."""
    census = cfg.census()
    for e1, e2, e3, e4 in itertools.permutations(cfg.arcs):
        want = {
            cfg.sector_of(e1, e2): "sink",
            cfg.sector_of(e2, e3): "passing",
            cfg.sector_of(e1, e4): "passing",
            cfg.sector_of(e1, e3): "source",
            cfg.sector_of(e2, e4): "source",
            cfg.sector_of(e3, e4): "source",
        }
        if want == census:
            return True
    return False


def check_local_config_by_remark(cfg: LocalSingularConfig) -> bool:
    """Equivalent form: one sink sector, two passing sectors with no arc in
    common whose source edges both sink into the same sector."""
    census = cfg.census()
    sinks = [s for s, c in census.items() if c == "sink"]
    passing = [s for s, c in census.items() if c == "passing"]
    if len(sinks) != 1 or len(passing) != 2:
        return False
    p1, p2 = passing
    if cfg.sectors[p1] & cfg.sectors[p2]:
        return False
    targets = set()
    for p in passing:
        src = [a for a in cfg.sectors[p] if cfg.sink_dir[a] != p]
        targets.add(cfg.sink_dir[src[0]])
    return len(targets) == 1


STANDARD_ARCS = ("e1", "e2", "e3", "e4")
STANDARD_SECTORS = {
    f"A{i}{j}": frozenset((f"e{i}", f"e{j}")) for i in range(1, 5) for j in range(i + 1, 5)
}


def standard_configs() -> list[LocalSingularConfig]:
    """All 3^4 = 81 sink-direction assignments on the standard model."""
    choices = [[s for s, pair in STANDARD_SECTORS.items() if a in pair] for a in STANDARD_ARCS]
    return [
        LocalSingularConfig(STANDARD_ARCS, STANDARD_SECTORS, dict(zip(STANDARD_ARCS, pick)))
        for pick in itertools.product(*choices)
    ]


def enumerate_valid_configs() -> list[LocalSingularConfig]:
    return [c for c in standard_configs() if check_local_config(c)]


def passing_signature(cfg: LocalSingularConfig) -> tuple:
    """Sink directions of the edges of the two passing sectors."""
    census = cfg.census()
    passing = sorted(s for s, c in census.items() if c == "passing")
    return tuple((p, tuple(sorted((a, cfg.sink_dir[a]) for a in cfg.sectors[p]))) for p in passing)


# geometric local models -----------------------------------------------------------

Vec = tuple[int, int, int]
X, Y, Z = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def _neg(v: Vec) -> Vec:
    return (-v[0], -v[1], -v[2])


def _add(*vs: Vec) -> Vec:
    return tuple(sum(c) for c in zip(*vs))


def _cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a: Vec, b: Vec) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class _Arc:
    name: str
    direction: Vec  # ray from the singular point
    attached: str  # sector of the attached sheet S_i


@dataclass(frozen=True)
class _Model:
    arcs: tuple[_Arc, ...]
    sectors: Mapping[str, tuple[frozenset[str], Vec]]  # bounding arcs, interior direction

    def sink_direction(self, arc: _Arc, tangent: Vec | None, chirality: int) -> str:
        """Sector an arc sinks into; ``tangent=None`` is a diamond."""
        if tangent is None:
            return arc.attached
        inside = self.sectors[arc.attached][1]
        d = arc.direction
        # component of the attached sector's interior normal to the arc
        n = tuple(inside[i] * _dot(d, d) - d[i] * _dot(inside, d) for i in range(3))
        side = _cross(tangent, n) if chirality > 0 else _cross(n, tangent)
        for s, (pair, interior) in self.sectors.items():
            if arc.name in pair and s != arc.attached and _dot(interior, side) > 0:
                return s
        raise AssertionError("degenerate local model")

    def config(self, tangents: Mapping[str, Vec | None], chirality: int = 1) -> LocalSingularConfig:
        return LocalSingularConfig(
            tuple(a.name for a in self.arcs),
            {s: pair for s, (pair, _) in self.sectors.items()},
            {a.name: self.sink_direction(a, tangents[a.name], chirality) for a in self.arcs},
        )


def _sectors(**kw) -> dict:
    return {k: (frozenset(v[0]), v[1]) for k, v in kw.items()}


# A sphere P (plane z = 0, x >= 0) meets a tube Q (plane x = 0) along the
# circle x = 0, z = 0, oriented +y with P on its right.  The disk D1 above P
# has its corner at y = 0; D2 below P has its corner further along, at y = 1.
# Segment "seg_b" runs from D1's corner to D2's corner along the circle
# orientation, "seg_a" runs back.
_ABOVE = _Model(
    (
        _Arc("seg_a", _neg(Y), "P_a"),
        _Arc("seg_b", Y, "P_b"),
        _Arc("alpha", X, "D"),
        _Arc("beta", Z, "D"),
    ),
    _sectors(
        Q_far=(("seg_a", "seg_b"), _neg(Z)),
        Q_a=(("seg_a", "beta"), _add(_neg(Y), Z)),
        Q_b=(("seg_b", "beta"), _add(Y, Z)),
        P_a=(("seg_a", "alpha"), _add(X, _neg(Y))),
        P_b=(("seg_b", "alpha"), _add(X, Y)),
        D=(("alpha", "beta"), _add(X, Z)),
    ),
)
_BELOW = _Model(
    (
        _Arc("seg_b", _neg(Y), "P_b"),
        _Arc("seg_a", Y, "P_a"),
        _Arc("alpha", X, "D"),
        _Arc("beta", _neg(Z), "D"),
    ),
    _sectors(
        Q_far=(("seg_a", "seg_b"), Z),
        Q_b=(("seg_b", "beta"), _add(_neg(Y), _neg(Z))),
        Q_a=(("seg_a", "beta"), _add(Y, _neg(Z))),
        P_b=(("seg_b", "alpha"), _add(X, _neg(Y))),
        P_a=(("seg_a", "alpha"), _add(X, Y)),
        D=(("alpha", "beta"), _add(X, _neg(Z))),
    ),
)


@dataclass(frozen=True)
class CircleMarks:
    """Marks around one boundary circle in geometric form.

    beta_*: "+" = up the tube (+z).  alpha_above: "+" = toward the tube;
    alpha_below: "+" = away from the tube.  With these conventions a disk
    boundary is consistently oriented exactly when its alpha and beta marks
    agree.  seg_a / seg_b: "+" = along the circle orientation.
    """

    alpha_above: str
    beta_above: str
    alpha_below: str
    beta_below: str


def _tan(mark: str, plus: Vec) -> Vec | None:
    if mark == DIAMOND:
        return None
    return plus if mark == "+" else _neg(plus)


def circle_configs(m: CircleMarks, seg_a: str, seg_b: str, chirality: int = 1):
    above = _ABOVE.config(
        {
            "alpha": _tan(m.alpha_above, _neg(X)),
            "beta": _tan(m.beta_above, Z),
            "seg_a": _tan(seg_a, Y),
            "seg_b": _tan(seg_b, Y),
        },
        chirality,
    )
    below = _BELOW.config(
        {
            "alpha": _tan(m.alpha_below, X),
            "beta": _tan(m.beta_below, Z),
            "seg_a": _tan(seg_a, Y),
            "seg_b": _tan(seg_b, Y),
        },
        chirality,
    )
    return above, below


def brute_force_extensions(m: CircleMarks, chirality: int = 1) -> list[tuple[str, str]]:
    """Every (seg_a, seg_b) mark pair making both corners valid."""
    out = []
    for sa, sb in itertools.product(MARKS, MARKS):
        above, below = circle_configs(m, sa, sb, chirality)
        if check_local_config(above) and check_local_config(below):
            out.append((sa, sb))
    return out


class CircleType(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    UNSUPPORTED = "unsupported"


def all_circle_markings() -> list[CircleMarks]:
    """The 36 markings with no diamond on the tube arcs."""
    return [CircleMarks(a1, b1, a2, b2) for a1, a2 in itertools.product(MARKS, MARKS) for b1, b2 in itertools.product(ARROWS, ARROWS)]


def classify_boundary_circle(m: CircleMarks) -> CircleType:
    if DIAMOND in (m.beta_above, m.beta_below):
        return CircleType.UNSUPPORTED
    if m.alpha_above == DIAMOND and m.alpha_below == DIAMOND:
        return CircleType.I if m.beta_above == m.beta_below else CircleType.UNSUPPORTED
    if DIAMOND in (m.alpha_above, m.alpha_below):
        return CircleType.UNSUPPORTED
    consistent = (m.alpha_above == m.beta_above) + (m.alpha_below == m.beta_below)
    return {2: CircleType.II, 1: CircleType.III, 0: CircleType.UNSUPPORTED}[consistent]


def extend_circle(m: CircleMarks, chirality: int = 1) -> tuple[str, str] | None:
    """The (seg_a, seg_b) marks forced on the circle, or None if unsupported.

    II: both segments diamond.  I: the segments point in opposite circle
    directions, seg_a along the tube arcs, whatever the chirality.  III: both
    segments run forward when the disk above is the inconsistent one and
    backward otherwise; the mirror image reverses this.
    """
    t = classify_boundary_circle(m)
    if t is CircleType.UNSUPPORTED:
        return None
    if t is CircleType.II:
        return DIAMOND, DIAMOND
    if t is CircleType.I:
        return m.beta_above, flip(m.beta_above)
    s = "+" if m.alpha_above != m.beta_above else "-"
    if chirality < 0:
        s = flip(s)
    return s, s


# Crossing of two disk arcs inside a sphere: P is z = 0, the over disk stands
# on the x-axis above P, the under disk hangs from the y-axis below P.  The
# over disk's traversal runs along +x; ``sign`` +1 means the under disk's
# traversal runs along +y (a quarter turn counterclockwise seen from above).
_CROSSING = _Model(
    (
        _Arc("over_in", _neg(X), "D_over"),
        _Arc("over_out", X, "D_over"),
        _Arc("under_in", _neg(Y), "D_under"),
        _Arc("under_out", Y, "D_under"),
    ),
    _sectors(
        D_over=(("over_in", "over_out"), Z),
        D_under=(("under_in", "under_out"), _neg(Z)),
        P_ne=(("over_out", "under_out"), _add(X, Y)),
        P_nw=(("over_in", "under_out"), _add(_neg(X), Y)),
        P_sw=(("over_in", "under_in"), _add(_neg(X), _neg(Y))),
        P_se=(("over_out", "under_in"), _add(X, _neg(Y))),
    ),
)


@dataclass(frozen=True)
class CrossingMarks:
    """Marks on the four half-arcs at a crossing, relative to the traversal
    of the disk boundary: *_in ends at the crossing, *_out starts there."""

    over_in: str
    over_out: str
    under_in: str
    under_out: str


def crossing_config(m: CrossingMarks, sign: int = 1, chirality: int = 1) -> LocalSingularConfig:
    # the under disk's traversal runs along sign * y; its incoming half lies
    # on the opposite ray
    u = Y if sign > 0 else _neg(Y)
    if sign > 0:
        tangents = {"under_in": _tan(m.under_in, u), "under_out": _tan(m.under_out, u)}
    else:
        tangents = {"under_in": _tan(m.under_out, u), "under_out": _tan(m.under_in, u)}
    tangents["over_in"] = _tan(m.over_in, X)
    tangents["over_out"] = _tan(m.over_out, X)
    return _CROSSING.config(tangents, chirality)


class PointType(str, Enum):
    IV = "IV"
    V = "V"
    INVALID = "invalid"


def all_crossing_markings() -> list[CrossingMarks]:
    return [CrossingMarks(*ms) for ms in itertools.product(MARKS, repeat=4)]


def classify_interior_point(m: CrossingMarks, sign: int = 1, chirality: int = 1) -> PointType:
    """IV: one disk's arc is diamond on both halves (the other's halves then
    point in opposite directions).  V: every other valid pattern."""
    if not check_local_config(crossing_config(m, sign, chirality)):
        return PointType.INVALID
    if (m.over_in == m.over_out == DIAMOND) or (m.under_in == m.under_out == DIAMOND):
        return PointType.IV
    return PointType.V


# tangle complexes -------------------------------------------------------------------


class ComplexError(ValueError):
    """Malformed complex data; ``pointer`` names the offending element."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


class ExtensionError(ValueError):
    def __init__(self, point: str, message: str):
        super().__init__(f"{point}: {message}")
        self.point = point


_MARK = {"enum": list(MARKS)}
_ID = {"type": "string", "minLength": 1}
SCHEMA = {
    "type": "object",
    "required": ["tubes", "spheres", "disks"],
    "properties": {
        "name": {"type": "string"},
        "chirality": {"enum": [1, -1]},
        "reconstructed": {"type": "boolean"},
        "notes": {"type": "string"},
        "tubes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "orientation"],
                "properties": {"id": _ID, "orientation": {"enum": ["up", "down"]}},
            },
        },
        "spheres": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "boundary_circles"],
                "properties": {
                    "id": _ID,
                    "boundary_circles": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "attach", "tube_id"],
                            "properties": {
                                "id": _ID,
                                "attach": {"enum": ["tube", "interior"]},
                                "tube_id": _ID,
                                "marks": {"type": "array", "items": _MARK, "minItems": 2, "maxItems": 2},
                            },
                        },
                    },
                    "regions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "edges"],
                            "properties": {
                                "id": _ID,
                                "edges": {
                                    "type": "array",
                                    "items": {
                                        "oneOf": [
                                            {
                                                "type": "object",
                                                "required": ["ref", "side"],
                                                "properties": {
                                                    "ref": {"type": "string", "pattern": r"^[^:]+:\d+$"},
                                                    "side": {"enum": ["left", "right"]},
                                                },
                                                "additionalProperties": False,
                                            },
                                            {"type": "string", "pattern": r"^[^:]+:[01]$"},
                                        ]
                                    },
                                },
                            },
                        },
                    },
                },
            },
        },
        "disks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "boundary"],
                "properties": {
                    "id": _ID,
                    "sphere": _ID,
                    "side": {"enum": ["above", "below"]},
                    "boundary": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["on"],
                            "properties": {
                                "on": {"enum": ["P", "Q", "outer"]},
                                "sphere_or_tube": _ID,
                                "mark": _MARK,
                                "from": _ID,
                                "to": _ID,
                            },
                        },
                    },
                },
            },
        },
        "crossings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "sphere", "over", "under", "sign"],
                "properties": {"id": _ID, "sphere": _ID, "over": _ID, "under": _ID, "sign": {"enum": [1, -1]}},
            },
        },
    },
}


@dataclass(frozen=True)
class BoundaryArc:
    on: str  # P, Q or outer
    where: str | None = None  # sphere or tube id
    mark: str | None = None
    frm: str | None = None
    to: str | None = None

    def to_json(self) -> dict:
        out = {"on": self.on}
        if self.where is not None:
            out["sphere_or_tube"] = self.where
        if self.mark is not None:
            out["mark"] = self.mark
        if self.frm is not None:
            out["from"] = self.frm
        if self.to is not None:
            out["to"] = self.to
        return out


@dataclass(frozen=True)
class Disk:
    id: str
    sphere: str | None
    side: str | None
    boundary: tuple[BoundaryArc, ...]


@dataclass(frozen=True)
class Circle:
    id: str
    sphere: str
    attach: str
    tube: str
    marks: tuple[str, str] | None = None  # (forward segment, backward segment)


@dataclass(frozen=True)
class Region:
    id: str
    sphere: str
    edges: tuple  # ("alpha", disk, index, side) or ("circle", circle, segment)


@dataclass(frozen=True)
class Crossing:
    id: str
    sphere: str
    over: str
    under: str
    sign: int


@dataclass(frozen=True)
class TangleComplex:
    """Tubes, punctured spheres and disks with sink marks on the disk boundaries.

    Disk boundaries are cyclic lists of arcs.  A P-arc runs ``from`` one
    circle or crossing ``to`` another in the traversal direction; marks are
    taken relative to that direction.  Circle segment 0 runs from the
    corner of the disk above to the corner of the disk below, following the
    circle counterclockwise seen from above; segment 1 is the rest.
    """

    name: str
    tubes: Mapping[str, str]
    spheres: tuple[str, ...]
    circles: Mapping[str, Circle]
    disks: Mapping[str, Disk]
    regions: tuple[Region, ...]
    crossings: Mapping[str, Crossing]
    chirality: int = 1
    reconstructed: bool = False
    notes: str = ""

    @property
    def is_extended(self) -> bool:
        return all(c.marks is not None for c in self.circles.values() if c.attach == "interior")

    def to_json(self) -> dict:
        spheres = []
        for s in self.spheres:
            circles = []
            for c in self.circles.values():
                if c.sphere != s:
                    continue
                item = {"id": c.id, "attach": c.attach, "tube_id": c.tube}
                if c.marks is not None:
                    item["marks"] = list(c.marks)
                circles.append(item)
            regions = [
                {"id": r.id, "edges": [_edge_json(e) for e in r.edges]} for r in self.regions if r.sphere == s
            ]
            spheres.append({"id": s, "boundary_circles": circles, "regions": regions})
        disks = []
        for d in self.disks.values():
            item = {"id": d.id}
            if d.sphere is not None:
                item["sphere"] = d.sphere
            if d.side is not None:
                item["side"] = d.side
            item["boundary"] = [a.to_json() for a in d.boundary]
            disks.append(item)
        return {
            "name": self.name,
            "chirality": self.chirality,
            "reconstructed": self.reconstructed,
            "notes": self.notes,
            "tubes": [{"id": t, "orientation": o} for t, o in self.tubes.items()],
            "spheres": spheres,
            "disks": disks,
            "crossings": [
                {"id": x.id, "sphere": x.sphere, "over": x.over, "under": x.under, "sign": x.sign}
                for x in self.crossings.values()
            ],
        }


def _edge_json(e: tuple):
    if e[0] == "alpha":
        return {"ref": f"{e[1]}:{e[2]}", "side": e[3]}
    return f"{e[1]}:{e[2]}"


def _unique(items: Iterable[dict], where: str, seen: set[str]):
    for i, item in enumerate(items):
        if item["id"] in seen:
            raise ComplexError(f"{where}[{i}].id", f"duplicate id {item['id']!r}")
        seen.add(item["id"])


def complex_from_json(data: Mapping) -> TangleComplex:
    """Validate against the schema and resolve every id reference."""
    import jsonschema

    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        pointer = "/" + "/".join(str(p) for p in e.absolute_path)
        raise ComplexError(pointer, e.message)

    seen: set[str] = set()
    _unique(data["tubes"], "tubes", seen)
    _unique(data["spheres"], "spheres", seen)
    _unique(data["disks"], "disks", seen)
    _unique(data.get("crossings", []), "crossings", seen)
    tubes = {t["id"]: t["orientation"] for t in data["tubes"]}
    circles: dict[str, Circle] = {}
    for i, s in enumerate(data["spheres"]):
        for j, c in enumerate(s["boundary_circles"]):
            ptr = f"/spheres/{i}/boundary_circles/{j}"
            if c["id"] in seen or c["id"] in circles:
                raise ComplexError(ptr + "/id", f"duplicate id {c['id']!r}")
            if c["tube_id"] not in tubes:
                raise ComplexError(ptr + "/tube_id", f"unknown tube {c['tube_id']!r}")
            marks = tuple(c["marks"]) if "marks" in c else None
            circles[c["id"]] = Circle(c["id"], s["id"], c["attach"], c["tube_id"], marks)
    spheres = tuple(s["id"] for s in data["spheres"])
    crossings = {
        x["id"]: Crossing(x["id"], x["sphere"], x["over"], x["under"], x["sign"]) for x in data.get("crossings", [])
    }

    disks: dict[str, Disk] = {}
    for i, d in enumerate(data["disks"]):
        ptr = f"/disks/{i}"
        arcs = []
        for j, a in enumerate(d["boundary"]):
            aptr = f"{ptr}/boundary/{j}"
            on = a["on"]
            if on != "outer" and "mark" not in a:
                raise ComplexError(aptr, f"{on}-arc has no mark")
            where = a.get("sphere_or_tube")
            if on == "Q" and where not in tubes:
                raise ComplexError(aptr + "/sphere_or_tube", f"unknown tube {where!r}")
            if on == "P":
                if where not in spheres:
                    raise ComplexError(aptr + "/sphere_or_tube", f"unknown sphere {where!r}")
                for key in ("from", "to"):
                    if a.get(key) not in circles and a.get(key) not in crossings:
                        raise ComplexError(f"{aptr}/{key}", f"unknown circle or crossing {a.get(key)!r}")
            arcs.append(BoundaryArc(on, where, a.get("mark"), a.get("from"), a.get("to")))
        if any(a.on == "P" for a in arcs) and d.get("side") is None:
            raise ComplexError(ptr, "disk meets P but has no side")
        disks[d["id"]] = Disk(d["id"], d.get("sphere"), d.get("side"), tuple(arcs))

    for i, x in enumerate(data.get("crossings", [])):
        for key in ("over", "under"):
            if x[key] not in disks:
                raise ComplexError(f"/crossings/{i}/{key}", f"unknown disk {x[key]!r}")

    regions = []
    for i, s in enumerate(data["spheres"]):
        for j, r in enumerate(s.get("regions", [])):
            edges = []
            for k, e in enumerate(r["edges"]):
                eptr = f"/spheres/{i}/regions/{j}/edges/{k}"
                if isinstance(e, str):
                    cid, seg = e.split(":")
                    if cid not in circles:
                        raise ComplexError(eptr, f"unknown circle {cid!r}")
                    edges.append(("circle", cid, int(seg)))
                else:
                    did, idx = e["ref"].split(":")
                    idx = int(idx)
                    if did not in disks or not 0 <= idx < len(disks[did].boundary) or disks[did].boundary[idx].on != "P":
                        raise ComplexError(eptr + "/ref", f"{e['ref']!r} is not a P-arc")
                    edges.append(("alpha", did, idx, e["side"]))
            regions.append(Region(r["id"], s["id"], tuple(edges)))

    return TangleComplex(
        name=data.get("name", ""),
        tubes=tubes,
        spheres=spheres,
        circles=circles,
        disks=disks,
        regions=tuple(regions),
        crossings=crossings,
        chirality=data.get("chirality", 1),
        reconstructed=data.get("reconstructed", False),
        notes=data.get("notes", ""),
    )


def load_complex(path: str | Path) -> TangleComplex:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ComplexError("/", f"not JSON: {e}") from None
    return complex_from_json(data)


PIECES = ("ht_piece", "channelA", "channelB", "half_channel", "half_channel_3", "trivial_cap")


def load_piece(name: str) -> TangleComplex:
    from importlib.resources import files

    return complex_from_json(json.loads(files("laminar").joinpath("pieces", f"{name}.json").read_text()))


# corners and structure --------------------------------------------------------------


@dataclass(frozen=True)
class Corner:
    """Where a disk's P-arc meets a circle, next to its Q-arc."""

    disk: str
    circle: str
    alpha: int  # boundary index of the P-arc
    beta: int  # boundary index of the Q-arc
    q_to_p: bool  # traversal runs from the Q-arc into the P-arc

    def flips(self, side: str) -> bool:
        # disk-relative marks that disagree with the geometric convention
        return (side == "above") == self.q_to_p


def corners(tc: TangleComplex) -> tuple[list[Corner], list[str]]:
    out, problems = [], []
    for d in tc.disks.values():
        n = len(d.boundary)
        for i, a in enumerate(d.boundary):
            if a.on != "P":
                continue
            for end, j, q_to_p in ((a.frm, (i - 1) % n, True), (a.to, (i + 1) % n, False)):
                if end in tc.circles:
                    b = d.boundary[j]
                    if b.on != "Q" or b.where != tc.circles[end].tube:
                        problems.append(f"{d.id}:{i} meets circle {end} away from its tube")
                        continue
                    out.append(Corner(d.id, end, i, j, q_to_p))
                elif end in tc.crossings:
                    nb = d.boundary[j]
                    other = nb.to if q_to_p else nb.frm
                    if nb.on != "P" or other != end:
                        problems.append(f"{d.id}:{i} is not continued through crossing {end}")
    return out, problems


def structure_violations(tc: TangleComplex) -> list[str]:
    """Failures of the tangle-complex shape: one disk corner on each side of
    every interior circle, one disk arc per meridian, disks meeting P and Q."""
    found, problems = corners(tc)
    by_circle: dict[str, list[Corner]] = {c: [] for c in tc.circles}
    for k in found:
        by_circle[k.circle].append(k)
    for cid, c in tc.circles.items():
        sides = sorted(tc.disks[k.disk].side for k in by_circle[cid])
        if c.attach == "interior" and sides != ["above", "below"]:
            problems.append(f"circle {cid}: disk corners on sides {sides}, expected one above and one below")
        if c.attach == "tube" and sides:
            problems.append(f"circle {cid}: glued to a tube end but meets disks")
    q_arcs = {t: 0 for t in tc.tubes}
    for d in tc.disks.values():
        for a in d.boundary:
            if a.on == "Q":
                q_arcs[a.where] += 1
    for t, count in q_arcs.items():
        n = sum(1 for c in tc.circles.values() if c.tube == t and c.attach == "interior")
        want = 2 * n if n else 1
        if count != want:
            problems.append(f"tube {t}: {count} disk arcs, expected {want} (one per meridian)")
    for d in tc.disks.values():
        ons = {a.on for a in d.boundary}
        # caps have no sphere at all, so only ask for P-arcs when P exists
        if "Q" not in ons or (tc.spheres and "P" not in ons):
            problems.append(f"disk {d.id}: needs boundary arcs on both P and Q")
    for x in tc.crossings.values():
        if tc.disks[x.over].side != "above" or tc.disks[x.under].side != "below":
            problems.append(f"crossing {x.id}: over disk must lie above P and under disk below")
    # every side of every P-arc and every circle segment borders exactly one region
    covered: dict[tuple, int] = {}
    for r in tc.regions:
        for e in r.edges:
            covered[e] = covered.get(e, 0) + 1
    with_regions = {r.sphere for r in tc.regions}
    want = [
        ("alpha", d.id, i, side)
        for d in tc.disks.values()
        for i, a in enumerate(d.boundary)
        if a.on == "P" and a.where in with_regions
        for side in ("left", "right")
    ]
    want += [
        ("circle", c.id, seg)
        for c in tc.circles.values()
        if c.attach == "interior" and c.sphere in with_regions
        for seg in (0, 1)
    ]
    for e in want:
        if covered.get(e, 0) != 1:
            problems.append(f"{_edge_json(e)} borders {covered.get(e, 0)} regions, expected 1")
    return problems


def circle_marks(tc: TangleComplex, cid: str) -> CircleMarks:
    """Geometric marks around an interior circle, read off the two corners."""
    found, _ = corners(tc)
    vals = {}
    for k in found:
        if k.circle != cid:
            continue
        d = tc.disks[k.disk]
        f = k.flips(d.side)
        alpha = d.boundary[k.alpha].mark
        beta = d.boundary[k.beta].mark
        vals[d.side] = (flip(alpha) if f else alpha, flip(beta) if f else beta)
    if set(vals) != {"above", "below"}:
        raise ExtensionError(f"circle {cid}", "needs one disk corner above and one below")
    return CircleMarks(*vals["above"], *vals["below"])


def _crossing_marks(tc: TangleComplex, x: Crossing) -> CrossingMarks:
    def halves(did: str):
        arcs = tc.disks[did].boundary
        into = next(a.mark for a in arcs if a.on == "P" and a.to == x.id)
        out = next(a.mark for a in arcs if a.on == "P" and a.frm == x.id)
        return into, out

    return CrossingMarks(*halves(x.over), *halves(x.under))


def circle_types(tc: TangleComplex) -> dict[str, CircleType]:
    out = {}
    for cid, c in sorted(tc.circles.items()):
        if c.attach == "interior":
            out[cid] = classify_boundary_circle(circle_marks(tc, cid))
    return out


def point_types(tc: TangleComplex) -> dict[str, PointType]:
    return {
        xid: classify_interior_point(_crossing_marks(tc, x), x.sign, tc.chirality)
        for xid, x in sorted(tc.crossings.items())
    }


def extend_marks(tc: TangleComplex) -> TangleComplex:
    """Fill the sink marks on every interior circle, or raise ExtensionError
    at the first singular point that is not of a supported type."""
    for d in sorted(tc.disks.values(), key=lambda d: d.id):
        for i, a in enumerate(d.boundary):
            if a.on == "Q" and a.mark == DIAMOND:
                raise ExtensionError(
                    f"{d.id}:{i}", "diamond on a tube arc; extension needs oriented marks on every tube arc"
                )
    circles = dict(tc.circles)
    for cid, c in sorted(tc.circles.items()):
        if c.attach != "interior":
            continue
        m = circle_marks(tc, cid)
        ext = extend_circle(m, tc.chirality)
        if ext is None:
            raise ExtensionError(f"circle {cid}", f"marks {m} match none of types I, II, III")
        seg_a, seg_b = ext
        circles[cid] = Circle(c.id, c.sphere, c.attach, c.tube, (seg_b, seg_a))
    for xid, t in point_types(tc).items():
        if t is PointType.INVALID:
            raise ExtensionError(f"crossing {xid}", "marks do not give a branched surface at this point")
    return TangleComplex(
        tc.name, tc.tubes, tc.spheres, circles, tc.disks, tc.regions, tc.crossings,
        tc.chirality, tc.reconstructed, tc.notes,
    )


def meridional_cusps(tc: TangleComplex) -> int:
    return sum(1 for t in circle_types(tc).values() if t is CircleType.II)


# branches ------------------------------------------------------------------------------


class BranchClass(str, Enum):
    SINK_DISK = "SinkDisk"
    SOURCE_DISK = "SourceDisk"
    PASSING_DISK = "PassingDisk"
    NON_DISK = "NonDisk"


@dataclass(frozen=True)
class BranchCensus:
    sinks: int
    sources: int
    diamond_edges: int
    is_disk: bool = True

    @property
    def cls(self) -> BranchClass:
        if not self.is_disk:
            return BranchClass.NON_DISK
        if self.sinks and not self.sources:
            return BranchClass.SINK_DISK
        if self.sinks:
            return BranchClass.PASSING_DISK
        return BranchClass.SOURCE_DISK


def _alpha_sink_side(tc: TangleComplex, disk: Disk, mark: str) -> str:
    # oriented P-arcs sink to the right of their direction seen from above
    # when the disk is above P, to the left when it is below
    side = "right" if disk.side == "above" else "left"
    if (mark == "-") != (tc.chirality < 0):
        side = "left" if side == "right" else "right"
    return side


def branch_census(tc: TangleComplex) -> dict[str, BranchCensus]:
    """Sink and source edges of every branch; arcs on the outer sphere are
    left out.  Tube branches are taken one per side of each circle."""
    out = {}
    for d in tc.disks.values():
        sinks = sum(1 for a in d.boundary if a.on != "outer" and a.mark == DIAMOND)
        sources = sum(1 for a in d.boundary if a.on != "outer" and a.mark != DIAMOND)
        out[f"D:{d.id}"] = BranchCensus(sinks, sources, sinks)

    for r in tc.regions:
        sinks = sources = diamonds = 0
        for e in r.edges:
            if e[0] == "alpha":
                _, did, idx, side = e
                disk = tc.disks[did]
                mark = disk.boundary[idx].mark
                if mark == DIAMOND:
                    diamonds += 1
                    sources += 1
                elif _alpha_sink_side(tc, disk, mark) == side:
                    sinks += 1
                else:
                    sources += 1
            else:
                c = tc.circles[e[1]]
                if c.marks is None:
                    continue
                if c.marks[e[2]] == DIAMOND:
                    sinks += 1
                else:
                    sources += 1
        out[f"P:{r.id}"] = BranchCensus(sinks, sources, diamonds)

    q_by_tube: dict[str, list[str]] = {t: [] for t in tc.tubes}
    for d in tc.disks.values():
        for a in d.boundary:
            if a.on == "Q":
                q_by_tube[a.where].append(a.mark)
    found, _ = corners(tc)
    for t in sorted(tc.tubes):
        interior = [c for c in tc.circles.values() if c.tube == t and c.attach == "interior"]
        if not interior:
            marks = q_by_tube[t]
            arrows = sum(1 for m in marks if m != DIAMOND)
            # an oriented arc seen from both sides is a sink edge once and a source edge once
            out[f"Q:{t}"] = BranchCensus(arrows, 2 * len(marks) - arrows, 0, is_disk=bool(marks))
            continue
        for c in interior:
            for side in ("above", "below"):
                k = next((k for k in found if k.circle == c.id and tc.disks[k.disk].side == side), None)
                sinks = sources = 0
                if k is not None:
                    if tc.disks[k.disk].boundary[k.beta].mark == DIAMOND:
                        sources += 2
                    else:
                        sinks += 1
                        sources += 1
                # forward segments sink into the tube below the circle
                into = "-" if (side == "above") == (tc.chirality > 0) else "+"
                for m in c.marks or ():
                    if m == into:
                        sinks += 1
                    else:
                        sources += 1
                out[f"Q:{c.id}:{side}"] = BranchCensus(sinks, sources, 0, is_disk=k is not None)
    return dict(sorted(out.items()))


def classify_branches(tc: TangleComplex) -> dict[str, BranchClass]:
    return {b: c.cls for b, c in branch_census(tc).items()}


@dataclass(frozen=True)
class PrelaminarReport:
    ok: bool
    witnesses: tuple[str, ...]
    circle_types: Mapping[str, str] = field(default_factory=dict)
    point_types: Mapping[str, str] = field(default_factory=dict)
    branch_classes: Mapping[str, str] = field(default_factory=dict)
    meridional_cusps: int | None = None
    # atoroidality and the absence of trivial bubbles are not checked
    # directly; they follow from every P-branch having a diamond edge
    hypothesis_derived: bool = True

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "witnesses": list(self.witnesses),
            "circle_types": dict(self.circle_types),
            "point_types": dict(self.point_types),
            "branch_classes": dict(self.branch_classes),
            "meridional_cusps": self.meridional_cusps,
            "hypothesis_derived": self.hypothesis_derived,
        }


def is_prelaminar(tc: TangleComplex) -> PrelaminarReport:
    witnesses = list(structure_violations(tc))
    try:
        types = {c: t.value for c, t in circle_types(tc).items()}
        points = {x: t.value for x, t in point_types(tc).items()}
    except ExtensionError as e:
        return PrelaminarReport(False, (*witnesses, str(e)))
    try:
        ext = extend_marks(tc)
    except ExtensionError as e:
        return PrelaminarReport(False, (*witnesses, str(e)), types, points)
    census = branch_census(ext)
    for b, c in census.items():
        if b.startswith("P:") and not c.diamond_edges:
            witnesses.append(f"branch {b} has no diamond edge")
        if c.cls is BranchClass.SINK_DISK:
            witnesses.append(f"branch {b} is a sink disk")
    classes = {b: c.cls.value for b, c in census.items()}
    return PrelaminarReport(not witnesses, tuple(witnesses), types, points, classes, meridional_cusps(ext))


# symmetries -------------------------------------------------------------------------------


def _map_marks(tc: TangleComplex, f, chirality: int) -> TangleComplex:
    disks = {
        d.id: Disk(d.id, d.sphere, d.side, tuple(
            BoundaryArc(a.on, a.where, None if a.mark is None else f(a.mark), a.frm, a.to) for a in d.boundary
        ))
        for d in tc.disks.values()
    }
    circles = {
        c.id: Circle(c.id, c.sphere, c.attach, c.tube, None if c.marks is None else tuple(f(m) for m in c.marks))
        for c in tc.circles.values()
    }
    return TangleComplex(
        tc.name, tc.tubes, tc.spheres, circles, disks, tc.regions, tc.crossings,
        chirality, tc.reconstructed, tc.notes,
    )


def reverse_orientations(tc: TangleComplex) -> TangleComplex:
    """Reverse every oriented mark, keeping the chirality."""
    return _map_marks(tc, flip, tc.chirality)


def mirror(tc: TangleComplex) -> TangleComplex:
    """Mirror image: the opposite chirality with every oriented mark reversed."""
    return _map_marks(tc, flip, -tc.chirality)
