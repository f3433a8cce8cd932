"""Generate the bundled model-piece complexes from planar pictures.

Each piece is drawn in the plane as seen from above: punctures shrink to
points and disk arcs are polylines between them.  shapely cuts the
picture into faces, which become the branches of P; crossing signs and the
side of each face along each arc are read off the geometry.

    python3 scripts/make_pieces.py [--out src/laminar/pieces]
"""

from __future__ import annotations

import argparse
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from shapely.geometry import LineString, Point, box
from shapely.ops import polygonize, unary_union

from laminar.complex import DIAMOND, complex_from_json, flip, is_prelaminar

EPS = 1e-3
# radius at which a puncture's boundary circle is sampled
RADIUS = 0.05


@dataclass
class ArcSpec:
    disk: str
    side: str  # above / below
    start: str  # circle ids
    end: str
    via: list[tuple[float, float]] = field(default_factory=list)
    # disk-relative marks on the halves between crossings, in traversal order
    marks: list[str] | str = DIAMOND
    # geometric tube-arc directions at the start and end corners ("+" = up)
    beta: tuple[str, str] = ("+", "+")


@dataclass
class PieceConfig:
    name: str
    holes: dict[str, tuple[float, float]]
    arcs: list[ArcSpec]
    notes: str = ""
    mirror_x: bool = False


def _rel(canonical: str, side: str, q_to_p: bool) -> str:
    flips = (side == "above") == q_to_p
    return flip(canonical) if flips else canonical


def _inner_hits(a: LineString, b: LineString, centres: dict[str, Point]) -> list[Point]:
    """Intersection points away from the punctures."""
    hit = a.intersection(b)
    pts = [hit] if hit.geom_type == "Point" else list(getattr(hit, "geoms", []))
    assert all(p.geom_type == "Point" for p in pts), f"arcs overlap: {hit}"
    return [p for p in pts if min(p.distance(c) for c in centres.values()) > 1e-9]


def build(cfg: PieceConfig) -> dict:
    sx = -1.0 if cfg.mirror_x else 1.0
    centres = {c: Point(sx * x, y) for c, (x, y) in cfg.holes.items()}
    lines = {}
    for a in cfg.arcs:
        pts = [centres[a.start].coords[0], *((sx * x, y) for x, y in a.via), centres[a.end].coords[0]]
        lines[a.disk] = LineString(pts)

    # crossings between an arc above P and an arc below
    crossings = []
    for a in cfg.arcs:
        for b in cfg.arcs:
            if a.side != "above" or b.side != "below":
                continue
            for hit in _inner_hits(lines[a.disk], lines[b.disk], centres):
                crossings.append((a.disk, b.disk, hit))
    for a in cfg.arcs:
        for b in cfg.arcs:
            if a.disk < b.disk and a.side == b.side:
                assert not _inner_hits(lines[a.disk], lines[b.disk], centres), f"{a.disk} and {b.disk} cross on one side"

    def tangent(line: LineString, at: Point) -> tuple[float, float]:
        d = line.project(at)
        p0, p1 = line.interpolate(d - EPS), line.interpolate(d + EPS)
        return p1.x - p0.x, p1.y - p0.y

    xs = []
    for i, (over, under, pt) in enumerate(sorted(crossings, key=lambda c: (c[0], c[1]))):
        to, tu = tangent(lines[over], pt), tangent(lines[under], pt)
        sign = 1 if to[0] * tu[1] - to[1] * tu[0] > 0 else -1
        xs.append({"id": f"x{i + 1}", "over": over, "under": under, "sign": sign, "point": pt})

    # split every arc at its crossings
    halves = {}  # disk -> list of (LineString, from, to)
    for a in cfg.arcs:
        line = lines[a.disk]
        cuts = sorted((line.project(x["point"]), x["id"]) for x in xs if a.disk in (x["over"], x["under"]))
        stops = [(0.0, a.start), *cuts, (line.length, a.end)]
        parts = []
        for (d0, n0), (d1, n1) in zip(stops, stops[1:]):
            seg = LineString([line.interpolate(d0 + (d1 - d0) * t / 32).coords[0] for t in range(33)])
            parts.append((seg, n0, n1))
        halves[a.disk] = parts

    disks = []
    for a in cfg.arcs:
        parts = halves[a.disk]
        marks = a.marks if isinstance(a.marks, list) else [a.marks] * len(parts)
        assert len(marks) == len(parts), f"{a.disk}: {len(parts)} halves, {len(marks)} marks"
        boundary = [{"on": "Q", "sphere_or_tube": f"t_{a.start}", "mark": _rel(a.beta[0], a.side, True)}]
        for (_, n0, n1), m in zip(parts, marks):
            boundary.append({"on": "P", "sphere_or_tube": "P", "mark": m, "from": n0, "to": n1})
        boundary.append({"on": "Q", "sphere_or_tube": f"t_{a.end}", "mark": _rel(a.beta[1], a.side, False)})
        boundary.append({"on": "outer"})
        disks.append({"id": a.disk, "sphere": "P", "side": a.side, "boundary": boundary})

    # faces of the picture
    frame = box(-20, -20, 20, 20).exterior
    segs = [seg for parts in halves.values() for seg, _, _ in parts]
    faces = list(polygonize(unary_union([*segs, frame])))

    def face_at(pt: Point) -> int:
        found = [i for i, f in enumerate(faces) if f.contains(pt)]
        assert len(found) == 1, pt
        return found[0]

    edges: dict[int, list] = {i: [] for i in range(len(faces))}
    for d in disks:
        for idx, item in enumerate(d["boundary"]):
            if item["on"] != "P":
                continue
            k = [i for i, it in enumerate(d["boundary"]) if it["on"] == "P"].index(idx)
            seg = halves[d["id"]][k][0]
            mid = seg.interpolate(0.5, normalized=True)
            tx, ty = tangent(seg, mid)
            norm = math.hypot(tx, ty)
            nx, ny = -ty / norm, tx / norm  # left normal
            for side, s in (("left", 1), ("right", -1)):
                edges[face_at(Point(mid.x + s * 10 * EPS * nx, mid.y + s * 10 * EPS * ny))].append(
                    {"ref": f"{d['id']}:{idx}", "side": side}
                )

    # circle segment 0 runs counterclockwise from the corner of the disk above
    # to the corner of the disk below
    def corner_angle(c: str, side: str) -> float:
        for a in cfg.arcs:
            if a.side == side and c in (a.start, a.end):
                coords = list(lines[a.disk].coords)
                nxt = coords[1] if a.start == c else coords[-2]
                return math.atan2(nxt[1] - centres[c].y, nxt[0] - centres[c].x)
        raise ValueError(f"no {side} corner at {c}")

    for c, p in centres.items():
        ta, tb = corner_angle(c, "above"), corner_angle(c, "below")
        span = (tb - ta) % (2 * math.pi)
        for seg, mid in ((0, ta + span / 2), (1, ta + span + (2 * math.pi - span) / 2)):
            edges[face_at(Point(p.x + RADIUS * math.cos(mid), p.y + RADIUS * math.sin(mid)))].append(f"{c}:{seg}")

    order = sorted(range(len(faces)), key=lambda i: (round(faces[i].representative_point().x, 3), round(faces[i].representative_point().y, 3)))
    regions = [
        {"id": f"R{n + 1}", "edges": sorted(edges[i], key=lambda e: json.dumps(e, sort_keys=True))}
        for n, i in enumerate(order)
    ]

    tube_dirs = {}
    for a in cfg.arcs:
        tube_dirs.setdefault(a.start, a.beta[0])
        tube_dirs.setdefault(a.end, a.beta[1])
    return {
        "name": cfg.name,
        "chirality": 1,
        "reconstructed": True,
        "notes": cfg.notes,
        "tubes": [{"id": f"t_{c}", "orientation": "up" if tube_dirs[c] == "+" else "down"} for c in cfg.holes],
        "spheres": [
            {
                "id": "P",
                "boundary_circles": [{"id": c, "attach": "interior", "tube_id": f"t_{c}"} for c in cfg.holes],
                "regions": regions,
            }
        ],
        "disks": disks,
        "crossings": [{k: v for k, v in x.items() if k != "point"} | {"sphere": "P"} for x in xs],
    }


def _reverse_arrows(data: dict) -> dict:
    for d in data["disks"]:
        for a in d["boundary"]:
            if "mark" in a:
                a["mark"] = flip(a["mark"])
    return data


def ht_piece() -> dict:
    holes = {"c1": (0, 0), "c2": (4, 0), "c3": (4, 4), "c4": (0, 4)}
    arcs = [
        ArcSpec("D1", "above", "c1", "c4", beta=("+", "-")),
        ArcSpec("D2", "above", "c2", "c3", beta=("-", "+")),
        ArcSpec("D3", "below", "c1", "c2", beta=("+", "-")),
        ArcSpec("D4", "below", "c4", "c3", beta=("-", "+")),
    ]
    return build(PieceConfig("ht_piece", holes, arcs, "four diamond arcs, tube arcs follow an orientation of the strings"))


def _channel_arcs(d4_marks=("+", "-"), d4_beta=("+", "+")) -> list[ArcSpec]:
    return [
        # diamond arcs joining c1 and c2, one on each side of P
        ArcSpec("D1", "above", "c1", "c2", via=[(1.5, 1.5), (2.5, 1.5)], beta=("+", "-")),
        ArcSpec("D3", "below", "c1", "c2", via=[(1.5, -1.5), (2.5, -1.5)], beta=("+", "-")),
        # oriented arcs joining c3 and c4, reversed across their crossing
        ArcSpec("D2", "above", "c3", "c4", via=[(2, -2.5), (5.5, -2.5), (5.5, 3)], marks=["+", "-"], beta=("-", "-")),
        ArcSpec("D4", "below", "c3", "c4", marks=list(d4_marks), beta=d4_beta),
    ]


_CHANNEL_HOLES = {"c1": (0, 0), "c2": (4, 0), "c3": (2, 0), "c4": (2, 3)}


def channel_a() -> dict:
    return build(PieceConfig("channelA", _CHANNEL_HOLES, _channel_arcs(), "two type I and two type II circles"))


def channel_b() -> dict:
    data = build(
        PieceConfig("channelB", _CHANNEL_HOLES, _channel_arcs(), "mirror picture of channelA", mirror_x=True)
    )
    return _reverse_arrows(data)


def half_channel() -> dict:
    # the tube arc of D4 at c4 is reversed, so c4 becomes type III
    return build(
        PieceConfig(
            "half_channel", _CHANNEL_HOLES, _channel_arcs(d4_beta=("+", "-")),
            "channel with one tube arc reversed: one type II and one type III circle",
        )
    )


def half_channel_3() -> dict:
    # D4's P-marks are reversed and its tube arc at c3 follows, so only c4 is type III
    return build(
        PieceConfig(
            "half_channel_3", _CHANNEL_HOLES, _channel_arcs(d4_marks=("-", "+"), d4_beta=("-", "+")),
            "channel with the lower disk's P-marks reversed: one type II and one type III circle",
        )
    )


def trivial_cap() -> dict:
    return {
        "name": "trivial_cap",
        "chirality": 1,
        "reconstructed": True,
        "notes": "two strands closed off below, each by a half disk on its tube",
        "tubes": [{"id": "u1", "orientation": "up"}, {"id": "u2", "orientation": "down"}],
        "spheres": [],
        "disks": [
            {"id": "E1", "boundary": [{"on": "Q", "sphere_or_tube": "u1", "mark": "+"}, {"on": "outer"}]},
            {"id": "E2", "boundary": [{"on": "Q", "sphere_or_tube": "u2", "mark": "+"}, {"on": "outer"}]},
        ],
        "crossings": [],
    }


BUILDERS = {
    "ht_piece": ht_piece,
    "channelA": channel_a,
    "channelB": channel_b,
    "half_channel": half_channel,
    "half_channel_3": half_channel_3,
    "trivial_cap": trivial_cap,
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src" / "laminar" / "pieces"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in BUILDERS.items():
        data = make()
        report = is_prelaminar(complex_from_json(data))
        print(f"{name:16s} ok={report.ok} cusps={report.meridional_cusps} types={dict(report.circle_types)} "
              f"points={dict(report.point_types)} {list(report.witnesses)}")
        (out / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n")


if __name__ == "__main__":
    main()
