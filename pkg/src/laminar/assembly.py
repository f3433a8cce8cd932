"""Exterior regions of path surfaces and assembly of knot and tangle
branched surfaces.

Region topology is read off the path symbolically: the region between the
level spheres at consecutive interior vertices is a solid torus whose cusp
winding number is the magnitude of the corner there, the bottom region is
a ball with one cusp, and the pieces of a Montesinos knot meet in the
complement of a twisted band.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .complex import is_prelaminar, load_piece
from .paths import (
    Context,
    GammaPath,
    Kind,
    PathError,
    channel,
    corners_of,
    is_upward,
    starting_slope,
    swap_tag,
    validate_allowable,
    validate_semi_allowable,
)
from .rational import MontesinosKnot, Slope, make_slope


class Topology(str, Enum):
    BALL = "Ball"
    SOLID_TORUS = "SolidTorus"
    BAND_COMPLEMENT = "BandComplement"
    # the tangle-context region above the top level sphere, merged into the
    # outer collar when a tangle surface is assembled
    OUTER = "Outer"


@dataclass(frozen=True)
class CuspedRegion:
    index: int
    topology: Topology
    cusp_winding: int | None = None
    half_twists: int | None = None
    cusp_slope: Slope | None = None
    source: str = ""  # which path or piece the region comes from

    @property
    def certified(self) -> bool:
        """Whether the essentiality of this region is decided at all."""
        if self.topology is Topology.BAND_COMPLEMENT:
            return abs(self.half_twists) >= 2
        return True

    @property
    def essential(self) -> bool:
        if self.topology is Topology.SOLID_TORUS:
            # winding 0 leaves a compressing disk, winding 1 a monogon
            return self.cusp_winding >= 2
        if self.topology is Topology.BAND_COMPLEMENT:
            return abs(self.half_twists) >= 2
        return True

    def to_json(self) -> dict:
        out = {"index": self.index, "topology": self.topology.value}
        if self.cusp_winding is not None:
            out["winding"] = self.cusp_winding
        if self.half_twists is not None:
            out["half_twists"] = self.half_twists
            if not self.certified:
                out["uncertified"] = True
        if self.cusp_slope is not None:
            out["cusp_slope"] = str(self.cusp_slope)
        if self.source:
            out["source"] = self.source
        return out


def validate_path(gamma: GammaPath):
    """Validate with the rule set the path's elements call for."""
    if gamma.half_channels:
        return validate_semi_allowable(gamma, max_half=2)
    return validate_allowable(gamma)


def exterior_components(gamma: GammaPath, context: Context | None = None, check: bool = True) -> list[CuspedRegion]:
    """Y_0 .. Y_n for a path with vertices v_0 = 1/0, ..., v_n = target."""
    context = context or gamma.context
    if check:
        verdict = validate_path(gamma)
        if not verdict.ok:
            raise PathError(f"path {gamma} is not valid: {verdict.violations[0].rule.value} at {verdict.violations[0].location}")
    cs = corners_of(gamma)
    label = str(gamma)
    if context is Context.KNOT:
        top = CuspedRegion(0, Topology.BALL, source=label)
    else:
        top = CuspedRegion(0, Topology.OUTER, cusp_slope=starting_slope(gamma), source=label)
    inner = [CuspedRegion(i + 1, Topology.SOLID_TORUS, cusp_winding=abs(c), source=label) for i, c in enumerate(cs)]
    return [top, *inner, CuspedRegion(len(cs) + 1, Topology.BALL, source=label)]


def essential_verdict(regions: Sequence[CuspedRegion]) -> bool:
    """True iff every region is an essential cusped manifold.  Bands with 0
    or 1 half twist come back False and are flagged by ``uncertified``."""
    return all(r.essential for r in regions)


def uncertified(regions: Sequence[CuspedRegion]) -> list[CuspedRegion]:
    return [r for r in regions if not r.certified]


# model pieces ----------------------------------------------------------------------

_PIECE_FOR = {
    Kind.EDGE: "ht_piece",
    Kind.CHANNEL_A: "channelA",
    Kind.CHANNEL_B: "channelB",
}


def piece_for(e) -> str:
    if e.kind is Kind.HALF:
        return "half_channel_3" if e.subtype in ("a3", "b3") else "half_channel"
    return _PIECE_FOR[e.kind]


@lru_cache(maxsize=None)
def piece_ok(name: str) -> bool:
    return is_prelaminar(load_piece(name)).ok


def _pieces(paths: Sequence[GammaPath]) -> dict[str, bool]:
    names = {piece_for(e) for g in paths for e in g.elements} | {"trivial_cap"}
    return {n: piece_ok(n) for n in sorted(names)}


# assemblies -------------------------------------------------------------------------


class OrientationIncompatible(ValueError):
    pass


@dataclass(frozen=True)
class Assembly:
    kind: str  # "montesinos" or "tangle"
    paths: tuple[GammaPath, ...]
    regions: tuple[CuspedRegion, ...]
    meridional_cusps: int
    laminar: bool
    genuine: bool
    persistent: bool
    band_half_twists: int | None = None
    degeneracy_slope: Slope | None = None
    pattern: str = ""
    pieces: dict = field(default_factory=dict)

    @property
    def max_winding(self) -> int:
        return max((r.cusp_winding for r in self.regions if r.cusp_winding is not None), default=0)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "laminar": self.laminar,
            "genuine": self.genuine,
            "persistent": self.persistent,
            "meridional_cusps": self.meridional_cusps,
            "pattern": self.pattern,
            "regions": [r.to_json() for r in self.regions],
            "pieces": self.pieces,
            "certificates": [g.to_json() | {"path": str(g)} for g in self.paths],
        }
        if self.band_half_twists is not None:
            out["band_half_twists"] = self.band_half_twists
        if self.degeneracy_slope is not None:
            out["degeneracy_slope"] = str(self.degeneracy_slope)
        return out


def _role(g: GammaPath) -> str:
    halves = g.half_channels
    if g.channels:
        return "channel"
    if not halves:
        return "boundary"
    if len(halves) == 2:
        return "two-half"
    return "up" if is_upward(g) else "down"


def _start_bit(g: GammaPath) -> int:
    s = starting_slope(g)
    if s == make_slope(0):
        return 0
    if s == make_slope(1):
        return 1
    raise OrientationIncompatible(f"path {g} leaves 1/0 toward {s}; the band needs slope 0 or 1")


def _pattern(k: MontesinosKnot, paths: Sequence[GammaPath]) -> str:
    roles = sorted((_role(g), _start_bit(g)) for g in paths)
    for g in paths:
        if _role(g) == "boundary" and g.target.q % 2 == 0:
            raise OrientationIncompatible(f"boundary path for {g.target}: its left edges cannot both point outward with q even")
    if roles == [("boundary", 1), ("down", 0), ("up", 1)]:
        if k.n < 0:
            raise OrientationIncompatible("starting slopes (1, 0, 1) need n >= 0")
        return "up-down-boundary"
    if roles == [("boundary", 1), ("down", 1), ("up", 1)]:
        if k.n < -1:
            raise OrientationIncompatible("starting slopes (1, 1, 1) need n >= -1")
        return "down-up-boundary"
    if roles == [("boundary", 1), ("boundary", 1), ("two-half", 1)]:
        if not (k.n == -1 or (k.n >= 0 and k.n % 2 == 0)):
            raise OrientationIncompatible("the two-half-channel construction needs n = -1 or n >= 0 even")
        return "two-half"
    raise OrientationIncompatible(f"roles and starting slopes {roles} match no sanctioned pattern")


def assemble_montesinos(k: MontesinosKnot, paths: Sequence[GammaPath]) -> Assembly:
    """Insert one path surface per tangle into a band with n half twists."""
    if k.length != 3 or len(paths) != 3:
        raise ValueError("assembly needs a length-3 knot and one path per tangle")
    for r, g in zip(k.tangles, paths):
        if g.target != r:
            raise PathError(f"path ends at {g.target}, tangle is {r}")
    pattern = _pattern(k, paths)
    twists = k.n + sum(_start_bit(g) for g in paths)
    regions = []
    for g in paths:
        # each tangle's top region opens into the band complement
        regions.extend(exterior_components(g, Context.KNOT)[1:])
    band = CuspedRegion(0, Topology.BAND_COMPLEMENT, half_twists=twists, source="band")
    regions = [band] + [CuspedRegion(i + 1, r.topology, r.cusp_winding, r.half_twists, r.cusp_slope, r.source)
                        for i, r in enumerate(regions)]
    pieces = _pieces(paths)
    laminar = essential_verdict(regions) and all(pieces.values())
    cusps = sum(g.meridional_cusps for g in paths)
    winding = max((r.cusp_winding or 0) for r in regions)
    return Assembly(
        kind="montesinos",
        paths=tuple(paths),
        regions=tuple(regions),
        meridional_cusps=cusps,
        laminar=laminar,
        genuine=laminar and (winding >= 3 or abs(twists) >= 3),
        persistent=laminar and cusps >= 2,
        band_half_twists=twists,
        pattern=pattern,
        pieces=pieces,
    )


def reverse_channel_orientations(gamma: GammaPath) -> GammaPath:
    """Same slopes, every oriented sink mark reversed: A and B (and a and b)
    trade places."""
    out = [e if e.kind is Kind.EDGE else channel(swap_tag(e.tag), e.start, e.end) for e in gamma.elements]
    return GammaPath(tuple(out), gamma.target, gamma.context)


def _top_cusp(g: GammaPath) -> Fraction:
    return g.elements[0].end.fraction


def assemble_tangle(g1: GammaPath, g2: GammaPath, check: bool = True) -> Assembly:
    """Glue the surface for r1 to the mirror of the surface for r2.

    ``check=False`` skips channel-type and validity checks so negative
    controls (reversed orientations) can still be assembled."""
    if check:
        for g in (g1, g2):
            if g.context is not Context.TANGLE:
                raise PathError(f"path {g} is not in tangle context")
            if g.elements[0].kind is not Kind.CHANNEL_B:
                raise PathError(f"path {g} does not start with a type B channel")
    regions = []
    for g in (g1, g2):
        regions.extend(exterior_components(g, Context.TANGLE, check=check)[1:])
    s = _top_cusp(g1) - _top_cusp(g2)
    slope = make_slope(s.numerator, s.denominator)
    outer = CuspedRegion(0, Topology.OUTER, cusp_slope=slope, source="collar")
    regions = [outer] + [CuspedRegion(i + 1, r.topology, r.cusp_winding, None, None, r.source) for i, r in enumerate(regions)]
    pieces = _pieces((g1, g2))
    persistent = essential_verdict(regions) and all(pieces.values())
    winding = max((r.cusp_winding or 0) for r in regions)
    return Assembly(
        kind="tangle",
        paths=(g1, g2),
        regions=tuple(regions),
        meridional_cusps=g1.meridional_cusps + g2.meridional_cusps,
        laminar=persistent,
        genuine=persistent and winding >= 3,
        persistent=persistent,
        degeneracy_slope=slope,
        pattern="B-channel pair",
        pieces=pieces,
    )
