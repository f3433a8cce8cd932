"""Knot and tangle classification built on certified assemblies.

Every positive verdict carries an Assembly whose paths are re-validated
and whose regions are re-derived before the verdict is returned, so the
decision trees below only choose which construction to try.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .assembly import Assembly, OrientationIncompatible, assemble_montesinos, assemble_tangle, validate_path
from .farey import DegenerateTarget, boundary_paths
from .paths import (
    Context,
    GammaPath,
    PathConstraints,
    PathError,
    build_fig64,
    build_lemma84,
    build_prop65,
    diagram_for,
    edges_along,
    enumerate_paths,
)
from .rational import (
    MontesinosKnot,
    ParityPair,
    Slope,
    SlopeError,
    from_fraction,
    make_slope,
    mod_neg_inverse,
    normalize_montesinos,
    parity_pair,
)


class LinkInput(ValueError):
    def __init__(self, k: MontesinosKnot, components: int):
        super().__init__(f"{k} is a link of {components} components")
        self.components = components


class TwoBridgeInput(ValueError):
    """Length at most 2: use the allowable-path machinery for 2-bridge knots."""


class CertificateNotFound(RuntimeError):
    pass


def as_knot(k: MontesinosKnot | tuple) -> MontesinosKnot:
    if isinstance(k, MontesinosKnot):
        return k
    tangles, n = k
    return normalize_montesinos(tangles, n)


# component counting ------------------------------------------------------------

_PAIRING = {
    ParityPair.OE: (("NW", "SW"), ("NE", "SE")),  # vertical, like 1/0
    ParityPair.EO: (("NW", "NE"), ("SW", "SE")),  # horizontal, like 0/1
    ParityPair.OO: (("NW", "SE"), ("NE", "SW")),  # diagonal, like 1/1
}


class _Cycles:
    """Union-find over the endpoints of a 4-valent strand diagram."""

    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def join(self, a, b):
        self.parent[self.find(a)] = self.find(b)

    def count(self) -> int:
        return len({self.find(x) for x in list(self.parent)})


def _close_sum(uf: _Cycles, ends: Sequence[dict]):
    """Tangle sum left to right, then the numerator closure."""
    for left, right in zip(ends, ends[1:]):
        uf.join(left["NE"], right["NW"])
        uf.join(left["SE"], right["SW"])
    uf.join(ends[0]["NW"], ends[-1]["NE"])
    uf.join(ends[0]["SW"], ends[-1]["SE"])


def component_count(k: MontesinosKnot | tuple) -> int:
    """Number of components, from the endpoint pairing of each tangle.

    The n half twists behave as one more tangle of slope n/1."""
    k = as_knot(k)
    slopes = [*k.tangles, make_slope(k.n)]
    uf = _Cycles()
    ends = []
    for i, r in enumerate(slopes):
        for a, b in _PAIRING[parity_pair(r)]:
            uf.join((i, a), (i, b))
        ends.append({c: (i, c) for c in ("NW", "NE", "SW", "SE")})
    _close_sum(uf, ends)
    return uf.count()


def pretzel_strand_count(qs: Sequence[int], n: int) -> int:
    """Components of the pretzel diagram built crossing by crossing: one
    column of |q| vertical twists per entry and a row of |n| horizontal
    twists.  Crossing signs do not affect connectivity."""
    uf = _Cycles()
    ends = []
    for i, q in enumerate(qs):
        m = abs(q)
        for j in range(m):
            uf.join((i, j, "TL"), (i, j, "BR"))
            uf.join((i, j, "TR"), (i, j, "BL"))
            if j + 1 < m:
                uf.join((i, j, "BL"), (i, j + 1, "TL"))
                uf.join((i, j, "BR"), (i, j + 1, "TR"))
        ends.append({"NW": (i, 0, "TL"), "NE": (i, 0, "TR"), "SW": (i, m - 1, "BL"), "SE": (i, m - 1, "BR")})
    b = len(qs)
    m = abs(n)
    if m == 0:
        uf.join((b, "NW"), (b, "NE"))
        uf.join((b, "SW"), (b, "SE"))
        ends.append({c: (b, c) for c in ("NW", "NE", "SW", "SE")})
    else:
        for j in range(m):
            uf.join((b, j, "LT"), (b, j, "RB"))
            uf.join((b, j, "LB"), (b, j, "RT"))
            if j + 1 < m:
                uf.join((b, j, "RT"), (b, j + 1, "LT"))
                uf.join((b, j, "RB"), (b, j + 1, "LB"))
        ends.append({"NW": (b, 0, "LT"), "SW": (b, 0, "LB"), "NE": (b, m - 1, "RT"), "SE": (b, m - 1, "RB")})
    _close_sum(uf, ends)
    return uf.count()


# verdicts --------------------------------------------------------------------------


class Status(str, Enum):
    PERSISTENTLY_LAMINAR = "PersistentlyLaminar"
    EXCEPTIONAL_FORM = "ExceptionalForm"
    LENGTH_AT_LEAST_4 = "LengthAtLeast4"


CLOSED_SURFACE_CITATION = (
    "length >= 4: the exterior contains a closed essential surface that stays "
    "incompressible after every surgery (Wu, 'Incompressibility of surfaces in "
    "surgered 3-manifolds')"
)


@dataclass(frozen=True)
class KnotVerdict:
    knot: MontesinosKnot
    status: Status
    genuine: bool | None = None
    certificate: Assembly | None = None
    form: dict | None = None
    citation: str | None = None

    @property
    def persistent(self) -> bool:
        return self.status is not Status.EXCEPTIONAL_FORM

    def to_json(self) -> dict:
        k = self.knot
        out = {
            "knot": {"tangles": [str(r) for r in k.tangles], "n": k.n, "mirrored": k.mirrored},
            "status": self.status.value,
            "persistent": self.persistent,
        }
        if self.genuine is not None:
            out["genuine"] = self.genuine
        if self.form is not None:
            out["form"] = self.form
        if self.citation is not None:
            out["citation"] = self.citation
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def _knot_checks(k: MontesinosKnot):
    c = component_count(k)
    if c != 1:
        raise LinkInput(k, c)
    if k.length <= 2:
        raise TwoBridgeInput(f"{k} has length {k.length} and is a 2-bridge knot")


# constructions ---------------------------------------------------------------------


def boundary_path(r: Slope) -> GammaPath:
    """Upper boundary path of D(r), all edges."""
    upper, _ = boundary_paths(diagram_for(r))
    return GammaPath(tuple(edges_along(upper)), r, Context.KNOT)


def _semi_options(r: Slope, variant: int) -> Iterator[GammaPath]:
    """The builder's path first, then every other one of the same variant."""
    g = build_prop65(r, variant)
    if g is not None:
        yield g
    direction = "up" if variant in (1, 4) else "down"
    start = make_slope(1) if variant in (1, 2) else make_slope(0)
    c = PathConstraints(kind="semi", context=Context.KNOT, starting_slope=start, direction=direction)
    for h in enumerate_paths(diagram_for(r), c):
        if h != g and validate_path(h).ok:
            yield h


def _constructions(k: MontesinosKnot, exhaustive: bool) -> Iterator[tuple[GammaPath, ...]]:
    """Path triples for the up-down-boundary, down-up-boundary and
    two-half patterns, in that order."""
    rs = k.tangles
    odd = [i for i, r in enumerate(rs) if r.q % 2]

    def options(r, variant):
        if exhaustive:
            yield from _semi_options(r, variant)
        else:
            g = build_prop65(r, variant)
            if g is not None:
                yield g

    def place(assign: dict[int, GammaPath]) -> tuple[GammaPath, ...]:
        return tuple(assign[i] for i in range(3))

    for up_var, down_var, min_n in ((1, 3, 0), (1, 2, -1)):
        if k.n < min_n:
            continue
        for i, j, l in itertools.permutations(range(3)):
            if l not in odd:
                continue
            for gu in options(rs[i], up_var):
                for gd in options(rs[j], down_var):
                    yield place({i: gu, j: gd, l: boundary_path(rs[l])})
    if k.n == -1 or (k.n >= 0 and k.n % 2 == 0):
        for i in range(3):
            r = rs[i]
            others = [j for j in range(3) if j != i]
            if r.q % 2 == 0 and r.q >= 4 and r.p == r.q - 1 and all(j in odd for j in others):
                yield place({i: build_fig64(r), **{j: boundary_path(rs[j]) for j in others}})


def recheck(k: MontesinosKnot, a: Assembly) -> None:
    """Independent re-validation of a certificate."""
    for g in a.paths:
        v = validate_path(g)
        if not v.ok:
            raise CertificateNotFound(f"certificate path {g} fails {v.violations[0].rule.value}")
    again = assemble_montesinos(k, a.paths)
    if (again.laminar, again.persistent, again.genuine) != (a.laminar, a.persistent, a.genuine):
        raise CertificateNotFound("certificate verdict does not reproduce")
    if not again.persistent:
        raise CertificateNotFound("certificate is not persistently laminar")


def _search(k: MontesinosKnot, want_genuine: bool) -> Assembly | None:
    for exhaustive in (False, True):
        for paths in _constructions(k, exhaustive):
            try:
                a = assemble_montesinos(k, paths)
            except OrientationIncompatible:
                continue
            if a.persistent and (a.genuine or not want_genuine):
                recheck(k, a)
                return a
    return None


def _even_first(qs: Iterable[int]) -> list[int]:
    qs = sorted(qs)
    evens = [q for q in qs if q % 2 == 0]
    if evens:
        qs.remove(evens[0])
        qs.insert(0, evens[0])
    return qs


def classify_persistent(k: MontesinosKnot | tuple) -> KnotVerdict:
    k = as_knot(k)
    _knot_checks(k)
    if k.length >= 4:
        return KnotVerdict(k, Status.LENGTH_AT_LEAST_4, citation=CLOSED_SURFACE_CITATION)
    if k.n == -1 and all(r.p == 1 for r in k.tangles):
        form = {"form": "pretzel-minus-one", "q": _even_first(r.q for r in k.tangles), "n": -1}
        return KnotVerdict(k, Status.EXCEPTIONAL_FORM, form=form)
    a = _search(k, want_genuine=False)
    if a is None:
        raise CertificateNotFound(f"no construction certifies {k}")
    return KnotVerdict(k, Status.PERSISTENTLY_LAMINAR, genuine=a.genuine, certificate=a)


def genuine_exception(k: MontesinosKnot) -> dict | None:
    """The two length-3 families that the constructions cannot make genuine."""
    rs = k.tangles
    if k.n == 0 and all(r.p == 1 for r in rs):
        return {"form": "genuine-exception", "case": 1, "q": sorted(r.q for r in rs), "n": 0}
    if k.n == -1:
        for l in range(3):
            others = [rs[j] for j in range(3) if j != l]
            r = rs[l]
            if all(o.p == 1 for o in others) and r.p in (1, 2, r.q - 1):
                return {
                    "form": "genuine-exception",
                    "case": 2,
                    "q": sorted(o.q for o in others),
                    "last": str(r),
                    "n": -1,
                }
    return None


def classify_genuine(k: MontesinosKnot | tuple) -> KnotVerdict:
    k = as_knot(k)
    _knot_checks(k)
    if k.length >= 4:
        return KnotVerdict(k, Status.LENGTH_AT_LEAST_4, citation=CLOSED_SURFACE_CITATION)
    form = genuine_exception(k)
    if form is not None:
        return KnotVerdict(k, Status.EXCEPTIONAL_FORM, genuine=False, form=form)
    a = _search(k, want_genuine=True)
    if a is None:
        raise CertificateNotFound(f"no construction gives a genuine surface for {k}")
    return KnotVerdict(k, Status.PERSISTENTLY_LAMINAR, genuine=True, certificate=a)


# Seifert fibered surgery ---------------------------------------------------------


@dataclass(frozen=True)
class SurgeryCandidateVerdict:
    knot: MontesinosKnot
    candidate: bool
    form: dict | None = None
    reason: dict | None = None

    @property
    def status(self) -> str:
        return "Candidate" if self.candidate else "NoAtoroidalSFS"

    def to_json(self) -> dict:
        k = self.knot
        out = {
            "knot": {"tangles": [str(r) for r in k.tangles], "n": k.n, "mirrored": k.mirrored},
            "status": self.status,
        }
        if self.form is not None:
            out["form"] = self.form
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def denominator_sum(qs: Iterable[int]) -> Fraction:
    return sum((Fraction(1, abs(q) - 1) for q in qs), Fraction(0))


def small_multiset(qs: Sequence[int]) -> bool:
    """The explicit list of |q| multisets whose denominator sum exceeds 1."""
    a, b, c = sorted(abs(q) for q in qs)
    return a == 2 or (a, b) == (3, 3) or (a, b, c) == (3, 4, 5)


def pretzel_forms(k: MontesinosKnot) -> set[tuple[tuple[int, ...], int]]:
    """Every way to write k or its mirror as K(1/q1, 1/q2, 1/q3, n)."""
    choices = []
    for r in k.tangles:
        opts = []
        if r.p == 1:
            opts.append((r.q, 0))
        if r.p == r.q - 1:
            # (q-1)/q = 1/(-q) + 1
            opts.append((-r.q, 1))
        if not opts:
            return set()
        choices.append(opts)
    out = set()
    for combo in itertools.product(*choices):
        qs = tuple(sorted(q for q, _ in combo))
        n = k.n + sum(s for _, s in combo)
        out.add((qs, n))
        out.add((tuple(sorted(-q for q in qs)), -n))
    return out


def _canon(tangles: Iterable[Slope], n: int) -> tuple[tuple[Fraction, ...], int]:
    """(0,1)-folded, sorted tangles with the folded integer part."""
    rs = []
    for r in tangles:
        x = r.fraction
        m = x.numerator // x.denominator
        n += m
        rs.append(x - m)
    return tuple(sorted(rs)), n


def _keys(k: MontesinosKnot) -> set:
    mirror = [from_fraction(1 - r.fraction) for r in k.tangles]
    return {_canon(k.tangles, k.n), _canon(mirror, -k.n - k.length)}


def _list_form(k: MontesinosKnot) -> dict | None:
    """Match against the three non-pretzel candidate families."""
    F = Fraction
    for rs, n in _keys(k):
        if n != -1:
            continue
        if rs == (F(1, 3), F(1, 3), F(2, 5)):
            return {"form": "list-a", "knot": "K(-2/3, 1/3, 2/5)"}
        if F(1, 2) in rs:
            rest = list(rs)
            rest.remove(F(1, 2))
            if F(1, 3) in rest:
                other = rest[1 - rest.index(F(1, 3))]
                if other.numerator == 2 and other.denominator in (7, 9, 11, 13):
                    a = (other.denominator - 1) // 2
                    return {"form": "list-b", "a": a, "knot": f"K(-1/2, 1/3, 2/{2 * a + 1})"}
            if F(2, 5) in rest:
                other = rest[1 - rest.index(F(2, 5))]
                q = other.denominator
                if other.numerator == 1 and q % 2 and q >= 3:
                    return {"form": "list-c", "q": q, "knot": f"K(-1/2, 1/{q}, 2/5)"}
    return None


def sfs_surgery_filter(k: MontesinosKnot | tuple) -> SurgeryCandidateVerdict:
    k = as_knot(k)
    c = component_count(k)
    if c != 1:
        raise LinkInput(k, c)
    if k.length != 3:
        raise ValueError(f"the surgery filter covers length-3 knots, got length {k.length}")
    qs = [r.q for r in k.tangles]
    total = denominator_sum(qs)
    if total <= 1:
        return SurgeryCandidateVerdict(k, False, reason={"rule": "denominator-sum", "sum": str(total)})
    forms = pretzel_forms(k)
    if forms:
        for fqs, n in sorted(forms):
            if n == 0 or (n == -1 and all(q > 0 for q in fqs)):
                form = {"form": "pretzel", "q": list(fqs), "n": n, "sum": str(total)}
                return SurgeryCandidateVerdict(k, True, form=form)
        return SurgeryCandidateVerdict(k, False, reason={"rule": "genuine-lamination", "pretzel": True})
    form = _list_form(k)
    if form is not None:
        return SurgeryCandidateVerdict(k, True, form=form)
    if genuine_exception(k) is None:
        return SurgeryCandidateVerdict(k, False, reason={"rule": "genuine-lamination", "pretzel": False})
    # what is left is K(1/q1, 1/q2, 2/(2a+1), -1), whose pbar is a
    last = next(r for r in k.tangles if r.p == 2)
    pbar = mod_neg_inverse(last.p, last.q)
    return SurgeryCandidateVerdict(
        k, False, reason={"rule": "surgery-list", "last": str(last), "pbar": pbar, "a": (last.q - 1) // 2}
    )


# tangles -----------------------------------------------------------------------------


@dataclass(frozen=True)
class TangleVerdict:
    r1: Slope
    r2: Slope
    persistent: bool | None  # None: unknown, no negative criterion exists
    representative: tuple[Slope, Slope] | None = None
    certificate: Assembly | None = None
    genuine_extension: bool | None = None
    genuine_rule: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "tangle": [str(self.r1), f"-{self.r2}"],
            "persistent": "Unknown" if self.persistent is None else self.persistent,
        }
        if self.representative is not None:
            a, b = self.representative
            out["representative"] = [str(a), f"-{b}"]
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.genuine_extension is not None:
            out["genuine_extension"] = {
                "enumerated": self.genuine_extension,
                "closed_form": self.genuine_rule,
                "source": "draft conditions, checked by enumeration",
            }
        if self.notes:
            out["notes"] = self.notes
        return out


def tangle_representatives(r1: Slope, r2: Slope) -> list[tuple[Slope, Slope]]:
    """T(r1, -r2) and T(1 - r2, -(1 - r1)), the same tangle after twisting."""
    flip = (from_fraction(1 - r2.fraction), from_fraction(1 - r1.fraction))
    return [(r1, r2)] if flip == (r1, r2) else [(r1, r2), flip]


def qualifies(r: Slope) -> bool:
    return r.q % 2 == 1 and 0 < r.fraction < Fraction(2, 3)


def _genuine_b_path_exists(r: Slope) -> bool:
    c = PathConstraints(kind="allowable", context=Context.TANGLE, require_genuine=True, first_channel="B")
    return bool(enumerate_paths(diagram_for(r), c))


def _non_genuine_slope(r: Slope) -> bool:
    """1/q or (4k-1)/(6k-1)."""
    if r.p == 1:
        return True
    k, rem = divmod(r.q + 1, 6)
    return rem == 0 and r.p == 4 * k - 1


def classify_tangle(r1: Slope, r2: Slope) -> TangleVerdict:
    for r in (r1, r2):
        if r.is_infinite or not 0 < r.fraction < 1:
            raise SlopeError(f"tangle slope {r} must lie strictly between 0 and 1")
    reps = [rep for rep in tangle_representatives(r1, r2) if all(qualifies(r) for r in rep)]
    if not reps:
        return TangleVerdict(r1, r2, None, notes=["no representative has both denominators odd and both slopes below 2/3"])
    best = None
    for a, b in reps:
        g1, g2 = build_lemma84(a, "B"), build_lemma84(b, "B")
        try:
            asm = assemble_tangle(g1, g2)
        except (PathError, DegenerateTarget):
            continue
        if asm.persistent and best is None:
            best = ((a, b), asm)
    if best is None:
        raise CertificateNotFound(f"no certificate for T({r1}, -{r2})")
    enumerated = any(_genuine_b_path_exists(a) or _genuine_b_path_exists(b) for a, b in reps)
    rule = any(not ((a.p == 1 and _non_genuine_slope(b)) or (b.p == 1 and _non_genuine_slope(a))) for a, b in reps)
    return TangleVerdict(r1, r2, True, best[0], best[1], enumerated, rule)
