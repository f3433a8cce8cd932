"""Exact slopes, continued fractions and Montesinos normal forms.

Slopes are reduced fractions ``p/q`` with ``q >= 0``; the infinite slope is
``1/0``.  Everything here is integer arithmetic, no floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence


class SlopeError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or (self.q == 0 and self.p != 1):
            raise SlopeError(f"non-canonical slope {self.p}/{self.q}; use make_slope")
        if math.gcd(self.p, self.q) != 1:
            raise SlopeError(f"unreduced slope {self.p}/{self.q}; use make_slope")

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def is_integer(self) -> bool:
        return self.q == 1

    @property
    def fraction(self) -> Fraction:
        if self.q == 0:
            raise SlopeError("1/0 has no finite value")
        return Fraction(self.p, self.q)

    def sort_key(self):
        # 1/0 sorts after every finite slope
        return (1, Fraction(0)) if self.q == 0 else (0, Fraction(self.p, self.q))

    def __lt__(self, other: "Slope") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"Slope({self.p}/{self.q})"


INFINITY = Slope(1, 0)


def make_slope(p: int, q: int = 1) -> Slope:
    """Reduce ``p/q`` and move the sign onto the numerator."""
    p, q = int(p), int(q)
    if p == 0 and q == 0:
        raise SlopeError("0/0 is not a slope")
    if q == 0:
        return INFINITY
    if q < 0:
        p, q = -p, -q
    g = math.gcd(p, q)
    return Slope(p // g, q // g)


def from_fraction(x: Fraction | int) -> Slope:
    x = Fraction(x)
    return Slope(x.numerator, x.denominator)


_SLOPE_RE = re.compile(r"^\s*([+\-−]?\d+)\s*(?:/\s*([+\-]?\d+))?\s*$")


def parse_slope(text: str) -> Slope:
    """Parse ``"p/q"`` (or a bare integer) into a slope."""
    m = _SLOPE_RE.match(text)
    if not m:
        raise SlopeError(f"cannot parse slope {text!r}")
    p = int(m.group(1).replace("−", "-"))
    q = int(m.group(2)) if m.group(2) is not None else 1
    return make_slope(p, q)


def delta(r: Slope, s: Slope) -> int:
    """Geometric intersection ``|p1 q2 - p2 q1|`` of two slopes."""
    return abs(r.p * s.q - s.p * r.q)


def det(r: Slope, s: Slope) -> int:
    return r.p * s.q - s.p * r.q


def cyclic_orientation(a: Slope, b: Slope, c: Slope) -> int:
    """Cyclic order of three distinct slopes on the projective line.

    Returns +1 or -1; flips under orientation-reversing maps and is
    invariant under SL(2, Z).  ``(1/0, 1/1, 1/2)`` has orientation -1.
    """
    v = det(a, b) * det(b, c) * det(c, a)
    if v == 0:
        raise SlopeError(f"slopes {a}, {b}, {c} are not distinct")
    return 1 if v > 0 else -1


class ParityPair(str, Enum):
    OE = "o/e"
    EO = "e/o"
    OO = "o/o"


def parity_pair(r: Slope) -> ParityPair:
    pp, qq = r.p % 2, r.q % 2
    if pp and not qq:
        return ParityPair.OE
    if qq and not pp:
        return ParityPair.EO
    if pp and qq:
        return ParityPair.OO
    raise SlopeError(f"{r} is not reduced")


# continued fractions -------------------------------------------------------


@dataclass(frozen=True)
class ContFrac:
    """``v1 + [c1, ..., cn]`` with ``[c1,...,cn] = 1/(c1 - 1/(c2 - ...))``."""

    v1: int
    cs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cs", tuple(int(c) for c in self.cs))

    @property
    def is_canonical(self) -> bool:
        return all(abs(c) >= 2 for c in self.cs)


def cont_frac(r: Slope, positive: bool = True) -> ContFrac:
    """Canonical expansion with every ``|ci| >= 2``, all of one sign.

    ``positive=True`` gives ``c1 > 0`` (lower boundary path of the
    diagram), ``positive=False`` gives ``c1 < 0`` (upper boundary path).
    """
    if r.is_infinite:
        raise SlopeError("1/0 has no continued fraction")
    x = r.fraction
    m = math.floor(x)
    if x == m:
        return ContFrac(int(m), ())
    v1 = m if positive else m + 1
    cs = []
    y = 1 / (x - v1)
    while True:
        c = math.ceil(y) if positive else math.floor(y)
        cs.append(int(c))
        if c == y:
            break
        y = 1 / (c - y)
    return ContFrac(int(v1), tuple(cs))


class DegenerateExpansion(ArithmeticError):
    def __init__(self, position: int):
        super().__init__(f"division by zero at position {position}")
        self.position = position


def eval_bracket(cs: Sequence[int]) -> Fraction:
    """Value of ``[c1, ..., cn]``.

    Raises DegenerateExpansion at the first position (1-based, counted from
    the front) whose partial denominator vanishes.
    """
    a, b = 0, 1  # tail value a/b, starts at 0
    for pos in range(len(cs) - 1, -1, -1):
        den = cs[pos] * b - a
        if den == 0:
            raise DegenerateExpansion(pos + 1)
        a, b = b, den
    return Fraction(a, b)


def eval_cont_frac(cf: ContFrac) -> Slope:
    """Exact value of ``v1 + [c1, ..., cn]``."""
    if any(c == 0 for c in cf.cs):
        raise DegenerateExpansion(cf.cs.index(0) + 1)
    return from_fraction(cf.v1 + eval_bracket(cf.cs))


def mod_neg_inverse(p: int, q: int) -> int:
    """The inverse of ``-p`` mod ``q`` of least absolute value.

    When both ``q/2`` and ``-q/2`` qualify the positive one is returned.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p} and {q} are not coprime")
    pbar = (-pow(p, -1, q)) % q
    if 2 * pbar > q:
        pbar -= q
    return pbar


# Montesinos knots ----------------------------------------------------------


@dataclass(frozen=True)
class MontesinosKnot:
    tangles: tuple[Slope, ...]
    n: int
    mirrored: bool = False
    pretzel: bool = False
    pretzel_qs: tuple[int, ...] | None = None
    pretzel_n: int | None = None

    @property
    def length(self) -> int:
        return len(self.tangles)

    def __str__(self) -> str:
        inner = ", ".join(str(r) for r in self.tangles)
        return f"K({inner}; n={self.n})"


def _pretzel_form(tangles: Sequence[Slope], n: int):
    qs = []
    for r in tangles:
        if r.p == 1:
            qs.append(r.q)
        elif r.p == r.q - 1:
            # (q-1)/q = 1/(-q) + 1
            qs.append(-r.q)
            n += 1
        else:
            return None
    return tuple(qs), n


def normalize_montesinos(tangles: Iterable[Slope], n: int = 0) -> MontesinosKnot:
    """Fold integer parts into ``n``, put each tangle in (0, 1) and take the
    mirror image when that is needed for ``n >= -1``."""
    rs = []
    for r in tangles:
        if r.is_infinite or r.is_integer:
            raise SlopeError(f"tangle slope {r} is integral")
        x = r.fraction
        m = math.floor(x)
        n += m
        rs.append(from_fraction(x - m))
    mirrored = False
    # for length >= 4 the mirror need not reach n >= -1; take it only if it helps
    if n < -1 and -n - len(rs) > n:
        rs = [from_fraction(1 - r.fraction) for r in rs]
        n = -n - len(rs)
        mirrored = True
    form = _pretzel_form(rs, n)
    if form is None:
        return MontesinosKnot(tuple(rs), n, mirrored)
    return MontesinosKnot(tuple(rs), n, mirrored, True, form[0], form[1])


def mirror_knot(k: MontesinosKnot) -> tuple[tuple[Slope, ...], int]:
    """Raw (unnormalized) data of the mirror image."""
    return tuple(from_fraction(1 - r.fraction) for r in k.tangles), -k.n - k.length
