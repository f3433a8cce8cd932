"""One pass/fail line per acceptance criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import itertools
import time
from collections import Counter
from fractions import Fraction as F
from math import gcd

import pytest

from laminar.assembly import essential_verdict, exterior_components, reverse_channel_orientations
from laminar.classify import (
    Status,
    classify_genuine,
    classify_persistent,
    component_count,
    denominator_sum,
    pretzel_strand_count,
    recheck,
    sfs_surgery_filter,
    small_multiset,
)
from laminar.complex import (
    CircleType,
    all_circle_markings,
    brute_force_extensions,
    classify_boundary_circle,
    enumerate_valid_configs,
    extend_circle,
    is_prelaminar,
    load_piece,
    standard_configs,
)
from laminar.farey import boundary_paths, build_diagram, corners, enumerate_minimal_paths, fork_vertices
from laminar.paths import (
    Context,
    PathConstraints,
    build_lemma84,
    build_prop65,
    diagram_for,
    enumerate_paths,
    is_genuine_path,
    is_upward,
    starting_slope,
)
from laminar.rational import (
    INFINITY,
    cont_frac,
    delta,
    eval_bracket,
    eval_cont_frac,
    ContFrac,
    make_slope,
    mod_neg_inverse,
    normalize_montesinos,
)

S = make_slope


def report(capsys, number, ok, detail, seconds=None):
    timing = "" if seconds is None else f" ({seconds:.2f}s)"
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}{timing} {detail}")
    assert ok, detail


def reduced(max_q, min_q=2, odd=False):
    for q in range(min_q, max_q + 1):
        if odd and q % 2 == 0:
            continue
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield S(p, q)


def test_criterion_01_local_census(capsys):
    t = time.perf_counter()
    total = len(standard_configs())
    valid = enumerate_valid_configs()
    shapes = {tuple(sorted(Counter(c.census().values()).items())) for c in valid}
    dt = time.perf_counter() - t
    ok = total == 81 and len(valid) == 12 and shapes == {(("passing", 2), ("sink", 1), ("source", 3))} and dt < 1
    report(capsys, 1, ok, f"{len(valid)} of {total} valid, sector shapes {sorted(shapes)}", dt)


def test_criterion_02_diagram_invariants(capsys):
    t = time.perf_counter()
    failures = []
    for r in reduced(50):
        d = build_diagram(r)
        upper, lower = boundary_paths(d)
        if not all(delta(*e) == 1 for e in d.edges):
            failures.append((r, "delta"))
        if len(d.triangles) != len(d.vertices) - 2:
            failures.append((r, "triangles"))
        if set(upper) | set(lower) != set(d.vertices) or set(upper) & set(lower) != {INFINITY, r}:
            failures.append((r, "labels"))
    paths = 0
    for r in reduced(30):
        d = build_diagram(r)
        for path in enumerate_minimal_paths(d):
            paths += 1
            if path[1].fraction + eval_bracket(corners(d, path)) != r.fraction:
                failures.append((r, path))
    dt = time.perf_counter() - t
    report(capsys, 2, not failures and dt < 30, f"{paths} minimal paths checked, failures {failures[:3]}", dt)


def test_criterion_03_diagram_3_11(capsys):
    r = S(3, 11)
    d = build_diagram(r)
    upper, lower = boundary_paths(d)
    lo, up = corners(d, lower), corners(d, upper)
    consistent = (
        eval_cont_frac(ContFrac(lower[1].p, lo)) == r
        and eval_cont_frac(ContFrac(upper[1].p, up)) == r
        and cont_frac(r) == ContFrac(0, lo)
    )
    ok = (
        len(d.vertices) == 8
        and len(d.triangles) == 6
        and lo == (4, 3)
        and up == (-2, -2, -3, -2)
        and fork_vertices(d) == {S(0), S(1, 3), S(1, 4)}
        and consistent
    )
    forks = sorted(str(v) for v in fork_vertices(d))
    report(capsys, 3, ok, f"lower {lo}, upper {up}, forks {forks}")


PROP65 = {1: ("up", 1), 2: ("down", 1), 3: ("down", 0), 4: ("up", 0)}


def _prop65_closed_form(p, q, v):
    if v == 1:
        return True, p not in (1, q - 1)
    if v == 2:
        ex = not (p == 1 or (p == q - 1 and q % 2 == 0))
        return ex, ex and p not in (1, 2, q - 1)
    if v == 3:
        return True, p not in (1, q - 1)
    ex = not (p == q - 1 or (p == 1 and q % 2 == 0))
    return ex, ex and p not in (1, q - 2, q - 1)


def test_criterion_04_half_channel_builders(capsys):
    t = time.perf_counter()
    bad, checked = [], 0
    for r in reduced(25):
        found = enumerate_paths(diagram_for(r), PathConstraints(kind="semi", context=Context.KNOT))
        for v, (direction, s) in PROP65.items():
            matching = [g for g in found if starting_slope(g) == S(s) and is_upward(g) == (direction == "up")]
            enumerated = (bool(matching), any(is_genuine_path(g) for g in matching))
            b = build_prop65(r, v)
            built = (b is not None, b is not None and is_genuine_path(b))
            checked += 1
            if not enumerated == built == _prop65_closed_form(r.p, r.q, v):
                bad.append((str(r), v))
    dt = time.perf_counter() - t
    report(capsys, 4, not bad and dt < 120, f"{checked} (slope, variant) pairs, disagreements {bad[:5]}", dt)


def test_criterion_05_channel_start_paths(capsys):
    t = time.perf_counter()
    bad, checked = [], 0
    for r in reduced(25, min_q=3, odd=True):
        x, p, q = r.fraction, r.p, r.q
        for kind in "AB":
            found = enumerate_paths(diagram_for(r), PathConstraints(first_channel=kind))
            if kind == "A":
                in_range = F(1, 3) < x < 1
                plain = p == q - 1 or any(x == F(2 * j, 6 * j - 1) for j in range(1, q))
            else:
                in_range = 0 < x < F(2, 3)
                plain = p == 1 or any(x == F(4 * j - 1, 6 * j - 1) for j in range(1, q))
            b = build_lemma84(r, kind)
            checked += 1
            if not (bool(found) == (b is not None) == in_range):
                bad.append((str(r), kind, "range"))
            if any(is_genuine_path(g) for g in found) != (in_range and not plain):
                bad.append((str(r), kind, "genuine"))
    dt = time.perf_counter() - t
    report(capsys, 5, not bad, f"{checked} (slope, type) pairs, disagreements {bad[:5]}", dt)


def test_criterion_06_knot_spot_checks(capsys):
    t = time.perf_counter()
    notes = []
    example = classify_persistent(normalize_montesinos([S(1, 3), S(1, 3), S(-1, 4)], 0))
    ok = example.status is Status.PERSISTENTLY_LAMINAR
    notes.append(f"K(1/3,1/3,-1/4) {example.status.value}")
    exceptions = 0
    for q1 in range(2, 10, 2):
        for q2, q3 in itertools.combinations_with_replacement(range(2, 10), 2):
            k = normalize_montesinos([S(1, q1), S(1, q2), S(1, q3)], -1)
            if component_count(k) != 1:
                continue
            exceptions += 1
            ok &= classify_persistent(k).status is Status.EXCEPTIONAL_FORM
    notes.append(f"{exceptions} even-q1 forms exceptional")
    g = classify_genuine(normalize_montesinos([S(2, 5), S(1, 3), S(1, 7)], 1))
    ok &= g.status is Status.PERSISTENTLY_LAMINAR and g.genuine is True
    notes.append(f"K(2/5,1/3,1/7,1) genuine={g.genuine}")
    rechecked = 0
    for v in (example, g):
        recheck(v.knot, v.certificate)
        rechecked += 1
    notes.append(f"{rechecked} certificates re-validated")
    report(capsys, 6, ok, "; ".join(notes), time.perf_counter() - t)


def test_criterion_07_component_counts(capsys):
    t = time.perf_counter()
    ok = True
    for qs in itertools.combinations_with_replacement(range(3, 10, 2), 3):
        ok &= component_count(normalize_montesinos([S(1, q) for q in qs], -1)) == 2
    ok &= component_count(normalize_montesinos([S(1, 3), S(1, 3), S(3, 4)], -1)) == 1
    qs_all = [q for q in range(-9, 10) if abs(q) >= 2]
    traced = 0
    for qs in itertools.product(qs_all, repeat=3):
        for n in range(-3, 4):
            traced += 1
            ok &= component_count(([S(1, q) for q in qs], n)) == pretzel_strand_count(qs, n)
    report(capsys, 7, ok, f"{traced} pretzel diagrams traced", time.perf_counter() - t)


def test_criterion_08_surgery_filter(capsys):
    t = time.perf_counter()
    extra = [
        qs
        for qs in itertools.combinations_with_replacement(range(2, 51), 3)
        if (denominator_sum(qs) > 1) != small_multiset(qs)
    ]
    v = sfs_surgery_filter(normalize_montesinos([S(-1, 2), S(1, 3), S(2, 9)], 0))
    candidate = v.candidate and v.form.get("form") == "list-b" and v.form.get("a") == 4
    pbar = all(mod_neg_inverse(2, 2 * a + 1) == a for a in range(2, 101))
    ok = not extra and candidate and pbar
    detail = (
        f"list matches inequality: {not extra} (also above 1: {extra}); "
        f"K(-1/2,1/3,2/9) candidate b a=4: {candidate}; pbar(2,2a+1)=a: {pbar}"
    )
    report(capsys, 8, ok, detail, time.perf_counter() - t)


def test_criterion_09_model_pieces(capsys):
    want = {"ht_piece": 0, "channelA": 2, "channelB": 2, "half_channel": 1, "trivial_cap": 0}
    got = {}
    ok = True
    for name, cusps in want.items():
        r = is_prelaminar(load_piece(name))
        got[name] = r.meridional_cusps
        ok &= r.ok and r.meridional_cusps == cusps
    control = reverse_channel_orientations(build_lemma84(S(1, 3), "B"))
    regions = exterior_components(control, check=False)
    windings = [r.cusp_winding for r in regions if r.cusp_winding is not None]
    ok &= windings == [1] and not essential_verdict(regions)
    report(capsys, 9, ok, f"cusps {got}; reversed control {control} windings {windings}")


def test_criterion_10_extension_census(capsys):
    marks = all_circle_markings()
    counts = Counter(classify_boundary_circle(m) for m in marks)
    agree = all(
        brute_force_extensions(m, c) == ([] if extend_circle(m, c) is None else [extend_circle(m, c)])
        for m in marks
        for c in (1, -1)
    )
    want = {CircleType.I: 2, CircleType.II: 4, CircleType.III: 8, CircleType.UNSUPPORTED: 22}
    ok = len(marks) == 36 and counts == want and agree
    detail = ", ".join(f"{t.value} {counts[t]}" for t in want) + f"; rule equals brute force: {agree}"
    report(capsys, 10, ok, detail)
