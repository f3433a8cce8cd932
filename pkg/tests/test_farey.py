from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from laminar.farey import (
    DegenerateTarget,
    PathError,
    boundary_paths,
    build_diagram,
    corner_number,
    corners,
    enumerate_minimal_paths,
    fork_vertices,
    path_from_corners,
)
from laminar.rational import INFINITY, ContFrac, cont_frac, delta, eval_bracket, make_slope

S = make_slope


def reduced(max_q):
    return st.integers(2, max_q).flatmap(
        lambda q: st.integers(1, q - 1).filter(lambda p: gcd(p, q) == 1).map(lambda p: S(p, q))
    )


def test_diagram_3_11():
    d = build_diagram(S(3, 11))
    assert len(d.vertices) == 8
    assert len(d.triangles) == 6
    upper, lower = boundary_paths(d)
    assert upper == (INFINITY, S(1), S(1, 2), S(1, 3), S(2, 7), S(3, 11))
    assert lower == (INFINITY, S(0), S(1, 4), S(3, 11))
    assert corners(d, lower) == (4, 3)
    assert corners(d, upper) == (-2, -2, -3, -2)
    assert fork_vertices(d) == {S(0), S(1, 3), S(1, 4)}


def test_boundary_corners_match_expansions():
    d = build_diagram(S(3, 11))
    upper, lower = boundary_paths(d)
    assert ContFrac(0, corners(d, lower)) == cont_frac(S(3, 11))
    assert ContFrac(1, corners(d, upper)) == cont_frac(S(3, 11), positive=False)


@pytest.mark.parametrize("target", [S(2), S(0), INFINITY, S(-5)])
def test_degenerate_targets(target):
    with pytest.raises(DegenerateTarget):
        build_diagram(target)


def test_corner_number_errors():
    d = build_diagram(S(3, 11))
    with pytest.raises(PathError):
        corner_number(d, (INFINITY, S(0), S(3, 11)), 1)
    with pytest.raises(PathError):
        corner_number(d, (INFINITY, S(0), S(1, 4)), 0)


@settings(max_examples=200)
@given(reduced(50))
def test_diagram_invariants(r):
    d = build_diagram(r)
    assert all(delta(*e) == 1 for e in d.edges)
    assert len(d.triangles) == len(d.vertices) - 2
    upper, lower = boundary_paths(d)
    assert set(upper) | set(lower) == set(d.vertices)
    assert set(upper) & set(lower) == {INFINITY, r}
    assert all(v.fraction > r.fraction for v in upper[1:-1])
    assert all(v.fraction < r.fraction for v in lower[1:-1])


@settings(max_examples=60, deadline=None)
@given(reduced(30))
def test_minimal_paths_evaluate_exactly(r):
    d = build_diagram(r)
    paths = enumerate_minimal_paths(d)
    assert paths
    for path in paths:
        cs = corners(d, path)
        assert all(abs(c) >= 2 for c in cs)
        assert path[1].fraction + eval_bracket(cs) == r.fraction
        assert path_from_corners(r, ContFrac(path[1].p, cs)) == path
