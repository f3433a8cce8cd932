from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from laminar.rational import (
    INFINITY,
    ContFrac,
    DegenerateExpansion,
    ParityPair,
    SlopeError,
    cont_frac,
    cyclic_orientation,
    delta,
    eval_bracket,
    eval_cont_frac,
    make_slope,
    mirror_knot,
    mod_neg_inverse,
    normalize_montesinos,
    parity_pair,
    parse_slope,
)

slopes = st.builds(make_slope, st.integers(-500, 500), st.integers(1, 200))


def test_make_slope_reduces_and_moves_sign():
    assert make_slope(6, -4) == make_slope(-3, 2)
    assert make_slope(5, 0) is INFINITY
    with pytest.raises(SlopeError):
        make_slope(0, 0)


@pytest.mark.parametrize("text,p,q", [("3/11", 3, 11), ("-1/4", -1, 4), ("−1/4", -1, 4), (" 7 ", 7, 1), ("1/0", 1, 0)])
def test_parse_slope(text, p, q):
    assert parse_slope(text) == make_slope(p, q)


@pytest.mark.parametrize("text", ["abc", "1/", "1//2", ""])
def test_parse_slope_rejects(text):
    with pytest.raises(SlopeError):
        parse_slope(text)


def test_delta_and_orientation():
    assert delta(make_slope(1, 3), make_slope(1, 4)) == 1
    assert delta(INFINITY, make_slope(1, 2)) == 2
    assert cyclic_orientation(INFINITY, make_slope(1), make_slope(1, 2)) == -1
    assert cyclic_orientation(make_slope(1, 2), make_slope(1), INFINITY) == 1


def test_parity_pairs():
    assert parity_pair(INFINITY) is ParityPair.OE
    assert parity_pair(make_slope(0)) is ParityPair.EO
    assert parity_pair(make_slope(1)) is ParityPair.OO
    assert parity_pair(make_slope(2, 5)) is ParityPair.EO


def test_cont_frac_3_11():
    assert cont_frac(make_slope(3, 11)) == ContFrac(0, (4, 3))
    assert eval_cont_frac(ContFrac(0, (4, 3))) == make_slope(3, 11)
    assert eval_cont_frac(cont_frac(make_slope(3, 11), positive=False)) == make_slope(3, 11)


def test_degenerate_bracket_reports_position():
    with pytest.raises(DegenerateExpansion) as e:
        eval_bracket((2, 1, 1))
    assert e.value.position == 2


@given(slopes, st.booleans())
def test_cont_frac_round_trip(r, positive):
    cf = cont_frac(r, positive)
    assert cf.is_canonical
    assert eval_cont_frac(cf) == r
    if cf.cs:
        assert all((c > 0) == positive for c in cf.cs)


@given(st.integers(2, 400), st.integers(-400, 400))
def test_mod_neg_inverse(q, p):
    if gcd(p, q) != 1:
        return
    pbar = mod_neg_inverse(p, q)
    assert (p * pbar + 1) % q == 0
    assert 2 * abs(pbar) <= q


def test_pbar_of_two():
    assert all(mod_neg_inverse(2, 2 * a + 1) == a for a in range(2, 101))


def test_normalize_example_knot():
    k = normalize_montesinos([make_slope(1, 3), make_slope(1, 3), make_slope(-1, 4)], 0)
    assert k.tangles == (make_slope(1, 3), make_slope(1, 3), make_slope(3, 4))
    assert k.n == -1 and not k.mirrored
    assert k.pretzel


def test_normalize_mirrors_below_minus_one():
    k = normalize_montesinos([make_slope(1, 3), make_slope(1, 5), make_slope(1, 7)], -3)
    assert k.mirrored and k.n == 0
    assert k.tangles == (make_slope(2, 3), make_slope(4, 5), make_slope(6, 7))


@given(st.lists(slopes.filter(lambda r: r.q > 1), min_size=1, max_size=4), st.integers(-6, 6))
def test_normalize_invariants(rs, n):
    k = normalize_montesinos(rs, n)
    assert not (k.n < -1 and -k.n - k.length > k.n)
    if k.length <= 3:
        assert k.n >= -1
    assert all(0 < r.fraction < 1 for r in k.tangles)
    if not k.mirrored:
        # total value is preserved when no mirror is taken
        assert sum(r.fraction for r in k.tangles) + k.n == sum(r.fraction for r in rs) + n
    back, m = mirror_knot(k)
    assert all(0 < r.fraction < 1 for r in back)
    assert m == -k.n - k.length


def test_integral_tangle_rejected():
    with pytest.raises(SlopeError):
        normalize_montesinos([make_slope(2)], 0)
    assert make_slope(3, 11).fraction == Fraction(3, 11)
