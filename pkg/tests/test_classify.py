import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from laminar.classify import (
    CertificateNotFound,
    LinkInput,
    Status,
    TwoBridgeInput,
    classify_genuine,
    classify_persistent,
    classify_tangle,
    component_count,
    denominator_sum,
    pretzel_forms,
    pretzel_strand_count,
    recheck,
    sfs_surgery_filter,
    small_multiset,
)
from laminar.rational import SlopeError, make_slope, normalize_montesinos

S = make_slope


def knot(*rs, n=0):
    return normalize_montesinos([S(*r) for r in rs], n)


def pretzel(*qs, n=0):
    return normalize_montesinos([S(1, q) for q in qs], n)


# components


def test_component_examples():
    assert component_count(knot((1, 3), (1, 3), (3, 4), n=-1)) == 1
    assert component_count(pretzel(3, 5, 7, n=-1)) == 2
    assert component_count(pretzel(3, 3, 3)) == 1


def test_all_odd_minus_one_is_two_components():
    for qs in itertools.combinations_with_replacement(range(3, 10, 2), 3):
        assert component_count(pretzel(*qs, n=-1)) == 2


QS = [q for q in range(-9, 10) if abs(q) >= 2]


@given(st.tuples(*[st.sampled_from(QS)] * 3), st.integers(-4, 4))
def test_parity_count_matches_strand_tracing(qs, n):
    k = (tuple(S(1, q) for q in qs), n)
    assert component_count(k) == pretzel_strand_count(qs, n)


@given(st.lists(st.sampled_from(QS), min_size=1, max_size=5), st.integers(-4, 4))
def test_knots_have_odd_determinant(qs, n):
    c = component_count((tuple(S(1, q) for q in qs), n))
    det = 1
    for q in qs:
        det *= q
    det = abs(det * (n + sum(Fraction(1, q) for q in qs)))
    assert (c == 1) == (det % 2 == 1)


# persistent and genuine


def test_example_knot_persistent():
    v = classify_persistent(knot((1, 3), (1, 3), (-1, 4)))
    assert v.status is Status.PERSISTENTLY_LAMINAR
    assert v.certificate.persistent and v.certificate.meridional_cusps >= 2
    recheck(v.knot, v.certificate)


def test_exceptional_form():
    v = classify_persistent(pretzel(2, 3, 7, n=-1))
    assert v.status is Status.EXCEPTIONAL_FORM
    assert v.form["q"] == [2, 3, 7]
    assert v.certificate is None


def test_n_nonnegative_branch():
    v = classify_persistent(knot((3, 5), (1, 3), (1, 7)))
    assert v.status is Status.PERSISTENTLY_LAMINAR
    assert v.certificate.pattern == "up-down-boundary"


def test_two_half_branch():
    v = classify_persistent(knot((3, 4), (1, 3), (1, 5), n=-1))
    assert v.certificate.pattern == "two-half"


def test_link_and_two_bridge_inputs():
    # 2/5 + 1/3 + 1/7 at n = 0 has even determinant 92
    with pytest.raises(LinkInput) as e:
        classify_persistent(knot((2, 5), (1, 3), (1, 7)))
    assert e.value.components == 2
    with pytest.raises(TwoBridgeInput):
        classify_persistent(knot((1, 3), (1, 2)))


def test_length_four():
    v = classify_persistent(pretzel(3, 3, 3, 2))
    assert v.status is Status.LENGTH_AT_LEAST_4
    assert "closed essential surface" in v.citation


def test_genuine_examples():
    v = classify_genuine(knot((2, 5), (1, 3), (1, 7), n=1))
    assert v.status is Status.PERSISTENTLY_LAMINAR and v.genuine
    assert v.certificate.genuine
    e2 = classify_genuine(knot((1, 2), (1, 3), (2, 7), n=-1))
    assert e2.status is Status.EXCEPTIONAL_FORM and e2.form["case"] == 2
    e1 = classify_genuine(pretzel(2, 3, 7))
    assert e1.status is Status.EXCEPTIONAL_FORM and e1.form["case"] == 1


def _knots(max_q, ns=(-1, 0, 1, 2)):
    sl = [S(p, q) for q in range(2, max_q + 1) for p in range(1, q) if gcd(p, q) == 1]
    for rs in itertools.combinations_with_replacement(sl, 3):
        for n in ns:
            k = normalize_montesinos(rs, n)
            if component_count(k) == 1:
                yield k


def test_classifiers_certify_everything_small():
    for k in _knots(7):
        p = classify_persistent(k)
        g = classify_genuine(k)
        exceptional = k.n == -1 and all(r.p == 1 for r in k.tangles)
        assert (p.status is Status.EXCEPTIONAL_FORM) == exceptional
        if g.genuine:
            assert p.status is Status.PERSISTENTLY_LAMINAR
        for v in (p, g):
            if v.certificate is not None:
                recheck(k, v.certificate)


def test_exception_agreement_pretzels():
    for qs in itertools.combinations_with_replacement(range(2, 10), 3):
        k = pretzel(*qs, n=-1)
        if component_count(k) != 1:
            continue
        v = classify_persistent(k)
        assert v.status is Status.EXCEPTIONAL_FORM
        assert v.form["q"][0] % 2 == 0


def test_recheck_rejects_tampering():
    v = classify_persistent(knot((3, 5), (1, 3), (1, 7)))
    with pytest.raises((CertificateNotFound, ValueError)):
        recheck(knot((3, 5), (1, 3), (1, 7), n=-1), v.certificate)


# surgery


def test_surgery_examples():
    v = sfs_surgery_filter(pretzel(5, 5, 5))
    assert not v.candidate and v.reason["rule"] == "denominator-sum"
    v = sfs_surgery_filter(knot((-1, 2), (1, 3), (2, 9)))
    assert v.candidate and v.form == {"form": "list-b", "a": 4, "knot": "K(-1/2, 1/3, 2/9)"}
    v = sfs_surgery_filter(knot((1, 3), (1, 4), (2, 5)))
    assert not v.candidate and v.reason["rule"] == "genuine-lamination"


def test_surgery_list_forms():
    assert sfs_surgery_filter(knot((-2, 3), (1, 3), (2, 5))).form["form"] == "list-a"
    assert sfs_surgery_filter(knot((-1, 2), (1, 9), (2, 5))).form == {"form": "list-c", "q": 9, "knot": "K(-1/2, 1/9, 2/5)"}
    # a = 7 is past the list
    v = sfs_surgery_filter(knot((-1, 2), (1, 3), (2, 15)))
    assert not v.candidate
    assert v.reason == {"rule": "surgery-list", "last": "2/15", "pbar": 7, "a": 7}


def test_surgery_mirror_invariant():
    k = knot((-1, 2), (1, 3), (2, 9))
    m = normalize_montesinos([S(1, 2), S(-1, 3), S(-2, 9)], 0)
    assert sfs_surgery_filter(m).form == sfs_surgery_filter(k).form


def test_pretzel_candidates():
    assert sfs_surgery_filter(pretzel(-2, 3, 7)).candidate
    assert sfs_surgery_filter(pretzel(2, 3, 7, n=-1)).candidate
    v = sfs_surgery_filter(pretzel(-3, 3, 5))
    assert v.candidate and v.form["form"] == "pretzel"


def test_pretzel_forms_include_mirror():
    forms = pretzel_forms(pretzel(-2, 3, 7))
    assert ((-7, -3, 2), 0) in forms and ((-2, 3, 7), 0) in forms


def test_denominator_sum_list():
    disagree = [
        qs
        for qs in itertools.combinations_with_replacement(range(2, 51), 3)
        if (denominator_sum(qs) > 1) != small_multiset(qs)
    ]
    # the published list leaves out two multisets whose sum exceeds 1
    assert disagree == [(3, 4, 4), (3, 4, 6)]
    assert denominator_sum((3, 4, 4)) == Fraction(7, 6)


# tangles


def test_tangle_examples():
    v = classify_tangle(S(1, 3), S(1, 5))
    assert v.persistent is True
    assert v.certificate.degeneracy_slope == S(0)
    v = classify_tangle(S(5, 7), S(5, 7))
    assert v.persistent and v.representative == (S(2, 7), S(2, 7))
    assert classify_tangle(S(3, 5), S(3, 5)).persistent
    unknown = classify_tangle(S(1, 4), S(1, 4))
    assert unknown.persistent is None
    assert unknown.to_json()["persistent"] == "Unknown"


def test_tangle_range():
    with pytest.raises(SlopeError):
        classify_tangle(S(4, 3), S(1, 3))


def test_tangle_genuine_extension_matches_draft_rule():
    sl = [S(p, q) for q in range(3, 16, 2) for p in range(1, q) if gcd(p, q) == 1]
    for r1 in sl:
        for r2 in sl:
            v = classify_tangle(r1, r2)
            if v.persistent:
                assert v.genuine_extension == v.genuine_rule, (r1, r2)
