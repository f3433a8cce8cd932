import copy
import json
from collections import Counter

import pytest

from laminar.complex import (
    DIAMOND,
    PIECES,
    CircleMarks,
    CircleType,
    ComplexError,
    PointType,
    all_circle_markings,
    all_crossing_markings,
    brute_force_extensions,
    check_local_config,
    check_local_config_by_remark,
    classify_boundary_circle,
    classify_interior_point,
    complex_from_json,
    enumerate_valid_configs,
    extend_circle,
    extend_marks,
    is_prelaminar,
    load_complex,
    load_piece,
    mirror,
    reverse_orientations,
    standard_configs,
)

EXPECTED_CUSPS = {"ht_piece": 0, "channelA": 2, "channelB": 2, "half_channel": 1, "half_channel_3": 1, "trivial_cap": 0}


def piece_data(name):
    from importlib.resources import files

    return json.loads(files("laminar").joinpath("pieces", f"{name}.json").read_text())


def test_local_census():
    configs = standard_configs()
    assert len(configs) == 81
    valid = enumerate_valid_configs()
    assert len(valid) == 12
    for cfg in valid:
        assert sorted(Counter(cfg.census().values()).items()) == [("passing", 2), ("sink", 1), ("source", 3)]


def test_remark_form_agrees():
    assert all(check_local_config(c) == check_local_config_by_remark(c) for c in standard_configs())


def test_circle_census():
    marks = all_circle_markings()
    assert len(marks) == 36
    counts = Counter(classify_boundary_circle(m) for m in marks)
    assert counts == {CircleType.I: 2, CircleType.II: 4, CircleType.III: 8, CircleType.UNSUPPORTED: 22}


@pytest.mark.parametrize("chirality", [1, -1])
def test_extension_rule_matches_brute_force(chirality):
    for m in all_circle_markings():
        found = brute_force_extensions(m, chirality)
        rule = extend_circle(m, chirality)
        if rule is None:
            assert found == []
        else:
            assert found == [rule]


def test_extension_shapes():
    assert extend_circle(CircleMarks("+", "+", "-", "-")) == (DIAMOND, DIAMOND)
    assert extend_circle(CircleMarks(DIAMOND, "+", DIAMOND, "+")) == ("+", "-")
    assert extend_circle(CircleMarks(DIAMOND, "+", DIAMOND, "-")) is None


def test_tube_diamond_unsupported():
    assert classify_boundary_circle(CircleMarks("+", DIAMOND, "+", "+")) is CircleType.UNSUPPORTED


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("chirality", [1, -1])
def test_crossing_census(sign, chirality):
    counts = Counter(classify_interior_point(m, sign, chirality) for m in all_crossing_markings())
    assert counts == {PointType.IV: 4, PointType.V: 8, PointType.INVALID: 69}


@pytest.mark.parametrize("name", PIECES)
def test_pieces_prelaminar(name):
    report = is_prelaminar(load_piece(name))
    assert report.ok, report.witnesses
    assert report.meridional_cusps == EXPECTED_CUSPS[name]


@pytest.mark.parametrize("name", PIECES)
def test_symmetries_keep_prelaminar(name):
    tc = load_piece(name)
    for other in (reverse_orientations(tc), mirror(tc)):
        report = is_prelaminar(other)
        assert report.ok
        assert report.meridional_cusps == EXPECTED_CUSPS[name]


def test_channel_piece_types():
    report = is_prelaminar(load_piece("channelA"))
    assert Counter(report.circle_types.values()) == {"I": 2, "II": 2}
    assert Counter(report.point_types.values()) == {"IV": 2}


def test_extension_fills_every_circle():
    ext = extend_marks(load_piece("channelA"))
    assert ext.is_extended
    assert all(c.marks is not None for c in ext.circles.values())


def test_tube_diamond_fails_extension():
    data = piece_data("ht_piece")
    arc = next(a for a in data["disks"][0]["boundary"] if a["on"] == "Q")
    arc["mark"] = DIAMOND
    report = is_prelaminar(complex_from_json(data))
    assert not report.ok
    assert any("diamond on a tube arc" in w for w in report.witnesses)


def test_inconsistent_circle_fails():
    data = piece_data("ht_piece")
    arcs = [a for a in data["disks"][0]["boundary"] if a["on"] == "Q"]
    arcs[0]["mark"] = "-" if arcs[0]["mark"] == "+" else "+"
    assert not is_prelaminar(complex_from_json(data)).ok


def test_schema_pointer():
    data = piece_data("ht_piece")
    data["disks"][0]["boundary"][0]["mark"] = "star"
    with pytest.raises(ComplexError) as e:
        complex_from_json(data)
    assert e.value.pointer == "/disks/0/boundary/0/mark"


def test_missing_field():
    data = copy.deepcopy(piece_data("ht_piece"))
    del data["tubes"]
    with pytest.raises(ComplexError):
        complex_from_json(data)


def test_not_json(tmp_path):
    f = tmp_path / "x.json"
    f.write_text("{nope")
    with pytest.raises(ComplexError):
        load_complex(f)


def test_json_round_trip():
    tc = load_piece("half_channel")
    assert complex_from_json(tc.to_json()) == tc
