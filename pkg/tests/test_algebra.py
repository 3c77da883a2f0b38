from fractions import Fraction

import pytest

from csposet import Poly, RelativeModel, SullivanModel, UsageError, parse_model, validate_model
from csposet.algebra import apply_differential, canonicalize, multiply, parse_poly
from csposet.enumeration import sphere_product

ROW1_TOP = "v1v4t^8+v2v3t^10+t^17"


@pytest.fixture
def fiber54():
    return sphere_product((3, 5, 9, 15, 33))


@pytest.fixture
def row1(fiber54):
    return RelativeModel(fiber54, {"v5": ROW1_TOP})


def test_odd_generators_anticommute(row1):
    v1, v2 = row1.gen("v1"), row1.gen("v2")
    assert v1 * v2 == row1.poly("v1v2")
    assert v2 * v1 == row1.poly("-v1v2")


def test_odd_square_vanishes(row1):
    v1 = row1.gen("v1")
    assert (v1 * v1).is_zero()


def test_even_generator_commutes(row1):
    assert row1.poly("t^2v1") * row1.poly("t^3") == row1.poly("t^5v1")


def test_written_order_sets_the_sign(row1):
    assert row1.poly("v2v1") == row1.poly("-v1v2")
    assert row1.poly("v3v1v2") == row1.poly("v1v2v3")
    assert row1.poly("v1v1").is_zero()


def test_top_differential(row1):
    assert apply_differential(row1, row1.gen("v5")) == row1.poly(ROW1_TOP)


def test_differential_of_closed_product(row1):
    assert apply_differential(row1, row1.poly("v1v4")).is_zero()


def test_leibniz_by_hand(row1):
    p = row1.gen("v5") * row1.gen("v1")
    assert apply_differential(row1, p) == row1.poly("v1v2v3t^10+v1t^17")


def test_row_two_is_valid(fiber54):
    rm = RelativeModel(fiber54, {"v4": "v1v2t^4", "v5": ROW1_TOP})
    assert validate_model(rm).ok


def test_grading_violation_reported(fiber54):
    rm = RelativeModel(fiber54, {"v4": "v1v3t"})
    report = validate_model(rm)
    assert not report.ok
    assert any(v.startswith("grading") and "dv4" in v for v in report.violations)


def test_d_squared_violation_reported():
    fiber = SullivanModel([("v1", 3), ("v2", 5), ("v3", 9), ("v4", 15), ("w", 25)])
    rm = RelativeModel(fiber, {"v3": "v1v2t", "v4": "v1v3t", "w": "v3v4t"})
    report = validate_model(rm)
    dd = [v for v in report.violations if v.startswith("d^2")]
    assert dd == ["d^2: d(dw) = t^2v1v2v4"]


def test_nilpotence_and_decomposability_reported():
    linear = SullivanModel([("x", 2), ("y", 3), ("z", 4)], {"y": "z"})
    kinds = {v.split(":")[0] for v in validate_model(linear).violations}
    assert kinds == {"decomposability", "nilpotence"}
    late = SullivanModel([("a", 3), ("b", 3), ("c", 5)], {"a": "bc"})
    kinds = {v.split(":")[0] for v in validate_model(late).violations}
    assert "nilpotence" in kinds
    assert validate_model(SullivanModel([("x", 2), ("y", 3)], {"y": "x^2"})).ok


def test_fiber_reduction_checked():
    fiber = SullivanModel([("x", 2), ("y", 3)], {"y": "x^2"})
    rm = RelativeModel(fiber, {"y": "xt"})
    assert any(v.startswith("fiber") for v in validate_model(rm).violations)


def test_mismatched_universes_rejected(row1, fiber54):
    other = sphere_product((3, 5))
    with pytest.raises(UsageError):
        multiply(row1.gen("v1"), other.gen("v1"))


def test_canonicalize_idempotent(row1):
    p = row1.poly("2v2v1t + 3t^5 - v1v2t")
    assert canonicalize(canonicalize(p)) == canonicalize(p)
    assert p == row1.poly("-3v1v2t+3t^5")


def test_rational_coefficients(row1):
    p = parse_poly("1/2v1v2t", row1.generators)
    assert list(p.terms.values()) == [Fraction(1, 2)]


def test_parse_model_round_trip():
    text = "x 2\ny 3\nd y = x^2\n"
    m = parse_model(text)
    assert m.to_text() == text
    assert parse_model(m.to_text()) == m


def test_generators_sorted_by_degree():
    m = SullivanModel([("b", 5), ("a", 3), ("c", 3)])
    assert m.names == ("a", "c", "b")


def test_bad_inputs():
    with pytest.raises(UsageError):
        SullivanModel([("a", 1)])
    with pytest.raises(UsageError):
        SullivanModel([("a", 3), ("a", 5)])
    with pytest.raises(UsageError):
        SullivanModel([("a", 3)], {"b": "0"})
    with pytest.raises(UsageError):
        Poly(sphere_product((3,)).generators, {(2,): 1})
