import pytest

from csposet import FieldSpec, UsageError, validate_model
from csposet.cohomology import c_symplectic_certify
from csposet.enumeration import (
    Caps,
    admissible_terms,
    cp_family,
    enumerate_models,
    fiber_from_degrees,
    pre_c_symplectic,
    sp_chain,
    sphere_product,
)
from csposet.fixtures import fixture_degrees, fixture_names, load_fixture
from csposet.lattice import field_closure, points_structure
from csposet.poset import build_poset

FIBER54 = (3, 5, 9, 15, 33)
QBAR = FieldSpec.parse("qbar")


def _formatted(fiber, i):
    return {a.format(fiber) for a in admissible_terms(fiber, i)}


def test_admissible_terms_of_v4():
    fiber = sphere_product(FIBER54)
    assert _formatted(fiber, 3) == {"v1v2t^4", "v1v3t^2", "v2v3t", "t^8"}


def test_admissible_terms_of_v3():
    fiber = sphere_product(FIBER54)
    assert _formatted(fiber, 2) == {"v1v2t", "t^5"}


def test_admissible_terms_of_v5():
    fiber = sphere_product(FIBER54)
    assert _formatted(fiber, 4) == {
        "v1v2t^13", "v1v3t^11", "v1v4t^8", "v2v3t^10",
        "v2v4t^7", "v3v4t^5", "v1v2v3v4t", "t^17",
    }


@pytest.mark.parametrize("degrees", [FIBER54, (3, 11, 15, 19, 23, 27, 35), (4, 7, 11), (3, 3, 7)])
def test_admissible_terms_balance(degrees):
    fiber = fiber_from_degrees(degrees)
    for i, g in enumerate(fiber.generators):
        for a in admissible_terms(fiber, i):
            deg = sum(fiber.generators[j].degree * e for j, e in enumerate(a.monomial))
            assert deg + 2 * a.t_exponent == g.degree + 1
            assert a.t_exponent >= 1
            assert all(j < i for j in a.support)


def test_pre_c_symplectic_examples():
    assert pre_c_symplectic((3, 3, 7))
    assert not pre_c_symplectic((11, 15, 19))
    assert pre_c_symplectic((7,))
    assert not pre_c_symplectic((3, 5))
    with pytest.raises(UsageError):
        pre_c_symplectic((3, 4))


def test_enumeration_one_class_for_three_spheres():
    cat = enumerate_models(sphere_product((3, 3, 7)), (1,))
    assert len(build_poset(cat, QBAR)) == 1
    assert not cat.incomplete


def test_enumeration_of_even_fiber_is_empty():
    assert len(enumerate_models(fiber_from_degrees((4, 7)))) == 0
    assert len(enumerate_models(fiber_from_degrees((3, 3, 4, 7)))) == 0


def test_enumeration_not_pre_c_is_empty():
    assert len(enumerate_models(sphere_product((11, 15, 19)))) == 0


def test_enumeration_contains_every_table_subgroup():
    K = FieldSpec.cyclotomic(5)
    found = {field_closure(e.lattice, K) for e in enumerate_models(sphere_product(FIBER54)).entries}
    for e in load_fixture("ex5.4").entries:
        assert field_closure(e.lattice, K) in found, e.label


def test_enumeration_cap_flags_incomplete():
    cat = enumerate_models(sphere_product(FIBER54), caps=Caps(max_terms=8, max_assignments=5))
    assert cat.incomplete


def test_enumeration_is_deterministic():
    a = enumerate_models(sphere_product((3, 5, 7, 9, 13)))
    b = enumerate_models(sphere_product((3, 5, 7, 9, 13)))
    assert [e.model.key() for e in a.entries] == [e.model.key() for e in b.entries]


@pytest.mark.parametrize("n,indices,orders", [
    (14, [0, 1, 3, 5], [15, 1, 3, 5]),
    (8, [0, 1, 3], [9, 1, 3]),
    (2, [0, 1], [3, 1]),
])
def test_cp_family(n, indices, orders):
    cat = cp_family(n)
    assert [e.label for e in cat.entries] == [f"i={i}" for i in indices]
    got = [points_structure(e.lattice, QBAR).order for e in cat.entries]
    assert got == orders
    for e in cat.entries:
        assert e.certificate.formal_dimension_Y == 4 * n + 2
        assert e.certificate.top_power == 2 * n + 1


def test_cp_family_needs_even_n():
    with pytest.raises(UsageError):
        cp_family(3)


def test_sp5_chain():
    cat = sp_chain(5)
    assert len(cat) == 3
    d3 = [e.model.d("v3") for e in cat.entries]
    d4 = [e.model.d("v4") for e in cat.entries]
    fiber = cat.entries[0].model
    assert d3 == [fiber.poly("0"), fiber.poly("v1v2t"), fiber.poly("v1v2t")]
    assert d4 == [fiber.poly("0"), fiber.poly("0"), fiber.poly("v1v3t")]


@pytest.mark.parametrize("n,length", [(1, 1), (3, 1), (5, 3), (7, 4), (9, 5)])
def test_sp_chain_lengths(n, length):
    assert len(sp_chain(n)) == length


def test_sp_chain_needs_odd_n():
    with pytest.raises(UsageError):
        sp_chain(4)


def test_sphere_degrees_interpretation():
    assert fiber_from_degrees((4, 7, 3)).degrees == (3, 4, 7)
    with pytest.raises(UsageError):
        fiber_from_degrees((4, 9))


@pytest.mark.parametrize("name", [n for n in fixture_names() if n not in ("sp11",)])
def test_every_fixture_entry_validates_and_certifies(name):
    cat = load_fixture(name)
    assert len(cat) > 0
    for e in cat.entries:
        assert validate_model(e.model).ok, e.label
        assert c_symplectic_certify(e.model, full=False).certified, e.label


def test_fixture_degrees_known():
    assert fixture_degrees("ex5.4") == FIBER54
    assert fixture_degrees("sp5") == (3, 7, 11, 15, 19)
    assert fixture_degrees("ex5.3-2") is None
    with pytest.raises(UsageError):
        load_fixture("nope")
