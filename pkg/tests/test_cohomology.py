from itertools import combinations

import pytest

from csposet import RelativeModel, SullivanModel, UsageError
from csposet.algebra import format_monomial
from csposet.cohomology import (
    CochainComplex,
    basis_in_degree,
    betti_numbers,
    c_symplectic_certify,
    formal_dimension,
    unipotent_parameter_count,
)
from csposet.enumeration import cp_fiber, fiber_from_degrees, sphere_product
from csposet.fixtures import load_fixture

DEGREES54 = (3, 5, 9, 15, 33)


@pytest.fixture(scope="module")
def row1():
    return RelativeModel(sphere_product(DEGREES54), {"v5": "v1v4t^8+v2v3t^10+t^17"})


def _names(model, monos):
    return {format_monomial(model.generators, m) for m in monos}


def test_basis_single_subset():
    m = sphere_product((3, 5))
    assert _names(m, basis_in_degree(m, 8)) == {"v1v2"}


def test_basis_of_relative_model(row1):
    assert _names(row1, basis_in_degree(row1, 2)) == {"t"}
    # 3 + 5 = 8, so v1v2 sits next to t^4
    assert _names(row1, basis_in_degree(row1, 8)) == {"t^4", "v1v2"}
    assert _names(row1, basis_in_degree(row1, 10)) == {"t^5", "tv1v2"}


def test_basis_rejects_negative_degree(row1):
    with pytest.raises(UsageError):
        basis_in_degree(row1, -1)


def test_zero_differential_betti_numbers():
    table = betti_numbers(sphere_product(DEGREES54), 20)
    assert table[8] == 1 and table[12] == 1 and table[17] == 1
    assert table[0] == 1 and table[1] == 0


def test_betti_table_does_not_extrapolate():
    table = betti_numbers(sphere_product((3,)), 4)
    assert table.computed_up_to == 4
    with pytest.raises(KeyError):
        table[5]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_odd_sphere_total_space_is_truncated_polynomial(n):
    rm = RelativeModel(sphere_product((2 * n + 1,)), {"v1": f"t^{n + 1}"})
    table = betti_numbers(rm, 2 * n + 6)
    assert table.by_degree == {2 * k: 1 for k in range(n + 1)}
    cert = c_symplectic_certify(rm)
    assert cert.certified and cert.total_dim == n + 1 and cert.formal_dimension_Y == 2 * n


def test_row_one_certificate(row1):
    cert = c_symplectic_certify(row1)
    assert cert.certified
    assert cert.formal_dimension_Y == 64
    assert cert.top_power == 32
    assert cert.total_dim == 272
    assert formal_dimension(row1, cert) == 64


def test_pure_t_power_on_a_middle_sphere_is_rejected():
    rm = RelativeModel(sphere_product((3, 3, 7)), {"v3": "t^4"})
    table = betti_numbers(rm, 14)
    # nothing survives in degree 13; the failure is that t^6 = D(v3 t^2)
    assert table[13] == 0 and table[12] == 1
    cert = c_symplectic_certify(rm)
    assert not cert.certified
    assert cert.reason == "[t^6] = 0 in H^12"


def test_even_fiber_dimension_rejected_without_computation():
    fiber = fiber_from_degrees((2, 3))
    rm = RelativeModel(fiber, {"y1": "x1^2+t^2"})
    cert = c_symplectic_certify(rm)
    assert cert.verdict == "rejected" and cert.reason.startswith("parity")


def test_formal_dimensions():
    assert formal_dimension(sphere_product(DEGREES54)) == 65
    assert formal_dimension(fiber_from_degrees((2, 3))) == 2
    assert formal_dimension(cp_fiber(14)) == 59


def test_formal_dimension_needs_finite_model():
    infinite = SullivanModel([("x", 2)])
    with pytest.raises(UsageError):
        formal_dimension(infinite)
    uncertified = RelativeModel(sphere_product((3, 3, 7)), {})
    with pytest.raises(UsageError):
        formal_dimension(uncertified)


def test_unipotent_counts():
    assert unipotent_parameter_count(sphere_product((3, 5, 7, 9, 15)), "v5") == 1
    for g in ("v1", "v2"):
        assert unipotent_parameter_count(sphere_product((3, 5)), g) == 0
    assert unipotent_parameter_count(sphere_product(DEGREES54), "v5") == 0


def test_unipotent_count_mods_out_coboundaries():
    # x1^2 has the degree of x2 and is a cocycle, but it is d(y1)
    m = fiber_from_degrees((4, 7, 8, 15))
    assert unipotent_parameter_count(m, "x2") == 0


def _subset_sum_count(degrees, k):
    return sum(
        1 for r in range(len(degrees) + 1) for c in combinations(degrees, r) if sum(c) == k
    )


@pytest.mark.parametrize("degrees", [(3, 5, 9, 15, 33), (3, 3, 7), (7, 9, 11, 13, 23), (5,)])
def test_zero_differential_matches_subset_sums(degrees):
    table = betti_numbers(sphere_product(degrees), sum(degrees) + 2)
    for k in range(sum(degrees) + 3):
        assert table[k] == _subset_sum_count(degrees, k)


def test_weight_blocks_do_not_change_ranks():
    rm = load_fixture("e7").entries[19].model
    split, whole = CochainComplex(rm), CochainComplex(rm, blocks=False)
    for k in range(0, 60):
        assert split.rank(k) == whole.rank(k)
