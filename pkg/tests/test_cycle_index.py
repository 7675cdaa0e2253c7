from fractions import Fraction

import pytest

from models import DEFAULT_DATA_DIR, ComputationError, CycleIndex, VertexSet
from group_core import enumerate_group, induced_cycle_type
from cycle_index import (
    count_colorings, cycle_index_of_action, format_cycle_index, hypercube_cycle_index, mobius, mobius_cycle_counts,
    parse_cycle_index, parse_polynomial, substitute_monomials, substitute_two_colors, evaluate_all_ones,
)
from census import a_table
from verification_workflow import load_reference_cycle_indices

A4 = [1, 1, 4, 6, 19, 27, 50, 56, 74, 56, 50, 27, 19, 6, 4, 1, 1]


@pytest.fixture(scope="module")
def fixtures():
    return load_reference_cycle_indices(DEFAULT_DATA_DIR)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cube_index_matches_listing(fixtures, n):
    assert hypercube_cycle_index(n).terms == fixtures[("cube", n)].terms


@pytest.mark.slow
def test_six_cube_index_matches_listing(fixtures):
    Z6 = hypercube_cycle_index(6)
    assert Z6.terms == fixtures[("cube", 6)].terms
    assert len(Z6.terms) == 20


def test_one_cube_index_counts_both_vertices():
    Z1 = hypercube_cycle_index(1)
    assert Z1.terms == {((1, 2),): Fraction(1, 2), ((2, 1),): Fraction(1, 2)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_index_is_a_probability_average(n):
    assert evaluate_all_ones(hypercube_cycle_index(n)) == 1


def test_a_tables():
    assert a_table(2) == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
    assert [a_table(4)[k] for k in range(17)] == A4
    assert sum(A4) == 402


@pytest.mark.parametrize("n", [2, 3, 4, 5, pytest.param(6, marks=pytest.mark.slow)])
def test_complement_symmetry(n):
    A = a_table(n)
    assert all(A[k] == A[(1 << n) - k] for k in A)


def test_count_colorings_on_three_cube():
    assert count_colorings(hypercube_cycle_index(3), 4) == 6
    assert count_colorings(hypercube_cycle_index(3), 9) == 0


def test_two_colour_substitution_flags_non_integral_averages():
    bogus = CycleIndex(terms={((1, 2),): Fraction(1, 2)}, group_order=2)
    with pytest.raises(ComputationError) as exc:
        substitute_two_colors(bogus)
    assert exc.value.code == "NON_INTEGRAL"


def test_two_colour_substitution_of_the_square():
    C = substitute_two_colors(hypercube_cycle_index(2))
    assert C.mass == 4
    assert C.coefficients == {(4, 0): 1, (3, 1): 1, (2, 2): 2, (1, 3): 1, (0, 4): 1}


@pytest.mark.parametrize("m, value", [(1, 1), (2, -1), (3, -1), (4, 0), (6, 1), (12, 0), (30, -1)])
def test_mobius(m, value):
    assert mobius(m) == value


def test_mobius_recovers_a_four_cycle():
    counts = mobius_cycle_counts({1: 0, 2: 0, 3: 0, 4: 4}, 4)
    assert counts.as_dict() == {4: 1}


def test_mobius_recovers_mixed_cycles():
    # one fixed point, one 2-cycle, one 3-cycle
    psi = {1: 1, 2: 3, 3: 4, 4: 3, 5: 1, 6: 6}
    assert mobius_cycle_counts(psi, 6).as_dict() == {1: 1, 2: 1, 3: 1}


def test_mobius_round_trip_over_four_cube_elements():
    full = VertexSet(n=4, mask=0xFFFF)
    for w in enumerate_group(4)[::11]:
        ctype = induced_cycle_type(w, full).as_dict()
        # g^j fixes every point on a cycle whose length divides j
        psi = {j: sum(i * c for i, c in ctype.items() if j % i == 0) for j in range(1, 17)}
        assert mobius_cycle_counts(psi, 16).as_dict() == ctype


def test_mobius_rejects_inconsistent_fixed_points():
    with pytest.raises(ComputationError) as exc:
        mobius_cycle_counts({1: 0, 2: 1}, 2)
    assert exc.value.code == "INCONSISTENT_PSI"


def test_text_form_parses_back():
    Z2 = hypercube_cycle_index(2)
    text = format_cycle_index(Z2)
    assert text.splitlines()[0] == "1/8 * z1^4"
    assert parse_cycle_index(text).terms == Z2.terms


def test_parse_polynomial_with_denominator():
    Z = parse_polynomial("9 z2^4 + 4 z4^2 + 2 z1^4 z2^2 + z1^8", 16)
    assert Z.terms[((1, 8),)] == Fraction(1, 16)
    assert Z.terms[((1, 4), (2, 2))] == Fraction(1, 8)
    assert Z.mass == 8


def test_inhomogeneous_polynomial_is_rejected():
    with pytest.raises(ValueError):
        parse_polynomial("z1^2 + z1", 2)


def test_index_of_explicit_element_list():
    full = VertexSet(n=3, mask=0xFF)
    assert cycle_index_of_action(enumerate_group(3), full).terms == hypercube_cycle_index(3).terms
    with pytest.raises(ComputationError):
        cycle_index_of_action([], full)


def test_substitute_monomials_doubles_cycle_lengths():
    Z2 = hypercube_cycle_index(2)
    doubled = substitute_monomials(Z2, {1: ((2, 1),), 2: ((4, 1),), 4: ((8, 1),)})
    assert doubled.terms[((2, 4),)] == Fraction(1, 8)
    assert doubled.mass == 8
    with pytest.raises(ComputationError) as exc:
        substitute_monomials(Z2, {1: ((2, 1),)})
    assert exc.value.code == "MISSING_SUBSTITUTION"
