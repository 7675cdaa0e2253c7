import pytest

from models import (
    DEFAULT_DATA_DIR, BlockPartitionElement, ComputationError, GeneralHyperplane, SpannedHyperplane,
)
from group_core import act_on_set, enumerate_group, from_cycles, induced_cycle_type
from cycle_index import hypercube_cycle_index
from oracle import affine_dimension
from hyperplanes import (
    block_elements, builtin_representatives, canonicalize, cycle_index_burnside, cycle_index_symbolic,
    enumerate_spanned, f_monomials, format_atlas, hyperplane_type, induced_counts, integer_partitions,
    max_coefficient, power_block_element, psi, read_atlas, same_hyperplane, stabilizer_elements,
    transform_hyperplane, vertex_count, vertices_on, z_lambda,
)
from verification_workflow import load_reference_cycle_indices


def H(coeffs, rhs, n):
    return SpannedHyperplane(coeffs=tuple(coeffs), rhs=rhs, n=n)


Q4_REPS = [
    H([1], 0, 4), H([1, 1], 1, 4), H([1, 1, 1], 1, 4),
    H([1, 1, 1, 1], 1, 4), H([1, 1, 1, 1], 2, 4), H([1, 1, 1, 2], 2, 4),
]


# --- Transformations and canonical form ---

def test_transform_matches_worked_example():
    w = from_cycles(4, [[1], [-2, -3], [4]])
    image = transform_hyperplane(w, GeneralHyperplane(coeffs=(1, -1, -1, 2), rhs=1))
    assert image == GeneralHyperplane(coeffs=(1, 1, 1, 2), rhs=3)


def test_transform_by_identity_is_trivial():
    G = GeneralHyperplane(coeffs=(2, -1, 0, 1), rhs=1)
    assert same_hyperplane(transform_hyperplane(enumerate_group(4)[0], G), G)


def test_transform_commutes_with_vertex_action():
    G = GeneralHyperplane(coeffs=(1, -1, -1, 2), rhs=1)
    S = vertices_on(G)
    for w in enumerate_group(4):
        assert vertices_on(transform_hyperplane(w, G)) == act_on_set(w, S)


@pytest.mark.parametrize("coeffs, rhs, expected", [
    ((-1, 0, 0, 0), -1, H([1], 0, 4)),
    ((0, 1, 1, 0), 1, H([1, 1], 1, 4)),
    ((2, 2, 0, 0), 2, H([1, 1], 1, 4)),
    ((1, -1, -1, 2), 1, H([1, 1, 1, 2], 2, 4)),
    ((1, 1, 1, 0), 2, H([1, 1, 1], 1, 4)),
])
def test_canonicalize(coeffs, rhs, expected):
    assert canonicalize(GeneralHyperplane(coeffs=coeffs, rhs=rhs)) == expected


def test_canonicalize_rejects_unspanned():
    with pytest.raises(ComputationError) as exc:
        canonicalize(GeneralHyperplane(coeffs=(1, 1, 0, 0), rhs=5))
    assert exc.value.code == "NOT_SPANNED"


# --- Enumeration ---

def test_enumerate_q4_representatives():
    reps = enumerate_spanned(4)
    assert reps == Q4_REPS
    assert max_coefficient(reps) == 2
    for rep in reps:
        assert affine_dimension(vertices_on(rep)) == 3
        assert vertex_count(rep) <= 8


@pytest.mark.slow
def test_enumerate_q5_representatives():
    reps = enumerate_spanned(5)
    assert len(reps) == 15
    assert max_coefficient(reps) == 3
    assert H([1, 1, 2, 2, 3], 4, 5) in reps
    # the Q_4 classes reappear with one free coordinate
    assert all(H(r.coeffs, r.rhs, 5) in reps for r in Q4_REPS)


@pytest.mark.parametrize("rhs", [3, 4])
def test_two_two_two_forms_are_not_spanned_in_q5(rhs):
    # their vertices sit on x1 + x2 = 1 or on x1 = x2 as well
    with pytest.raises(ComputationError) as exc:
        canonicalize(GeneralHyperplane(coeffs=(1, 1, 2, 2, 2), rhs=rhs))
    assert exc.value.code == "NOT_SPANNED"


def test_enumerate_six_needs_expensive_mode():
    with pytest.raises(ComputationError) as exc:
        enumerate_spanned(6)
    assert exc.value.code == "UNSUPPORTED"


def test_builtin_representatives():
    assert len(builtin_representatives(6, 17)) == 6
    reps = builtin_representatives(6, 13)
    assert len(reps) == 14
    assert H([1, 1, 1, 1, 2, 2], 4, 6) in reps
    assert vertex_count(H([1] * 6, 3, 6)) == 20


def test_builtin_representatives_refuse_small_vertex_counts():
    with pytest.raises(ComputationError) as exc:
        builtin_representatives(6, 12)
    assert exc.value.code == "UNSUPPORTED"


# --- Type and stabilizer ---

@pytest.mark.parametrize("rep, alpha", [
    (H([1, 1, 2, 2, 3], 4, 5), (2, 2, 1)),
    (H([1], 0, 6), (1,)),
    (H([1] * 6, 3, 6), (6,)),
])
def test_hyperplane_type(rep, alpha):
    assert hyperplane_type(rep).alpha == alpha


@pytest.mark.parametrize("rep, order", [
    (H([1, 1, 1, 1], 2, 4), 48),
    (H([1, 1, 1, 2], 2, 4), 6),
    (H([1], 0, 6), 3840),
])
def test_stabilizer_order(rep, order):
    assert len(stabilizer_elements(rep)) == order


@pytest.mark.parametrize("rep", Q4_REPS)
def test_stabilizer_fixes_the_vertex_set(rep):
    S = vertices_on(rep)
    for w in stabilizer_elements(rep):
        assert act_on_set(w, S) == S


# --- Partitions, fixed points and induced cycles ---

def test_integer_partitions_in_lexicographic_order():
    assert integer_partitions(4) == ((1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,))
    assert integer_partitions(0) == ((),)


def test_z_lambda():
    assert z_lambda((2, 1, 1)) == 4
    assert z_lambda((3,)) == 3
    assert z_lambda((1, 1, 1)) == 6


def test_psi_fixed_points():
    H44 = H([1, 1, 1, 1], 2, 4)
    assert psi(H44, BlockPartitionElement(blocks=((1, 1, 1, 1),))) == 6
    assert psi(H44, BlockPartitionElement(blocks=((4,),), negative=True)) == 2
    assert psi(H44, BlockPartitionElement(blocks=((3, 1),), negative=True)) == 0


def test_psi_refuses_negative_branch_without_balance():
    with pytest.raises(ComputationError) as exc:
        psi(H([1, 1, 1], 1, 4), BlockPartitionElement(blocks=((3,),), negative=True))
    assert exc.value.code == "NEGATIVE_BRANCH"


def test_power_block_element():
    four = BlockPartitionElement(blocks=((4,),))
    assert power_block_element(four, 2).blocks == ((2, 2),)
    assert power_block_element(four, 1) == four
    squared = power_block_element(BlockPartitionElement(blocks=((2, 2),), negative=True), 2)
    assert squared == BlockPartitionElement(blocks=((1, 1, 1, 1),))
    assert power_block_element(BlockPartitionElement(blocks=((2,),), negative=True), 3).negative


def _concrete(rep, elem):
    """A signed permutation of the support coordinates with the element's cycle type."""
    cycles, start = [], 1
    for block in elem.blocks:
        for part in block:
            cycle = list(range(start, start + part))
            cycles.append([-i for i in cycle] if elem.negative else cycle)
            start += part
    return from_cycles(rep.t, cycles)


@pytest.mark.parametrize("rep", Q4_REPS + [H([1, 1, 2, 2, 3], 4, 5), H([1, 1, 1, 1, 1], 2, 5), H([1, 1], 1, 5)])
def test_induced_counts_match_direct_decomposition(rep):
    support = vertices_on(H(rep.coeffs, rep.rhs, rep.t))
    for elem in block_elements(rep):
        assert induced_counts(rep, elem) == induced_cycle_type(_concrete(rep, elem), support)


def test_induced_counts_on_two_support_vertices():
    rep = H([1, 1], 1, 5)
    assert induced_counts(rep, BlockPartitionElement(blocks=((2,),), negative=True)).as_dict() == {1: 2}
    assert induced_counts(rep, BlockPartitionElement(blocks=((1, 1),), negative=True)).as_dict() == {2: 1}


def test_f_monomials():
    rep = H([1, 1], 1, 4)
    identity = BlockPartitionElement(blocks=((1, 1),))
    assert f_monomials(identity, rep, [1, 2, 4]) == {1: ((1, 2),), 2: ((2, 2),), 4: ((4, 2),)}
    swap = BlockPartitionElement(blocks=((1, 1),), negative=True)
    assert f_monomials(swap, rep, [4])[4] == ((4, 2),)


# --- Cycle indices ---

@pytest.fixture(scope="module")
def listed():
    return load_reference_cycle_indices(DEFAULT_DATA_DIR)


def test_coordinate_hyperplane_index_is_the_smaller_cube():
    assert cycle_index_symbolic(H([1], 0, 5)).terms == hypercube_cycle_index(4).terms


@pytest.mark.parametrize("key", [
    ("hyperplane", 4, (1, 1), 1),
    ("hyperplane", 5, (1, 1, 1), 1),
    ("hyperplane", 5, (1, 1, 1, 1, 1), 2),
])
def test_symbolic_index_matches_listing(listed, key):
    rep = H(key[2], key[3], key[1])
    assert cycle_index_symbolic(rep).terms == listed[key].terms


@pytest.mark.parametrize("rep", Q4_REPS)
def test_symbolic_equals_burnside_q4(rep):
    assert cycle_index_symbolic(rep).terms == cycle_index_burnside(rep).terms


@pytest.mark.slow
def test_symbolic_equals_burnside_q5():
    for rep in enumerate_spanned(5):
        assert cycle_index_symbolic(rep).terms == cycle_index_burnside(rep).terms, str(rep)


@pytest.mark.slow
def test_symbolic_equals_burnside_q6_builtin(listed):
    for rep in builtin_representatives(6, 13):
        Z = cycle_index_symbolic(rep)
        assert Z.terms == cycle_index_burnside(rep).terms, str(rep)
        key = ("hyperplane", 6, rep.coeffs, rep.rhs)
        if key in listed:
            assert Z.terms == listed[key].terms, str(rep)


# --- Atlas files ---

def test_shipped_atlas_reads_and_verifies():
    records = read_atlas(DEFAULT_DATA_DIR / "atlas_q6.txt")
    assert [r.label for r in records][:2] == ["H6.1", "H6.2"]
    assert len(records) == 14
    assert records[0].stabilizer == 3840


def test_atlas_text_reads_back(tmp_path):
    records = read_atlas(DEFAULT_DATA_DIR / "atlas_q6.txt")
    path = tmp_path / "atlas.txt"
    path.write_text(format_atlas(records))
    assert read_atlas(path) == records


def test_atlas_rejects_wrong_stabilizer(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("label=X n=4 coeffs=1,1 rhs=1 alpha=2 delta=1 vertices=8 stabilizer=99\n")
    with pytest.raises(ComputationError) as exc:
        read_atlas(path)
    assert exc.value.code == "PARSE"
