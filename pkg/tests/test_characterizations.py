import numpy as np
import pytest

from tensorginv.characterizations import (
    COMPOSITE_SYSTEMS,
    EQUALITY_PAIRS,
    bilateral_commuting_statements,
    closed_form,
    commuting_inner_condition,
    equality_condition,
    intersection_is_trivial,
    null_contains,
    parse_system,
    power_representations,
    prescribed_outer_check,
    prescribed_spaces,
    range_contains,
    uniqueness_probe,
    verify_system,
)
from tensorginv.errors import ModeMismatch, NotGeneralizedInverse, ParseError, PreconditionViolated, ShapeMismatch
from tensorginv.ginv import InverseKind, compute_inverse, inverse_index
from tensorginv.problems import random_inner_inverse, random_outer_inverse, random_tensor
from tensorginv.tensor_core import TensorShape, allclose, dematricize, identity_tensor, zeros

from tests.helpers import PROPERTY_TOL, indexed_tensor


def as_tensor(matrix):
    matrix = np.asarray(matrix, dtype=float)
    return dematricize(matrix, TensorShape((matrix.shape[0],), (matrix.shape[1],)))


def test_range_contains_basic():
    P = as_tensor([[1, 0], [0, 0], [0, 0]])
    assert range_contains(P, as_tensor([[2], [0], [0]]))
    assert not range_contains(P, as_tensor([[0], [1], [0]]))
    assert range_contains(P, zeros(TensorShape((3,), (4,))))
    assert not range_contains(zeros(TensorShape((3,), (1,))), as_tensor([[1], [0], [0]]))


def test_null_contains_basic():
    A = as_tensor([[1, 0, 0]])
    assert null_contains(A, as_tensor([[3, 0, 0], [1, 0, 0]]))
    assert not null_contains(A, as_tensor([[0, 1, 0]]))
    assert null_contains(A, zeros(TensorShape((2,), (3,))))


def test_subspace_predicates_check_modes():
    with pytest.raises(ShapeMismatch):
        range_contains(as_tensor(np.eye(2)), as_tensor(np.eye(3)))
    with pytest.raises(ShapeMismatch):
        null_contains(as_tensor(np.eye(2)), as_tensor(np.eye(3)))


def test_intersection_is_trivial():
    A = as_tensor([[1, 0], [0, 0]])
    assert intersection_is_trivial(A, as_tensor([[1], [0]]))
    assert not intersection_is_trivial(A, as_tensor([[0], [1]]))


def test_parse_system():
    assert parse_system("cmp-system") == "CMP"
    assert parse_system("mpcep") == "MPCEP"
    assert parse_system("YDX") == "YDX"
    with pytest.raises(ParseError):
        parse_system("penrose-all")


@pytest.mark.parametrize("system", COMPOSITE_SYSTEMS)
def test_fixture_composites_solve_their_systems(bundle, system):
    """Each composite of the worked example is the solution of its system"""
    Z = compute_inverse(bundle.D, InverseKind.parse(system))
    result = verify_system(bundle.D, Z, system, tol=1e-10)
    assert result.satisfied, result.summary_lines()


def test_wrong_candidate_fails_system(bundle):
    mp = compute_inverse(bundle.D, InverseKind.MP)
    assert not verify_system(bundle.D, mp, "cmp-system").satisfied


@pytest.mark.parametrize("seed", range(100))
def test_composite_systems_and_uniqueness(seed):
    """Closed forms satisfy their systems and agree with the direct linear solve"""
    D = indexed_tensor(seed)
    for system in COMPOSITE_SYSTEMS:
        Z = closed_form(D, system)
        assert verify_system(D, Z, system, tol=1e-10).satisfied, system
        assert uniqueness_probe(D, system, tol=PROPERTY_TOL), system


def test_uniqueness_probe_only_for_composites(square_tensor):
    with pytest.raises(ModeMismatch):
        uniqueness_probe(square_tensor, "YDX")


@pytest.mark.parametrize("seed", range(20))
def test_bilateral_systems(seed):
    """Y*D*X solves the YDX system and X*D*Y the XDY system"""
    D = indexed_tensor(seed)
    X = random_outer_inverse(D, seed, rank=1)
    Y = random_inner_inverse(D, seed)
    assert verify_system(D, Y @ D @ X, "YDX", X=X, Y=Y, tol=PROPERTY_TOL).satisfied
    assert verify_system(D, X @ D @ Y, "XDY", X=X, Y=Y, tol=PROPERTY_TOL).satisfied


def test_bilateral_system_needs_x_and_y(square_tensor):
    with pytest.raises(PreconditionViolated):
        verify_system(square_tensor, square_tensor, "XDY")


@pytest.mark.parametrize("seed", range(100))
def test_equality_conditions_never_contradict(seed):
    """Both sides of every equivalence agree on random tensors"""
    D = indexed_tensor(seed)
    for pair in EQUALITY_PAIRS:
        lhs, condition = equality_condition(D, pair)
        assert lhs == condition, f"{pair}: lhs {lhs}, condition {condition}"


@pytest.mark.parametrize("pair", EQUALITY_PAIRS)
def test_equality_conditions_hold_for_hermitian_tensors(pair):
    """For D == D^* all composites coincide with D^+"""
    D = random_tensor(TensorShape.square((2, 2)), seed=5, kind="hermitian")
    assert equality_condition(D, pair) == (True, True)


def test_unknown_pair_rejected(square_tensor):
    with pytest.raises(ParseError):
        equality_condition(square_tensor, "CMPeqCEPMP")


def test_bilateral_commuting_on_reflexive_pair():
    """X = Y = D^+ for Hermitian D makes all three statements true"""
    D = random_tensor(TensorShape.square((2, 3)), seed=11, kind="hermitian")
    mp = compute_inverse(D, InverseKind.MP)
    assert bilateral_commuting_statements(D, mp, mp) == (True, True, True)


@pytest.mark.parametrize("seed", range(20))
def test_bilateral_commuting_statements_agree(seed):
    D = indexed_tensor(seed)
    X = random_outer_inverse(D, seed, rank=1)
    Y = random_inner_inverse(D, seed)
    first, second, third = bilateral_commuting_statements(D, X, Y)
    assert first == second == third


def test_bilateral_commuting_rejects_non_members(square_tensor):
    junk = random_tensor(square_tensor.shape, seed=3)
    with pytest.raises(NotGeneralizedInverse):
        bilateral_commuting_statements(square_tensor, junk, compute_inverse(square_tensor, InverseKind.MP))


@pytest.mark.parametrize("seed", range(100))
def test_power_representations(seed):
    """Both representations are independent of l >= ind(D)"""
    D = indexed_tensor(seed)
    k = inverse_index(D)
    mpcep = compute_inverse(D, InverseKind.MPCEP)
    cepmp = compute_inverse(D, InverseKind.CEPMP)
    for l in (k, k + 1, k + 2):
        first, second = power_representations(D, l)
        assert allclose(first, mpcep, 1e-9), f"l = {l}"
        assert allclose(second, cepmp, 1e-9), f"l = {l}"


def test_power_representations_need_l_at_least_index(square_tensor):
    with pytest.raises(PreconditionViolated):
        power_representations(square_tensor, inverse_index(square_tensor) - 1)


@pytest.mark.parametrize("seed", range(100))
def test_prescribed_outer_inverses(seed):
    """MPCEP and CEPMP are outer inverses with prescribed range and null space"""
    D = indexed_tensor(seed)
    for kind in (InverseKind.MPCEP, InverseKind.CEPMP):
        B_t, C_t = prescribed_spaces(D, kind)
        assert prescribed_outer_check(D, compute_inverse(D, kind), B_t, C_t, tol=PROPERTY_TOL), kind.label


def test_prescribed_outer_check_rejects_zero():
    """O has the wrong null space when C_t = I"""
    eye = identity_tensor((2, 2))
    O = zeros(eye.shape)
    assert not prescribed_outer_check(eye, O, O, eye)


@pytest.mark.parametrize("seed", range(20))
def test_commuting_inner_condition(seed):
    D = indexed_tensor(seed)
    X = random_inner_inverse(D, seed)
    Z = random_inner_inverse(D, seed + 500)
    products_equal, sides_equal = commuting_inner_condition(D, X, Z)
    assert products_equal == sides_equal
    assert commuting_inner_condition(D, X, X) == (True, True)
