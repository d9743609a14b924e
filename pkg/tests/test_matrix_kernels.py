import numpy as np
import pytest
import scipy.linalg
from numpy.testing import assert_allclose

from tensorginv import matrix_kernels as mk
from tensorginv.errors import ConvergenceFailure, InvalidTensor, NotSquare, PreconditionViolated


def nilpotent(size):
    return np.eye(size, k=1)


def test_pinv_satisfies_penrose_equations(rng):
    M = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 7))
    X = mk.pinv(M)
    assert_allclose(M @ X @ M, M, atol=1e-12)
    assert_allclose(X @ M @ X, X, atol=1e-12)
    assert_allclose((M @ X).conj().T, M @ X, atol=1e-12)
    assert_allclose((X @ M).conj().T, X @ M, atol=1e-12)


def test_pinv_of_zero_and_empty():
    assert np.array_equal(mk.pinv(np.zeros((2, 3))), np.zeros((3, 2)))
    assert mk.pinv(np.zeros((0, 4))).shape == (4, 0)


def test_pinv_matches_scipy(rng):
    M = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    assert_allclose(mk.pinv(M), scipy.linalg.pinv(M), atol=1e-12)


def test_rank_uses_relative_cutoff():
    M = np.diag([1.0, 1e-8, 1e-17])
    info = mk.numerical_rank(M)
    assert info.rank == 2
    assert info.sigma_max == pytest.approx(1.0)
    assert info.tolerance_used == pytest.approx(3 * mk.EPS)


@pytest.mark.parametrize("size", [1, 3, 5])
def test_index_of_nilpotent_shift(size):
    """Shift of size m has index m"""
    assert mk.index_of(nilpotent(size)) == size


def test_index_of_invertible_and_zero():
    assert mk.index_of(np.eye(4)) == 0
    assert mk.index_of(np.zeros((3, 3))) == 1


def test_drazin_of_block_matrix():
    """Drazin inverse of J (+) N is J^-1 (+) O"""
    J = np.array([[2.0, 1.0], [0.0, 3.0]])
    M = scipy.linalg.block_diag(J, nilpotent(3))
    expected = scipy.linalg.block_diag(np.linalg.inv(J), np.zeros((3, 3)))
    assert_allclose(mk.drazin(M), expected, atol=1e-12)


def test_core_ep_is_outer_inverse_with_range_of_power():
    J = np.array([[2.0, 1.0], [1.0, 3.0]])
    S = np.array([[1, 2, 0, 1], [0, 1, 1, 0], [0, 0, 1, 2], [0, 0, 0, 1.0]])
    M = S @ scipy.linalg.block_diag(J, nilpotent(2)) @ np.linalg.inv(S)
    k = mk.index_of(M)
    assert k == 2
    X = mk.core_ep(M)
    Mk = np.linalg.matrix_power(M, k)
    assert_allclose(X @ M @ X, X, atol=1e-10)
    assert_allclose(X @ Mk @ M, Mk, atol=1e-10)
    assert_allclose(M @ X @ X, X, atol=1e-10)


def test_group_and_core_inverse_need_index_one():
    with pytest.raises(PreconditionViolated):
        mk.group_inverse(nilpotent(2))
    with pytest.raises(PreconditionViolated):
        mk.core_inverse(nilpotent(3))
    M = np.array([[1.0, 1.0], [0.0, 0.0]])
    G = mk.group_inverse(M)
    assert_allclose(M @ G, G @ M, atol=1e-12)
    assert_allclose(M @ G @ M, M, atol=1e-12)


def test_square_only_kernels_reject_rectangles():
    with pytest.raises(NotSquare):
        mk.drazin(np.ones((2, 3)))
    with pytest.raises(NotSquare):
        mk.index_of(np.ones((3, 2)))


def test_non_finite_input_rejected():
    with pytest.raises(InvalidTensor):
        mk.pinv(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_svd_falls_back_then_fails(monkeypatch):
    """gesdd failure retries with gesvd; a second failure raises"""
    calls = []
    real_svd = scipy.linalg.svd

    def flaky(matrix, **kwargs):
        calls.append(kwargs["lapack_driver"])
        if kwargs["lapack_driver"] == "gesdd":
            raise np.linalg.LinAlgError("SVD did not converge")
        return real_svd(matrix, **kwargs)

    monkeypatch.setattr(scipy.linalg, "svd", flaky)
    factors = mk.svd(np.eye(3))
    assert calls == ["gesdd", "gesvd"]
    assert_allclose(factors.reconstruct(), np.eye(3), atol=1e-14)

    def broken(matrix, **kwargs):
        raise np.linalg.LinAlgError("SVD did not converge")

    monkeypatch.setattr(scipy.linalg, "svd", broken)
    with pytest.raises(ConvergenceFailure):
        mk.svd(np.eye(3))
