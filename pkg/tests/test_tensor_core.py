import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from tensorginv.errors import InvalidTensor, NotSquare, ShapeMismatch
from tensorginv.tensor_core import (
    DenseTensor,
    TensorShape,
    allclose,
    conj_transpose,
    dematricize,
    einstein_product,
    frobenius_norm,
    identity_tensor,
    matricize,
    nnz,
    relative_residual,
    tensor_power,
    zeros,
)

extents = st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=2).map(tuple)


def random_dense(rng, row_modes, col_modes, complex_entries=True):
    shape = TensorShape(row_modes, col_modes)
    data = rng.standard_normal(shape.modes)
    if complex_entries:
        data = data + 1j * rng.standard_normal(shape.modes)
    return DenseTensor(shape, data)


def loop_contraction(S: DenseTensor, D: DenseTensor) -> np.ndarray:
    """Einstein product by explicit summation over every multi-index"""
    rows, inner, cols = S.shape.row_modes, S.shape.col_modes, D.shape.col_modes
    out = np.zeros(rows + cols, dtype=complex)
    for i in itertools.product(*(range(m) for m in rows)):
        for j in itertools.product(*(range(m) for m in cols)):
            out[i + j] = sum(S.data[i + k] * D.data[k + j] for k in itertools.product(*(range(m) for m in inner)))
    return out


@pytest.mark.parametrize("seed", range(50))
def test_einstein_product_matches_loop_oracle(seed):
    """Contraction agrees with explicit summation and with matrix products"""
    rng = np.random.default_rng(seed)
    rows = tuple(rng.integers(1, 4, size=rng.integers(1, 3)))
    inner = tuple(rng.integers(1, 4, size=rng.integers(1, 3)))
    cols = tuple(rng.integers(1, 4, size=rng.integers(1, 3)))
    S = random_dense(rng, rows, inner)
    D = random_dense(rng, inner, cols)

    product = einstein_product(S, D)
    expected = loop_contraction(S, D)
    gap = np.linalg.norm(product.data - expected)
    assert gap <= 1e-13 * max(1.0, np.linalg.norm(expected)), f"loop oracle gap {gap}"
    assert_allclose(matricize(product), matricize(S) @ matricize(D), rtol=1e-13, atol=1e-13)


def test_fixture_entries_land_in_place(bundle):
    """Row-major storage puts a_{ijkl} at data[i-1, j-1, k-1, l-1]"""
    D = bundle.D
    assert D.data[0, 0, 0, 0] == 1
    assert D.data[1, 2, 0, 0] == -1
    assert D.matrix[0, 0] == 1
    assert D.shape.label() == "2x3x2x3"


def test_identity_is_neutral(rng):
    D = random_dense(rng, (2, 3), (3,))
    assert_allclose((identity_tensor((2, 3)) @ D).data, D.data)
    assert_allclose((D @ identity_tensor((3,))).data, D.data)


def test_shape_mismatch_raises(rng):
    S = random_dense(rng, (2,), (3,))
    D = random_dense(rng, (2,), (3,))
    with pytest.raises(ShapeMismatch):
        einstein_product(S, D)
    with pytest.raises(ShapeMismatch):
        S + random_dense(rng, (3,), (2,))


def test_invalid_tensors_rejected():
    with pytest.raises(InvalidTensor):
        TensorShape((0,), (2,))
    with pytest.raises(InvalidTensor):
        DenseTensor(TensorShape((1,), (1,)), [np.nan])
    with pytest.raises(ShapeMismatch):
        DenseTensor(TensorShape((2,), (2,)), [1.0, 2.0, 3.0])


def test_tensor_power(rng):
    D = random_dense(rng, (2, 2), (2, 2))
    assert_allclose(tensor_power(D, 0).data, identity_tensor((2, 2)).data)
    assert_allclose(tensor_power(D, 3).data, (D @ D @ D).data, rtol=1e-12, atol=1e-12)
    with pytest.raises(NotSquare):
        tensor_power(random_dense(rng, (2,), (3,)), 2)


def test_tensor_is_read_only(rng):
    D = random_dense(rng, (2,), (2,))
    with pytest.raises(ValueError):
        D.data[0, 0] = 5.0


def test_nnz_and_norms():
    D = dematricize(np.array([[1.0, 0.0], [0.0, -2.0]]), TensorShape((2,), (2,)))
    assert nnz(D) == 2
    assert nnz(D, tol=1.5) == 1
    assert frobenius_norm(D) == pytest.approx(np.sqrt(5.0))
    zero = zeros(D.shape)
    assert relative_residual(zero, zero) == 0.0
    assert relative_residual(D, zero) == pytest.approx(np.sqrt(5.0))
    assert allclose(D, D + 1e-13 * D, 1e-10)


@settings(max_examples=40, deadline=None)
@given(rows=extents, inner=extents, mid=extents, cols=extents, seed=st.integers(0, 2**16))
def test_product_is_associative(rows, inner, mid, cols, seed):
    """(A*B)*C == A*(B*C)"""
    rng = np.random.default_rng(seed)
    A = random_dense(rng, rows, inner)
    B = random_dense(rng, inner, mid)
    C = random_dense(rng, mid, cols)
    assert allclose((A @ B) @ C, A @ (B @ C), 1e-12)


@settings(max_examples=40, deadline=None)
@given(rows=extents, inner=extents, cols=extents, seed=st.integers(0, 2**16))
def test_conj_transpose_reverses_products(rows, inner, cols, seed):
    """(A*B)^* == B^* * A^* and (A^*)^* == A"""
    rng = np.random.default_rng(seed)
    A = random_dense(rng, rows, inner)
    B = random_dense(rng, inner, cols)
    assert allclose(conj_transpose(A @ B), B.H @ A.H, 1e-12)
    assert_allclose(A.H.H.data, A.data)


@settings(max_examples=30, deadline=None)
@given(rows=extents, cols=extents, seed=st.integers(0, 2**16))
def test_matricize_round_trip(rows, cols, seed):
    rng = np.random.default_rng(seed)
    D = random_dense(rng, rows, cols)
    back = dematricize(matricize(D), D.shape)
    assert np.array_equal(back.data, D.data)
