"""
Dense tensors under the Einstein product.

A tensor D over M(p) x N(s) stores its entries as a numpy array of shape
row_modes + col_modes. Multi-indices are linearized row-major (first mode
slowest), so matricize() is a plain reshape and the Einstein product is
matrix multiplication of the matricizations.

Tensors are immutable: the backing array is made read-only at construction.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidTensor, NotSquare, ShapeMismatch

Number = Union[int, float, complex]


def _extents(modes: Iterable[int], name: str) -> Tuple[int, ...]:
    extents = tuple(int(m) for m in modes)
    for m in extents:
        if m < 1:
            raise InvalidTensor(f"{name} extents must be >= 1, got {extents}")
    return extents


@dataclass(frozen=True)
class TensorShape:
    """Ordered row-mode and column-mode extents"""

    row_modes: Tuple[int, ...]
    col_modes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_modes", _extents(self.row_modes, "row mode"))
        object.__setattr__(self, "col_modes", _extents(self.col_modes, "column mode"))
        if not self.row_modes and not self.col_modes:
            raise InvalidTensor("a tensor needs at least one mode")

    @classmethod
    def square(cls, modes: Sequence[int]) -> "TensorShape":
        return cls(tuple(modes), tuple(modes))

    @property
    def row_count(self) -> int:
        return math.prod(self.row_modes)

    @property
    def col_count(self) -> int:
        return math.prod(self.col_modes)

    @property
    def modes(self) -> Tuple[int, ...]:
        return self.row_modes + self.col_modes

    @property
    def is_square(self) -> bool:
        return self.row_modes == self.col_modes

    def transposed(self) -> "TensorShape":
        return TensorShape(self.col_modes, self.row_modes)

    def label(self) -> str:
        """Order string such as '2x3x2x3'"""
        return "x".join(str(m) for m in self.modes)


class DenseTensor:
    """Dense complex tensor with a row/column mode split"""

    __array_priority__ = 1000  # keep numpy from hijacking the operators

    def __init__(self, shape: TensorShape, data):
        array = np.asarray(data, dtype=np.complex128)
        if array.size != shape.row_count * shape.col_count:
            raise ShapeMismatch(
                f"{array.size} entries do not fill shape {shape.label()} "
                f"({shape.row_count * shape.col_count} expected)"
            )
        if not np.all(np.isfinite(array)):
            raise InvalidTensor("tensor entries must be finite")
        array = np.ascontiguousarray(array.reshape(shape.modes)).copy()
        array.flags.writeable = False
        self.shape = shape
        self.data = array

    @classmethod
    def from_matrix(cls, matrix, shape: TensorShape) -> "DenseTensor":
        return dematricize(matrix, shape)

    @property
    def matrix(self) -> np.ndarray:
        return matricize(self)

    @property
    def entries(self) -> np.ndarray:
        """Flat row-major entry list"""
        return self.data.reshape(-1)

    @property
    def H(self) -> "DenseTensor":
        return conj_transpose(self)

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        return add(self, other)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        return subtract(self, other)

    def __neg__(self) -> "DenseTensor":
        return scale(-1.0, self)

    def __mul__(self, alpha: Number) -> "DenseTensor":
        return scale(alpha, self)

    __rmul__ = __mul__

    def __matmul__(self, other: "DenseTensor") -> "DenseTensor":
        return einstein_product(self, other)

    def __repr__(self) -> str:
        return f"DenseTensor(shape={self.shape.label()}, split={len(self.shape.row_modes)}|{len(self.shape.col_modes)})"


def zeros(shape: TensorShape) -> DenseTensor:
    return DenseTensor(shape, np.zeros(shape.modes, dtype=np.complex128))


def add(S: DenseTensor, D: DenseTensor) -> DenseTensor:
    if S.shape != D.shape:
        raise ShapeMismatch(f"cannot add {S.shape.label()} and {D.shape.label()}")
    return DenseTensor(S.shape, S.data + D.data)


def subtract(S: DenseTensor, D: DenseTensor) -> DenseTensor:
    if S.shape != D.shape:
        raise ShapeMismatch(f"cannot subtract {D.shape.label()} from {S.shape.label()}")
    return DenseTensor(S.shape, S.data - D.data)


def scale(alpha: Number, D: DenseTensor) -> DenseTensor:
    return DenseTensor(D.shape, complex(alpha) * D.data)


def einstein_product(S: DenseTensor, D: DenseTensor) -> DenseTensor:
    """
    Contract the column modes of S with the row modes of D.

    Result entry (i, j) is the sum over k of S(i, k) * D(k, j).
    """
    if S.shape.col_modes != D.shape.row_modes:
        raise ShapeMismatch(
            f"contracted modes differ: {S.shape.col_modes} vs {D.shape.row_modes}"
        )
    contracted = len(S.shape.col_modes)
    result = np.tensordot(S.data, D.data, axes=contracted)
    return DenseTensor(TensorShape(S.shape.row_modes, D.shape.col_modes), result)


def conj_transpose(D: DenseTensor) -> DenseTensor:
    p = len(D.shape.row_modes)
    s = len(D.shape.col_modes)
    axes = tuple(range(p, p + s)) + tuple(range(p))
    return DenseTensor(D.shape.transposed(), np.conj(np.transpose(D.data, axes)))


def identity_tensor(modes: Sequence[int]) -> DenseTensor:
    modes = tuple(modes)
    if not modes:
        raise InvalidTensor("identity tensor needs at least one mode")
    shape = TensorShape.square(modes)
    return DenseTensor(shape, np.eye(shape.row_count, dtype=np.complex128))


def require_square(D: DenseTensor, what: str = "operation") -> None:
    if not D.shape.is_square:
        raise NotSquare(f"{what} needs a square tensor, got {D.shape.label()}")


def tensor_power(D: DenseTensor, k: int) -> DenseTensor:
    """D^0 = I, D^k = D * D^(k-1)"""
    require_square(D, "tensor_power")
    if k < 0:
        raise ValueError(f"power must be nonnegative, got {k}")
    power = np.linalg.matrix_power(matricize(D), k)
    return dematricize(power, D.shape)


def frobenius_norm(D: DenseTensor) -> float:
    return float(np.linalg.norm(D.entries))


def matricize(D: DenseTensor) -> np.ndarray:
    return D.data.reshape(D.shape.row_count, D.shape.col_count)


def dematricize(matrix, shape: TensorShape) -> DenseTensor:
    matrix = np.asarray(matrix)
    if matrix.shape != (shape.row_count, shape.col_count):
        raise ShapeMismatch(
            f"matrix of shape {matrix.shape} does not match tensor shape {shape.label()}"
        )
    return DenseTensor(shape, matrix)


def nnz(D: DenseTensor, tol: float = 0.0) -> int:
    if tol < 0:
        raise ValueError("nnz tolerance must be >= 0")
    return int(np.count_nonzero(np.abs(D.data) > tol))


def allclose(A: DenseTensor, B: DenseTensor, tol: float) -> bool:
    """Relative Frobenius equality: ||A - B|| <= tol * max(1, ||A||)"""
    if A.shape != B.shape:
        raise ShapeMismatch(f"cannot compare {A.shape.label()} with {B.shape.label()}")
    gap = float(np.linalg.norm(A.entries - B.entries))
    return gap <= tol * max(1.0, frobenius_norm(A))


def relative_residual(lhs: DenseTensor, target: DenseTensor) -> float:
    """||lhs - target|| / ||target||, or the absolute gap when target is zero"""
    if lhs.shape != target.shape:
        raise ShapeMismatch(f"residual of {lhs.shape.label()} against {target.shape.label()}")
    gap = float(np.linalg.norm(lhs.entries - target.entries))
    norm = frobenius_norm(target)
    if norm == 0.0:
        return gap
    return gap / norm
