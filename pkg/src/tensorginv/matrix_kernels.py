"""
Matrix-level kernels behind every tensor inverse.

All rank decisions share one truncation rule: singular values above
max(m, n) * eps * sigma_max count toward the rank. The same cutoff
decides which singular values pinv inverts.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, InvalidTensor, NotSquare, PreconditionViolated

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD: M = U diag(sigma) V^*"""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ self.V.conj().T


@dataclass(frozen=True)
class RankInfo:
    rank: int
    tolerance_used: float
    sigma_max: float


def _as_matrix(M) -> np.ndarray:
    matrix = np.asarray(M, dtype=np.complex128)
    if matrix.ndim != 2:
        raise InvalidTensor(f"expected a matrix, got an array of dimension {matrix.ndim}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidTensor("matrix entries must be finite")
    return matrix


def _require_square(matrix: np.ndarray, what: str) -> None:
    if matrix.shape[0] != matrix.shape[1]:
        raise NotSquare(f"{what} needs a square matrix, got {matrix.shape}")


def svd(M) -> SvdFactors:
    """Thin SVD, falling back to the gesvd driver when gesdd does not converge"""
    matrix = _as_matrix(M)
    m, n = matrix.shape
    if m == 0 or n == 0:
        r = min(m, n)
        return SvdFactors(np.zeros((m, r), complex), np.zeros(r), np.zeros((n, r), complex))
    try:
        u, s, vh = scipy.linalg.svd(matrix, full_matrices=False, check_finite=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError as e:
        logging.warning(f"gesdd did not converge on a {m}x{n} matrix ({e}), retrying with gesvd")
        try:
            u, s, vh = scipy.linalg.svd(matrix, full_matrices=False, check_finite=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(f"SVD failed to converge on a {m}x{n} matrix") from exc
    return SvdFactors(u, s, vh.conj().T)


def rank_tolerance(shape, sigma_max: float) -> float:
    return max(shape) * EPS * sigma_max


def numerical_rank(M) -> RankInfo:
    matrix = _as_matrix(M)
    if matrix.size == 0:
        return RankInfo(0, 0.0, 0.0)
    s = svd(matrix).singular_values
    sigma_max = float(s[0]) if s.size else 0.0
    if sigma_max == 0.0:
        return RankInfo(0, 0.0, 0.0)
    tol = rank_tolerance(matrix.shape, sigma_max)
    return RankInfo(int(np.count_nonzero(s > tol)), tol, sigma_max)


def pinv(M) -> np.ndarray:
    """Moore-Penrose inverse through the truncated SVD"""
    matrix = _as_matrix(M)
    m, n = matrix.shape
    factors = svd(matrix)
    s = factors.singular_values
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, m), dtype=np.complex128)
    r = int(np.count_nonzero(s > rank_tolerance(matrix.shape, float(s[0]))))
    return (factors.V[:, :r] / s[:r]) @ factors.U[:, :r].conj().T


def matrix_power(M, k: int) -> np.ndarray:
    matrix = _as_matrix(M)
    _require_square(matrix, "matrix_power")
    if k < 0:
        raise ValueError(f"power must be nonnegative, got {k}")
    return np.linalg.matrix_power(matrix, k)


def index_of(M) -> int:
    """Smallest k >= 0 with rank(M^k) == rank(M^(k+1)), capped at n"""
    matrix = _as_matrix(M)
    _require_square(matrix, "index_of")
    n = matrix.shape[0]
    power = np.eye(n, dtype=np.complex128)
    rank = n
    for k in range(n + 1):
        power = power @ matrix
        next_rank = numerical_rank(power).rank
        if next_rank == rank:
            return k
        rank = next_rank
    logging.warning(f"rank of powers did not stabilize on a {n}x{n} matrix, reporting the cap {n}")
    return n


def drazin(M, index: Optional[int] = None) -> np.ndarray:
    """
    Drazin inverse as M^k pinv(M^(2k+1)) M^k with k = ind(M).

    Roundoff grows with the conditioning of M^(2k+1), so large indices on
    badly scaled matrices lose accuracy.
    """
    matrix = _as_matrix(M)
    _require_square(matrix, "drazin")
    k = index_of(matrix) if index is None else index
    mk = np.linalg.matrix_power(matrix, k)
    return mk @ pinv(np.linalg.matrix_power(matrix, 2 * k + 1)) @ mk


def core_ep(M, index: Optional[int] = None) -> np.ndarray:
    """Core-EP inverse D^D M^k pinv(M^k), k = ind(M)"""
    matrix = _as_matrix(M)
    _require_square(matrix, "core_ep")
    k = index_of(matrix) if index is None else index
    mk = np.linalg.matrix_power(matrix, k)
    return drazin(matrix, index=k) @ mk @ pinv(mk)


def group_inverse(M) -> np.ndarray:
    matrix = _as_matrix(M)
    _require_square(matrix, "group_inverse")
    k = index_of(matrix)
    if k > 1:
        raise PreconditionViolated(f"group inverse needs index <= 1, matrix has index {k}")
    return drazin(matrix, index=k)


def core_inverse(M) -> np.ndarray:
    matrix = _as_matrix(M)
    _require_square(matrix, "core_inverse")
    k = index_of(matrix)
    if k > 1:
        raise PreconditionViolated(f"core inverse needs index <= 1, matrix has index {k}")
    return core_ep(matrix, index=k)
