"""
Executable characterizations of the bilateral and composite inverses.

Range inclusion is decided by rank: R(Q) is inside R(P) iff appending the
columns of Q does not raise the numerical rank of P. Null-space inclusion
N(A) inside N(B) is decided by the projector residual ||B (I - A^+ A)||.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from . import matrix_kernels as mk
from .config import DEFAULTS
from .errors import (
    ModeMismatch,
    NotGeneralizedInverse,
    ParseError,
    PreconditionViolated,
    ShapeMismatch,
)
from .ginv import InverseKind, compute_inverse, inverse_index, is_inner, is_outer
from .tensor_core import (
    DenseTensor,
    allclose,
    dematricize,
    frobenius_norm,
    relative_residual,
    require_square,
    tensor_power,
)

SYSTEMS = ("YDX", "XDY", "CMP", "DMP", "MPD", "MPCEP", "CEPMP")
COMPOSITE_SYSTEMS = ("CMP", "DMP", "MPD", "MPCEP", "CEPMP")

EQUALITY_PAIRS = (
    "CMPeqMPD",
    "CMPeqDMP",
    "MPCEPeqCEPMP",
    "Thm25",
    "DMPDeqCMPD",
    "DMPDeqDCMP",
    "CEPMPcommute",
    "MPDcommute",
    "DMPcommute",
)


@dataclass
class SystemResidual:
    """Residuals of (Z*D*Z = Z, D*Z = ..., Z*D = ...)"""

    eq_residuals: Tuple[float, float, float]
    tolerance: float = DEFAULTS.verify_tol

    @property
    def satisfied(self) -> bool:
        return all(r <= self.tolerance for r in self.eq_residuals)

    def summary_lines(self):
        names = ("Z*D*Z = Z", "D*Z = target", "Z*D = target")
        return [
            f"{name:<14} residual = {r:.3e}  [{'ok' if r <= self.tolerance else 'FAIL'}]"
            for name, r in zip(names, self.eq_residuals)
        ]


def parse_system(name: str) -> str:
    """Map 'cmp-system', 'cmp', 'YDX' ... onto a system key"""
    key = name.strip().upper().replace("-SYSTEM", "").replace("_SYSTEM", "")
    if key not in SYSTEMS:
        raise ParseError(f"unknown system {name!r}", field="system")
    return key


def _unit(matrix: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(matrix)
    return matrix / norm if norm > 0 else matrix


def range_contains(P: DenseTensor, Q: DenseTensor) -> bool:
    """R(Q) subset of R(P)"""
    if P.shape.row_modes != Q.shape.row_modes:
        raise ShapeMismatch(f"range test needs shared row modes: {P.shape.label()} vs {Q.shape.label()}")
    if frobenius_norm(Q) == 0.0:
        return True
    if frobenius_norm(P) == 0.0:
        return False
    Pm = _unit(P.matrix)
    Qm = _unit(Q.matrix)
    base = mk.numerical_rank(Pm).rank
    joined = mk.numerical_rank(np.hstack([Pm, Qm])).rank
    return joined == base


def null_contains(A: DenseTensor, B: DenseTensor, tol: Optional[float] = None) -> bool:
    """N(A) subset of N(B)"""
    if A.shape.col_modes != B.shape.col_modes:
        raise ShapeMismatch(f"null-space test needs shared column modes: {A.shape.label()} vs {B.shape.label()}")
    tol = DEFAULTS.subspace_tol if tol is None else tol
    Am = A.matrix
    Bm = B.matrix
    projector = np.eye(Am.shape[1]) - mk.pinv(Am) @ Am
    return float(np.linalg.norm(Bm @ projector)) <= tol * float(np.linalg.norm(Bm))


def intersection_is_trivial(A: DenseTensor, R: DenseTensor) -> bool:
    """N(A) and R(R) meet only in zero: rank(A*R) == rank(R)"""
    if A.shape.col_modes != R.shape.row_modes:
        raise ShapeMismatch(f"cannot intersect N({A.shape.label()}) with R({R.shape.label()})")
    return mk.numerical_rank((A @ R).matrix).rank == mk.numerical_rank(R.matrix).rank


def _system_targets(
    D: DenseTensor,
    system: str,
    X: Optional[DenseTensor],
    Y: Optional[DenseTensor],
) -> Tuple[DenseTensor, DenseTensor]:
    """Right-hand sides (of D*Z = A, Z*D = C) of a characterizing system"""
    if system in ("YDX", "XDY"):
        if X is None or Y is None:
            raise PreconditionViolated(f"system {system} needs the X and Y tensors")
        if system == "YDX":
            return D @ X, Y @ D @ X @ D
        return D @ X @ D @ Y, X @ D

    require_square(D, f"{system} system")
    mp = compute_inverse(D, InverseKind.MP, check=False)
    if system in ("CMP", "DMP", "MPD"):
        dz = compute_inverse(D, InverseKind.DRAZIN, check=False)
        if system == "CMP":
            return D @ dz @ D @ mp, mp @ D @ dz @ D
        if system == "DMP":
            return D @ dz @ D @ mp, dz @ D
        return D @ dz, mp @ D @ dz @ D

    ce = compute_inverse(D, InverseKind.CORE_EP, check=False)
    if system == "MPCEP":
        return D @ ce, mp @ D @ ce @ D
    return D @ ce @ D @ mp, ce @ D


def closed_form(
    D: DenseTensor,
    system: str,
    X: Optional[DenseTensor] = None,
    Y: Optional[DenseTensor] = None,
) -> DenseTensor:
    """The unique solution each system characterizes"""
    system = parse_system(system)
    if system == "YDX":
        if X is None or Y is None:
            raise PreconditionViolated("system YDX needs the X and Y tensors")
        return Y @ D @ X
    if system == "XDY":
        if X is None or Y is None:
            raise PreconditionViolated("system XDY needs the X and Y tensors")
        return X @ D @ Y
    return compute_inverse(D, InverseKind.parse(system), check=False)


def verify_system(
    D: DenseTensor,
    Z: DenseTensor,
    system: str,
    X: Optional[DenseTensor] = None,
    Y: Optional[DenseTensor] = None,
    tol: Optional[float] = None,
) -> SystemResidual:
    """
    Evaluate the three equations of a characterizing system at Z.

    YDX: Z*D*Z = Z, D*Z = D*X, Z*D = Y*D*X*D   (X in D{2}, Y in D{1})
    XDY: Z*D*Z = Z, D*Z = D*X*D*Y, Z*D = X*D
    the composite systems use D^D, D^+ and the core-EP inverse on the right.
    """
    system = parse_system(system)
    tol = DEFAULTS.verify_tol if tol is None else tol
    if Z.shape != D.shape.transposed():
        raise ShapeMismatch(f"unknown Z has shape {Z.shape.label()}, expected {D.shape.transposed().label()}")
    dz_target, zd_target = _system_targets(D, system, X, Y)
    residuals = (
        relative_residual(Z @ D @ Z, Z),
        relative_residual(D @ Z, dz_target),
        relative_residual(Z @ D, zd_target),
    )
    return SystemResidual(residuals, tol)


def uniqueness_probe(D: DenseTensor, system: str, tol: Optional[float] = None) -> bool:
    """
    Solve the two linear equations of a composite system directly.

    The stacked system (I (x) ... ) is solved by minimum-norm least squares,
    the quadratic equation Z*D*Z = Z is checked afterwards, and the result
    must coincide with the closed-form inverse.
    """
    system = parse_system(system)
    if system not in COMPOSITE_SYSTEMS:
        raise ModeMismatch(f"uniqueness probe covers the composite systems, not {system}")
    require_square(D, "uniqueness probe")
    tol = DEFAULTS.equality_tol if tol is None else tol

    M = D.matrix
    n = M.shape[0]
    dz_target, zd_target = _system_targets(D, system, None, None)
    eye = np.eye(n)
    # Row-major vec: vec(D Z) = (D kron I) vec(Z), vec(Z D) = (I kron D^T) vec(Z).
    lhs = np.vstack([np.kron(M, eye), np.kron(eye, M.T)])
    rhs = np.concatenate([dz_target.matrix.ravel(), zd_target.matrix.ravel()])
    z, _, _, _ = scipy.linalg.lstsq(lhs, rhs, cond=max(lhs.shape) * mk.EPS)
    Z = dematricize(z.reshape(n, n), D.shape)

    quadratic = relative_residual(Z @ D @ Z, Z)
    expected = closed_form(D, system)
    agrees = allclose(expected, Z, tol)
    if quadratic > tol or not agrees:
        logging.info(
            f"uniqueness probe for {system}: quadratic residual {quadratic:.2e}, "
            f"gap to closed form {frobenius_norm(Z - expected):.2e}"
        )
    return quadratic <= tol and agrees


def bilateral_commuting_statements(
    D: DenseTensor,
    X: DenseTensor,
    Y: DenseTensor,
    tol: Optional[float] = None,
) -> Tuple[bool, bool, bool]:
    """
    For X in D{2} and Y in D{1}:
      (i)   X*D*Y == Y*D*X
      (ii)  X == X*D*Y == Y*D*X
      (iii) N(D*Y) in N(X) and R(X) in R(Y*D)
    """
    tol = DEFAULTS.equality_tol if tol is None else tol
    if not is_outer(D, X, DEFAULTS.equality_tol).satisfied:
        raise NotGeneralizedInverse("X must be an outer inverse of D")
    if not is_inner(D, Y, DEFAULTS.equality_tol).satisfied:
        raise NotGeneralizedInverse("Y must be an inner inverse of D")
    xdy = X @ D @ Y
    ydx = Y @ D @ X
    first = allclose(xdy, ydx, tol)
    second = allclose(xdy, X, tol) and allclose(ydx, X, tol)
    third = null_contains(D @ Y, X) and range_contains(Y @ D, X)
    return first, second, third


def equality_condition(
    D: DenseTensor,
    pair: str,
    X: Optional[DenseTensor] = None,
    Y: Optional[DenseTensor] = None,
    tol: Optional[float] = None,
) -> Tuple[bool, bool]:
    """
    Evaluate both sides of an equivalence: (lhs_equal, condition_holds).

    CMPeqMPD      CMP == MPD        iff N(D^+) in N(D^k)
    CMPeqDMP      CMP == DMP        iff R(D^k) in R(D^+)
    MPCEPeqCEPMP  MPCEP == CEPMP    iff N(D^+) in N(D^o) and R(D^o) in R(D^+ D^k)
    Thm25         X*D*Y == Y*D*X    iff N(D*Y) in N(X) and R(X) in R(Y*D)  (default X = D^D, Y = D^+)
    DMPDeqCMPD    DMP*D == CMP*D    iff R(D^k) in R(D^+)
    DMPDeqDCMP    D*MPD == D*CMP    iff D^k == D^(k+1) D^+
    CEPMPcommute  D^o*D*D^+ == D^+*D*D^o  iff  D^o == D^o*D*D^+ == D^+*D*D^o
    MPDcommute    MPD*D*D^+ == D^+*D*MPD  iff N(D^+) in N(D^k)
    DMPcommute    D^+*D*DMP == DMP*D*D^+  iff R(D^k) in R(D^+)

    D^o denotes the core-EP inverse.
    """
    if pair not in EQUALITY_PAIRS:
        raise ParseError(f"unknown equality pair {pair!r}", field="pair")
    require_square(D, "equality condition")
    tol = DEFAULTS.equality_tol if tol is None else tol

    k = inverse_index(D)
    Dk = tensor_power(D, k)
    mp = compute_inverse(D, InverseKind.MP, check=False)

    if pair == "Thm25":
        X = compute_inverse(D, InverseKind.DRAZIN, check=False) if X is None else X
        Y = mp if Y is None else Y
        first, _, third = bilateral_commuting_statements(D, X, Y, tol)
        return first, third

    if pair == "CMPeqMPD":
        lhs = allclose(compute_inverse(D, InverseKind.CMP, check=False), compute_inverse(D, InverseKind.MPD, check=False), tol)
        return lhs, null_contains(mp, Dk)
    if pair == "CMPeqDMP":
        lhs = allclose(compute_inverse(D, InverseKind.CMP, check=False), compute_inverse(D, InverseKind.DMP, check=False), tol)
        return lhs, range_contains(mp, Dk)
    if pair == "MPCEPeqCEPMP":
        ce = compute_inverse(D, InverseKind.CORE_EP, check=False)
        lhs = allclose(compute_inverse(D, InverseKind.MPCEP, check=False), compute_inverse(D, InverseKind.CEPMP, check=False), tol)
        return lhs, null_contains(mp, ce) and range_contains(mp @ Dk, ce)
    if pair == "DMPDeqCMPD":
        lhs = allclose(compute_inverse(D, InverseKind.DMP, check=False) @ D, compute_inverse(D, InverseKind.CMP, check=False) @ D, tol)
        return lhs, range_contains(mp, Dk)
    if pair == "DMPDeqDCMP":
        lhs = allclose(D @ compute_inverse(D, InverseKind.MPD, check=False), D @ compute_inverse(D, InverseKind.CMP, check=False), tol)
        return lhs, allclose(Dk, Dk @ D @ mp, tol)
    if pair == "CEPMPcommute":
        ce = compute_inverse(D, InverseKind.CORE_EP, check=False)
        left, right = ce @ D @ mp, mp @ D @ ce
        return allclose(left, right, tol), allclose(ce, left, tol) and allclose(ce, right, tol)
    if pair == "MPDcommute":
        mpd = compute_inverse(D, InverseKind.MPD, check=False)
        return allclose(mpd @ D @ mp, mp @ D @ mpd, tol), null_contains(mp, Dk)
    dmp = compute_inverse(D, InverseKind.DMP, check=False)
    return allclose(mp @ D @ dmp, dmp @ D @ mp, tol), range_contains(mp, Dk)


def power_representations(D: DenseTensor, l: int) -> Tuple[DenseTensor, DenseTensor]:
    """(D^+ D^l (D^l)^+, D^D D^l (D^l)^+) for l >= ind(D): MPCEP and CEPMP"""
    k = inverse_index(D)
    if l < k:
        raise PreconditionViolated(f"representation needs l >= ind(D) = {k}, got {l}")
    Dl = tensor_power(D, l)
    Dl_mp = compute_inverse(Dl, InverseKind.MP, check=False)
    mp = compute_inverse(D, InverseKind.MP, check=False)
    dz = compute_inverse(D, InverseKind.DRAZIN, check=False)
    return mp @ Dl @ Dl_mp, dz @ Dl @ Dl_mp


def prescribed_outer_check(
    D: DenseTensor,
    Y: DenseTensor,
    B_t: DenseTensor,
    C_t: DenseTensor,
    tol: Optional[float] = None,
) -> bool:
    """Y is the outer inverse of D with range R(B_t) and null space N(C_t)"""
    tol = DEFAULTS.verify_tol if tol is None else tol
    if not is_outer(D, Y, tol).satisfied:
        return False
    same_range = range_contains(Y, B_t) and range_contains(B_t, Y)
    same_null = null_contains(Y, C_t) and null_contains(C_t, Y)
    return same_range and same_null


def prescribed_spaces(D: DenseTensor, kind: InverseKind) -> Tuple[DenseTensor, DenseTensor]:
    """(B_t, C_t) with MPCEP = D^(2) on R(D^+ D^k), N((D^k)^*) and CEPMP on R(D^k), N((D^k)^*)"""
    k = inverse_index(D)
    Dk = tensor_power(D, k)
    if kind is InverseKind.MPCEP:
        return compute_inverse(D, InverseKind.MP, check=False) @ Dk, Dk.H
    if kind is InverseKind.CEPMP:
        return Dk, Dk.H
    raise ModeMismatch(f"prescribed spaces are known for MPCEP and CEPMP, not {kind.label}")


def commuting_inner_condition(
    D: DenseTensor,
    X: DenseTensor,
    Z: DenseTensor,
    tol: Optional[float] = None,
) -> Tuple[bool, bool]:
    """For X, Z in D{1}: (X*D*Z == Z*D*X, X*D == Z*D and D*Z == D*X)"""
    tol = DEFAULTS.equality_tol if tol is None else tol
    for name, candidate in (("X", X), ("Z", Z)):
        if not is_inner(D, candidate, DEFAULTS.equality_tol).satisfied:
            raise NotGeneralizedInverse(f"{name} is not an inner inverse of D")
    products_equal = allclose(X @ D @ Z, Z @ D @ X, tol)
    sides_equal = allclose(X @ D, Z @ D, tol) and allclose(D @ Z, D @ X, tol)
    return products_equal, sides_equal


__all__ = [
    "SystemResidual",
    "SYSTEMS",
    "EQUALITY_PAIRS",
    "range_contains",
    "null_contains",
    "intersection_is_trivial",
    "verify_system",
    "closed_form",
    "uniqueness_probe",
    "bilateral_commuting_statements",
    "equality_condition",
    "power_representations",
    "prescribed_outer_check",
    "prescribed_spaces",
    "commuting_inner_condition",
]
