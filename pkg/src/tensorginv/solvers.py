"""
Multilinear systems solved with the composite inverses.

General modes return the whole solution family Z = Z0 + P*Q; constrained
modes return the unique solution K*B inside the mode's range space.
"""
import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional

import numpy as np
import scipy.linalg

from . import matrix_kernels as mk
from .characterizations import range_contains
from .config import DEFAULTS
from .errors import (
    ModeMismatch,
    NotGeneralizedInverse,
    ParseError,
    RhsNotInRange,
    ShapeMismatch,
    SolutionCheckFailed,
)
from .ginv import TABLE_ORDER, InverseKind, compute_inverse, inverse_index
from .report_generator import KindResult, ResidualReport
from .tensor_core import (
    DenseTensor,
    TensorShape,
    allclose,
    dematricize,
    frobenius_norm,
    identity_tensor,
    nnz,
    relative_residual,
    require_square,
    tensor_power,
)


class SolveMode(str, Enum):
    CMP_POWER = "cmp_power"
    CMP_CONSTRAINED = "cmp_constrained"
    CMP_PROJECTED = "cmp_projected"
    DMP_CONSTRAINED = "dmp_constrained"
    MPD_CONSTRAINED = "mpd_constrained"
    MPCEP_GENERAL = "mpcep_general"
    MPCEP_CONSTRAINED = "mpcep_constrained"
    CEPMP_CONSTRAINED = "cepmp_constrained"
    MPCEP_RANGE = "mpcep_range"

    @classmethod
    def parse(cls, name: str) -> "SolveMode":
        key = name.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ParseError(f"unknown solve mode {name!r}", field="mode") from None

    @property
    def is_general(self) -> bool:
        return self in GENERAL_MODES

    @property
    def kind(self) -> InverseKind:
        return InverseKind.parse(self.value.split("_")[0])


GENERAL_MODES = (SolveMode.CMP_POWER, SolveMode.CMP_PROJECTED, SolveMode.MPCEP_GENERAL, SolveMode.MPCEP_RANGE)
CONSTRAINED_MODES = (
    SolveMode.CMP_CONSTRAINED,
    SolveMode.DMP_CONSTRAINED,
    SolveMode.MPD_CONSTRAINED,
    SolveMode.MPCEP_CONSTRAINED,
    SolveMode.CEPMP_CONSTRAINED,
)

# Modes whose right-hand side must lie in R(D^k)
RANGE_MODES = CONSTRAINED_MODES + (SolveMode.MPCEP_RANGE,)


@dataclass
class SolveRequest:
    D: DenseTensor
    B: DenseTensor
    mode: SolveMode
    strict: bool = True

    def __post_init__(self):
        if not isinstance(self.mode, SolveMode):
            self.mode = SolveMode.parse(self.mode)
        require_square(self.D, f"{self.mode.value} solve")
        if self.B.shape.row_modes != self.D.shape.row_modes:
            raise ShapeMismatch(
                f"right-hand side {self.B.shape.label()} does not match the row modes of {self.D.shape.label()}"
            )


@dataclass
class SolutionFamily:
    """
    All solutions Z0 + P*Q of operator*Z = target.

    The projector must be idempotent; a failure means one of the inverses
    it is built from is wrong.
    """

    particular: DenseTensor
    projector: DenseTensor
    constraint_desc: str
    operator: DenseTensor
    target: DenseTensor

    def __post_init__(self):
        P = self.projector
        if not allclose(P @ P, P, DEFAULTS.verify_tol):
            raise NotGeneralizedInverse(
                f"projector of {self.constraint_desc} is not idempotent "
                f"(gap {frobenius_norm(P @ P - P):.2e})"
            )

    def sample(self, Q: DenseTensor) -> DenseTensor:
        return self.particular + self.projector @ Q

    def sample_many(self, count: int, seed: int = 0) -> List[DenseTensor]:
        rng = np.random.default_rng(seed)
        shape = self.particular.shape
        members = []
        for _ in range(count):
            Q = DenseTensor(shape, rng.standard_normal(shape.modes))
            members.append(self.sample(Q))
        return members

    def residual(self, Z: DenseTensor) -> float:
        return relative_residual(self.operator @ Z, self.target)

    @property
    def is_unique(self) -> bool:
        return frobenius_norm(self.projector) <= DEFAULTS.verify_tol


def _index_power(D: DenseTensor) -> DenseTensor:
    return tensor_power(D, inverse_index(D))


def check_rhs_range(D: DenseTensor, B: DenseTensor, strict: bool = True) -> bool:
    """B in R(D^k); raises RhsNotInRange when strict, otherwise warns"""
    inside = range_contains(_index_power(D), B)
    if not inside:
        message = f"right-hand side is not in R(D^k) for D of shape {D.shape.label()}"
        if strict:
            raise RhsNotInRange(message)
        logging.warning(f"{message}; continuing because the range check is not strict")
    return inside


def solve_general(req: SolveRequest) -> SolutionFamily:
    """
    cmp_power      D^k*Z = D^k*D^+*B       Z0 = CMP*B,   P = I - CMP*D
    cmp_projected  D*Z = D*CMP*B           Z0 = CMP*B,   P = I - D^+*D
    mpcep_general  D*Z = D^k*(D^k)^+*B     Z0 = MPCEP*B, P = I - D^+*D
    mpcep_range    D*Z = B, B in R(D^k)    Z0 = MPCEP*B, P = I - D^+*D
    """
    mode = req.mode
    if not mode.is_general:
        raise ModeMismatch(f"{mode.value} is not a general-solution mode")
    D, B = req.D, req.B
    identity = identity_tensor(D.shape.col_modes)
    mp = compute_inverse(D, InverseKind.MP, check=False)
    K = compute_inverse(D, mode.kind, check=False)
    particular = K @ B

    if mode is SolveMode.CMP_POWER:
        Dk = _index_power(D)
        return SolutionFamily(particular, identity - K @ D, "D^k*Z = D^k*D^+*B", Dk, Dk @ mp @ B)
    if mode is SolveMode.CMP_PROJECTED:
        return SolutionFamily(particular, identity - mp @ D, "D*Z = D*CMP*B", D, D @ K @ B)
    if mode is SolveMode.MPCEP_GENERAL:
        Dk = _index_power(D)
        target = Dk @ compute_inverse(Dk, InverseKind.MP, check=False) @ B
        return SolutionFamily(particular, identity - mp @ D, "D*Z = D^k*(D^k)^+*B", D, target)

    check_rhs_range(D, B, req.strict)
    return SolutionFamily(particular, identity - mp @ D, "D*Z = B, B in R(D^k)", D, B)


def advertised_range(D: DenseTensor, mode: SolveMode) -> DenseTensor:
    """Generator whose range holds the constrained solution"""
    Dk = _index_power(D)
    kind = mode.kind
    if kind is InverseKind.DMP:
        return compute_inverse(D, InverseKind.DRAZIN, check=False) @ Dk
    if kind is InverseKind.CEPMP:
        return compute_inverse(D, InverseKind.CORE_EP, check=False) @ Dk
    return compute_inverse(D, InverseKind.MP, check=False) @ Dk


def solve_constrained(req: SolveRequest, tol: Optional[float] = None) -> DenseTensor:
    """
    Unique solution K*B of D*Z = B with Z in the mode's range space.

    The residual is only enforced when B passed the range check; a loose
    request with B outside R(D^k) returns K*B as is.
    """
    mode = req.mode
    if mode not in CONSTRAINED_MODES:
        raise ModeMismatch(f"{mode.value} is not a constrained mode")
    D, B = req.D, req.B
    tol = DEFAULTS.solve_tol if tol is None else tol
    inside = check_rhs_range(D, B, req.strict)
    Z = compute_inverse(D, mode.kind, check=False) @ B
    residual = relative_residual(D @ Z, B)
    logging.info(f"{mode.value}: ||D*Z - B|| / ||B|| = {residual:.3e}")
    if inside and residual > tol:
        raise SolutionCheckFailed(f"{mode.value}: ||D*Z - B|| / ||B|| = {residual:.2e} exceeds {tol:.0e}")
    if not range_contains(advertised_range(D, mode), Z):
        raise SolutionCheckFailed(f"{mode.value}: solution is outside its advertised range")
    return Z


def rhs_from_range(
    D: DenseTensor,
    k: Optional[int] = None,
    seed: int = 0,
    col_modes=(1,),
    normalize: bool = True,
) -> DenseTensor:
    """B = D^k*S for a seeded random S, scaled to unit Frobenius norm"""
    require_square(D, "rhs_from_range")
    k = inverse_index(D) if k is None else k
    rng = np.random.default_rng(seed)
    shape = TensorShape(D.shape.col_modes, tuple(col_modes))
    S = DenseTensor(shape, rng.standard_normal(shape.modes))
    B = tensor_power(D, k) @ S
    norm = frobenius_norm(B)
    if normalize and norm > 0:
        B = B * (1.0 / norm)
    return B


def least_squares_solution(operator: DenseTensor, target: DenseTensor) -> DenseTensor:
    """Minimum-norm least-squares solution of operator*Z = target on the matricizations"""
    if operator.shape.row_modes != target.shape.row_modes:
        raise ShapeMismatch(f"cannot solve {operator.shape.label()} against {target.shape.label()}")
    A = operator.matrix
    Z, _, _, _ = scipy.linalg.lstsq(A, target.matrix, cond=max(A.shape) * mk.EPS)
    return dematricize(Z, TensorShape(operator.shape.col_modes, target.shape.col_modes))


def time_inverse_residual(D: DenseTensor, B: DenseTensor, kind: InverseKind, repeats: int = 1) -> KindResult:
    """Mean wall time of computing the inverse, plus ||D*K*B - B|| from the first run"""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    elapsed = 0.0
    residual = float("nan")
    residual_time = 0.0
    for i in range(repeats):
        start = time.perf_counter()
        K = compute_inverse(D, kind, check=False)
        elapsed += time.perf_counter() - start
        if i == 0:
            start = time.perf_counter()
            residual = frobenius_norm(D @ K @ B - B)
            residual_time = time.perf_counter() - start
    return KindResult(kind, residual, elapsed / repeats, residual_time)


def residual_report(
    D: DenseTensor,
    B: DenseTensor,
    kinds: Optional[Iterable[InverseKind]] = None,
    problem: str = "",
    repeats: int = 1,
    seed: int = 0,
) -> ResidualReport:
    require_square(D, "residual report")
    if B.shape.row_modes != D.shape.row_modes:
        raise ShapeMismatch(f"right-hand side {B.shape.label()} does not match {D.shape.label()}")
    kinds = list(TABLE_ORDER) if kinds is None else [InverseKind.parse(k) if isinstance(k, str) else k for k in kinds]
    report = ResidualReport(
        problem=problem or D.shape.label(),
        order=D.shape.label(),
        index=inverse_index(D),
        nnz=nnz(D),
        repeats=repeats,
        seed=seed,
    )
    for kind in kinds:
        report.add(time_inverse_residual(D, B, kind, repeats))
    return report


INDEX_ONE_KINDS = (InverseKind.MP, InverseKind.GROUP, InverseKind.CORE, InverseKind.MPD)


def index_one_solutions(D: DenseTensor, B: DenseTensor) -> Dict[InverseKind, DenseTensor]:
    """K*B for the MP, group, core and MPD inverses of an index-one tensor"""
    return {kind: compute_inverse(D, kind, check=False) @ B for kind in INDEX_ONE_KINDS}
