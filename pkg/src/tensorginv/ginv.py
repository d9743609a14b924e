"""
Tensor generalized inverses and their defining-equation checks.

Every inverse is computed on the matricization and reshaped back; the
Einstein-product algebra is isomorphic to matrix algebra under the fixed
row-major linearization.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional

import numpy as np

from . import matrix_kernels as mk
from .config import DEFAULTS
from .errors import NotGeneralizedInverse, ParseError, PreconditionViolated, ShapeMismatch
from .tensor_core import (
    DenseTensor,
    allclose,
    dematricize,
    relative_residual,
    require_square,
    tensor_power,
)


class InverseKind(str, Enum):
    MP = "mp"
    DRAZIN = "drazin"
    CORE_EP = "core-ep"
    CMP = "cmp"
    MPD = "mpd"
    DMP = "dmp"
    MPCEP = "mpcep"
    CEPMP = "cepmp"
    GROUP = "group"
    CORE = "core"

    @classmethod
    def parse(cls, name: str) -> "InverseKind":
        key = name.strip().lower().replace("_", "-")
        key = _KIND_ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ParseError(f"unknown inverse kind {name!r}", field="kind") from None

    @property
    def label(self) -> str:
        return _KIND_LABELS[self]

    @property
    def requires_square(self) -> bool:
        return self is not InverseKind.MP


_KIND_ALIASES = {
    "moore-penrose": "mp",
    "pinv": "mp",
    "coreep": "core-ep",
    "d": "drazin",
}

_KIND_LABELS = {
    InverseKind.MP: "MP",
    InverseKind.DRAZIN: "Drazin",
    InverseKind.CORE_EP: "CoreEP",
    InverseKind.CMP: "CMP",
    InverseKind.MPD: "MPD",
    InverseKind.DMP: "DMP",
    InverseKind.MPCEP: "MPCEP",
    InverseKind.CEPMP: "CEPMP",
    InverseKind.GROUP: "Group",
    InverseKind.CORE: "Core",
}

# Residual table order: E_dagger, E_D, E_coreEP, E_c,dagger, E_dagger,D, E_D,dagger, E_dagger,coreEP, E_coreEP,dagger
TABLE_ORDER: List[InverseKind] = [
    InverseKind.MP,
    InverseKind.DRAZIN,
    InverseKind.CORE_EP,
    InverseKind.CMP,
    InverseKind.MPD,
    InverseKind.DMP,
    InverseKind.MPCEP,
    InverseKind.CEPMP,
]

COMPOSITES = (InverseKind.DMP, InverseKind.MPD, InverseKind.CMP, InverseKind.MPCEP, InverseKind.CEPMP)

EQUATION_LABELS = ("1", "2", "3", "4", "1k", "5", "6")
SQUARE_ONLY_LABELS = ("1k", "5", "6")

EQUATION_SETS: Dict[str, tuple] = {
    "penrose-all": ("1", "2", "3", "4"),
    "penrose-1": ("1",),
    "penrose-2": ("2",),
    "penrose-3": ("3",),
    "penrose-4": ("4",),
    "inner": ("1",),
    "outer": ("2",),
    "reflexive": ("1", "2"),
    "drazin": ("1k", "2", "5"),
    "group": ("1", "2", "5"),
    "core-ep": ("1k", "6", "3"),
    "all": EQUATION_LABELS,
}

_DEFINING_SETS = {
    InverseKind.MP: EQUATION_SETS["penrose-all"],
    InverseKind.DRAZIN: EQUATION_SETS["drazin"],
    InverseKind.GROUP: EQUATION_SETS["group"],
    InverseKind.CORE_EP: EQUATION_SETS["core-ep"],
    InverseKind.CORE: EQUATION_SETS["core-ep"],
}


def defining_labels(kind: InverseKind) -> tuple:
    """Equation labels that define kind; composites only promise (2) here"""
    return _DEFINING_SETS.get(kind, ("2",))


@dataclass
class EquationResiduals:
    """Relative Frobenius residual per equation label"""

    values: Dict[str, float] = field(default_factory=dict)
    tolerance: float = DEFAULTS.verify_tol

    @property
    def satisfied(self) -> bool:
        return all(r <= self.tolerance for r in self.values.values())

    def worst(self) -> float:
        return max(self.values.values(), default=0.0)

    def __getitem__(self, label: str) -> float:
        return self.values[label]

    def summary_lines(self) -> List[str]:
        lines = []
        for label, residual in self.values.items():
            mark = "ok" if residual <= self.tolerance else "FAIL"
            lines.append(f"({label:>2})  residual = {residual:.3e}  [{mark}]")
        return lines


def expand_labels(labels: Iterable[str]) -> List[str]:
    """Accept single labels ('1', '1k') and named sets ('penrose-all', 'core-ep')"""
    if isinstance(labels, str):
        labels = [labels]
    expanded: List[str] = []
    for label in labels:
        key = str(label).strip().lower().replace("^", "")
        if key in EQUATION_SETS:
            members = EQUATION_SETS[key]
        elif key in EQUATION_LABELS:
            members = (key,)
        else:
            raise ParseError(f"unknown equation label {label!r}", field="system")
        for member in members:
            if member not in expanded:
                expanded.append(member)
    return expanded


def inverse_index(D: DenseTensor) -> int:
    require_square(D, "index")
    return mk.index_of(D.matrix)


def _check_conformable(D: DenseTensor, Y: DenseTensor) -> None:
    if Y.shape != D.shape.transposed():
        raise ShapeMismatch(
            f"candidate inverse of shape {Y.shape.label()} does not match {D.shape.transposed().label()}"
        )


def compute_inverse(
    D: DenseTensor,
    kind: InverseKind,
    tol: Optional[float] = None,
    check: bool = True,
) -> DenseTensor:
    """
    Compute one of the generalized inverses of D.

    MP works for any shape; every other kind needs a square tensor.
    With check=True the result is tested against its defining equations
    (composites against their characterizing systems) and any residual
    above tol is logged.
    """
    kind = kind if isinstance(kind, InverseKind) else InverseKind.parse(kind)
    tol = DEFAULTS.verify_tol if tol is None else tol
    M = D.matrix

    if kind is InverseKind.MP:
        result = mk.pinv(M)
    else:
        require_square(D, f"{kind.label} inverse")
        if kind is InverseKind.GROUP:
            result = mk.group_inverse(M)
        elif kind is InverseKind.CORE:
            result = mk.core_inverse(M)
        else:
            k = mk.index_of(M)
            result = _square_inverse(M, kind, k)

    Y = dematricize(result, D.shape.transposed())
    if check and kind in COMPOSITES:
        # characterizations builds on this module
        from .characterizations import verify_system

        system = verify_system(D, Y, kind.label, tol=tol)
        if not system.satisfied:
            logging.warning(
                f"{kind.label} inverse of {D.shape.label()} misses its system: "
                + ", ".join(f"{r:.2e}" for r in system.eq_residuals)
            )
    elif check:
        residuals = verify_equations(D, Y, defining_labels(kind), tol=tol)
        if not residuals.satisfied:
            logging.warning(
                f"{kind.label} inverse of {D.shape.label()} misses its equations: "
                + ", ".join(f"({k}) {v:.2e}" for k, v in residuals.values.items())
            )
    return Y


def _square_inverse(M: np.ndarray, kind: InverseKind, k: int) -> np.ndarray:
    if kind is InverseKind.DRAZIN:
        return mk.drazin(M, index=k)
    if kind is InverseKind.CORE_EP:
        return mk.core_ep(M, index=k)

    mp = mk.pinv(M)
    if kind in (InverseKind.DMP, InverseKind.MPD, InverseKind.CMP):
        dz = mk.drazin(M, index=k)
        if kind is InverseKind.DMP:
            return dz @ M @ mp
        if kind is InverseKind.MPD:
            return mp @ M @ dz
        return mp @ M @ dz @ M @ mp

    ce = mk.core_ep(M, index=k)
    if kind is InverseKind.MPCEP:
        return mp @ M @ ce
    return ce @ M @ mp


def is_inner(D: DenseTensor, Y: DenseTensor, tol: Optional[float] = None) -> EquationResiduals:
    """Residual of D*Y*D = D relative to ||D||"""
    _check_conformable(D, Y)
    tol = DEFAULTS.verify_tol if tol is None else tol
    return EquationResiduals({"1": relative_residual(D @ Y @ D, D)}, tol)


def is_outer(D: DenseTensor, Y: DenseTensor, tol: Optional[float] = None) -> EquationResiduals:
    """Residual of Y*D*Y = Y relative to ||Y||"""
    _check_conformable(D, Y)
    tol = DEFAULTS.verify_tol if tol is None else tol
    return EquationResiduals({"2": relative_residual(Y @ D @ Y, Y)}, tol)


def verify_equations(
    D: DenseTensor,
    Y: DenseTensor,
    labels: Iterable[str],
    tol: Optional[float] = None,
) -> EquationResiduals:
    """Relative residuals of the requested defining equations at Y"""
    _check_conformable(D, Y)
    tol = DEFAULTS.verify_tol if tol is None else tol
    labels = expand_labels(labels)
    if any(label in SQUARE_ONLY_LABELS for label in labels):
        require_square(D, "equations (1^k), (5), (6)")

    DY = D @ Y
    YD = Y @ D
    values: Dict[str, float] = {}
    for label in labels:
        if label == "1":
            values[label] = relative_residual(DY @ D, D)
        elif label == "2":
            values[label] = relative_residual(YD @ Y, Y)
        elif label == "3":
            values[label] = relative_residual(DY.H, DY)
        elif label == "4":
            values[label] = relative_residual(YD.H, YD)
        elif label == "1k":
            k = inverse_index(D)
            Dk = tensor_power(D, k)
            values[label] = relative_residual(Y @ Dk @ D, Dk)
        elif label == "5":
            values[label] = relative_residual(YD, DY)
        elif label == "6":
            values[label] = relative_residual(DY @ Y, Y)
    return EquationResiduals(values, tol)


def _member_of_d1_or_d2(D: DenseTensor, Y: DenseTensor, tol: float) -> bool:
    return is_inner(D, Y, tol).satisfied or is_outer(D, Y, tol).satisfied


def bilateral_inverse_unchecked(D: DenseTensor, X: DenseTensor, Y: DenseTensor) -> DenseTensor:
    return X @ D @ Y


def bilateral_inverse(
    D: DenseTensor,
    X: DenseTensor,
    Y: DenseTensor,
    tol: Optional[float] = None,
) -> DenseTensor:
    """X*D*Y for X, Y each in D{1} or D{2}"""
    tol = DEFAULTS.verify_tol if tol is None else tol
    for name, candidate in (("X", X), ("Y", Y)):
        if not _member_of_d1_or_d2(D, candidate, tol):
            raise NotGeneralizedInverse(f"{name} is neither an inner nor an outer inverse of D")
    return bilateral_inverse_unchecked(D, X, Y)


def dual_bilateral(
    D: DenseTensor,
    X: DenseTensor,
    Y: DenseTensor,
    tol: Optional[float] = None,
) -> DenseTensor:
    """Y*D*X, the dual of X*D*Y"""
    return bilateral_inverse(D, Y, X, tol=tol)


CLOSURE_CASES = ("both12", "outer_inner", "both1")


def closure_check(
    D: DenseTensor,
    X: DenseTensor,
    Y: DenseTensor,
    case: str,
    tol: Optional[float] = None,
) -> bool:
    """
    Check the closure of D{1,2}, D{2} and D{1} under bilateral products.

    both12:      X, Y in D{1,2}          => XDY, YDX in D{1,2}
    outer_inner: X in D{2}, Y in D{1}    => XDY, YDX in D{2}
    both1:       X, Y in D{1}            => XDY, YDX in D{1}
    """
    tol = DEFAULTS.verify_tol if tol is None else tol
    if case not in CLOSURE_CASES:
        raise ParseError(f"unknown closure case {case!r}", field="case")

    def inner(Z: DenseTensor) -> bool:
        return is_inner(D, Z, tol).satisfied

    def outer(Z: DenseTensor) -> bool:
        return is_outer(D, Z, tol).satisfied

    def reflexive(Z: DenseTensor) -> bool:
        return inner(Z) and outer(Z)

    if case == "both12":
        ok = reflexive(X) and reflexive(Y)
        claim = reflexive
    elif case == "outer_inner":
        ok = outer(X) and inner(Y)
        claim = outer
    else:
        ok = inner(X) and inner(Y)
        claim = inner
    if not ok:
        raise PreconditionViolated(f"X, Y do not satisfy the memberships required by case {case}")

    products = (bilateral_inverse_unchecked(D, X, Y), bilateral_inverse_unchecked(D, Y, X))
    held = all(claim(Z) for Z in products)
    if not held:
        logging.info(f"closure case {case} failed at tolerance {tol:g}")
    return held


def index_one_identity(D: DenseTensor, tol: Optional[float] = None) -> Dict[str, bool]:
    """
    Collapse of the composites when ind(D) <= 1:
    MP == CMP == MPCEP and CoreEP == DMP == CEPMP.
    """
    tol = DEFAULTS.equality_tol if tol is None else tol
    k = inverse_index(D)
    if k > 1:
        raise PreconditionViolated(f"index-one identities need ind(D) <= 1, got {k}")
    inv = {kind: compute_inverse(D, kind, check=False) for kind in TABLE_ORDER}

    def same(a: InverseKind, b: InverseKind) -> bool:
        return allclose(inv[a], inv[b], tol)

    return {
        "mp=cmp": same(InverseKind.MP, InverseKind.CMP),
        "mp=mpcep": same(InverseKind.MP, InverseKind.MPCEP),
        "coreep=dmp": same(InverseKind.CORE_EP, InverseKind.DMP),
        "coreep=cepmp": same(InverseKind.CORE_EP, InverseKind.CEPMP),
    }


__all__ = [
    "InverseKind",
    "EquationResiduals",
    "TABLE_ORDER",
    "COMPOSITES",
    "EQUATION_SETS",
    "defining_labels",
    "compute_inverse",
    "inverse_index",
    "is_inner",
    "is_outer",
    "verify_equations",
    "bilateral_inverse",
    "bilateral_inverse_unchecked",
    "dual_bilateral",
    "closure_check",
    "index_one_identity",
]
