"""
Test problems: the worked (2,3)x(2,3) example, Poisson tensors from the
two finite-difference stencils, and seeded random tensors and inverses.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import fixture_data
from . import matrix_kernels as mk
from .errors import FactorizationImpossible, InvalidSize, NotSquare, ParseError
from .ginv import InverseKind
from .tensor_core import DenseTensor, TensorShape, dematricize, require_square

FIXTURE_SHAPE = TensorShape((2, 3), (2, 3))

NILPOTENT_BLOCKS = {"N1": 3, "N2": 4, "N3": 5}

RANDOM_KINDS = ("dense", "hermitian", "index_one", "indexed")

EXACT = "exact-rational"
APPROXIMATE = "approximate-printed"


def _parse_blocks(blocks: Dict[str, str]) -> np.ndarray:
    """data[i, j, k, l] from slices keyed by 'kl'"""
    data = np.zeros(FIXTURE_SHAPE.modes, dtype=object)
    for kl, text in blocks.items():
        k, l = int(kl[0]) - 1, int(kl[1]) - 1
        rows = [row.split() for row in re.split(r"\s+/\s+", text.strip())]
        height, width = FIXTURE_SHAPE.row_modes
        if len(rows) != height or any(len(row) != width for row in rows):
            raise ParseError(f"slice {kl} is not a 2x3 block: {text!r}", field="blocks")
        for i, row in enumerate(rows):
            for j, token in enumerate(row):
                data[i, j, k, l] = Fraction(token)
    return data


def _to_tensor(data: np.ndarray) -> DenseTensor:
    return DenseTensor(FIXTURE_SHAPE, data.astype(float))


@dataclass
class Erratum:
    kind: InverseKind
    entry: Tuple[int, int, int, int]  # 1-based (i, j, k, l)
    printed: Fraction
    corrected: Fraction

    @property
    def position(self) -> Tuple[int, int, int, int]:
        return tuple(i - 1 for i in self.entry)


@dataclass
class FixtureBundle:
    """The worked example with its inverses exactly as printed"""

    D: DenseTensor
    expected: Dict[InverseKind, DenseTensor]
    exactness: Dict[InverseKind, str]
    errata: List[Erratum] = field(default_factory=list)
    index: int = 3

    def corrected(self, kind: InverseKind) -> DenseTensor:
        """Printed blocks with the known misprints replaced"""
        data = np.array(self.expected[kind].data)
        for erratum in self.errata:
            if erratum.kind is kind:
                data[erratum.position] = float(erratum.corrected)
        return DenseTensor(self.expected[kind].shape, data)

    def is_erratum(self, kind: InverseKind, position: Tuple[int, ...]) -> bool:
        return any(e.kind is kind and e.position == tuple(position) for e in self.errata)


_BLOCK_TABLE = {
    InverseKind.MP: (fixture_data.MP_BLOCKS, EXACT),
    InverseKind.DRAZIN: (fixture_data.DRAZIN_BLOCKS, EXACT),
    InverseKind.CORE_EP: (fixture_data.CORE_EP_BLOCKS, APPROXIMATE),
    InverseKind.MPD: (fixture_data.MPD_BLOCKS, EXACT),
    InverseKind.DMP: (fixture_data.DMP_BLOCKS, EXACT),
    InverseKind.MPCEP: (fixture_data.MPCEP_BLOCKS, APPROXIMATE),
    InverseKind.CEPMP: (fixture_data.CEPMP_BLOCKS, APPROXIMATE),
    InverseKind.CMP: (fixture_data.CMP_BLOCKS, EXACT),
}


def reference_fixture() -> FixtureBundle:
    """Worked example tensor of index 3 with the published inverse blocks"""
    D = _to_tensor(_parse_blocks(fixture_data.D_BLOCKS))
    expected = {}
    exactness = {}
    raw = {}
    for kind, (blocks, flag) in _BLOCK_TABLE.items():
        raw[kind] = _parse_blocks(blocks)
        expected[kind] = _to_tensor(raw[kind])
        exactness[kind] = flag

    errata = [
        Erratum(InverseKind.parse(kind), entry, Fraction(printed), Fraction(corrected))
        for kind, entry, printed, corrected in fixture_data.ERRATA
    ]
    # core-EP slices kl = 21, 22, 23 were printed as copies of the MP slices;
    # core-EP equals CEPMP, whose printed slices are right.
    listed = {e.entry for e in errata if e.kind is InverseKind.CORE_EP}
    for (i, j, k, l), printed in np.ndenumerate(raw[InverseKind.CORE_EP]):
        entry = (i + 1, j + 1, k + 1, l + 1)
        if k == 1 and entry not in listed:
            errata.append(Erratum(InverseKind.CORE_EP, entry, printed, raw[InverseKind.CEPMP][i, j, k, l]))
    return FixtureBundle(D, expected, exactness, errata)


@dataclass
class Disagreement:
    kind: InverseKind
    entry: Tuple[int, int, int, int]
    expected: float
    computed: float
    known_erratum: bool


def check_fixture(
    bundle: FixtureBundle,
    computed: Dict[InverseKind, DenseTensor],
    exact_tol: float = 1e-12,
    approx_rel_tol: float = 5e-4,
) -> List[Disagreement]:
    """
    Compare computed inverses with the printed blocks entry by entry.

    Every printed entry beyond tolerance is logged with 1-based coordinates.
    The returned list holds only disagreements with the corrected values,
    so an empty list means the computation matches the example.
    """
    unexpected = []
    for kind, tensor in computed.items():
        if kind not in bundle.expected:
            continue
        printed = np.real(bundle.expected[kind].data)
        corrected = np.real(bundle.corrected(kind).data)
        values = np.real(tensor.data)
        exact = bundle.exactness[kind] == EXACT
        for position, value in np.ndenumerate(values):
            entry = tuple(i + 1 for i in position)
            known = bundle.is_erratum(kind, position)
            allowed = exact_tol if exact else approx_rel_tol * abs(corrected[position]) + exact_tol
            if abs(value - printed[position]) > allowed:
                if known:
                    logging.info(f"{kind.label} entry {entry}: printed {printed[position]:.6g} is a known misprint")
                else:
                    logging.warning(
                        f"{kind.label} entry {entry}: computed {value:.10g}, printed {printed[position]:.10g}"
                    )
            if abs(value - corrected[position]) > allowed:
                unexpected.append(Disagreement(kind, entry, float(corrected[position]), float(value), known))
    if unexpected:
        logging.warning(f"{len(unexpected)} fixture entries disagree with the corrected example")
    return unexpected


def _second_difference(n: int) -> np.ndarray:
    """Ones on the first off-diagonals"""
    return np.eye(n, k=1) + np.eye(n, k=-1)


def _require_grid(n: int) -> None:
    if n < 3:
        raise InvalidSize(f"grid size must be >= 3, got {n}")


def dirichlet_poisson(n: int) -> DenseTensor:
    """
    Block tridiagonal(P, Q, P) over (n,n)x(n,n) with Q = tridiag(-4, 24, -4)
    and P = tridiag(-1, -2, -1). Its eigenvalues lie in (8, 32).
    """
    _require_grid(n)
    T = _second_difference(n)
    eye = np.eye(n)
    Q = 24 * eye - 4 * T
    P = -2 * eye - T
    matrix = np.kron(eye, Q) + np.kron(T, P)
    return dematricize(matrix, TensorShape.square((n, n)))


def neumann_poisson(n: int) -> DenseTensor:
    """
    Five-point Laplacian with the node degree on the diagonal, so every
    matricized row sums to zero and constants span the null space.
    """
    _require_grid(n)
    T = _second_difference(n)
    eye = np.eye(n)
    off = -np.kron(eye, T) - np.kron(T, eye)
    degree = -off.sum(axis=1)
    return dematricize(off + np.diag(degree), TensorShape.square((n, n)))


def nilpotent_shift(size: int) -> np.ndarray:
    """Ones on the superdiagonal; index equals size"""
    if size < 1:
        raise InvalidSize(f"shift block needs size >= 1, got {size}")
    return np.eye(size, k=1)


def factor_modes(total: int) -> Tuple[int, int]:
    """Most balanced split total = a*b with 2 <= a <= b"""
    if total < 4:
        raise FactorizationImpossible(f"{total} has no split into two modes of extent >= 2")
    for a in range(math.isqrt(total), 1, -1):
        if total % a == 0:
            return a, total // a
    raise FactorizationImpossible(f"{total} is prime")


def _block_size(block: str) -> int:
    try:
        return NILPOTENT_BLOCKS[block.upper()]
    except KeyError:
        raise ParseError(f"unknown nilpotent block {block!r}", field="block") from None


def augment_nilpotent(D: DenseTensor, block: str, strict: bool = False) -> DenseTensor:
    """
    Direct sum of the matricization with a shift block, reshaped to a square
    tensor (a,b)x(a,b). Prime sizes fall back to (N,)x(N,) unless strict.
    """
    require_square(D, "augment_nilpotent")
    size = _block_size(block)
    M = D.matrix
    n = M.shape[0]
    total = n + size
    summed = np.zeros((total, total), dtype=np.complex128)
    summed[:n, :n] = M
    summed[n:, n:] = nilpotent_shift(size)
    try:
        modes = factor_modes(total)
    except FactorizationImpossible:
        if strict:
            raise
        logging.warning(f"{total} does not factor into two modes, using a {total}x{total} shape")
        modes = (total,)
    logging.info(f"{D.shape.label()} (+) {block.upper()} reshaped to modes {modes}")
    return dematricize(summed, TensorShape.square(modes))


def dirichlet_nnz(n: int, block: Optional[str] = None) -> int:
    """Nonzero count of dirichlet_poisson(n), plus the shift block if given"""
    _require_grid(n)
    count = (3 * n - 2) ** 2
    if block and block.lower() != "none":
        count += _block_size(block) - 1
    return count


@dataclass(frozen=True)
class PoissonSpec:
    n: int
    variant: str = "dirichlet"
    nilpotent_block: Optional[str] = None

    def build(self) -> DenseTensor:
        if self.variant == "neumann":
            return neumann_poisson(self.n)
        if self.variant != "dirichlet":
            raise ParseError(f"unknown Poisson variant {self.variant!r}", field="variant")
        D = dirichlet_poisson(self.n)
        if self.nilpotent_block and self.nilpotent_block.lower() != "none":
            return augment_nilpotent(D, self.nilpotent_block)
        return D

    @property
    def label(self) -> str:
        label = f"{self.variant}-n{self.n}"
        if self.nilpotent_block and self.nilpotent_block.lower() != "none":
            label += f"-{self.nilpotent_block.upper()}"
        return label


def _orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _well_conditioned(rng: np.random.Generator, n: int) -> np.ndarray:
    """U diag(s) V^T with singular values in [1, 1.5]"""
    if n == 0:
        return np.zeros((0, 0))
    s = rng.uniform(1.0, 1.5, size=n)
    return (_orthogonal(rng, n) * s) @ _orthogonal(rng, n).T


def random_tensor(shape: TensorShape, seed: int = 0, kind: str = "dense", index: int = 2) -> DenseTensor:
    """
    dense      standard normal entries
    hermitian  (G + G^*)/2 for complex G
    index_one  G*H of rank n-1, redrawn until its index is one
    indexed    S*(J (+) N_index)*S^-1 with well-conditioned S and J
    """
    if kind not in RANDOM_KINDS:
        raise ParseError(f"unknown random kind {kind!r}", field="kind")
    rng = np.random.default_rng(seed)
    if kind == "dense":
        return DenseTensor(shape, rng.standard_normal(shape.modes))

    if not shape.is_square:
        raise NotSquare(f"random {kind} tensor needs a square shape, got {shape.label()}")
    n = shape.row_count
    if kind == "hermitian":
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return dematricize((G + G.conj().T) / 2, shape)

    if kind == "index_one":
        r = n - 1
        for _ in range(20):
            M = rng.standard_normal((n, r)) @ rng.standard_normal((r, n))
            if mk.index_of(M) == 1:
                return dematricize(M, shape)
        raise InvalidSize(f"could not draw an index-one {n}x{n} matrix")

    if not 0 <= index <= n:
        raise InvalidSize(f"index {index} does not fit a {n}x{n} matricization")
    core = np.zeros((n, n))
    core[: n - index, : n - index] = _well_conditioned(rng, n - index)
    core[n - index :, n - index :] = np.eye(index, k=1)
    S = _well_conditioned(rng, n)
    return dematricize(S @ core @ np.linalg.inv(S), shape)


def random_inner_inverse(D: DenseTensor, seed: int = 0) -> DenseTensor:
    """D^+ + (I - D^+ D) W + W' (I - D D^+)"""
    rng = np.random.default_rng(seed)
    M = D.matrix
    mp = mk.pinv(M)
    m, n = M.shape
    W1 = rng.standard_normal((n, m))
    W2 = rng.standard_normal((n, m))
    Y = mp + (np.eye(n) - mp @ M) @ W1 + W2 @ (np.eye(m) - M @ mp)
    return dematricize(Y, D.shape.transposed())


def random_outer_inverse(D: DenseTensor, seed: int = 0, rank: Optional[int] = None) -> DenseTensor:
    """B (C D B)^+ C for random B, C; rank defaults to rank(D)"""
    rng = np.random.default_rng(seed)
    M = D.matrix
    m, n = M.shape
    r = mk.numerical_rank(M).rank if rank is None else rank
    r = max(1, r)
    B = rng.standard_normal((n, r))
    C = rng.standard_normal((r, m))
    return dematricize(B @ mk.pinv(C @ M @ B) @ C, D.shape.transposed())


def random_reflexive_inverse(D: DenseTensor, seed: int = 0) -> DenseTensor:
    """Y D Y for a random inner inverse Y, which lies in D{1,2}"""
    Y = random_inner_inverse(D, seed)
    return Y @ D @ Y


def _parse_shape(text: str) -> TensorShape:
    try:
        if "|" in text:
            rows, cols = text.split("|", 1)
            return TensorShape(tuple(int(m) for m in rows.split("x")), tuple(int(m) for m in cols.split("x")))
        return TensorShape.square(tuple(int(m) for m in text.split("x")))
    except ValueError:
        raise ParseError(f"bad shape {text!r}", field="shape") from None


def parse_problem(spec: str, seed: int = 0) -> Tuple[str, DenseTensor]:
    """
    'reference', 'dirichlet:n=8[:block=N1]', 'neumann:n=20',
    'random:shape=2x2[:kind=dense][:seed=3][:index=2]' -> (label, tensor)
    """
    name, *parts = spec.strip().split(":")
    options = {}
    for part in parts:
        if "=" not in part:
            raise ParseError(f"expected key=value in problem {spec!r}, got {part!r}", field="problem")
        key, value = part.split("=", 1)
        options[key.strip().lower()] = value.strip()

    def integer(key: str, default: Optional[int] = None) -> int:
        if key not in options:
            if default is None:
                raise ParseError(f"problem {spec!r} needs {key}=", field=key)
            return default
        try:
            return int(options[key])
        except ValueError:
            raise ParseError(f"{key} must be an integer, got {options[key]!r}", field=key) from None

    name = name.lower()
    if name in ("reference", "fixture"):
        return "reference", reference_fixture().D
    if name in ("dirichlet", "neumann"):
        poisson = PoissonSpec(integer("n"), name, options.get("block"))
        return poisson.label, poisson.build()
    if name == "random":
        shape = _parse_shape(options.get("shape", "2x2"))
        kind = options.get("kind", "dense")
        random_seed = integer("seed", seed)
        index = integer("index", 2)
        label = f"random-{shape.label()}-{kind}-s{random_seed}"
        return label, random_tensor(shape, random_seed, kind, index)
    raise ParseError(f"unknown problem {name!r}", field="problem")
