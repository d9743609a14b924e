"""
Residual benchmark over (problem, inverse kind) cells.

Cells run on worker threads bounded by a semaphore; results are sorted
before anything is written, so output files do not depend on scheduling.
"""
import asyncio
import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .config import DEFAULTS
from .ginv import TABLE_ORDER, InverseKind, inverse_index
from .problems import parse_problem
from .report_generator import KindResult, ReportGenerator, ResidualReport
from .solvers import INDEX_ONE_KINDS, index_one_solutions, rhs_from_range, time_inverse_residual
from .tensor_core import DenseTensor, frobenius_norm, nnz


@dataclass
class PreparedProblem:
    label: str
    D: DenseTensor
    B: DenseTensor
    index: int
    nnz: int


@dataclass
class BenchOutcome:
    reports: List[ResidualReport]
    files: List[Path] = field(default_factory=list)
    # largest pairwise gap between index-one solutions, per problem
    solution_gaps: Dict[str, float] = field(default_factory=dict)

    @property
    def failed_cells(self) -> int:
        return sum(1 for report in self.reports for result in report.results if result.failed)


class BenchRunner:
    """Runs every (problem, kind) cell and writes the residual reports"""

    def __init__(
        self,
        problems: Sequence[str],
        kinds: Optional[Sequence[InverseKind]] = None,
        repeats: int = 1,
        seed: int = 0,
        out_dir: Optional[str] = None,
        workers: Optional[int] = None,
    ):
        if not problems:
            raise ValueError("bench needs at least one problem")
        self.problems = list(problems)
        self.kinds = list(TABLE_ORDER) if not kinds else list(kinds)
        self.repeats = max(1, repeats)
        self.seed = seed
        self.out_dir = Path(out_dir or DEFAULTS.out_dir)
        self.workers = max(1, workers or DEFAULTS.workers)

    def prepare(self, spec: str) -> PreparedProblem:
        label, D = parse_problem(spec, seed=self.seed)
        k = inverse_index(D)
        B = rhs_from_range(D, k, seed=self.seed)
        logging.info(f"Prepared {label}: order {D.shape.label()}, index {k}")
        return PreparedProblem(label, D, B, k, nnz(D))

    async def _run_cell(self, semaphore: asyncio.Semaphore, problem: PreparedProblem, kind: InverseKind) -> KindResult:
        async with semaphore:
            try:
                result = await asyncio.to_thread(time_inverse_residual, problem.D, problem.B, kind, self.repeats)
                logging.info(f"{problem.label} / {kind.label}: residual {result.residual:.3e}")
                return result
            except Exception as e:
                logging.error(f"Bench cell {problem.label} / {kind.label} failed: {e}")
                return KindResult(kind, math.nan, math.nan, error=str(e))

    async def run(self) -> BenchOutcome:
        semaphore = asyncio.Semaphore(self.workers)
        prepared = await asyncio.gather(*(asyncio.to_thread(self.prepare, spec) for spec in self.problems))
        cells = list(itertools.product(prepared, self.kinds))
        results = await asyncio.gather(*(self._run_cell(semaphore, p, kind) for p, kind in cells))

        reports: Dict[str, ResidualReport] = {}
        for problem in prepared:
            reports[problem.label] = ResidualReport(
                problem=problem.label,
                order=problem.D.shape.label(),
                index=problem.index,
                nnz=problem.nnz,
                repeats=self.repeats,
                seed=self.seed,
            )
        for (problem, _), result in zip(cells, results):
            reports[problem.label].add(result)

        outcome = BenchOutcome(sorted(reports.values(), key=lambda r: r.problem))
        for problem in prepared:
            if problem.label.startswith("neumann"):
                outcome.files.extend(self._emit_solutions(problem, outcome))
        return outcome

    def _emit_solutions(self, problem: PreparedProblem, outcome: BenchOutcome) -> List[Path]:
        solutions = index_one_solutions(problem.D, problem.B)
        gap = max(
            frobenius_norm(solutions[a] - solutions[b])
            for a, b in itertools.combinations(INDEX_ONE_KINDS, 2)
        )
        outcome.solution_gaps[problem.label] = gap
        logging.info(f"{problem.label}: largest gap between index-one solutions {gap:.3e}")
        target = self.out_dir / problem.label
        files = [
            ReportGenerator.write_solution_grid(target / f"solution_{kind.value}.csv", Z)
            for kind, Z in solutions.items()
        ]
        script = target / "plot_solutions.py"
        script.write_text(ReportGenerator.plot_script(solutions.keys()))
        files.append(script)
        return files

    def write(self, outcome: BenchOutcome) -> List[Path]:
        generator = ReportGenerator(outcome.reports)
        files = [
            generator.write_csv(self.out_dir / "residuals.csv"),
            generator.write_summary(self.out_dir / "summary.md"),
        ]
        outcome.files = files + outcome.files
        return outcome.files
