import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from .ginv import TABLE_ORDER, InverseKind
from .tensor_core import DenseTensor

CSV_COLUMNS = ("problem", "order", "index", "nnz", "kind", "residual", "mean_time_s", "repeats", "seed")

PathLike = Union[str, Path]


def kind_rank(kind: InverseKind) -> int:
    """Position in the residual table; group/core trail the eight table kinds"""
    if kind in TABLE_ORDER:
        return TABLE_ORDER.index(kind)
    return len(TABLE_ORDER) + list(InverseKind).index(kind)


@dataclass
class KindResult:
    kind: InverseKind
    residual: float
    mean_time_s: float
    residual_time_s: float = 0.0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None or math.isnan(self.residual)


@dataclass
class ResidualReport:
    """Residuals ||D*K*B - B|| of one problem across inverse kinds"""

    problem: str
    order: str
    index: int
    nnz: int
    repeats: int
    seed: int
    results: List[KindResult] = field(default_factory=list)

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("a report needs at least one repeat")

    def add(self, result: KindResult) -> None:
        if not result.failed and result.residual < 0:
            raise ValueError(f"negative residual for {result.kind.label}")
        self.results.append(result)

    def ordered(self) -> List[KindResult]:
        return sorted(self.results, key=lambda r: kind_rank(r.kind))

    def residual(self, kind: InverseKind) -> float:
        for result in self.results:
            if result.kind is kind:
                return result.residual
        raise KeyError(kind)

    def max_residual(self) -> float:
        values = [r.residual for r in self.results if not r.failed]
        return max(values) if values else float("nan")

    def rows(self) -> List[Dict[str, object]]:
        return [
            {
                "problem": self.problem,
                "order": self.order,
                "index": self.index,
                "nnz": self.nnz,
                "kind": result.kind.value,
                "residual": result.residual,
                "mean_time_s": result.mean_time_s,
                "repeats": self.repeats,
                "seed": self.seed,
            }
            for result in self.ordered()
        ]


class ReportGenerator:
    """Renders residual reports as CSV, a markdown summary and plot data"""

    def __init__(self, reports: Iterable[ResidualReport]):
        self.reports = sorted(reports, key=lambda r: r.problem)

    def rows(self) -> List[Dict[str, object]]:
        rows: List[Dict[str, object]] = []
        for report in self.reports:
            rows.extend(report.rows())
        return rows

    def write_csv(self, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in self.rows():
                row = dict(row)
                row["residual"] = repr(float(row["residual"]))
                row["mean_time_s"] = f"{float(row['mean_time_s']):.6e}"
                writer.writerow(row)
        logging.info(f"Wrote {len(self.rows())} residual rows to {path}")
        return path

    def generate_summary(self, title: str = "Residual Benchmark") -> str:
        """Markdown summary, one section per problem"""
        lines = [f"# {title}", ""]
        for report in self.reports:
            lines.append(f"## {report.problem}")
            lines.append("")
            lines.append(f"- Order: {report.order}")
            lines.append(f"- Index: {report.index}")
            lines.append(f"- Nonzeros: {report.nnz}")
            lines.append(f"- Repeats: {report.repeats} (seed {report.seed})")
            lines.append("")
            lines.append("| Inverse | Residual | Mean time (s) | Residual time (s) |")
            lines.append("|---|---|---|---|")
            for result in report.ordered():
                residual = "failed" if result.failed else f"{result.residual:.3e}"
                lines.append(
                    f"| {result.kind.label} | {residual} | {result.mean_time_s:.3e} | {result.residual_time_s:.3e} |"
                )
            failures = [r for r in report.results if r.error]
            if failures:
                lines.append("")
                lines.append("### Failed cells")
                for result in failures:
                    lines.append(f"- {result.kind.label}: {result.error}")
            lines.append("")
        return "\n".join(lines)

    def write_summary(self, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.generate_summary())
        return path

    @staticmethod
    def solution_grid(Z: DenseTensor) -> np.ndarray:
        """Real part of a grid solution over (n, n) row modes"""
        rows = Z.shape.row_modes
        if len(rows) != 2:
            raise ValueError(f"solution grid needs two row modes, got {rows}")
        return np.real(Z.data).reshape(rows[0], rows[1])

    @classmethod
    def write_solution_grid(cls, path: PathLike, Z: DenseTensor) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        grid = cls.solution_grid(Z)
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            for row in grid:
                writer.writerow([repr(float(v)) for v in row])
        return path

    @staticmethod
    def plot_script(kinds: Iterable[InverseKind]) -> str:
        """Plain matplotlib script rendering the solution_<kind>.csv grids next to it"""
        names = ", ".join(repr(kind.value) for kind in kinds)
        return PLOT_TEMPLATE.format(names=names)


PLOT_TEMPLATE = '''"""Render the index-one solution grids written by `ginv bench`."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent
KINDS = [{names}]


def load(kind):
    with open(HERE / f"solution_{{kind}}.csv") as handle:
        return np.array([[float(v) for v in row] for row in csv.reader(handle)])


def main():
    fig = plt.figure(figsize=(4 * len(KINDS), 4))
    for i, kind in enumerate(KINDS, start=1):
        grid = load(kind)
        x, y = np.meshgrid(np.arange(grid.shape[1]), np.arange(grid.shape[0]))
        ax = fig.add_subplot(1, len(KINDS), i, projection="3d")
        ax.plot_surface(x, y, grid, cmap="viridis")
        ax.set_title(kind)
    fig.tight_layout()
    fig.savefig(HERE / "solutions.png", dpi=150)


if __name__ == "__main__":
    main()
'''
