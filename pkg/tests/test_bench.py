import csv
import math

import numpy as np
import pytest

from tensorginv.bench import BenchRunner
from tensorginv.ginv import TABLE_ORDER, InverseKind
from tensorginv.problems import random_tensor
from tensorginv.report_generator import CSV_COLUMNS, KindResult, ReportGenerator, ResidualReport
from tensorginv.solvers import INDEX_ONE_KINDS
from tensorginv.tensor_core import TensorShape

SMALL_PROBLEMS = ["dirichlet:n=3:block=N1", "neumann:n=3"]


def read_rows(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


@pytest.mark.asyncio
async def test_bench_runs_every_cell(tmp_path):
    runner = BenchRunner(SMALL_PROBLEMS, repeats=2, seed=0, out_dir=tmp_path, workers=3)
    outcome = await runner.run()
    assert [r.problem for r in outcome.reports] == ["dirichlet-n3-N1", "neumann-n3"]
    assert outcome.failed_cells == 0
    dirichlet, neumann = outcome.reports
    assert dirichlet.index == 3 and neumann.index == 1
    assert dirichlet.order == "3x4x3x4"
    for report in outcome.reports:
        assert [r.kind for r in report.ordered()] == list(TABLE_ORDER)
        assert report.max_residual() <= 1e-8


@pytest.mark.asyncio
async def test_bench_writes_reports(tmp_path):
    runner = BenchRunner(SMALL_PROBLEMS, kinds=[InverseKind.MP, InverseKind.MPCEP], out_dir=tmp_path)
    outcome = await runner.run()
    files = runner.write(outcome)
    assert tmp_path / "residuals.csv" in files
    rows = read_rows(tmp_path / "residuals.csv")
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert [(row["problem"], row["kind"]) for row in rows] == [
        ("dirichlet-n3-N1", "mp"),
        ("dirichlet-n3-N1", "mpcep"),
        ("neumann-n3", "mp"),
        ("neumann-n3", "mpcep"),
    ]
    summary = (tmp_path / "summary.md").read_text()
    assert "## neumann-n3" in summary
    assert "- Index: 3" in summary


@pytest.mark.asyncio
async def test_neumann_solutions_are_emitted(tmp_path):
    runner = BenchRunner(["neumann:n=4"], kinds=[InverseKind.MP], out_dir=tmp_path)
    outcome = await runner.run()
    target = tmp_path / "neumann-n4"
    for kind in INDEX_ONE_KINDS:
        grid = np.loadtxt(target / f"solution_{kind.value}.csv", delimiter=",")
        assert grid.shape == (4, 4)
    assert "matplotlib" in (target / "plot_solutions.py").read_text()
    assert outcome.solution_gaps["neumann-n4"] <= 1e-8


@pytest.mark.asyncio
async def test_residuals_do_not_depend_on_workers(tmp_path):
    one = await BenchRunner(SMALL_PROBLEMS, seed=5, out_dir=tmp_path / "a", workers=1).run()
    many = await BenchRunner(SMALL_PROBLEMS, seed=5, out_dir=tmp_path / "b", workers=4).run()
    for first, second in zip(one.reports, many.reports):
        for a, b in zip(first.ordered(), second.ordered()):
            assert a.kind is b.kind
            assert a.residual == pytest.approx(b.residual, abs=1e-12)


@pytest.mark.asyncio
async def test_failed_cell_is_recorded(tmp_path, monkeypatch):
    """A failing cell is logged and kept as nan, the others still run"""
    import tensorginv.bench as bench

    real = bench.time_inverse_residual

    def flaky(D, B, kind, repeats):
        if kind is InverseKind.CMP:
            raise ArithmeticError("injected")
        return real(D, B, kind, repeats)

    monkeypatch.setattr(bench, "time_inverse_residual", flaky)
    outcome = await BenchRunner(["neumann:n=3"], kinds=[InverseKind.MP, InverseKind.CMP], out_dir=tmp_path).run()
    report = outcome.reports[0]
    assert outcome.failed_cells == 1
    assert math.isnan(report.residual(InverseKind.CMP))
    assert not math.isnan(report.residual(InverseKind.MP))
    assert "injected" in ReportGenerator(outcome.reports).generate_summary()


def test_runner_needs_problems():
    with pytest.raises(ValueError):
        BenchRunner([])


def test_report_rejects_negative_residual():
    report = ResidualReport("p", "2x2", 1, 4, repeats=1, seed=0)
    with pytest.raises(ValueError):
        report.add(KindResult(InverseKind.MP, -1.0, 0.0))
    with pytest.raises(ValueError):
        ResidualReport("p", "2x2", 1, 4, repeats=0, seed=0)


def test_csv_keeps_full_precision(tmp_path):
    report = ResidualReport("p", "2x2", 1, 4, repeats=1, seed=0)
    report.add(KindResult(InverseKind.DRAZIN, 1.2345678901234567e-13, 0.5))
    report.add(KindResult(InverseKind.MP, 0.1, 0.25))
    path = ReportGenerator([report]).write_csv(tmp_path / "r.csv")
    rows = read_rows(path)
    assert [row["kind"] for row in rows] == ["mp", "drazin"]
    assert float(rows[1]["residual"]) == 1.2345678901234567e-13
    assert rows[0]["mean_time_s"] == "2.500000e-01"


def test_solution_grid_needs_two_row_modes():
    Z = random_tensor(TensorShape((4,), (1,)), seed=0)
    with pytest.raises(ValueError):
        ReportGenerator.solution_grid(Z)
