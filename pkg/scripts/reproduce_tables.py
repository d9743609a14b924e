#!/usr/bin/env python3
import os
import sys
import asyncio
from datetime import datetime
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Add the src directory to Python path
src_dir = str(Path(__file__).parent.parent / "src")
sys.path.append(src_dir)

from tensorginv.bench import BenchRunner
from tensorginv.cli_io import DEFAULT_BENCH_PROBLEMS, configure_logging
from tensorginv.ginv import TABLE_ORDER, compute_inverse
from tensorginv.problems import check_fixture, reference_fixture


def check_worked_example() -> int:
    """Compare all eight inverses of the worked example with the printed blocks"""
    bundle = reference_fixture()
    computed = {kind: compute_inverse(bundle.D, kind) for kind in TABLE_ORDER}
    disagreements = check_fixture(bundle, computed)
    print("### Worked example (2,3)x(2,3), index 3")
    for kind in TABLE_ORDER:
        bad = [d for d in disagreements if d.kind is kind]
        known = sum(1 for e in bundle.errata if e.kind is kind)
        status = "ok" if not bad else f"{len(bad)} entries differ"
        print(f"   {kind.label:<8} {status}  ({known} known misprints)")
    print()
    return len(disagreements)


async def main():
    """Rebuild the residual tables and the index-one solution grids"""
    configure_logging(os.getenv('TENSORGINV_LOG_LEVEL', 'INFO'))
    try:
        print("\nReproducing residual tables...")
        print(f"Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")

        failures = check_worked_example()

        problems = os.getenv('TENSORGINV_PROBLEMS')
        runner = BenchRunner(
            problems.split(",") if problems else DEFAULT_BENCH_PROBLEMS,
            repeats=int(os.getenv('TENSORGINV_REPEATS', '30')),
            seed=int(os.getenv('TENSORGINV_SEED', '0')),
            out_dir=os.getenv('TENSORGINV_OUT_DIR', 'reports'),
        )
        outcome = await runner.run()
        files = runner.write(outcome)

        print("## Residuals ||D*K*B - B||\n")
        for report in outcome.reports:
            print(f"### {report.problem} (order {report.order}, index {report.index}, nnz {report.nnz})")
            for result in report.ordered():
                print(f"   {result.kind.label:<8} {result.residual:.3e}   {result.mean_time_s:.3e} s")
            print()

        for label, gap in outcome.solution_gaps.items():
            print(f"{label}: index-one solutions agree to {gap:.3e}")

        print("\nFiles written:")
        for path in files:
            print(f"- {path}")

        if failures or outcome.failed_cells:
            print(f"\n{failures} fixture disagreements, {outcome.failed_cells} failed cells", file=sys.stderr)
            return 1
        print("\nReproduction completed successfully.")
        return 0

    except Exception as e:
        print(f"\nError during reproduction: {str(e)}", file=sys.stderr)
        return 1

if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
