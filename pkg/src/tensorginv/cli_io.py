"""
Command line: ginv compute | verify | solve | bench.

Exit status: 0 success, 1 verification unsatisfied, otherwise the
exit_code of the GinvError that stopped the command.
"""
import argparse
import asyncio
import json
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from .bench import BenchRunner
from .characterizations import SYSTEMS, range_contains, verify_system
from .config import RunConfig, Settings
from .errors import GinvError, ParseError
from .ginv import COMPOSITES, TABLE_ORDER, InverseKind, compute_inverse, defining_labels, verify_equations
from .solvers import (
    SolveMode,
    SolveRequest,
    advertised_range,
    check_rhs_range,
    rhs_from_range,
    solve_constrained,
    solve_general,
)
from .tensor_core import DenseTensor, TensorShape, relative_residual

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

DEFAULT_BENCH_PROBLEMS = [
    "dirichlet:n=8:block=N1",
    "dirichlet:n=8:block=N2",
    "dirichlet:n=8:block=N3",
    "neumann:n=20",
]


def parse_tensor_file(path) -> DenseTensor:
    """Read {"row_modes": [...], "col_modes": [...], "entries": [[re, im], ...]}"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read tensor file {path}: {e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(document, dict):
        raise ParseError(f"{path} must hold a JSON object")

    for name in ("row_modes", "col_modes", "entries"):
        if name not in document:
            raise ParseError(f"{path} is missing a field", field=name)
    for name in ("row_modes", "col_modes"):
        modes = document[name]
        if not isinstance(modes, list) or not all(isinstance(m, int) and m >= 1 for m in modes):
            raise ParseError(f"{name} must be a list of positive integers", field=name)

    shape = TensorShape(tuple(document["row_modes"]), tuple(document["col_modes"]))
    entries = document["entries"]
    expected = shape.row_count * shape.col_count
    if not isinstance(entries, list) or len(entries) != expected:
        found = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise ParseError(f"expected {expected} entries for shape {shape.label()}, found {found}", field="entries")

    values = []
    for position, pair in enumerate(entries):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ParseError(f"entry {position} must be a [re, im] pair of numbers", field="entries")
        if not all(math.isfinite(v) for v in pair):
            raise ParseError(f"entry {position} is not finite", field="entries")
        values.append(complex(pair[0], pair[1]))
    return DenseTensor(shape, values)


def write_tensor_file(path, D: DenseTensor) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "row_modes": list(D.shape.row_modes),
        "col_modes": list(D.shape.col_modes),
        "entries": [[float(z.real), float(z.imag)] for z in D.entries],
    }
    path.write_text(json.dumps(document, indent=1) + "\n")
    return path


def _is_system(name: str) -> bool:
    return name.strip().upper().replace("-SYSTEM", "").replace("_SYSTEM", "") in SYSTEMS


def _check_lines(D: DenseTensor, Y: DenseTensor, kind: InverseKind, tol: Optional[float]):
    """(satisfied, summary lines) of the equations that define kind"""
    if kind in COMPOSITES:
        residual = verify_system(D, Y, kind.value, tol=tol)
        return residual.satisfied, residual.summary_lines()
    residuals = verify_equations(D, Y, defining_labels(kind), tol=tol)
    return residuals.satisfied, residuals.summary_lines()


def cmd_compute(config: RunConfig, settings: Settings) -> int:
    D = parse_tensor_file(config.input_path)
    kind = InverseKind.parse(config.kinds[0] if config.kinds else "mp")
    tol = config.tol or settings.verify_tol
    Y = compute_inverse(D, kind, tol=tol, check=False)
    out = Path(config.out_dir) / f"{Path(config.input_path).stem}_{kind.value.replace('-', '_')}.json"
    write_tensor_file(out, Y)

    satisfied, lines = _check_lines(D, Y, kind, tol)
    print(f"\n{kind.label} inverse of {D.shape.label()} written to {out}")
    for line in lines:
        print(f"  {line}")
    if not satisfied:
        logging.warning(f"{kind.label} inverse does not meet its equations at tol {tol:.1e}")
    return 0


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    D = parse_tensor_file(config.input_path)
    if not config.z_path:
        raise ParseError("verify needs a candidate tensor", field="in")
    Z = parse_tensor_file(config.z_path)
    name = config.system or "penrose-all"
    tol = config.tol or settings.verify_tol

    if _is_system(name):
        X = parse_tensor_file(config.x_path) if config.x_path else None
        Y = parse_tensor_file(config.y_path) if config.y_path else None
        result = verify_system(D, Z, name, X=X, Y=Y, tol=tol)
        satisfied, lines = result.satisfied, result.summary_lines()
    else:
        residuals = verify_equations(D, Z, [name], tol=tol)
        satisfied, lines = residuals.satisfied, residuals.summary_lines()

    print(f"\nVerifying {name} for D of shape {D.shape.label()} (tol {tol:.1e})")
    for line in lines:
        print(f"  {line}")
    print(f"Result: {'satisfied' if satisfied else 'NOT satisfied'}")
    return 0 if satisfied else 1


def _load_rhs(config: RunConfig, D: DenseTensor) -> DenseTensor:
    rhs = config.rhs or "from-range"
    if rhs.startswith("from-range"):
        _, _, arg = rhs.partition(":")
        if arg in ("", "index"):
            k = None
        else:
            try:
                k = int(arg)
            except ValueError:
                raise ParseError(f"from-range power must be an integer or 'index', got {arg!r}", field="rhs") from None
        return rhs_from_range(D, k, seed=config.seed)
    return parse_tensor_file(rhs)


def cmd_solve(config: RunConfig, settings: Settings) -> int:
    D = parse_tensor_file(config.input_path)
    B = _load_rhs(config, D)
    mode = SolveMode.parse(config.mode or "cmp_constrained")
    request = SolveRequest(D, B, mode, strict=config.strict_range)
    out_dir = Path(config.out_dir)
    tol = config.tol or settings.solve_tol

    print(f"\nSolving with {mode.value} for D of shape {D.shape.label()}")
    if mode.is_general:
        family = solve_general(request)
        write_tensor_file(out_dir / "solution.json", family.particular)
        write_tensor_file(out_dir / "projector.json", family.projector)
        print(f"  system: {family.constraint_desc}")
        print(f"  particular solution residual = {family.residual(family.particular):.3e}")
        for i, member in enumerate(family.sample_many(config.sample_q, seed=config.seed)):
            write_tensor_file(out_dir / f"member_{i}.json", member)
            residual = family.residual(member)
            print(f"  member {i} residual = {residual:.3e}  [{'ok' if residual <= tol else 'FAIL'}]")
        return 0

    Z = solve_constrained(request, tol)
    write_tensor_file(out_dir / "solution.json", Z)
    in_range = check_rhs_range(D, B, strict=False)
    print(f"  ||D*Z - B|| / ||B|| = {relative_residual(D @ Z, B):.3e}")
    print(f"  B in R(D^k): {'yes' if in_range else 'no'}")
    print(f"  Z in advertised range: {'yes' if range_contains(advertised_range(D, mode), Z) else 'no'}")
    return 0


def _bench_kinds(names: List[str]) -> List[InverseKind]:
    if not names or names == ["all"]:
        return list(TABLE_ORDER)
    return [InverseKind.parse(name) for name in names]


def cmd_bench(config: RunConfig, settings: Settings) -> int:
    runner = BenchRunner(
        config.problems or DEFAULT_BENCH_PROBLEMS,
        kinds=_bench_kinds(config.kinds),
        repeats=config.repeats,
        seed=config.seed,
        out_dir=config.out_dir,
        workers=settings.workers,
    )
    outcome = asyncio.run(runner.run())
    files = runner.write(outcome)

    print("\n## Residual Benchmark\n")
    for report in outcome.reports:
        print(f"### {report.problem}  (order {report.order}, index {report.index}, nnz {report.nnz})")
        for result in report.ordered():
            print(f"  {result.kind.label:<8} residual = {result.residual:.3e}  mean time = {result.mean_time_s:.3e} s")
    for label, gap in outcome.solution_gaps.items():
        print(f"\n{label}: largest gap between index-one solutions = {gap:.3e}")
    print("\nFiles:")
    for path in files:
        print(f"  {path}")
    if outcome.failed_cells:
        logging.warning(f"{outcome.failed_cells} bench cells failed, see summary.md")
    return 0


COMMANDS: Dict[str, Callable[[RunConfig, Settings], int]] = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ginv", description="Generalized inverses of tensors under the Einstein product.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, help="tolerance override")
        p.add_argument("--seed", type=int, help="seed for every random draw")
        p.add_argument("--out-dir", dest="out_dir", help="output directory")

    compute = sub.add_parser("compute", help="compute a generalized inverse")
    compute.add_argument("--in", dest="inputs", nargs=1, required=True, metavar="D")
    compute.add_argument("--kind", dest="kinds", action="append", default=[])
    common(compute)

    verify = sub.add_parser("verify", help="check a candidate against equations or a system")
    verify.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE", help="D Z [X Y]")
    verify.add_argument("--system", default="penrose-all")
    common(verify)

    solve = sub.add_parser("solve", help="solve a multilinear system")
    solve.add_argument("--in", dest="inputs", nargs=1, required=True, metavar="D")
    solve.add_argument("--rhs", default="from-range", help="tensor file or from-range[:k|:index]")
    solve.add_argument("--mode", default="cmp_constrained", choices=[m.value for m in SolveMode])
    solve.add_argument("--sample-q", dest="sample_q", type=int, default=0)
    solve.add_argument("--no-strict-range", dest="strict_range", action="store_false")
    common(solve)

    bench = sub.add_parser("bench", help="residual benchmark")
    bench.add_argument("--problem", dest="problems", action="append", default=[])
    bench.add_argument("--kind", dest="kinds", action="append", default=[])
    bench.add_argument("--repeats", type=int)
    common(bench)
    return parser


def to_run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    inputs = list(getattr(args, "inputs", None) or [])
    if args.command == "verify" and len(inputs) not in (2, 4):
        raise ParseError("verify takes --in D Z or --in D Z X Y", field="in")
    kinds = [name for value in getattr(args, "kinds", []) for name in value.split(",")]
    padded = inputs + [None] * (4 - len(inputs))
    return RunConfig(
        command=args.command,
        input_path=padded[0],
        z_path=padded[1],
        x_path=padded[2],
        y_path=padded[3],
        rhs=getattr(args, "rhs", None),
        kinds=kinds,
        system=getattr(args, "system", None),
        mode=getattr(args, "mode", None),
        problems=getattr(args, "problems", []),
        tol=args.tol,
        repeats=getattr(args, "repeats", None) or settings.repeats,
        out_dir=args.out_dir or settings.out_dir,
        seed=settings.seed if args.seed is None else args.seed,
        sample_q=getattr(args, "sample_q", 0),
        strict_range=getattr(args, "strict_range", True),
    )


def configure_logging(level: str) -> None:
    """Root handler on first use; the level is applied even when handlers already exist"""
    numeric = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)


def run(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    settings = Settings.from_env()
    configure_logging(settings.log_level)
    args = build_parser().parse_args(argv)
    try:
        config = to_run_config(args, settings)
        return COMMANDS[config.command](config, settings)
    except ValidationError as e:
        logging.error(f"Invalid arguments: {e}")
        return 2
    except GinvError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logging.exception(f"Unexpected failure: {e}")
        return 6


def main() -> None:
    sys.exit(run())
