"""Command line entry point: ``augopt simulate | solve | table``.

Exit codes: 0 success, 1 solver did not converge, 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .direct import OptimizerConfig
from .exceptions import AugoptError, InfeasibleRegimeError, NotConvergedError, ParseError
from .fbsm import SweepConfig
from .model import ModelKind, objective, simulate
from .report import emit_csv, emit_report_csv, emit_table
from .scenarios import builtin_scenarios, no_control_objective, resolve_scenario, run_scenario

log = logging.getLogger("augopt")

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_INPUT = 0, 1, 2


def _float_list(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _read_controls(ref):
    path = Path(ref)
    text = path.read_text(encoding="utf-8") if path.is_file() else ref
    try:
        return _float_list(text)
    except ValueError:
        raise ParseError(f"controls must be comma-separated numbers, got {ref!r}") from None


def build_parser():
    ap = argparse.ArgumentParser(prog="augopt", description="Optimal species augmentation planning")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="forward-simulate a scenario")
    sim.add_argument("--scenario", required=True, help="built-in name or config file")
    sim.add_argument("--controls", help="CSV file or inline list h_0,...,h_{T-1}")
    sim.add_argument("--model", choices=["a", "b"], default="a",
                     help="order of events used with --controls (default: a)")
    sim.add_argument("--out", required=True, type=Path)

    solve = sub.add_parser("solve", help="optimise one scenario")
    solve.add_argument("--model", required=True, choices=["a", "b"])
    solve.add_argument("--scenario", required=True, help="built-in name or config file")
    solve.add_argument("--out", required=True, type=Path)
    solve.add_argument("--sweep-relax", type=float, default=SweepConfig.relaxation)
    solve.add_argument("--sweep-tol", type=float, default=SweepConfig.tol)
    solve.add_argument("--starts", help="comma-separated constant starting schedules (model b)")
    solve.add_argument("--kkt-tol", type=float, default=OptimizerConfig.kkt_tol)

    table = sub.add_parser("table", help="solve every built-in scenario with both models")
    table.add_argument("--out", required=True, type=Path)
    return ap


def cmd_simulate(args):
    spec = resolve_scenario(args.scenario)
    if args.controls:
        kind = ModelKind.parse(args.model)
        h = _read_controls(args.controls)
    else:
        kind, h = ModelKind.UNCONTROLLED, None
    traj = simulate(kind, spec.x0, h, spec.params, spec.obj.T)
    if traj.infeasible_steps:
        log.warning("infeasible regime (delta1 * v > 1) at steps %s", list(traj.infeasible_steps))
    args.out.mkdir(parents=True, exist_ok=True)
    emit_csv(traj, None, args.out / "trajectory.csv")
    print(f"{spec.name}: J = {objective(traj, spec.obj):.4f}")
    return EXIT_OK


def cmd_solve(args):
    spec = resolve_scenario(args.scenario)
    sweep = SweepConfig(relaxation=args.sweep_relax, tol=args.sweep_tol)
    starts = tuple(_float_list(args.starts)) if args.starts else None
    optimizer = OptimizerConfig(starts=starts, kkt_tol=args.kkt_tol)
    report = run_scenario(spec, args.model, sweep, optimizer, allow_unconverged=True)
    args.out.mkdir(parents=True, exist_ok=True)
    res = report.result
    emit_csv(res.trajectory, res.adjoints, args.out / "trajectory.csv")
    emit_report_csv([report], args.out / "report.csv")
    controls = ", ".join(f"{h:.2f}" for h in report.controls)
    print(f"{spec.name} model {report.model}: h* = [{controls}]")
    print(f"J(0) = {report.j_no_control:.4f}  J(h*) = {report.j_optimal:.4f}  ({report.percent_increase}%)")
    if not report.converged:
        print(f"not converged after {report.iterations} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_table(args):
    reports = []
    for spec in builtin_scenarios():
        log.info("%s: J(0) = %.4f", spec.name, no_control_objective(spec))
        for model in ("a", "b"):
            reports.append(run_scenario(spec, model, allow_unconverged=True))
    args.out.mkdir(parents=True, exist_ok=True)
    text = emit_table(reports)
    (args.out / "table.txt").write_text(text, encoding="utf-8")
    emit_report_csv(reports, args.out / "table.csv")
    print(text, end="")
    return EXIT_OK if all(r.converged for r in reports) else EXIT_NOT_CONVERGED


COMMANDS = {"simulate": cmd_simulate, "solve": cmd_solve, "table": cmd_table}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NotConvergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except InfeasibleRegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AugoptError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
