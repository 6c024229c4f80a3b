"""Command-line front end.

Exit status: 0 feasible design, 2 infeasible design, 1 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys

from foldgrip.beams import snap_force_closed, stiffness_constants
from foldgrip.designfile import SCHEMA, DesignFile, load_design
from foldgrip.errors import DesignError, DesignFileError, GridTooLarge
from foldgrip.explorer import SECTIONS, evaluate, grid_scan, refine
from foldgrip.linkage import ForceBudget, required_torque, validate_switching
from foldgrip.reference import SNAP_FORCE_REPORTED
from foldgrip.switching import (
    WorkspaceScenario,
    claw_load_check,
    grasp_feasibility,
    max_claw_load,
    simulate_forward_active,
    simulate_forward_passive,
    simulate_reverse,
    trace_ok,
    trace_records,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2

TRACE_COLUMNS = ["step", "event", "force_N", "torque_Nmm", "feasible"]
MARGIN_COLUMNS = [
    "snap_N",
    "forward_N",
    "reverse_N",
    "motor_limit_N",
    "forward_margin_N",
    "motor_margin_N",
    "reverse_margin_N",
    "objective_N",
]


def fmt(x: float) -> str:
    return format(x, ".4g")


def fmt_param(x) -> str:
    # inputs are echoed exactly so every row can be re-run
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def yes_no(flag: bool) -> str:
    return "Yes" if flag else "No"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _budget(design: DesignFile, forces) -> ForceBudget:
    if forces is not None:
        snap, forward, reverse, motor = forces
        return ForceBudget.from_forces(snap, forward, reverse, motor, design.point.geom)
    return evaluate(design.point).budget


def _echo_inputs(design: DesignFile, lines: list[str]) -> None:
    lines.append("Inputs")
    flat = design.point.flat()
    for section in SECTIONS:
        for key, (unit, _kind, _req) in SCHEMA[section].items():
            lines.append(f"  {section}.{key} = {fmt_param(flat[f'{section}.{key}'])} {unit}")


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


# --- subcommands ---------------------------------------------------------------


def cmd_analyze(args, design: DesignFile) -> int:
    p = design.point
    budget = _budget(design, args.forces)
    verdict = validate_switching(budget)
    ok = verdict.forward_ok and verdict.reverse_ok
    torque = required_torque(budget.forward_at_clip, p.act, p.geom)

    if args.format == "csv":
        rows = [["quantity", "value", "unit"]]
        rows += [
            ["snap", fmt(budget.snap), "N"],
            ["forward", fmt(budget.forward), "N"],
            ["reverse", fmt(budget.reverse), "N"],
            ["motor_limit", fmt(budget.motor_limit), "N"],
            ["forward_at_clip", fmt(budget.forward_at_clip), "N"],
            ["snap_at_pin", fmt(budget.snap_at_pin), "N"],
            ["forward_torque", fmt(torque), "N*mm"],
            ["forward_margin", fmt(verdict.forward_margin), "N"],
            ["motor_margin", fmt(verdict.motor_margin), "N"],
            ["reverse_margin", fmt(verdict.reverse_margin), "N"],
            ["forward_ok", yes_no(verdict.forward_ok), "-"],
            ["reverse_ok", yes_no(verdict.reverse_ok), "-"],
        ]
        _write(_csv(rows), args.out)
        return EXIT_OK if ok else EXIT_INFEASIBLE

    lines = [f"design: {args.design}"]
    _echo_inputs(design, lines)
    source = "supplied on the command line" if args.forces is not None else "closed-form models"
    lines += [
        f"Forces ({source})",
        f"  snap force at clip pin           {fmt(budget.snap)} N",
        f"  forward pass force at pin        {fmt(budget.forward)} N",
        f"  reverse pass force at pin        {fmt(budget.reverse)} N",
        f"  motor force limit at clip pin    {fmt(budget.motor_limit)} N",
        f"  forward pass force at clip pin   {fmt(budget.forward_at_clip)} N",
        f"  snap force at connect pin        {fmt(budget.snap_at_pin)} N",
        f"  torque for forward pass          {fmt(torque)} N*mm (limit {fmt(p.act.tau_m_max)} N*mm)",
    ]
    snap_model = snap_force_closed(p.clip)
    k = stiffness_constants(p.clip)
    lines += [
        "Snap force reference check",
        f"  closed form {fmt(snap_model)} N, reported {fmt(SNAP_FORCE_REPORTED)} N, "
        f"ratio {fmt(snap_model / SNAP_FORCE_REPORTED)}",
        f"  nail stiffness {fmt(k['consistent'])} N/mm (without the 1/12 of I: {fmt(k['without_twelfth'])} N/mm)",
        "Verdict",
        f"  insertion -> grasping: {yes_no(verdict.forward_ok)} "
        f"(forward margin {fmt(verdict.forward_margin)} N, motor margin {fmt(verdict.motor_margin)} N)",
        f"  grasping -> insertion: {yes_no(verdict.reverse_ok)} (reverse margin {fmt(verdict.reverse_margin)} N at pin)",
    ]
    if design.claw is not None and design.claw_load is not None:
        chk = claw_load_check(design.claw_load, design.claw.reference_arm, design.claw)
        lines.append(
            f"Claw: load {fmt(design.claw_load)} N -> {fmt(chk.moment)} N*mm of {fmt(design.claw.max_moment)} N*mm, "
            f"{'ok' if chk.ok else 'exceeded'} (margin {fmt(chk.margin)} N*mm, max load "
            f"{fmt(max_claw_load(design.claw.reference_arm, design.claw))} N)"
        )
    lines.append(f"Result: {'feasible' if ok else 'infeasible'}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_simulate(args, design: DesignFile) -> int:
    p = design.point
    budget = _budget(design, args.forces)
    if args.procedure == "active":
        trace = simulate_forward_active(budget, p.act, p.geom)
    elif args.procedure == "passive":
        trace = simulate_forward_passive(budget, p.act, p.geom, descent_contact=not args.no_contact)
    else:
        trace = simulate_reverse(budget, p.act, p.geom)
    rows = [TRACE_COLUMNS + ["violation"]]
    for rec in trace_records(trace):
        rows.append(
            [
                str(rec["step"]),
                rec["event"],
                fmt(rec["force_N"]),
                fmt(rec["torque_Nmm"]),
                "true" if rec["feasible"] else "false",
                rec["violation"],
            ]
        )
    _write(_csv(rows), args.out)
    return EXIT_OK if trace and trace_ok(trace) else EXIT_INFEASIBLE


def cmd_feasibility(args, design: DesignFile) -> int:
    base = design.workspace
    values = {
        "w1": args.w1 if args.w1 is not None else (base.w1 if base else None),
        "w2": args.w2 if args.w2 is not None else (base.w2 if base else None),
    }
    for name, value in values.items():
        if value is None:
            print(f"error: --{name} not given and no workspace.{name} in the design file", file=sys.stderr)
            return EXIT_INPUT
    defaults = base or WorkspaceScenario(0.0, 0.0)
    try:
        scenario = WorkspaceScenario(
            w1=values["w1"],
            w2=values["w2"],
            w_body=args.w_body if args.w_body is not None else defaults.w_body,
            w_tip=args.w_tip if args.w_tip is not None else defaults.w_tip,
            chamfer=args.chamfer if args.chamfer is not None else defaults.chamfer,
            object_slidable=defaults.object_slidable and not args.not_slidable,
            strategy1_min_gap=defaults.strategy1_min_gap,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    result = grasp_feasibility(scenario)
    text = (
        f"w1 = {fmt_param(scenario.w1)} mm, w2 = {fmt_param(scenario.w2)} mm, "
        f"w_body = {fmt_param(scenario.w_body)} mm, w_tip = {fmt_param(scenario.w_tip)} mm, "
        f"chamfer = {fmt_param(scenario.chamfer)} mm, object_slidable = {str(scenario.object_slidable).lower()}\n"
        f"strategy: {result.strategy.value}\n"
        f"reason: {result.reason}\n"
    )
    _write(text, args.out)
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_sweep(args, design: DesignFile) -> int:
    if design.search is None:
        print("error: design file has no search section", file=sys.stderr)
        return EXIT_INPUT
    cfg = design.search
    space = cfg.space
    try:
        report = grid_scan(space, workers=args.workers or cfg.workers)
    except GridTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    header = ["index"] + space.names + MARGIN_COLUMNS + ["feasible", "error"]
    rows = [header]

    def row(index, params, ev, err=""):
        cells = [str(index)] + [fmt_param(params[n]) for n in space.names]
        if ev is None:
            cells += [""] * len(MARGIN_COLUMNS) + ["false", err]
        else:
            b = ev.budget
            m = ev.margins()
            cells += [fmt(v) for v in (b.snap, b.forward, b.reverse, b.motor_limit)]
            cells += [fmt(m[k]) for k in ("forward_margin", "motor_margin", "reverse_margin", "objective")]
            cells += ["true" if ev.feasible else "false", ""]
        return cells

    for r in report.rows:
        rows.append(row(r.index, r.params, r.evaluation, r.error or ""))
    summary = [f"scanned {len(report.rows)} points, {len(report.feasible_points)} feasible"]
    feasible = bool(report.feasible_points)
    if cfg.refine_evals > 0 and report.best is not None:
        res = refine(report.best.point, space, cfg.refine_evals)
        params = {n: res.point.get(n) for n in space.names}
        rows.append(row("refined", params, res.evaluation))
        summary.append(
            f"refined objective {fmt(res.evaluation.objective)} N after {res.evaluations} evaluations"
            + (" (budget exhausted)" if res.exhausted else "")
        )
        feasible = feasible or res.evaluation.feasible
    _write(_csv(rows), args.out)
    print("; ".join(summary), file=sys.stderr)
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="foldgrip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("design", help="JSON design file")
        sp.add_argument("--out", help="write output here instead of stdout")

    def forces(sp):
        sp.add_argument(
            "--forces",
            nargs=4,
            type=float,
            metavar=("SNAP", "FORWARD", "REVERSE", "MOTOR"),
            help="use these forces (N) instead of the closed-form models",
        )

    sp = sub.add_parser("analyze", help="forces, margins and switching verdict")
    common(sp)
    forces(sp)
    sp.add_argument("--format", choices=("text", "csv"), default="text")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("simulate", help="event trace of a switching procedure")
    common(sp)
    forces(sp)
    sp.add_argument("--procedure", choices=("active", "passive", "reverse"), required=True)
    sp.add_argument("--no-contact", action="store_true", help="passive procedure without surface contact")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("feasibility", help="narrow-space insertion strategy")
    common(sp)
    sp.add_argument("--w1", type=float, help="gap the fingertip enters, mm")
    sp.add_argument("--w2", type=float, help="gap on the far side of the object, mm")
    sp.add_argument("--chamfer", type=float, help="object edge chamfer, mm")
    sp.add_argument("--w-body", type=float, help="finger body width, mm")
    sp.add_argument("--w-tip", type=float, help="fingertip thickness, mm")
    sp.add_argument("--not-slidable", action="store_true", help="object cannot be pushed aside")
    sp.set_defaults(func=cmd_feasibility)

    sp = sub.add_parser("sweep", help="grid scan over the search section")
    common(sp)
    sp.add_argument("--workers", type=int, help="parallel evaluation processes")
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        design = load_design(args.design)
    except DesignFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, design)
    except (DesignError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
