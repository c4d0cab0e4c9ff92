"""Plain-text and CSV output: trajectories for plotting and the comparison table."""

from __future__ import annotations

import csv
import io
from contextlib import contextmanager
from pathlib import Path

from .exceptions import ParseError
from .model import State
from .result import AdjointTrajectory

__all__ = [
    "TRAJECTORY_COLUMNS",
    "emit_csv",
    "read_trajectory_csv",
    "emit_table",
    "emit_report_csv",
]

TRAJECTORY_COLUMNS = ("t", "u", "v", "w", "h", "lambda_u", "lambda_v", "lambda_w")


@contextmanager
def _open_text(dest, mode):
    if hasattr(dest, "write") or hasattr(dest, "read"):
        yield dest
    else:
        with open(Path(dest), mode, encoding="utf-8", newline="") as fh:
            yield fh


def _fmt(x):
    # repr is the shortest string that parses back to the same double
    return repr(float(x))


def emit_csv(traj, adjoints=None, dest=None):
    """Write a trajectory (and optionally its costates) as CSV.

    Columns are ``t,u,v,w,h`` followed by ``lambda_u,lambda_v,lambda_w``
    when ``adjoints`` is given. The control on the last row is empty since
    there are T controls for T+1 states. Returns the text when ``dest`` is
    None.
    """
    columns = TRAJECTORY_COLUMNS if adjoints is not None else TRAJECTORY_COLUMNS[:5]
    if adjoints is not None and len(adjoints) != len(traj.states):
        raise ValueError("adjoints and trajectory lengths differ")
    h = traj.controls_or_zeros()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for t, x in enumerate(traj.states):
        row = [str(t), _fmt(x.u), _fmt(x.v), _fmt(x.w), _fmt(h[t]) if t < len(h) else ""]
        if adjoints is not None:
            row += [_fmt(c) for c in adjoints.at(t)]
        writer.writerow(row)
    text = buf.getvalue()
    if dest is None:
        return text
    with _open_text(dest, "w") as fh:
        fh.write(text)
    return text


def read_trajectory_csv(src):
    """Parse :func:`emit_csv` output.

    Returns
    -------
    states : tuple of State
    controls : tuple of float
    adjoints : AdjointTrajectory or None
    """
    with _open_text(src, "r") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty trajectory CSV")
    header = tuple(rows[0])
    if header not in (TRAJECTORY_COLUMNS, TRAJECTORY_COLUMNS[:5]):
        raise ParseError(f"unexpected header {','.join(header)}")
    has_adj = len(header) == len(TRAJECTORY_COLUMNS)
    states, controls, lam = [], [], []
    try:
        for i, row in enumerate(rows[1:]):
            if len(row) != len(header):
                raise ParseError(f"row {i + 1}: expected {len(header)} fields")
            if int(row[0]) != i:
                raise ParseError(f"row {i + 1}: time index {row[0]} out of sequence")
            states.append(State(float(row[1]), float(row[2]), float(row[3])))
            if row[4] != "":
                controls.append(float(row[4]))
            if has_adj:
                lam.append(tuple(float(c) for c in row[5:8]))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    adjoints = None
    if has_adj:
        lu, lv, lw = zip(*lam)
        adjoints = AdjointTrajectory(lu, lv, lw)
    return tuple(states), tuple(controls), adjoints


def _cell(report):
    if report is None:
        return "-"
    text = f"{report.j_optimal:.4f} ({report.percent_increase}%)"
    return text if report.converged else text + " *"


def emit_table(reports):
    """Comparison table: one row per scenario, no-control J and both models.

    Objective values are printed to 4 decimals, gains as whole percents. A
    trailing ``*`` marks a solve that did not converge.
    """
    rows = {}
    for r in reports:
        entry = rows.setdefault(r.scenario, {"label": r.label or r.scenario, "j0": r.j_no_control})
        entry[r.model.upper()] = r
    header = ("Scenario", "No augmentation", "Model A", "Model B")
    body = [
        (e["label"], f"{e['j0']:.4f}", _cell(e.get("A")), _cell(e.get("B")))
        for e in rows.values()
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = []
    for n, row in enumerate([header, *body]):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_report_csv(reports, dest=None):
    """Machine-readable twin of :func:`emit_table`, one line per run."""
    width = max((len(r.controls) for r in reports), default=0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "model", "j0", "jopt", "percent"] + [f"h{i}" for i in range(width)])
    for r in reports:
        hs = [_fmt(h) for h in r.controls] + [""] * (width - len(r.controls))
        writer.writerow([r.scenario, r.model, _fmt(r.j_no_control), _fmt(r.j_optimal), str(r.percent_increase)] + hs)
    text = buf.getvalue()
    if dest is not None:
        with _open_text(dest, "w") as fh:
            fh.write(text)
    return text
