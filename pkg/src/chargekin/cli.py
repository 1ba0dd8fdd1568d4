"""Command line front end for design studies.

Units are millimetres and radians throughout. ``l_b`` is the HALF-side of the
regular square workspace: a 200 mm square is ``--lb 100``.

Exit codes: 0 ok, 2 usage or invalid design, 3 unreachable, 4 stroke,
5 singularity, 6 degenerate region, 7 I/O, 8 search finished without a
feasible placement.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from importlib import resources

from . import __version__
from .alpha import alpha_fk, alpha_ik
from .beta_gamma import gamma_fk, gamma_ik
from .design import JointVector, PlanarPose, SpatialPose, WorkingMode, ZOE_DESIGN, load_design, validate_joints
from .errors import ChargekinError, DesignError
from .placement import lame_boundary, placement_csv, placement_region
from .report import check_spec
from .svg import SvgFigure
from .trajectory import plan_csv, plan_insertion, plan_line
from .workspace import boundary, boundary_csv, singularity_locus

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 7
EXIT_NONE = 8

UNITS = "All lengths in mm, angles in rad."
LB_NOTE = "l_b is the half-side of the square (side = 2*l_b)."


class _IOFailure(Exception):
    pass


def write_atomic(files: dict) -> None:
    """Write every ``path -> text`` pair or none of them."""
    staged = []
    try:
        for path, text in files.items():
            d = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(prefix=".chargekin-", dir=d)
            staged.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
        for tmp, path in staged:
            os.replace(tmp, path)
    except OSError as exc:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise _IOFailure(str(exc)) from exc


def _design(args):
    if args.config is None:
        return ZOE_DESIGN
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    return load_design(text)


def _even(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 2 or n % 2:
        raise argparse.ArgumentTypeError("Lame exponent must be an even integer >= 2")
    return n


def _at_least(k):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < k:
            raise argparse.ArgumentTypeError(f"must be >= {k}")
        return v

    return parse


def _mode(args) -> WorkingMode:
    assembly = 1 if getattr(args, "branch", "upper") == "upper" else -1
    return WorkingMode(-1, -1, assembly)


def cmd_ik(args) -> int:
    p = _design(args)
    if args.z is None:
        q = alpha_ik(p, PlanarPose(args.x, args.y))
        print(f"rho1={q.rho1:.6f} rho2={q.rho2:.6f}")
    else:
        q = gamma_ik(p, SpatialPose(args.x, args.y, args.z))
        print(f"rho1={q.rho1:.6f} rho2={q.rho2:.6f} rho3={q.rho3:.6f}")
    return EXIT_OK


def cmd_fk(args) -> int:
    p = _design(args)
    mode = _mode(args)
    q = validate_joints(p, JointVector(args.rho1, args.rho2, args.rho3))
    if args.rho3 is None:
        v = alpha_fk(p, q, mode)
        print(f"x={v.x:.6f} y={v.y:.6f}")
    else:
        t = gamma_fk(p, q, mode)
        print(f"x={t.x:.6f} y={t.y:.6f} z={t.z:.6f}")
    return EXIT_OK


def _parse_lame(text):
    try:
        xc, yc, lb, n = text.split(",")
        return float(xc), float(yc), float(lb), _even(n)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise argparse.ArgumentTypeError(f"expected xc,yc,lb,n with even n: {exc}") from None


def _workspace_figure(region, locus=(), lames=(), n_samples=512):
    fig = SvgFigure(region.bounds)
    for lp in region.loops:
        fig.path(lp.vertices, stroke="black", width=2, cls="workspace")
    for line in locus:
        fig.path(line, closed=False, stroke="red", width=1.5, dash="8,4", cls="singularity")
    for xc, yc, lb, n in lames:
        fig.path(lame_boundary(xc, yc, lb, n, n_samples), stroke="blue", width=1.5, cls="lame")
    return fig


def cmd_workspace(args) -> int:
    p = _design(args)
    region = boundary(p, args.samples_per_arc)
    locus = singularity_locus(p, args.grid, region=region)
    files = {}
    if args.csv:
        files[args.csv] = boundary_csv(region)
    if args.svg:
        files[args.svg] = _workspace_figure(region, locus, args.lame or ()).render()
    write_atomic(files)
    xmin, ymin, xmax, ymax = region.bounds
    print(f"area={region.area:.3f} bounds=({xmin:.3f},{ymin:.3f},{xmax:.3f},{ymax:.3f}) loops={len(region.loops)}")
    return EXIT_OK


def _largest(components):
    # mirror-image components tie on size; prefer +y
    return max(components, key=lambda c: (c.cells, c.witness[1]))


def cmd_place(args) -> int:
    p = _design(args)
    region = boundary(p)
    pm = placement_region(p, args.lb, args.n, args.grid, args.samples, region=region)
    files = {}
    if args.csv:
        files[args.csv] = placement_csv(pm)
    if args.svg:
        accepted = pm.accepted
        lames = []
        if accepted:
            best = _largest(accepted)
            lames.append((*best.witness, args.lb, args.n))
        fig = _workspace_figure(region, lames=lames)
        cell = (region.bounds[2] - region.bounds[0]) / args.grid
        fig.cells(pm.feasible_centers(), cell)
        files[args.svg] = fig.render()
    write_atomic(files)
    if pm.empty:
        print("witness: none")
        return EXIT_NONE
    best = _largest(pm.accepted)
    print(f"witness: x_c={best.witness[0]:.6f} y_c={best.witness[1]:.6f} l_b={args.lb:.6f} n={args.n}")
    for c in pm.components:
        kind = "inside" if c.inside_workspace else "outside"
        aspect = "" if c.single_aspect is None else f" single_aspect={c.single_aspect}"
        print(f"component {c.label}: {kind} cells={c.cells}{aspect}")
    return EXIT_OK


def cmd_check_spec(args) -> int:
    p = _design(args)
    report = check_spec(p, n=args.n, tolerance=args.tolerance, grid=args.grid)
    if args.out:
        report.artifacts.append(args.out)
        write_atomic({args.out: report.render()})
    sys.stdout.write(report.render())
    return EXIT_OK


def cmd_plan(args) -> int:
    p = _design(args)
    socket = SpatialPose(*args.to)
    if args.start is not None:
        plan = plan_line(p, SpatialPose(*args.start), socket, args.step, args.margin_floor)
    else:
        plan = plan_insertion(p, socket, args.depth, args.step, args.margin_floor)
    text = plan_csv(plan)
    if args.csv:
        write_atomic({args.csv: text})
    else:
        sys.stdout.write(text)
    print(
        f"waypoints={len(plan)} min_parallel_margin={plan.min_parallel_margin:.6f} "
        f"min_stroke_clearance={plan.min_stroke_clearance:.6f}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_dump_config(args) -> int:
    sys.stdout.write(resources.files("chargekin").joinpath("data/zoe.cfg").read_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chargekin", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=f"{help_} {UNITS}")
        sp.add_argument("--config", help="design file of 'key = value' lines (default: built-in prototype design)")
        sp.set_defaults(func=func)
        return sp

    sp = add("ik", cmd_ik, "Inverse kinematics of V (or of P with --z).")
    sp.add_argument("--x", type=float, required=True, help="x of V, mm")
    sp.add_argument("--y", type=float, required=True, help="y of V (or world y of P with --z), mm")
    sp.add_argument("--z", type=float, help="insertion depth of P, mm; switches to the 3-dof model")

    sp = add("fk", cmd_fk, "Forward kinematics from actuator strokes (checked against the stroke limits).")
    sp.add_argument("--rho1", type=float, required=True, help="left actuator, mm")
    sp.add_argument("--rho2", type=float, required=True, help="right actuator, mm")
    sp.add_argument("--rho3", type=float, help="insertion actuator, mm; switches to the 3-dof model")
    sp.add_argument("--branch", choices=("upper", "lower"), default="upper", help="assembly mode")

    sp = add("workspace", cmd_workspace, "Workspace boundary CSV and SVG with singularity locus.")
    sp.add_argument("--grid", type=_at_least(32), default=128, help="singularity contour grid (>= 32)")
    sp.add_argument("--samples-per-arc", type=_at_least(8), default=64)
    sp.add_argument("--csv", help="boundary CSV: loop,x,y,tag")
    sp.add_argument("--svg", help="SVG drawing, 1 unit = 1 mm, +y up")
    sp.add_argument("--lame", type=_parse_lame, action="append", help="overlay xc,yc,lb,n (repeatable). " + LB_NOTE)

    sp = add("place", cmd_place, "Feasible placements of the regular square workspace. " + LB_NOTE)
    sp.add_argument("--lb", type=float, required=True, help="half-side of the square, mm")
    sp.add_argument("--n", type=_even, default=12, help="even Lame exponent")
    sp.add_argument("--grid", type=_at_least(32), default=128, help="centers per axis (>= 32)")
    sp.add_argument("--samples", type=_at_least(256), default=1024, help="curve samples per placement")
    sp.add_argument("--csv", help="raster CSV: x_c,y_c,feasible,component")
    sp.add_argument("--svg", help="SVG overlay of the feasible centers")

    sp = add("check-spec", cmd_check_spec, "Check the design against requirements (a)-(k). " + LB_NOTE)
    sp.add_argument("--n", type=_even, default=12)
    sp.add_argument("--tolerance", type=float, default=0.5, help="bisection tolerance on l_b, mm")
    sp.add_argument("--grid", type=_at_least(32), default=64)
    sp.add_argument("--out", help="also write the report to this file")

    sp = add("plan", cmd_plan, "Straight-line or insertion waypoint plan as CSV.")
    sp.add_argument("--to", type=float, nargs=3, required=True, metavar=("X", "Y", "Z"), help="target (socket) pose, mm")
    sp.add_argument("--from", dest="start", type=float, nargs=3, metavar=("X", "Y", "Z"), help="start pose; default is an axial insertion")
    sp.add_argument("--depth", type=float, default=40.0, help="insertion depth along the insertion axis, mm")
    sp.add_argument("--step", type=float, default=1.0, help="max Cartesian spacing of waypoints, mm")
    sp.add_argument("--margin-floor", type=float, default=0.01, help="minimum normalized |det A|")
    sp.add_argument("--csv", help="CSV path: index,x,y,z,rho1,rho2,rho3,parallel_margin")

    add("dump-config", cmd_dump_config, "Print the built-in design file.")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChargekinError as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
