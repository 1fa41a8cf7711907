"""Command-line front end: radial figures and training curves."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, plot_radial, plot_training_curve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctql-viz",
        description="Render ctql trajectory/metrics files to figures")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rad = sub.add_parser("radial", help="radial coordinate vs time")
    p_rad.add_argument("--input", action="append", required=True,
                       help="trajectory CSV (repeatable)")
    p_rad.add_argument("--output", required=True, help="image file to write")
    p_rad.add_argument("--goal-radius", type=float, default=1.5)
    p_rad.add_argument("--trial", type=int,
                       help="trial index to plot (default: first in file)")
    p_rad.add_argument("--agents", nargs="*", default=[],
                       help="agent filters like target:0 herder:1")
    p_rad.add_argument("--t-min", type=float)
    p_rad.add_argument("--t-max", type=float)
    p_rad.add_argument("--inset", nargs=2, type=float, metavar=("T0", "T1"),
                       help="zoom inset over a time window")
    p_rad.add_argument("--two-panel", action="store_true",
                       help="herders panel above, targets panel below")
    p_rad.set_defaults(func=cmd_radial)

    p_cur = sub.add_parser("curve", help="training curve from metrics")
    p_cur.add_argument("--input", required=True, help="metrics CSV")
    p_cur.add_argument("--output", required=True, help="image file to write")
    p_cur.set_defaults(func=cmd_curve)
    return parser


def cmd_radial(args: argparse.Namespace) -> int:
    spec = FigureSpec(
        inputs=tuple(args.input),
        output=args.output,
        goal_radius=args.goal_radius,
        trial=args.trial,
        agents=tuple(args.agents),
        t_min=args.t_min,
        t_max=args.t_max,
        inset=tuple(args.inset) if args.inset else None,
        two_panel=args.two_panel,
    )
    plot_radial(spec)
    print(f"wrote {args.output}")
    return 0


def cmd_curve(args: argparse.Namespace) -> int:
    plot_training_curve(args.input, args.output)
    print(f"wrote {args.output}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
