"""Command-line front end: train, eval, compare, and export subcommands."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from .config import ConfigError, parse_config
from .fileio import atomic_write, write_aggregate, write_comparison, \
    write_metrics, write_trajectory
from .harness import HarnessConfigError, RunConfig, evaluate, fresh_tables, \
    train, compare
from .learner import QTable, load_qtable, save_qtable
from .policy import PolicyMode

log = logging.getLogger("ctql")


class CliError(RuntimeError):
    """Fatal command error; message goes to stderr, exit status is nonzero."""


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="YAML config path")
    parser.add_argument("--seed", type=int, help="override run.seed")
    parser.add_argument("--trials", type=int, help="override run.n_trials")
    parser.add_argument("--mode", choices=[m.value for m in PolicyMode],
                        help="override run.mode")
    parser.add_argument("--record-every", type=int,
                        help="override run.record_every")
    parser.add_argument("--out", default="out", help="output directory")


def _load_config(args: argparse.Namespace) -> RunConfig:
    try:
        config = parse_config(args.config)
    except ConfigError as exc:
        raise CliError(f"invalid config:\n{exc}") from exc
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        overrides["n_trials"] = args.trials
    if getattr(args, "mode", None) is not None:
        overrides["mode"] = PolicyMode(args.mode)
    if getattr(args, "record_every", None) is not None:
        overrides["record_every"] = args.record_every
    if overrides:
        config = replace(config, **overrides)
        errs = config.validate()
        if errs:
            raise CliError("invalid overrides:\n" + "\n".join(errs))
    return config


def _table_path(outdir: str, herder: int) -> str:
    return os.path.join(outdir, f"qtable_h{herder}.txt")


def _load_tables(config: RunConfig, tables_dir: str) -> list[QTable]:
    tables = []
    expected = fresh_tables(config)
    for j in range(config.env.n_herders):
        path = _table_path(tables_dir, j)
        if not os.path.exists(path):
            raise CliError(f"Q-table file not found: {path}")
        try:
            table = load_qtable(path)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        if table.dims != expected[j].dims or table.n_actions != expected[j].n_actions:
            raise CliError(
                f"{path}: table dims {table.dims} x {table.n_actions} do not "
                f"match config grid {expected[j].dims} x {expected[j].n_actions}")
        tables.append(table)
    return tables


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args)
    try:
        tables, results = train(config)
    except HarnessConfigError as exc:
        raise CliError(str(exc)) from exc
    os.makedirs(args.out, exist_ok=True)
    for j, table in enumerate(tables):
        save_qtable(_table_path(args.out, j), table)
    write_metrics(os.path.join(args.out, "metrics.csv"),
                  [r.to_metrics() for r in results])
    last = results[-1]
    print(f"trained {config.n_trials} trials ({config.mode.value}); "
          f"last-trial containment {last.containment_fraction:.3f}; "
          f"outputs in {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.tables is not None:
        tables = _load_tables(config, args.tables)
    else:
        tables = fresh_tables(config)
    try:
        agg, results = evaluate(config, tables, record=True)
    except HarnessConfigError as exc:
        raise CliError(str(exc)) from exc
    os.makedirs(args.out, exist_ok=True)
    rows = [row for res in results for row in res.rows]
    write_trajectory(os.path.join(args.out, "trajectory.csv"), rows)
    write_aggregate(os.path.join(args.out, "aggregate.csv"), agg)
    print(f"evaluated {config.eval_trials} episodes ({config.mode.value}): "
          f"success {agg.success_rate:.2f}, containment mean "
          f"{agg.containment_mean:.3f}; outputs in {args.out}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    config = _load_config(args)
    ctql_trials = args.ctql_trials or config.n_trials
    pureq_trials = args.pureq_trials or config.n_trials
    configs = {
        PolicyMode.CTQL: replace(config, mode=PolicyMode.CTQL,
                                 n_trials=ctql_trials),
        PolicyMode.PURE_Q: replace(config, mode=PolicyMode.PURE_Q,
                                   n_trials=pureq_trials),
        PolicyMode.PURE_TUTOR: replace(config, mode=PolicyMode.PURE_TUTOR),
    }
    try:
        rows, _ = compare(configs)
    except HarnessConfigError as exc:
        raise CliError(str(exc)) from exc
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "comparison.csv")
    write_comparison(path, rows)
    for row in rows:
        print(f"{row.mode:10s} trials={row.train_trials:<4d} "
              f"success={row.success_rate:.2f} "
              f"containment mean={row.containment_mean:.3f} "
              f"min={row.containment_min:.3f}")
    print(f"report written to {path}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    if not os.path.exists(args.table):
        raise CliError(f"Q-table file not found: {args.table}")
    try:
        table = load_qtable(args.table)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.config is not None:
        config = _load_config(args)
        expected = fresh_tables(config)[0]
        if table.dims != expected.dims or table.n_actions != expected.n_actions:
            raise CliError(
                f"{args.table}: table dims {table.dims} x {table.n_actions} "
                f"do not match config grid {expected.dims} x "
                f"{expected.n_actions}")
    if args.csv:
        n_dist, n_angle, n_speed = table.dims
        with atomic_write(args.output) as handle:
            handle.write("state_index,dist_bin,angle_bin,speed_bin,"
                         "action_index,value\n")
            for si in range(table.n_states):
                rest, speed_bin = divmod(si, n_speed)
                dist_bin, angle_bin = divmod(rest, n_angle)
                for a in range(table.n_actions):
                    handle.write(f"{si},{dist_bin},{angle_bin},{speed_bin},"
                                 f"{a},{table.values[si, a]!r}\n")
    else:
        save_qtable(args.output, table)
    print(f"exported {args.table} -> {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctql",
        description="Control-tutored Q-learning herding simulator")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log per-trial progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train tables, write metrics")
    _add_common(p_train)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="greedy evaluation, write trajectories")
    _add_common(p_eval)
    p_eval.add_argument("--tables", help="directory with qtable_h*.txt "
                                         "(default: untrained tables)")
    p_eval.set_defaults(func=cmd_eval)

    p_cmp = sub.add_parser("compare", help="train+evaluate all three modes")
    _add_common(p_cmp)
    p_cmp.add_argument("--ctql-trials", type=int,
                       help="training budget for ctql (default run.n_trials)")
    p_cmp.add_argument("--pureq-trials", type=int,
                       help="training budget for pureq (default run.n_trials)")
    p_cmp.set_defaults(func=cmd_compare)

    p_exp = sub.add_parser("export", help="rewrite a Q-table file")
    p_exp.add_argument("--table", required=True, help="input Q-table path")
    p_exp.add_argument("--output", required=True, help="output path")
    p_exp.add_argument("--config", help="validate dims against this config")
    p_exp.add_argument("--seed", type=int, help=argparse.SUPPRESS)
    p_exp.add_argument("--csv", action="store_true",
                       help="write long-format CSV instead")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
