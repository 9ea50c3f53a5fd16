"""Command-line front end.

Subcommands:

* ``run``            one experiment (algorithm x function), emitted as json/csv/table
* ``list-functions`` the benchmark registry as a JSON document
* ``sweep``          repeat an experiment across values of one parameter

A JSON config file can pre-set any ``run``/``sweep`` option (keys named like
the long flags, with underscores); explicit flags win over the file.  The
optional ``overrides`` config key passes dotted config-field overrides
through to the algorithm (e.g. ``{"fa.gamma": 0.5}``).
"""

import argparse
import json
import sys

from .errors import ConfigError, UnknownName
from .functions import registry_document
from .harness import (ALGORITHMS, SuccessCriteria, emit_report, run_experiment,
                      trace_csv)

_RUN_DEFAULTS = {
    "algorithm": "es",
    "function": "ackley",
    "dim": None,
    "noise_sigma": 0.025,
    "runs": 100,
    "seed": 0,
    "tol": 1e-5,
    "pop": 20,
    "stats_over": "all",
    "output": "table",
    "trace": None,
    "jobs": 1,
    "overrides": None,
    "success_mode": "value_gap",
    "value_eps": 1e-2,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eagleopt",
        description="Stochastic-optimization experiments on noisy benchmark functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and print its report")
    _add_run_flags(run)

    sub.add_parser("list-functions", help="print the benchmark function registry")

    sweep = sub.add_parser("sweep", help="run an experiment per value of one parameter")
    _add_run_flags(sweep)
    sweep.add_argument("--param", required=True,
                       help="parameter to vary: pop, tol, sigma, dim, or a dotted "
                            "config field such as fa.gamma")
    sweep.add_argument("--values", required=True,
                       help="comma-separated numeric values, e.g. 0.5,1,2")
    return parser


def _add_run_flags(cmd: argparse.ArgumentParser):
    # Defaults stay None so a config file can fill unset flags.
    cmd.add_argument("--algorithm", choices=ALGORITHMS)
    cmd.add_argument("--function")
    cmd.add_argument("--dim", type=int)
    cmd.add_argument("--noise-sigma", type=float, dest="noise_sigma")
    cmd.add_argument("--runs", type=int)
    cmd.add_argument("--seed", type=int)
    cmd.add_argument("--tol", type=float)
    cmd.add_argument("--pop", type=int)
    cmd.add_argument("--stats-over", choices=("all", "successes"), dest="stats_over")
    cmd.add_argument("--output", choices=("json", "csv", "table"))
    cmd.add_argument("--trace", metavar="PATH",
                     help="also write per-trial convergence traces to PATH (csv)")
    cmd.add_argument("--jobs", type=int, help="parallel trial processes (default 1)")
    cmd.add_argument("--config", metavar="PATH", help="JSON file of option defaults")


def _merge_options(args: argparse.Namespace) -> dict:
    merged = dict(_RUN_DEFAULTS)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            from_file = json.load(fh)
        unknown = set(from_file) - set(_RUN_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(from_file)
    for key in _RUN_DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def _run_one(opts: dict, extra_overrides: dict | None = None):
    overrides = dict(opts["overrides"] or {})
    if extra_overrides:
        overrides.update(extra_overrides)
    criteria = SuccessCriteria(mode=opts["success_mode"], value_eps=opts["value_eps"])
    return run_experiment(
        opts["algorithm"], opts["function"], dim=opts["dim"],
        sigma=opts["noise_sigma"], n_runs=opts["runs"], base_seed=opts["seed"],
        criteria=criteria, pop=opts["pop"], tol=opts["tol"],
        overrides=overrides or None, stats_over=opts["stats_over"],
        jobs=opts["jobs"], collect_traces=bool(opts["trace"]),
    )


def _cmd_run(args: argparse.Namespace) -> int:
    opts = _merge_options(args)
    out = _run_one(opts)
    report = out[0]
    if opts["trace"]:
        with open(opts["trace"], "w", encoding="utf-8") as fh:
            fh.write(trace_csv(out[2]))
    sys.stdout.write(emit_report([report], opts["output"]))
    return 0


_SWEEP_KNOBS = ("pop", "tol", "sigma", "dim")


def _cmd_sweep(args: argparse.Namespace) -> int:
    opts = _merge_options(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as err:
        raise ConfigError(f"--values must be comma-separated numbers: {err}") from None
    if not values:
        raise ConfigError("--values is empty")

    reports = []
    for value in values:
        local = dict(opts)
        extra = None
        if args.param in _SWEEP_KNOBS:
            key = "noise_sigma" if args.param == "sigma" else args.param
            local[key] = int(value) if args.param in ("pop", "dim") else value
        else:
            extra = {args.param: value}
        reports.append((value, _run_one(local, extra)[0]))

    if opts["output"] == "json":
        doc = {
            "param": args.param,
            "sweep": [{"value": v, "report": r.as_dict()} for v, r in reports],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        # Prefix each rendered row with the swept value.
        body = emit_report([r for _, r in reports], opts["output"])
        lines = body.splitlines()
        if opts["output"] == "csv":
            out = [f"param,value,{lines[0]}"]
            out += [f"{args.param},{v},{line}" for (v, _), line in zip(reports, lines[1:])]
        else:
            label = f"{args.param}="
            pad = max(len(label + _fmt_value(v)) for v, _ in reports)
            out = [f"{'param'.ljust(pad)}  {lines[0]}"]
            out += [f"{(label + _fmt_value(v)).ljust(pad)}  {line}"
                    for (v, _), line in zip(reports, lines[1:])]
        sys.stdout.write("\n".join(out) + "\n")
    return 0


def _fmt_value(v: float) -> str:
    return f"{v:g}"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list-functions":
            sys.stdout.write(json.dumps(registry_document(), indent=2) + "\n")
            return 0
        return _cmd_sweep(args)
    except (ConfigError, UnknownName, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
