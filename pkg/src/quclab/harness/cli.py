"""Command line: ``quclab run``, ``quclab list``, ``quclab trace``.

Exit status is 0 when every check passes, 1 when a threshold fails and 2 on
configuration errors (including exact enumeration that outgrows its cap).
"""

from __future__ import annotations

import argparse
import sys

from quclab.errors import BranchCapExceeded, ConfigInvalid, ParamsInvalid
from quclab.harness.config import load_config
from quclab.harness.experiments import get_experiment, list_experiments, run_experiment
from quclab.netexec import ExecConfig, Sample, exec_network, write_trace

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("experiment")
    p.add_argument("--config", help="TOML file of configuration keys")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--k", type=int, help="security parameter of the (k, alpha, lam) profile")
    p.add_argument("--out", help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quclab", description="Quantum OT experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and check its thresholds")
    _common(run)
    run.add_argument("--trials", type=int)
    tier = run.add_mutually_exclusive_group()
    tier.add_argument("--exact", action="store_const", const="exact", dest="mode",
                      help="exact enumeration only")
    tier.add_argument("--sample", action="store_const", const="sample", dest="mode",
                      help="sampled tier only")
    run.add_argument("--csv", help="also write per-record rows as CSV")

    sub.add_parser("list", help="list the experiments")

    trace = sub.add_parser("trace", help="write one sampled execution as JSON lines")
    _common(trace)
    return parser


def _config(args):
    overrides = {k: getattr(args, k, None) for k in ("seed", "n", "m", "ell", "k", "trials", "mode", "out", "csv")}
    return load_config(args.config, args.experiment, **overrides)


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_run(args) -> int:
    cfg = _config(args)
    report = run_experiment(cfg)
    if cfg.out is not None:
        _write(cfg.out, report.to_json())
    if cfg.csv is not None:
        _write(cfg.csv, report.to_csv())
    for line in report.summary_lines():
        print(line, file=sys.stderr if cfg.out is None else sys.stdout)
    if cfg.out is None:
        _write(None, report.to_json())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_list(args) -> int:
    for exp in list_experiments():
        print(f"{exp.name:26s} criterion {exp.criterion:2d}  {exp.summary}")
    return EXIT_PASS


def cmd_trace(args) -> int:
    cfg = _config(args)
    net = get_experiment(cfg.experiment).network(cfg)
    res = exec_network(net, ExecConfig(mode=Sample(cfg.seed), record_trace=True))
    if cfg.out is None:
        write_trace(res.trace, sys.stdout)
    else:
        with open(cfg.out, "w") as fh:
            write_trace(res.trace, fh)
    return EXIT_PASS


COMMANDS = {"run": cmd_run, "list": cmd_list, "trace": cmd_trace}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigInvalid, ParamsInvalid) as exc:
        print(f"quclab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BranchCapExceeded as exc:
        print(f"quclab: {exc}. The exact profile is n=2, m=3, ell=1; "
              "larger sizes need the sampled tier (--sample).", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
