"""Command-line front end.

Exit codes: 0 ok, 1 usage or parse failure, 2 numeric failure,
3 assertion (threshold) failure.  All randomness flows from --seed; a
JSON config file can supply any flag, with explicit flags winning.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

from . import diagnostics as diag
from .ensemble import (EnsembleConfig, conjecture_cdf, run_ensemble,
                       write_summary_csv, write_zcdf_csv)
from .errors import ConditioningUnreachable, ConfigError, NumericFailure
from .logint import li, li_inv, soldner
from .primes import compare_to_primes, dusart_rosser_violations, sieve
from .process import (DEFAULT_CHECKPOINT_RATIO, RunConfig, rng_for_seed, run)
from .trace_io import read_trace_csv, write_trace_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_ASSERT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill flags left at their defaults from the --config JSON file."""
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path) as fh:
            overrides = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config file {path}: {exc}") from None
    defaults = {a.dest: a.default for a in parser._actions}
    for key, value in overrides.items():
        if not hasattr(args, key):
            raise ConfigError(f"config file {path}: unknown key {key!r}")
        if getattr(args, key) == defaults.get(key):
            setattr(args, key, value)


def _parse_prefix(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ConfigError(f"bad prefix {text!r}") from None


def _run_config(args) -> RunConfig:
    if (args.steps is None) == (args.until_value is None):
        raise ConfigError("exactly one of --steps / --until-value is required")
    if args.steps is not None:
        kind, horizon = "by-index", args.steps
    else:
        kind, horizon = "by-value", args.until_value
    return RunConfig(
        seed=args.seed, horizon=horizon, horizon_kind=kind, mode=args.mode,
        alpha=args.alpha, checkpoint_ratio=args.checkpoint_ratio,
        prefix=_parse_prefix(args.prefix),
    )


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--until-value", type=int, default=None)
    p.add_argument("--mode", choices=("geometric", "site"), default="geometric")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--prefix", default="2")
    p.add_argument("--checkpoint-ratio", type=float, default=DEFAULT_CHECKPOINT_RATIO)
    p.add_argument("--config", default=None, help="JSON config merged under flags")


def cmd_simulate(args, parser) -> int:
    _merge_config(args, parser)
    config = _run_config(args)
    trace = run(config)
    write_trace_csv(trace, args.out)
    print(f"n={trace.n[-1]} P={trace.P[-1]} lambda={trace.lam[-1]:.6g}")
    return EXIT_OK


def cmd_diagnose(args, parser) -> int:
    _merge_config(args, parser)
    trace = read_trace_csv(args.trace)
    report = diag.build_report(trace, alpha_exp=args.alpha_exp, layer_a=args.layer_a)
    with open(args.report, "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    if args.enforce:
        failures = _threshold_checks(report)
        for name, ok in failures.items():
            print(f"{name}: {'pass' if ok else 'FAIL'}")
        if not all(failures.values()):
            return EXIT_ASSERT
    return EXIT_OK


def _threshold_checks(report: diag.DiagnosticsReport) -> dict[str, bool]:
    sv_ok = all(1.0 - 3.0 / math.log(x) <= r <= 1.0 + 1e-12
                for x, r in report.sv_ratios if x >= 10**3)
    kar_ok = all(0.85 <= v <= 1.0 + 1e-12
                 for n, v in report.karamata if 10**4 <= n <= 10**6)
    conc_ok = report.concentration[-1][3] < 5.0 if report.concentration else True
    gap_ok = report.max_gap_ratio <= 3.0
    up_ok = report.upcrossings.get("count", 0) == 0
    return {"sv_band": sv_ok, "karamata_band": kar_ok,
            "concentration_final": conc_ok, "gap_max": gap_ok,
            "upcrossings_zero": up_ok}


def cmd_ensemble(args, parser) -> int:
    _merge_config(args, parser)
    run_cfg = _run_config(args)
    config = EnsembleConfig(master_seed=args.seed, replicas=args.replicas,
                            run=run_cfg, parallelism=args.workers)
    result = run_ensemble(config, keep_traces=args.keep_traces)
    os.makedirs(args.out, exist_ok=True)
    write_summary_csv(result, os.path.join(args.out, "summary.csv"))
    usable = [n for n in result.checkpoints if n >= 3]
    if usable:
        cdf, stability = conjecture_cdf(result, usable[-1])
        write_zcdf_csv(cdf, os.path.join(args.out, f"zcdf_{usable[-1]}.csv"))
        if "ks" in stability:
            print(f"z-cdf stability ks({stability['n_prev']}, "
                  f"{stability['n_last']}) = {stability['ks']:.4f}")
    if args.keep_traces and result.traces:
        for i, tr in enumerate(result.traces):
            write_trace_csv(tr, os.path.join(args.out, f"trace_{i}.csv"))
    print(f"replicas={args.replicas} final_n={result.checkpoints[-1]}")
    return EXIT_OK


def cmd_conjecture(args, parser) -> int:
    _merge_config(args, parser)
    run_cfg = _run_config(args)
    config = EnsembleConfig(master_seed=args.seed, replicas=args.replicas,
                            run=run_cfg, parallelism=args.workers)
    result = run_ensemble(config)
    usable = [n for n in result.checkpoints if n >= 3]
    if not usable:
        raise ConfigError("horizon too small for the z statistic (needs n >= 3)")
    target = args.at if args.at is not None else usable[-1]
    cdf, stability = conjecture_cdf(result, target)
    write_zcdf_csv(cdf, args.out)
    msg = f"z-cdf at n={target}: {len(cdf)} jumps"
    if "ks" in stability:
        msg += (f"; stability ks({stability['n_prev']}, {stability['n_last']})"
                f" = {stability['ks']:.4f}")
    print(msg)
    return EXIT_OK


def cmd_primes(args, parser) -> int:
    _merge_config(args, parser)
    n_hi = args.max
    if n_hi < 7:
        raise ConfigError("--max must be at least 7")
    # Sieve far enough to hold the n_hi-th prime: upper Dusart-Rosser bound
    # plus slack.
    limit = int(n_hi * (math.log(n_hi) + math.log(math.log(max(n_hi, 3))))) + 100
    table = sieve(max(limit, 30))
    if args.check_dusart:
        bad = dusart_rosser_violations(table, 7, n_hi)
        print(f"{len(bad)} violations")
        if bad:
            return EXIT_ASSERT
    if args.trace:
        trace = read_trace_csv(args.trace)
        series = compare_to_primes(trace, table)
        out = args.out or "primes_compare.csv"
        with open(out, "w", newline="") as fh:
            fh.write("n,P,p_n,ratio\n")
            for (n, ratio), P in zip(series, trace.P):
                fh.write(f"{n},{P},{int(table.prime_list[n - 1])},{ratio!r}\n")
        print(f"wrote {out}")
    return EXIT_OK


def cmd_li(args, parser) -> int:
    _merge_config(args, parser)
    did = False
    if args.soldner:
        print(f"{soldner():.8f}")
        did = True
    if args.eval is not None:
        print(f"{li(args.eval):.12g}")
        did = True
    if args.inv is not None:
        print(f"{li_inv(args.inv):.12g}")
        did = True
    if not did:
        raise ConfigError("nothing to do: pass --eval, --inv or --soldner")
    return EXIT_OK


def cmd_domination(args, parser) -> int:
    _merge_config(args, parser)
    rng = rng_for_seed(args.seed)
    result = diag.domination_experiment(args.m, args.p, args.n,
                                        args.replicas, rng)
    band = 1.63 / math.sqrt(args.replicas)
    print(f"max_violation={result.max_violation:.6f} ks99_band={band:.6f}")
    return EXIT_OK if result.max_violation <= band else EXIT_ASSERT


def build_parser() -> _Parser:
    parser = _Parser(prog="renewalcov")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one trace and write its CSV")
    _add_run_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("diagnose", help="per-lemma diagnostics of a trace CSV")
    p.add_argument("--trace", required=True)
    p.add_argument("--alpha-exp", type=float, default=1.2)
    p.add_argument("--layer-a", type=float, default=0.5)
    p.add_argument("--report", required=True)
    p.add_argument("--assert", dest="enforce", action="store_true",
                   help="exit 3 when an acceptance threshold is violated")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("ensemble", help="parallel replica runs")
    _add_run_flags(p)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--keep-traces", action="store_true")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("conjecture", help="empirical CDF of the Z statistic")
    _add_run_flags(p)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--at", type=int, default=None,
                   help="checkpoint n (default: largest)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("primes", help="sieve checks and trace comparison")
    p.add_argument("--max", type=int, required=True,
                   help="largest prime index n to cover")
    p.add_argument("--check-dusart", action="store_true")
    p.add_argument("--trace", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("li", help="logarithmic integral utilities")
    p.add_argument("--eval", type=float, default=None)
    p.add_argument("--inv", type=float, default=None)
    p.add_argument("--soldner", action="store_true")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_li)

    p = sub.add_parser("domination", help="conditional stochastic domination")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--replicas", type=int, default=10**4)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_domination)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, parser)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConditioningUnreachable as exc:
        print(f"conditioning unreachable: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NumericFailure, OverflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
