"""Command-line front end (``xchannel`` / ``python -m xchannel``).

Exit codes: 0 success, 1 verification or oracle failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .errors import OracleScopeError, OrderingError, UnsupportedConfigError, XChannelError
from .oracle import ORACLE_MAX_ANTENNAS, oracle_max_dof
from .planner import AntennaConfig, BLOCK_NAMES, classify, format_rational, iter_configs, plan_blocks
from .sim import TrialConfig, run_trials
from .synth import generate_channels, synthesize
from .verify import verify_all

__all__ = ["main", "build_parser", "GOLDEN_EXAMPLES"]

log = logging.getLogger("xchannel")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

#: worked examples and their expected total DoF
GOLDEN_EXAMPLES = (
    ((2, 2, 2, 1), Fraction(5, 2)),
    ((7, 6, 5, 4), Fraction(17, 2)),
    ((6, 3, 3, 3), Fraction(5)),
    ((8, 4, 4, 3), Fraction(13, 2)),
    ((4, 4, 3, 2), Fraction(5)),
    ((8, 7, 5, 5), Fraction(10)),
    ((5, 4, 4, 3), Fraction(6)),
    ((7, 4, 4, 4), Fraction(7)),
    ((7, 6, 6, 5), Fraction(17, 2)),
)

CSV_HEADER = ["m1", "m2", "n1", "n2", "case", "dof", "bound", "gap"]


class UsageError(Exception):
    pass


def _configure_logging() -> None:
    level = os.environ.get("XCHAN_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_config_args(p: argparse.ArgumentParser) -> None:
    for name in ("m1", "m2", "n1", "n2"):
        p.add_argument(f"--{name}", type=_positive, required=True)


def _config(args) -> AntennaConfig:
    return AntennaConfig(args.m1, args.m2, args.n1, args.n2)


def _planned(cfg: AntennaConfig):
    tag = classify(cfg)
    if not tag.supported:
        raise UnsupportedConfigError(f"{cfg} is {tag}: no plan keeps every message non-empty")
    return plan_blocks(cfg, tag)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# plan
# --------------------------------------------------------------------------

def cmd_plan(args) -> int:
    p = _planned(_config(args))
    if args.json:
        print(json.dumps(p.to_dict(), indent=2))
        return EXIT_OK
    print(f"config   {p.config}")
    print(f"case     {p.tag}")
    print("blocks   " + " ".join(f"{n}={getattr(p, n)}" for n in BLOCK_NAMES))
    print(f"Q        Q11={p.Q11} Q21={p.Q21} Q12={p.Q12} Q22={p.Q22}")
    print(f"dof      {format_rational(p.dof)}")
    print(f"bound    {format_rational(p.outer_bound)}")
    print(f"gap      {format_rational(p.gap)}")
    return EXIT_OK


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

def _sweep_row(job):
    cfg, with_oracle = job
    p = plan_blocks(cfg, classify(cfg))
    row = [cfg.M1, cfg.M2, cfg.N1, cfg.N2, p.tag.case.value,
           format_rational(p.dof), format_rational(p.outer_bound), format_rational(p.gap)]
    mismatch = False
    if with_oracle:
        o = oracle_max_dof(cfg, p.tag)
        row.append(format_rational(o))
        mismatch = o != p.dof
    return row, mismatch


def _pool_map(fn, jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return [fn(j) for j in jobs]


def cmd_sweep(args) -> int:
    if args.oracle and args.max_antennas > ORACLE_MAX_ANTENNAS:
        raise UsageError(f"--oracle supports --max-antennas <= {ORACLE_MAX_ANTENNAS}")
    configs = sorted(iter_configs(args.max_antennas))
    results = _pool_map(_sweep_row, [(c, args.oracle) for c in configs], args.workers)
    header = CSV_HEADER + (["oracle_dof"] if args.oracle else [])
    lines = [",".join(header)]
    mismatches = 0
    for row, bad in results:
        lines.append(",".join(str(v) for v in row))
        if bad:
            mismatches += 1
            log.error("oracle mismatch at (%s)", ",".join(str(v) for v in row[:4]))
    _emit("\n".join(lines) + "\n", args.csv)
    if mismatches:
        print(f"{mismatches} oracle mismatches", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def _verify_seed(job):
    cfg, base, s = job
    p = plan_blocks(cfg, classify(cfg))
    ch = generate_channels(cfg, (base, s, 0))
    pre = synthesize(ch, p, (base, s, 1))
    return verify_all(ch, p, pre)


def cmd_verify(args) -> int:
    cfg = _config(args)
    p = _planned(cfg)
    reports = _pool_map(_verify_seed, [(cfg, args.seed, s) for s in range(args.seeds)], args.workers)
    passed = sum(r.passed for r in reports)
    if args.json:
        print(json.dumps({
            "config": str(cfg),
            "case": p.tag.case.value,
            "dof": format_rational(p.dof),
            "passed": passed,
            "seeds": args.seeds,
            "reports": [r.to_dict() for r in reports],
        }, indent=2))
    else:
        for s, r in enumerate(reports):
            if not r.passed:
                print(f"seed {s}: FAIL {','.join(r.failures())}")
        print(f"{cfg} {p.tag.case.value} dof={format_rational(p.dof)} {passed}/{args.seeds} pass")
    return EXIT_OK if passed == args.seeds else EXIT_FAIL


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {args.config}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}")
    try:
        tc = TrialConfig.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"config file is missing or has a malformed field: {exc}")
    if args.seed is not None:
        tc = TrialConfig(tc.cfg, tc.Q, tc.snr_db_list, tc.trials, args.seed, tc.candidates)
    _planned(tc.cfg)
    result = run_trials(tc, workers=args.workers)
    text = result.to_csv() if args.format == "csv" else result.to_json(indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# examples
# --------------------------------------------------------------------------

def cmd_examples(args) -> int:
    failures = 0
    for idx, (dims, expected) in enumerate(GOLDEN_EXAMPLES):
        cfg = AntennaConfig(*dims)
        p = _planned(cfg)
        ch = generate_channels(cfg, (args.seed, idx, 0))
        rep = verify_all(ch, p, synthesize(ch, p, (args.seed, idx, 1)))
        ok = p.dof == expected and rep.passed and rep.achieved_dof == expected
        failures += not ok
        status = "OK" if ok else "MISMATCH " + ",".join(rep.failures() or ["dof"])
        print(f"{cfg} dof={format_rational(p.dof)} {status}")
    return EXIT_OK if failures == 0 else EXIT_FAIL


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xchannel",
        description="Plan, synthesize and verify interference alignment for 2x2 MIMO X channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="print the block plan of one configuration")
    _add_config_args(p)
    p.add_argument("--json", action="store_true", help="emit the plan as JSON")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="tabulate every valid configuration up to K antennas")
    p.add_argument("--max-antennas", type=_positive, required=True, metavar="K")
    p.add_argument("--oracle", action="store_true", help="add the brute-force optimum column")
    p.add_argument("--csv", metavar="PATH", help="write the CSV here instead of stdout")
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="synthesize and verify over many channel seeds")
    _add_config_args(p)
    p.add_argument("--seeds", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo SER and DoF-slope run from a JSON config")
    p.add_argument("--config", required=True, metavar="FILE")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=None, help="override the seed in the config file")
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("examples", help="check the nine worked examples end to end")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrderingError, UnsupportedConfigError, OracleScopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except XChannelError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
