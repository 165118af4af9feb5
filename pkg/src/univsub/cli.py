"""Command-line driver: certify, enumerate, verify, selftest."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import flagsearch
from .patterns import (
    DEFAULT_BOUND,
    BoundExceeded,
    OddPattern,
    PatternError,
    certify,
    enumerate_patterns,
    is_bitriangular,
    pattern_characteristic_number,
    pattern_from_json,
    summary_csv,
)
from .selftest import corrupted_harmonic, format_table, run_checks
from .subspaces import Verdict

ENV_PREFIX = "UNIVSUB_"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
EXIT_BOUND = 4
EXIT_MISMATCH = 5

EPILOG = """\
exit codes:
  0  success (certified universal, count matches, all checks pass)
  1  selftest failure
  2  invalid input or I/O error
  3  certificate inconclusive
  4  enumeration bound exceeded (use --force)
  5  flag count mismatch or unstable count

Every option with a default can also be set through an environment
variable named UNIVSUB_<OPTION>, e.g. UNIVSUB_SEED=7 or UNIVSUB_JOBS=4.
"""


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    return default if raw is None else cast(raw)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def cmd_certify(args) -> int:
    try:
        pattern = pattern_from_json(_load_json(args.pattern))
        family = args.family or ("B" if isinstance(pattern, OddPattern) else "A")
        cert = certify(pattern, family)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(_dump(cert.to_json()), args.out)
    if cert.verdict is Verdict.UNIVERSAL_CERTIFIED:
        return EXIT_OK
    if cert.verdict is Verdict.UNIVERSAL_IFF and cert.C_I != 0:
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def cmd_enumerate(args) -> int:
    try:
        rows = list(
            enumerate_patterns(
                args.n, args.family or "A", args.filter, bound=args.bound, force=args.force, jobs=args.jobs
            )
        )
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text, counts = summary_csv(rows)
    if args.out and args.out.endswith(".json"):
        _emit(_dump([{"bitmask": m, **c.to_json()} for m, c in rows]), args.out)
    else:
        _emit(text, args.out)
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return EXIT_OK


def _problem_from_args(args) -> flagsearch.FlagProblem:
    data = _load_json(args.problem)
    pattern = pattern_from_json(data["pattern"])
    if isinstance(pattern, OddPattern):
        raise PatternError("flag search is implemented for complex matrices (family A) only")
    if "matrix" in data:
        A = flagsearch.matrix_from_json(data["matrix"])
    else:
        A = flagsearch.random_matrix(pattern.n, int(data["matrix_seed"]))
    return flagsearch.FlagProblem(
        A,
        pattern,
        tolerance=args.tolerance if args.tolerance is not None else float(data.get("tolerance", flagsearch.DEFAULT_TOLERANCE)),
        restarts=args.restarts if args.restarts is not None else data.get("restarts"),
        rng_seed=args.seed if args.seed is not None else int(data.get("seed", flagsearch.DEFAULT_SEED)),
    )


def cmd_verify(args) -> int:
    try:
        problem = _problem_from_args(args)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    census = flagsearch.collect_flags(problem, jobs=args.jobs)
    scan = flagsearch.tangent_sign_scan(problem.pattern, args.samples, problem.rng_seed)
    report = flagsearch.census_report(census, scan)
    report["seed"] = problem.rng_seed
    report["transversal"] = all(flagsearch.transversality_check(s, problem.pattern) for s in census.representatives)
    status = None
    if is_bitriangular(problem.pattern):
        expected = abs(pattern_characteristic_number(problem.pattern))
        report["expected_count"] = expected
        status = "MATCH" if census.stable and census.count == expected else "MISMATCH"
        report["status"] = status
    _emit(_dump(report), args.out)
    line = f"count={census.count} stable={census.stable}"
    if status:
        line += f" expected={report['expected_count']} {status}"
    print(line, file=sys.stderr if not args.out else sys.stdout)
    if not census.stable or status == "MISMATCH":
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_selftest(args) -> int:
    harmonic = corrupted_harmonic if args.inject_fault == "corrupt-f0" else None
    checks = run_checks(args.n_max, seed=args.seed or 0, harmonic=harmonic)
    print(format_table(checks))
    return EXIT_OK if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="univsub",
        description="Universality certificates for torus-invariant subspaces and numerical flag counts.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--family", choices=["A", "B", "C", "D"], default=_env("family", None))
        p.add_argument("--out", default=None, help="output path (.json or .csv); stdout if omitted")
        p.add_argument("--jobs", type=int, default=_env("jobs", 1, int))
        p.add_argument("--seed", type=int, default=_env("seed", None, int))

    p = sub.add_parser("certify", help="certificate for one pattern file", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("pattern")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("enumerate", help="certify every pattern of a size", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--filter", choices=["none", "simple", "bitriangular"], default=_env("filter", "none"))
    p.add_argument("--bound", type=int, default=_env("bound", DEFAULT_BOUND, int))
    p.add_argument("--force", action="store_true")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="count flags numerically and compare with |C_I|", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("problem")
    p.add_argument("--tolerance", type=float, default=_env("tolerance", None, float))
    p.add_argument("--restarts", type=int, default=_env("restarts", None, int))
    p.add_argument("--samples", type=int, default=_env("samples", 1000, int))
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run the invariant-theory consistency checks", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n-max", type=int, default=_env("n_max", 3, int))
    p.add_argument("--inject-fault", choices=["corrupt-f0"], default=None, help=argparse.SUPPRESS)
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
