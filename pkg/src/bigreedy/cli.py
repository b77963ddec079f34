"""Command line entry point: ``bigreedy {gen,run,oracle,validate,bench}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import strong, weak
from .exceptions import BudgetExceededError, ValidationFailure
from .harness import ALGORITHMS, FAMILIES, grid_oracle, run_experiment
from .objective import generate, load_instance, save_instance, validate_submodularity

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_gen(args) -> int:
    model = generate(args.family, args.n, args.seed)
    save_instance(model, args.out)
    _emit({"kind": model.kind, "n": model.n, "seed": args.seed, "out": str(args.out)})
    return EXIT_OK


def cmd_run(args) -> int:
    obj = load_instance(args.instance)
    if args.algo == "game":
        config = weak.RunConfig(args.epsilon, args.order, args.seed, record_trace=bool(args.trace))
        result = weak.run(obj, config)
    else:
        result = strong.run(obj, args.epsilon, order=args.order, seed=args.seed)
    if args.trace:
        records = [step.to_dict() for step in result.trace]
        Path(args.trace).write_text(json.dumps(records, indent=2) + "\n")
    _emit({"solution": result.solution.tolist(), **result.report.to_dict()})
    return EXIT_OK


def cmd_oracle(args) -> int:
    obj = load_instance(args.instance)
    point, value = grid_oracle(obj, args.grid)
    _emit({"point": point.tolist(), "value": value, "grid": args.grid})
    return EXIT_OK


def cmd_validate(args) -> int:
    obj = load_instance(args.instance)
    report = validate_submodularity(obj, args.variant, probes=args.probes, seed=args.seed)
    _emit({
        "variant": report.variant,
        "passed": report.passed,
        "worst_violation": report.worst_violation if report.worst_violation > -float("inf") else None,
        "tolerance": report.tolerance,
        "probes": report.probes,
    })
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_bench(args) -> int:
    summary = run_experiment(
        args.family, args.n, args.trials, args.seed, args.epsilon, args.algorithms,
        order=args.order, n_jobs=args.jobs,
    )
    summary.write_json(args.out)
    if args.csv:
        summary.write_csv(args.csv)
    _emit({"family": args.family, "n": args.n, "trials": args.trials, "summary": summary.stats})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigreedy",
        description="Bi-greedy maximization of continuous submodular functions.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one algorithm on an instance")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--order", choices=("sequential", "random"), default="sequential")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", type=Path)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="exhaustive grid maximum")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", help="check the Hessian sign pattern")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--variant", choices=("strong", "weak"), required=True)
    p.add_argument("--probes", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="repeated trials on fresh instances")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--order", choices=("sequential", "random"), default="random")
    p.add_argument("--algorithms", nargs="+", choices=ALGORITHMS, default=list(ALGORITHMS))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--csv", type=Path)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ValidationFailure as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    raise SystemExit(main())
