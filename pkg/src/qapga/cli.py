"""Command-line front end: solve one instance, run the benchmark suite, or
query the exhaustive oracle.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or malformed
files, oracle size refusal).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from .ga import GaConfig, config_from_text, run
from .instance import QapError, parse_qaplib
from .oracle import DEFAULT_LIMIT, OracleLimitError, exhaustive_optimum

_DEFAULTS = GaConfig()


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# GaConfig field -> CLI destination, for --config files acting as defaults
_CONFIG_TO_FLAG = {
    "population_size": "pop",
    "crossover_rate": "cx_rate",
    "mutation_rate": "mut_rate",
    "max_generations": "generations",
    "target_cost": "target",
    "time_limit_s": "time_limit_s",
    "elitism_count": "elitism",
    "rng_seed": "seed",
}


def _add_ga_flags(p: argparse.ArgumentParser, base: dict):
    d = lambda flag, fallback: base.get(flag, fallback)
    p.add_argument("--config", type=Path, default=None,
                   help="flat key = value config file; explicit flags override it")
    p.add_argument("--pop", type=int, default=d("pop", _DEFAULTS.population_size),
                   help="population size")
    p.add_argument("--generations", type=int,
                   default=d("generations", _DEFAULTS.max_generations),
                   help="maximum number of generations")
    p.add_argument("--cx-rate", type=float,
                   default=d("cx_rate", _DEFAULTS.crossover_rate),
                   help="crossover probability")
    p.add_argument("--mut-rate", type=float,
                   default=d("mut_rate", _DEFAULTS.mutation_rate),
                   help="per-chromosome mutation probability")
    p.add_argument("--elitism", type=int,
                   default=d("elitism", _DEFAULTS.elitism_count),
                   help="number of elite survivors per generation")
    p.add_argument("--target", type=int, default=d("target", None),
                   help="stop once the best cost reaches this value")
    p.add_argument("--time-limit-s", type=float, default=d("time_limit_s", None),
                   help="wall-clock budget per run in seconds")


def _build_parser(config_defaults: dict | None = None) -> _Parser:
    base = config_defaults or {}
    parser = _Parser(prog="qapga", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    solve = sub.add_parser("solve", help="run the GA on one instance")
    solve.add_argument("instance", type=Path)
    _add_ga_flags(solve, base)
    solve.add_argument("--seed", type=int, default=base.get("seed", _DEFAULTS.rng_seed))

    bench = sub.add_parser("bench", help="run the benchmark suite")
    bench.add_argument("--dir", type=Path, required=True,
                       help="directory of QAPLIB .dat files")
    bench.add_argument("--baselines", type=Path, required=True,
                       help="best-known values CSV (name,best_known,source)")
    bench.add_argument("--seeds", type=str, default="1..10",
                       help="seed list: comma-separated or a..b range")
    _add_ga_flags(bench, base)
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.add_argument("--out", type=Path, default=None,
                       help="write the report here instead of stdout")
    bench.add_argument("--jobs", type=int, default=1,
                       help="parallel (instance, seed) runs")

    oracle = sub.add_parser("oracle", help="exhaustive optimum for small n")
    oracle.add_argument("instance", type=Path)
    oracle.add_argument("--limit", type=int, default=DEFAULT_LIMIT)

    return parser


def _parse_seeds(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        seeds = list(range(int(lo), int(hi) + 1))
    else:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    if not seeds:
        raise ValueError("empty seed list")
    return seeds


def _config_from(args) -> GaConfig:
    return GaConfig(
        population_size=args.pop,
        crossover_rate=args.cx_rate,
        mutation_rate=args.mut_rate,
        max_generations=args.generations,
        target_cost=args.target,
        time_limit_s=args.time_limit_s,
        elitism_count=args.elitism,
        rng_seed=getattr(args, "seed", _DEFAULTS.rng_seed),
    )


def _load_instance(path: Path):
    try:
        text = path.read_text()
    except OSError as e:
        raise QapError(f"cannot read {path}: {e}") from None
    return parse_qaplib(text, name=path.stem)


def _cmd_solve(args, out) -> int:
    inst = _load_instance(args.instance)
    result = run(inst, _config_from(args))
    perm_1based = " ".join(str(v + 1) for v in result.best.perm)
    print(f"instance: {inst.name} (n={inst.n})", file=out)
    print(f"best permutation: {perm_1based}", file=out)
    print(f"cost: {result.best.cost}", file=out)
    print(f"generations: {result.generations_run}", file=out)
    print(f"evaluations: {result.evaluations}", file=out)
    print(f"time_s: {result.wall_time_s:.3f}", file=out)
    return 0


def _cmd_bench(args, out) -> int:
    try:
        seeds = _parse_seeds(args.seeds)
    except ValueError as e:
        raise _UsageError(f"bad --seeds value {args.seeds!r}: {e}") from None
    try:
        baseline_text = args.baselines.read_text()
    except OSError as e:
        raise QapError(f"cannot read {args.baselines}: {e}") from None
    baselines = bench_mod.load_baselines(baseline_text)
    paths = sorted(args.dir.glob("*.dat"))
    if not paths:
        raise QapError(f"no .dat files found in {args.dir}")
    instances = [_load_instance(p) for p in paths]
    rows = bench_mod.run_suite(instances, baselines, _config_from(args), seeds,
                               jobs=args.jobs)
    report = bench_mod.emit_report(rows, args.format)
    if args.out is not None:
        args.out.write_text(report)
    else:
        out.write(report)
    return 0


def _cmd_oracle(args, out) -> int:
    inst = _load_instance(args.instance)
    result = exhaustive_optimum(inst, limit=args.limit)
    perm_1based = " ".join(str(v + 1) for v in result.argmin)
    print(f"instance: {inst.name} (n={inst.n})", file=out)
    print(f"optimum: {result.optimum}", file=out)
    print(f"argmin: {perm_1based}", file=out)
    print(f"explored: {result.explored}", file=out)
    return 0


def _config_file_defaults(argv):
    """Pre-scan argv for --config and turn the file into parser defaults,
    so explicitly passed flags still win."""
    argv = list(sys.argv[1:] if argv is None else argv)
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = Path(argv[i + 1])
        elif arg.startswith("--config="):
            path = Path(arg.split("=", 1)[1])
    if path is None:
        return {}
    try:
        cfg = config_from_text(path.read_text())
    except OSError as e:
        raise QapError(f"cannot read {path}: {e}") from None
    except ValueError as e:
        raise QapError(f"bad config file {path}: {e}") from None
    return {flag: getattr(cfg, field) for field, flag in _CONFIG_TO_FLAG.items()}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = _build_parser(_config_file_defaults(argv)).parse_args(argv)
    except _UsageError as e:
        print(e, file=err)
        return 1
    except QapError as e:
        print(f"error: {e}", file=err)
        return 2
    try:
        if args.subcommand == "solve":
            return _cmd_solve(args, out)
        if args.subcommand == "bench":
            return _cmd_bench(args, out)
        return _cmd_oracle(args, out)
    except _UsageError as e:
        print(e, file=err)
        return 1
    except (QapError, OracleLimitError, ValueError) as e:
        print(f"error: {e}", file=err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
