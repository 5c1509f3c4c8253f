"""Command line interface: ``deltaorient run|exact|convert|profile|gen|suite``.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import bench
from .algorithms import KINDS, AlgorithmConfig
from .errors import OrientationError, ParseError
from .exact import exact_optimum
from .io_ingest import final_graph, gen_random_graph, normalize, parse_edits, parse_metis, static_to_stream, write_edits, write_metis

EXIT_USAGE, EXIT_PARSE, EXIT_RUNTIME = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _input_type(path: str, given: str | None) -> str:
    if given:
        return given
    suffix = Path(path).suffix.lower()
    if suffix in (".edits", ".txt", ".stream"):
        return "edits"
    return "metis"


def load_instance(path: str, input_type: str | None, seed: int) -> bench.Instance:
    name = Path(path).stem
    if _input_type(path, input_type) == "metis":
        return bench.Instance.from_static(name, parse_metis(path), seed)
    return bench.Instance.from_sequence(name, parse_edits(path))


def _cmd_run(args: argparse.Namespace) -> int:
    defaults = dict(d=args.depth, r=args.reps, k=args.k, beta=args.beta, alpha_bound=args.alpha_bound)
    try:
        configs = [AlgorithmConfig.parse(spec, **defaults) for spec in args.algo]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    instances = [load_instance(p, args.input_type, args.seed) for p in args.input]
    meta = [f"base_seed: {args.seed}", "quality_aggregation: geometric mean of final_delta over repetitions"]
    for inst in instances:
        for line in inst.report.lines():
            print(f"{inst.name}.{line}", file=sys.stderr)
            meta.append(f"{inst.name}.{line}")
    records = bench.run_matrix(
        configs, instances, args.repetitions, base_seed=args.seed, warmup=args.warmup, workers=args.workers
    )
    bench.write_records_csv(records, args.out)
    for alg, row in sorted(bench.value_table(records, "delta").items()):
        for inst, value in sorted(row.items()):
            meta.append(f"geomean_final_delta.{alg}.{inst}: {value:.6g}")
    Path(str(args.out) + ".meta").write_text("\n".join(meta) + "\n", encoding="utf-8")
    failed = [r for r in records if r.error]
    for r in failed:
        print(f"error: {r.algorithm} on {r.instance} rep {r.repetition}: {r.error}", file=sys.stderr)
    return EXIT_RUNTIME if failed else 0


def _cmd_exact(args: argparse.Namespace) -> int:
    if _input_type(args.input, args.input_type) == "metis":
        g = parse_metis(args.input)
    else:
        g = final_graph(normalize(parse_edits(args.input))[0])
    result = exact_optimum(g)
    print(f"n: {g.n}")
    print(f"m: {g.m}")
    print(f"phi: {result.phi}")
    if args.witness:
        text = "".join(f"{u} {v}\n" for u, v in result.witness)
        Path(args.witness).write_text(text, encoding="utf-8")
    return 0


def _cmd_convert(args: argparse.Namespace) -> int:
    write_edits(static_to_stream(parse_metis(args.input), args.seed), args.out)
    return 0


def _cmd_profile(args: argparse.Namespace) -> int:
    records = bench.read_records_csv(args.results)
    profile = bench.performance_profile(bench.value_table(records, args.metric))
    Path(args.out).write_text(bench.profile_to_csv(profile), encoding="utf-8")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    write_metis(gen_random_graph(args.n, args.m, args.seed), args.out)
    return 0


def _cmd_suite(args: argparse.Namespace) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for inst in bench.synthetic_suite(args.scale):
        write_edits(inst.seq, out / f"{inst.name}.edits")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="deltaorient", description="Dynamic low out-degree edge orientation benchmarks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run algorithms over instances and write a results CSV")
    run.add_argument(
        "--algo", action="append", required=True,
        help=f"one of {', '.join(KINDS)}, optionally with inline parameters, e.g. rpath:d=50,r=10; repeatable",
    )
    run.add_argument("--depth", type=int, help="search depth d (bfs, rpath)")
    run.add_argument("--reps", type=int, help="walks per insertion r (rpath)")
    run.add_argument("--k", type=int, help="flips per update (kflips)")
    run.add_argument("--beta", type=Fraction, help="bound growth factor in (1, 2] (bf-adaptive)")
    run.add_argument("--alpha-bound", type=int, help="fixed out-degree bound (bf)")
    run.add_argument("--input", action="append", required=True, help="instance file; repeatable")
    run.add_argument("--input-type", choices=("metis", "edits"))
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--repetitions", type=int, default=10)
    run.add_argument("--warmup", action=argparse.BooleanOptionalAction, default=True)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--out", required=True)
    run.set_defaults(func=_cmd_run)

    ex = sub.add_parser("exact", help="compute the optimum max out-degree of the final graph")
    ex.add_argument("--input", required=True)
    ex.add_argument("--input-type", choices=("metis", "edits"))
    ex.add_argument("--witness", help="write an optimal orientation as 'u v' lines")
    ex.set_defaults(func=_cmd_exact)

    conv = sub.add_parser("convert", help="turn a METIS graph into a random-order insertion stream")
    conv.add_argument("--input", required=True)
    conv.add_argument("--seed", type=int, default=0)
    conv.add_argument("--out", required=True)
    conv.set_defaults(func=_cmd_convert)

    prof = sub.add_parser("profile", help="performance profile from a results CSV")
    prof.add_argument("--results", required=True)
    prof.add_argument("--metric", choices=("delta", "time"), default="delta")
    prof.add_argument("--out", required=True)
    prof.set_defaults(func=_cmd_profile)

    gen = sub.add_parser("gen", help="uniform random simple graph in METIS format")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    suite = sub.add_parser("suite", help="write the pinned synthetic suite as edits files")
    suite.add_argument("--out-dir", required=True)
    suite.add_argument("--scale", type=float, default=1.0)
    suite.set_defaults(func=_cmd_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"deltaorient: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FileNotFoundError) as exc:
        print(f"deltaorient: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OrientationError, ValueError) as exc:
        print(f"deltaorient: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
