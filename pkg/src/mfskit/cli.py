"""Command-line front end.

Subcommands: generate, mfs, df, reduce, simulate.  Output is JSON by
default (text and csv renderings where they make sense); every command is
deterministic given its flags and --seed.

Exit codes: 0 success, 2 invalid input, 3 resource-limit refusal,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__
from .errors import DEFAULT_LIMITS, Limits, MfskitError, ResourceLimitError
from .fraud import (
    brute_force_expected_max,
    distance_fraud_probability,
    expected_max_tree,
    expected_max_tree_float,
    monte_carlo_expected_max,
)
from .generators import make_generalized_tree, make_poulidor, make_tree
from .graphs import graph_to_dict, read_graph, validate_binary_instance
from .cnf import parse_dimacs
from .protocol import (
    AdversaryStrategy,
    ProtocolConfig,
    estimate_success_rate,
    run_session,
)
from .reduction import check_maximal_walks, reduce_sat_to_mfs, verify_reduction
from .walks import most_frequent_sequence

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4


def _limits_from_args(args) -> Limits:
    base = DEFAULT_LIMITS
    return Limits(
        max_walks=args.max_walks if args.max_walks else base.max_walks,
        max_sequences=args.max_sequences if args.max_sequences else base.max_sequences,
        max_exact_rounds=(
            args.max_exact_rounds if args.max_exact_rounds else base.max_exact_rounds
        ),
        max_brute_vertices=(
            args.max_brute_vertices
            if args.max_brute_vertices
            else base.max_brute_vertices
        ),
    )


def _emit(args, payload: dict | list) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        flat = [_flatten(row) for row in rows]
        fieldnames: list[str] = []
        for row in flat:
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(flat)
        sys.stdout.write(buf.getvalue())
    else:  # text
        print(_as_text(payload))


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _as_text(payload, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_as_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(_as_text(item, indent) for item in payload)
    return f"{pad}{payload}"


def _write_or_print(args, data: dict) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    else:
        print(json.dumps(data, indent=2))


def _parse_labels(raw: str) -> tuple[str, ...]:
    if "," in raw:
        return tuple(part.strip() for part in raw.split(","))
    return tuple(raw.strip())


# -- subcommands ----------------------------------------------------------------


def _cmd_generate(args) -> int:
    if args.kind == "tree":
        g = make_tree(args.rounds, _parse_labels(args.labels) if args.labels else None,
                      seed=args.seed if args.labels is None else None)
    elif args.kind == "poulidor":
        g = make_poulidor(
            args.rounds,
            _parse_labels(args.labels) if args.labels else None,
            seed=args.seed if args.labels is None else None,
        )
    else:
        if args.fan is None:
            raise MfskitError("gentree needs --fan (half the root degree)")
        g = make_generalized_tree(
            args.fan,
            args.rounds,
            _parse_labels(args.labels) if args.labels else None,
            seed=args.seed if args.labels is None else None,
        )
    _write_or_print(args, graph_to_dict(g))
    return EXIT_OK


def _cmd_mfs(args) -> int:
    limits = _limits_from_args(args)
    g = read_graph(args.graph)
    t0 = time.perf_counter()
    result = most_frequent_sequence(
        g, args.start, args.length, mode=args.mode, limits=limits
    )
    elapsed = time.perf_counter() - t0
    _emit(
        args,
        {
            "sequence": result.sequence_str,
            "count": result.count,
            "tie_count": result.tie_count,
            "length": args.length,
            "start": args.start,
            "mode": args.mode,
            "elapsed_seconds": round(elapsed, 6),
        },
    )
    return EXIT_OK


def _df_report_exact(n: int, limits: Limits, workers: int) -> dict:
    result = expected_max_tree(n, limits=limits, workers=workers)
    report = distance_fraud_probability(result.expected_max, n, "exact-dp")
    return report.to_json_dict()


def _cmd_df(args) -> int:
    limits = _limits_from_args(args)
    workers = args.threads
    if args.method == "exact-tree":
        if args.sweep:
            lo, hi = args.sweep
            payload = []
            for n in range(lo, hi + 1):
                if args.float:
                    e, _cdf = expected_max_tree_float(n, limits=limits, force=args.force)
                    payload.append(
                        {
                            "method": "exact-dp-float",
                            "rounds": n,
                            "expected_max": e,
                            "success_probability": e / (1 << n),
                        }
                    )
                else:
                    payload.append(_df_report_exact(n, limits, workers))
            _emit(args, payload)
            return EXIT_OK
        if args.float:
            e, _cdf = expected_max_tree_float(args.rounds, limits=limits, force=args.force)
            _emit(
                args,
                {
                    "method": "exact-dp-float",
                    "rounds": args.rounds,
                    "expected_max": e,
                    "success_probability": e / (1 << args.rounds),
                },
            )
            return EXIT_OK
        _emit(args, _df_report_exact(args.rounds, limits, workers))
        return EXIT_OK

    graph = _df_graph(args)
    if args.method == "brute":
        expected = brute_force_expected_max(graph, args.start, args.rounds, limits=limits)
        report = distance_fraud_probability(expected, args.rounds, "brute-force")
        _emit(args, report.to_json_dict())
        return EXIT_OK
    report = monte_carlo_expected_max(
        graph, args.start, args.rounds, args.samples, args.seed, limits=limits
    )
    _emit(args, report.to_json_dict())
    return EXIT_OK


def _df_graph(args):
    if args.graph:
        return read_graph(args.graph)
    if args.protocol == "tree":
        return make_tree(args.rounds)
    if args.protocol == "poulidor":
        return make_poulidor(args.rounds)
    raise MfskitError("need --graph FILE or --protocol {tree,poulidor}")


def _cmd_reduce(args) -> int:
    limits = _limits_from_args(args)
    with open(args.cnf, "r", encoding="utf-8") as fh:
        formula = parse_dimacs(fh.read())
    r = reduce_sat_to_mfs(formula)
    data = graph_to_dict(r.graph)
    data["roles"] = {str(v): role for v, role in enumerate(r.roles)}
    data["params"] = {
        "variables": r.params.variable_count,
        "clauses": r.params.clause_count,
        "tree_depth": r.params.tree_depth,
        "target_length": r.params.target_length,
    }
    _write_or_print(args, data)
    if args.verify:
        verdict = verify_reduction(formula, limits=limits)
        walks = check_maximal_walks(r, limits=limits)
        summary = {
            "equivalence_ok": verdict.ok,
            "walk_lengths_ok": walks.ok,
            "mfs_count": verdict.mfs_count,
            "clause_count": verdict.clause_count,
            "satisfiable": verdict.satisfiable,
            "detail": verdict.detail,
        }
        print(json.dumps(summary, indent=2), file=sys.stderr)
        if not (verdict.ok and walks.ok):
            return EXIT_VERIFY
    return EXIT_OK


def _cmd_simulate(args) -> int:
    limits = _limits_from_args(args)
    if args.graph:
        graph = read_graph(args.graph)
        check = validate_binary_instance(graph)
        if not check.ok:
            raise MfskitError("; ".join(check.violations))
    elif args.protocol == "tree":
        graph = make_tree(args.rounds)
    elif args.protocol == "poulidor":
        graph = make_poulidor(args.rounds)
    else:
        raise MfskitError("need --graph FILE or --protocol {tree,poulidor}")
    config = ProtocolConfig(
        graph=graph,
        start=args.start,
        rounds=args.rounds,
        key=bytes.fromhex(args.key) if args.key else b"shared-secret",
        trials=args.trials,
        seed=args.seed,
    )
    strategy = AdversaryStrategy(args.adversary)
    if args.transcripts:
        with open(args.transcripts, "w", encoding="utf-8") as fh:
            for t in range(config.trials):
                transcript = run_session(config, strategy, trial_index=t, limits=limits)
                fh.write(json.dumps(transcript.to_json_dict()) + "\n")
    report = estimate_success_rate(config, strategy, limits=limits)
    _emit(args, report.to_json_dict())
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfskit",
        description="Distance-fraud analysis for graph-based distance bounding",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for parallelizable sweeps")
    for name in ("max-walks", "max-sequences", "max-exact-rounds", "max-brute-vertices"):
        common.add_argument(f"--{name}", type=int, default=None,
                            help=f"override the {name.replace('-', '_')} limit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="emit a protocol graph")
    p.add_argument("kind", choices=("tree", "poulidor", "gentree"))
    p.add_argument("-n", "--rounds", type=int, required=True)
    p.add_argument("-m", "--fan", type=int, default=None,
                   help="gentree only: the root has 2*fan children")
    p.add_argument("--labels", default=None,
                   help="explicit labels, e.g. 010... or comma-separated")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("mfs", parents=[common], help="most frequent sequence")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--mode", choices=("auto", "seq", "walk"), default="auto")
    p.set_defaults(func=_cmd_mfs)

    p = sub.add_parser("df", parents=[common], help="distance-fraud probability")
    p.add_argument("method", choices=("exact-tree", "brute", "mc"))
    p.add_argument("-n", "--rounds", type=int, default=None)
    p.add_argument("--sweep", type=_parse_range, default=None, metavar="LO:HI",
                   help="exact-tree only: report a whole range of rounds")
    p.add_argument("--float", action="store_true",
                   help="floating-point mode (exact-tree)")
    p.add_argument("--force", action="store_true",
                   help="override the round limit (float mode only)")
    p.add_argument("--graph", default=None, help="graph JSON file (brute/mc)")
    p.add_argument("--protocol", choices=("tree", "poulidor"), default=None)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--samples", type=int, default=100000, help="mc only")
    p.set_defaults(func=_cmd_df)

    p = sub.add_parser("reduce", parents=[common],
                       help="SAT to frequency-gadget reduction")
    p.add_argument("cnf", help="DIMACS CNF file")
    p.add_argument("--out", default=None, help="output graph file")
    p.add_argument("--verify", action="store_true",
                   help="cross-check against exhaustive satisfiability")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("simulate", parents=[common], help="run protocol sessions")
    p.add_argument("--graph", default=None)
    p.add_argument("--protocol", choices=("tree", "poulidor"), default=None)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("-n", "--rounds", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--adversary",
                   choices=("honest", "early-reply", "greedy-early-reply"),
                   default="honest")
    p.add_argument("--key", default=None, help="shared key as hex")
    p.add_argument("--transcripts", default=None,
                   help="write one JSON transcript per line to this file")
    p.set_defaults(func=_cmd_simulate)
    return parser


def _parse_range(raw: str) -> tuple[int, int]:
    lo, _, hi = raw.partition(":")
    try:
        pair = (int(lo), int(hi))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {raw!r}") from None
    if pair[0] < 1 or pair[1] < pair[0]:
        raise argparse.ArgumentTypeError(f"bad range {raw!r}")
    return pair


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "df" and args.method == "exact-tree":
            if not args.sweep and args.rounds is None:
                raise MfskitError("exact-tree needs --rounds or --sweep")
        if args.command == "df" and args.method in ("brute", "mc"):
            if args.rounds is None:
                raise MfskitError(f"{args.method} needs --rounds")
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MfskitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
