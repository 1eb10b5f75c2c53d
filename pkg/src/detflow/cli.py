"""Command-line front end.

Every command prints one JSON document on stdout (``--human`` switches to
plain text).  Failures print ``{"error": category, "message": ...}`` on
stderr and exit nonzero: 3 for unreadable input, 4 for an invalid network,
5 for any other library error, 1 for unexpected crashes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import List, Optional

from . import netio
from .codec import build_relay_plan, decode, end_to_end_matrix, transmit
from .errors import DetflowError, InvalidNetworkError, ParseError
from .network import RandomParams, random_network, validate
from .oracle import DEFAULT_BOUND, capacity_bits, min_cut_exhaustive
from .pathfinder import Trace, find_paths
from .verify import Overrides, RunReport, digest, verify

EXIT_PARSE, EXIT_INVALID, EXIT_OTHER, EXIT_INTERNAL = 3, 4, 5, 1


def _load(path: str):
    if path.startswith("fixture:"):
        return netio.load_fixture(path.split(":", 1)[1])
    return netio.load(path)


def _load_valid(path: str):
    net = _load(path)
    problems = validate(net)
    if problems:
        raise InvalidNetworkError(problems)
    return net


def _emit(args, doc: dict, human: Optional[str] = None) -> None:
    if args.human and human is not None:
        print(human)
    else:
        print(json.dumps(doc, indent=2 if args.human else None, sort_keys=True))


def cmd_capacity(args) -> int:
    t0 = time.perf_counter()
    net = _load_valid(args.network)
    loaded = time.perf_counter() - t0
    trace = Trace() if args.trace else None
    t0 = time.perf_counter()
    paths = find_paths(net, trace)
    report = RunReport(None, digest(net), paths.K, capacity_bits(paths.K, net.field.q),
                       timings={"load": loaded, "paths": time.perf_counter() - t0})
    if args.oracle:
        t0 = time.perf_counter()
        cut = min_cut_exhaustive(net, bound=args.oracle_bound)
        report.timings["oracle"] = time.perf_counter() - t0
        report.oracle_value, report.witness, report.agreement = cut.value, list(cut.v1), cut.value == paths.K
    doc = {"K": paths.K, "q": net.field.q, "capacity_bits": report.capacity_bits}
    if args.paths:
        doc["paths"] = paths.to_dict()["paths"]
    if trace is not None:
        doc["trace"] = trace.lines
    if args.report or args.oracle:
        doc["report"] = report.to_dict()
    human = f"K = {paths.K}  ({report.capacity_bits:g} bits per use over GF({net.field.q}))"
    if args.paths:
        human += "".join("\n  " + " ".join(f"(x{x},y{y})" for x, y in p) for p in paths.paths)
    _emit(args, doc, human)
    return 0


def _overrides(args) -> Overrides:
    return Overrides(layers=args.layers, max_nodes=args.max_nodes, max_ports=args.max_ports,
                     density=args.density, q=args.field)


def cmd_verify(args) -> int:
    summary = verify(args.count, args.seed, _overrides(args), args.oracle_bound)
    if not args.reports:
        summary.pop("reports")
    human = (
        f"{summary['agree']}/{summary['count']} agree in {summary['seconds']}s; "
        f"mismatches {summary['mismatches']}, decode failures {summary['decode_failures']}, "
        f"errors {len(summary['errors'])}"
    )
    _emit(args, summary, human)
    ok = not (summary["mismatches"] or summary["decode_failures"] or summary["errors"])
    return 0 if ok else EXIT_OTHER


def cmd_gen(args) -> int:
    from .verify import params_for_seed

    if args.random_params:
        params = params_for_seed(args.seed, _overrides(args))
    else:
        params = RandomParams(
            num_layers=args.layers if args.layers is not None else 4,
            max_nodes=args.max_nodes,
            max_inputs=args.max_ports,
            max_outputs=args.max_ports,
            density=args.density if args.density is not None else 0.6,
            q=args.field if args.field is not None else 2,
        )
    net = random_network(params, args.seed)
    text = netio.dumps(net)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    net = _load_valid(args.network)
    cut = min_cut_exhaustive(net, bound=args.oracle_bound, monotone=args.monotone)
    doc = {"value": cut.value, "value_bits": cut.value_bits, "witness": list(cut.v1)}
    _emit(args, doc, f"min cut {cut.value} ({cut.value_bits:g} bits), v1 = {{{', '.join(cut.v1)}}}")
    return 0


def _symbols(text: str) -> List[int]:
    try:
        return [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"symbols must be integers, got {text!r}") from None


def cmd_simulate(args) -> int:
    net = _load_valid(args.network)
    paths = find_paths(net)
    plan = build_relay_plan(net, paths)
    symbols = _symbols(args.symbols) if args.symbols is not None else [0] * paths.K
    observed = transmit(plan, symbols)
    decoded = decode(plan, observed)
    t = end_to_end_matrix(plan)
    doc = {
        "K": paths.K,
        "symbols": symbols,
        "observations": observed,
        "destination_outputs": plan.destination_outputs,
        "decoded": decoded,
        "ok": decoded == symbols,
        "end_to_end": [list(r) for r in t.rows],
    }
    _emit(args, doc, f"sent {symbols} observed {observed} decoded {decoded}")
    return 0 if decoded == symbols else EXIT_OTHER


def cmd_export_dot(args) -> int:
    net = _load_valid(args.network)
    paths = find_paths(net) if args.paths else None
    text = netio.to_dot(net, paths)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    net = _load(args.network)
    problems = validate(net)
    doc = {"valid": not problems, "violations": [{"code": v.code, "detail": v.detail} for v in problems]}
    _emit(args, doc, "valid" if not problems else "\n".join(str(v) for v in problems))
    return 0 if not problems else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detflow", description="Unicast capacity of layered linear deterministic networks.")
    parser.add_argument("--human", action="store_true", help="plain text instead of JSON")
    parser.add_argument("--json", dest="human", action="store_false", help="JSON output (the default)")
    sub = parser.add_subparsers(dest="command", required=True)

    def network_arg(p):
        p.add_argument("network", help="network JSON file, or fixture:NAME for a bundled example")

    def gen_flags(p):
        p.add_argument("--layers", type=int, default=None, help="number of node layers")
        p.add_argument("--max-nodes", type=int, default=3, help="max nodes per relay layer")
        p.add_argument("--max-ports", type=int, default=3, help="max inputs/outputs per node")
        p.add_argument("--density", type=float, default=None, help="channel probability")
        p.add_argument("--field", type=int, default=None, help="field order q")

    p = sub.add_parser("capacity", help="run the path search")
    network_arg(p)
    p.add_argument("--paths", action="store_true", help="include the paths found")
    p.add_argument("--trace", action="store_true", help="include the search trace")
    p.add_argument("--oracle", action="store_true", help="also run the exhaustive min cut")
    p.add_argument("--report", action="store_true", help="include the full run report")
    p.add_argument("--oracle-bound", type=int, default=DEFAULT_BOUND)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("verify", help="compare path count and min cut over seeded random networks")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--oracle-bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--reports", action="store_true", help="include per-seed reports")
    gen_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random network")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-params", action="store_true", help="draw parameters from the seed like verify does")
    p.add_argument("-o", "--output")
    gen_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exhaustive min cut")
    network_arg(p)
    p.add_argument("--oracle-bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--monotone", action="store_true", help="skip partitions with isolated v1 relays")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="send symbols along the paths and decode them")
    network_arg(p)
    p.add_argument("--symbols", help="comma separated field elements, one per path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export-dot", help="Graphviz rendering")
    network_arg(p)
    p.add_argument("--paths", action="store_true", help="draw the paths found in bold")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("validate", help="list structural violations")
    network_arg(p)
    p.set_defaults(func=cmd_validate)
    return parser


def _fail(category: str, message: str, code: int) -> int:
    print(json.dumps({"error": category, "message": message}), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(exc.category, str(exc), EXIT_PARSE)
    except InvalidNetworkError as exc:
        return _fail(exc.category, str(exc), EXIT_INVALID)
    except DetflowError as exc:
        return _fail(exc.category, str(exc), EXIT_OTHER)
    except Exception as exc:  # noqa: BLE001 - last-resort report
        return _fail("internal", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
