"""Command-line front end.

Exit codes: 0 related / verified / success, 1 not related / failed check,
2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ancillarity import (
    SpaceTooLarge,
    condition_on_cell,
    enumerate_ancillaries,
    maximal_ancillaries,
)
from .certificate import normalize_kind, witness_to_dict
from .closure import DECIDERS, build_relation_graph, equivalence_classes, find_chain
from .constructions import (
    DegenerateSampleSpace,
    NotLikelihoodRelated,
    birnbaum_chain,
    efm_chain,
)
from .demos import DEMOS
from .model import Experiment, InferenceBase, ModelError, StatisticPartition
from .rational import RationalFormatError
from .relations import minimal_sufficient_partition, why_not
from .search import SearchBoundsError, check_bounds, search_maximal
from .verify import verify_certificate_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_base(path: str) -> InferenceBase:
    try:
        return InferenceBase.from_dict(_read_json(path))
    except (ModelError, RationalFormatError, TypeError) as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None


def _load_experiment(path: str) -> Experiment:
    try:
        return Experiment.from_dict(_read_json(path))
    except (ModelError, RationalFormatError, TypeError) as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_relate(args) -> int:
    kind = normalize_kind(args.kind)
    b1, b2 = _load_base(args.file1), _load_base(args.file2)
    try:
        w = DECIDERS[kind](b1, b2)
    except SpaceTooLarge as exc:
        raise InputError(str(exc)) from None
    if w is None:
        print(f"not related under {kind}: {why_not(kind, b1, b2)}")
        return EXIT_FAIL
    print(f"related under {kind}")
    print(_dump(witness_to_dict(kind, w)))
    return EXIT_OK


def cmd_prove(args) -> int:
    b1, b2 = _load_base(args.file1), _load_base(args.file2)
    build = efm_chain if args.method == "efm" else birnbaum_chain
    try:
        cert = build(b1, b2)
    except NotLikelihoodRelated as exc:
        print(f"cannot prove: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except DegenerateSampleSpace as exc:
        print(f"cannot prove: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = _dump(cert.to_dict())
    summary = [f"{len(cert.links)} links: " + " ".join(cert.kinds)]
    summary += [f"  link {i}: {l.kind} ({l.orientation})" for i, l in enumerate(cert.links)]
    if args.out:
        Path(args.out).write_text(text + "\n")
        print("\n".join(summary))
    else:
        print(text)
        print("\n".join(summary), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_certificate_json(_read_json(args.cert))
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_demo(args) -> int:
    names = list(DEMOS) if args.name == "all" else [args.name]
    ok = True
    for name in names:
        d = DEMOS[name]()
        print("\n".join(d.lines()))
        ok &= d.ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_msuf(args) -> int:
    print(json.dumps(minimal_sufficient_partition(_load_experiment(args.file)).to_json()))
    return EXIT_OK


def cmd_ancillaries(args) -> int:
    e = _load_experiment(args.file)
    find = maximal_ancillaries if args.maximal else enumerate_ancillaries
    try:
        parts = find(e, max_points=args.max_points)
    except SpaceTooLarge as exc:
        raise InputError(str(exc)) from None
    for p in parts:
        print(json.dumps(p.to_json()))
    return EXIT_OK


def cmd_condition(args) -> int:
    base = _load_base(args.file)
    try:
        part = StatisticPartition.from_json(_read_json(args.partition))
        out = condition_on_cell(base, part)
    except ModelError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    print(_dump(out.to_dict()))
    return EXIT_OK


def cmd_closure(args) -> int:
    files = sorted(Path(args.universe).glob("*.json"))
    if not files:
        raise InputError(f"no *.json files in {args.universe}")
    universe = [_load_base(str(f)) for f in files]
    kinds = [k for k in args.kinds.split(",") if k]
    try:
        edges = build_relation_graph(universe, kinds, workers=args.workers)
    except (ValueError, SpaceTooLarge) as exc:
        raise InputError(str(exc)) from None
    for e in edges:
        print(f"edge {e.kind}: {files[e.left].name} -- {files[e.right].name}")
    for cls in equivalence_classes(universe, edges):
        print("class: " + " ".join(files[i].name for i in cls))
    if args.chain:
        names = [f.name for f in files]
        try:
            i, j = (names.index(n) for n in args.chain)
        except ValueError:
            raise InputError(f"--chain names must be files in {args.universe}") from None
        cert = find_chain(universe, edges, i, j)
        if cert is None:
            print(f"no chain from {names[i]} to {names[j]}")
            return EXIT_FAIL
        if args.out:
            Path(args.out).write_text(_dump(cert.to_dict()) + "\n")
        print(f"chain: {len(cert.links)} links " + " ".join(cert.kinds))
    return EXIT_OK


def cmd_search_maximal(args) -> int:
    try:
        check_bounds(args.x_size, args.theta_size, args.denominator, force=args.force)
    except SearchBoundsError as exc:
        raise InputError(str(exc)) from None
    if args.limit is not None and args.limit < 0:
        raise InputError("limit must be nonnegative")
    for e in search_maximal(args.x_size, args.theta_size, args.denominator,
                            limit=args.limit, workers=args.workers):
        print(json.dumps(e.to_dict()), flush=True)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="statrel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = ["L", "S", "C", "C-durbin", "G"]

    p = sub.add_parser("relate", help="decide a relation between two inference bases")
    p.add_argument("kind", choices=kinds + ["C_durbin"])
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_relate)

    p = sub.add_parser("prove", help="write a chain certificate for an L-related pair")
    p.add_argument("method", choices=["efm", "birnbaum"])
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="independently re-check a chain certificate")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="recompute a built-in worked example")
    p.add_argument("name", choices=list(DEMOS) + ["all"])
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("msuf", help="print the minimal sufficient partition")
    p.add_argument("file")
    p.set_defaults(func=cmd_msuf)

    p = sub.add_parser("ancillaries", help="list ancillary partitions")
    p.add_argument("file")
    p.add_argument("--maximal", action="store_true")
    p.add_argument("--max-points", type=int, default=12)
    p.set_defaults(func=cmd_ancillaries)

    p = sub.add_parser("condition", help="condition a base on its cell of an ancillary")
    p.add_argument("file")
    p.add_argument("--partition", required=True)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("closure", help="equivalence classes over a directory of bases")
    p.add_argument("--universe", required=True)
    p.add_argument("--kinds", default="L,S,C")
    p.add_argument("--chain", nargs=2, metavar=("FROM", "TO"))
    p.add_argument("-o", "--out", help="write the --chain certificate here")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("search-maximal",
                       help="find experiments with two or more maximal ancillaries")
    p.add_argument("--x-size", type=int, default=4)
    p.add_argument("--theta-size", type=int, default=2)
    p.add_argument("--denominator", type=int, default=12)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--force", action="store_true", help="allow sizes beyond the default bounds")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search_maximal)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
