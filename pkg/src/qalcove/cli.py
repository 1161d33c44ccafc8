"""Command-line surface: chains, crystals, characters, and verification runs.

Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import correspondence, qls_model
from .alcove_model import LambdaChain, chain_from_roots, enumerate_admissible, lex_chain
from .characters import (
    character_from_alcove,
    character_from_qls,
    decompose,
    format_decomposition,
    verify_p_equals_x,
    weyl_character,
)
from .lie_data import InputError, InternalError, RootDatum, Weight, build_root_datum
from .perfectness import check_perfect
from .qls_model import build_crystal, straight_path

DEFAULT_BUDGET = 200_000


# ---------------------------------------------------------------- parsing


def _parse_weight(datum: RootDatum, text: str) -> Weight:
    try:
        coeffs = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse weight {text!r}; expected comma-separated integers")
    return datum.weight_from_coeffs(coeffs)


def _parse_node_order(datum: RootDatum, text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        order = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse node order {text!r}")
    if sorted(order) != list(range(1, datum.rank + 1)):
        raise InputError(f"node order {text!r} is not a permutation of 1..{datum.rank}")
    return order


def _parse_weyl(datum: RootDatum, text: str):
    w = datum.weyl.identity
    if text == "e":
        return w
    for token in text.split("*"):
        m = re.fullmatch(r"s(\d+)", token)
        if not m or not 1 <= int(m.group(1)) <= datum.rank:
            raise InputError(f"cannot parse Weyl word {text!r}; expected e or s1*s2*...")
        w = w * datum.weyl.simple[int(m.group(1)) - 1]
    return w


def _parse_breaks(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse breaks {text!r}; expected fractions like 0,1/2,1")


def _load_chain(datum: RootDatum, lam: Weight, filename: str) -> LambdaChain:
    try:
        blob = json.loads(Path(filename).read_text())
        rows = blob["entries"] if isinstance(blob, dict) else blob
        roots, levels = [], []
        for item in rows:
            root, level = (item["root"], item["level"]) if isinstance(item, dict) else item
            roots.append(tuple(int(x) for x in root))
            levels.append(int(level))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read chain file {filename}: {exc}")
    chain = chain_from_roots(datum, lam, roots)
    if [e.level for e in chain.entries] != levels:
        raise InputError("chain file levels disagree with the crossing counts of the walk")
    return chain


def _chain_for(datum: RootDatum, lam: Weight, args) -> LambdaChain:
    if getattr(args, "chain_file", None):
        return _load_chain(datum, lam, args.chain_file)
    return lex_chain(datum, lam, node_order=_parse_node_order(datum, args.node_order))


def _guard(datum: RootDatum, length: int, budget: int) -> None:
    cost = len(datum.weyl.elements) * max(length, 1)
    if cost > budget:
        raise InputError(f"job size {cost} exceeds budget {budget}; raise --budget to proceed")


def _emit(blob) -> None:
    print(json.dumps(blob, indent=2))


# ------------------------------------------------------------ subcommands


def cmd_chain(datum: RootDatum, args) -> int:
    chain = _chain_for(datum, _parse_weight(datum, args.weight), args)
    _emit(chain.to_json_dict())
    return 0


def cmd_admissible(datum: RootDatum, args) -> int:
    chain = _chain_for(datum, _parse_weight(datum, args.weight), args)
    _guard(datum, len(chain), args.budget)
    subsets = enumerate_admissible(chain)
    _emit({"count": len(subsets), "subsets": [a.to_json_dict() for a in subsets]})
    return 0


def cmd_qls(datum: RootDatum, args) -> int:
    lam = _parse_weight(datum, args.weight)
    if (args.directions is None) != (args.breaks is None):
        raise InputError("--directions and --breaks must be given together")
    if args.directions is None:
        path = straight_path(datum, lam)
    else:
        directions = tuple(_parse_weyl(datum, t) for t in args.directions.split(","))
        path = qls_model.qls_path(datum, lam, directions, _parse_breaks(args.breaks))
    labels = range(datum.rank + 1)
    _emit(
        {
            "path": str(path),
            "data": path.to_json_dict(),
            "weight": list(path.weight.coords),
            "deg": qls_model.deg(path),
            "eps": [qls_model.epsilon(path, j) for j in labels],
            "phi": [qls_model.phi(path, j) for j in labels],
        }
    )
    return 0


def cmd_crystal(datum: RootDatum, args) -> int:
    lam = _parse_weight(datum, args.weight)
    _guard(datum, len(lex_chain(datum, lam)), args.budget)
    graph = build_crystal(datum, lam)
    print(graph.to_dot() if args.format == "dot" else json.dumps(graph.to_json_dict(), indent=2))
    return 0


def cmd_character(datum: RootDatum, args) -> int:
    lam = _parse_weight(datum, args.weight)
    if args.route == "alcove":
        chain = _chain_for(datum, lam, args)
        _guard(datum, len(chain), args.budget)
        ch = character_from_alcove(chain, jobs=args.jobs)
    elif args.route == "qls":
        _guard(datum, len(lex_chain(datum, lam)), args.budget)
        ch = character_from_qls(datum, lam)
    else:
        ch = weyl_character(datum, lam)
    if args.format == "text":
        print(str(ch))
    elif args.format == "orbit":
        print(ch.orbit_line(datum))
    else:
        _emit(
            {
                "route": args.route,
                "terms": ch.to_json_list(),
                "decomposition": format_decomposition(decompose(datum, ch)),
            }
        )
    return 0


def cmd_verify_px(datum: RootDatum, args) -> int:
    lam = _parse_weight(datum, args.weight)
    chain = _chain_for(datum, lam, args)
    _guard(datum, len(chain), args.budget)
    report = verify_p_equals_x(datum, lam, chain=chain)
    if report["pass"]:
        print(f"X = {report['decomposition']}")
    _emit(report)
    return 0 if report["pass"] else 1


def cmd_verify_crystal(datum: RootDatum, args) -> int:
    lam = _parse_weight(datum, args.weight)
    chain = _chain_for(datum, lam, args)
    _guard(datum, len(chain), args.budget)
    graph = build_crystal(datum, lam)
    intertwining = correspondence.verify_intertwining(datum, lam, chain=chain)
    energy = correspondence.verify_energy(datum, lam, chain=chain)
    tensor_ok, tensor_error = True, None
    if sum(lam.coords) > 1:
        try:
            correspondence.build_isomorphism_to_tensor(datum, lam)
        except InternalError as exc:  # a failed isomorphism is a finding, not a crash
            tensor_ok, tensor_error = False, str(exc)
    clean = (
        graph.is_connected()
        and not intertwining["violations"]
        and not energy["violations"]
        and tensor_ok
    )
    _emit(
        {
            "lambda": list(lam.coords),
            "vertices": len(graph.vertices),
            "connected": graph.is_connected(),
            "intertwining": intertwining,
            "energy": energy,
            "tensor_isomorphism": {"ok": tensor_ok, "error": tensor_error},
            "pass": clean,
        }
    )
    return 0 if clean else 1


def cmd_perfect(datum: RootDatum, args) -> int:
    if args.node == "all":
        nodes = list(range(1, datum.rank + 1))
    elif args.node == "long":
        nodes = list(datum.long_nodes())
    elif args.node == "short":
        nodes = list(datum.short_nodes())
        if not nodes:
            raise InputError("this type has no short nodes")
    else:
        try:
            nodes = [int(args.node)]
        except ValueError:
            raise InputError(f"cannot parse node {args.node!r}; expected an index, long, short, or all")
    reports = [check_perfect(datum, n, args.level) for n in nodes]
    for report in reports:
        print(report.summary())
    _emit([r.to_json_dict() for r in reports])
    return 0 if all(r.prediction_matches for r in reports) else 1


# ----------------------------------------------------------------- driver


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", required=True, metavar="LETTER", help="Cartan type, e.g. A, C, G")
    common.add_argument("--rank", required=True, type=int)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="abort if |W| * chain length exceeds this")
    weighted = argparse.ArgumentParser(add_help=False)
    weighted.add_argument("--weight", required=True,
                          help="comma-separated fundamental-weight coefficients")
    weighted.add_argument("--node-order", default=None,
                          help="node permutation for the lexicographic chain, e.g. 2,1")

    parser = argparse.ArgumentParser(prog="qalcove",
                                     description="Exact graded characters of single-column "
                                                 "tensor products from two path models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chain", parents=[common, weighted], help="print the lambda-chain")
    p.add_argument("--chain-file", default=None, help="JSON list of (root, level) entries")
    p.set_defaults(handler=cmd_chain)

    p = sub.add_parser("admissible", parents=[common, weighted],
                       help="enumerate admissible subsets")
    p.add_argument("--chain-file", default=None)
    p.set_defaults(handler=cmd_admissible)

    p = sub.add_parser("qls", parents=[common, weighted], help="describe one quantum LS path")
    p.add_argument("--directions", default=None, help="comma-separated Weyl words, e.g. s1*s2,e")
    p.add_argument("--breaks", default=None, help="comma-separated fractions, e.g. 0,1/2,1")
    p.set_defaults(handler=cmd_qls)

    p = sub.add_parser("crystal", parents=[common, weighted], help="build the path crystal")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(handler=cmd_crystal)

    p = sub.add_parser("character", parents=[common, weighted], help="print a graded character")
    p.add_argument("--route", choices=("qls", "alcove", "weyl"), default="qls")
    p.add_argument("--format", choices=("json", "text", "orbit"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--chain-file", default=None)
    p.set_defaults(handler=cmd_character)

    p = sub.add_parser("verify-px", parents=[common, weighted],
                       help="check that both model characters agree and match the oracle")
    p.add_argument("--chain-file", default=None)
    p.set_defaults(handler=cmd_verify_px)

    p = sub.add_parser("verify-crystal", parents=[common, weighted],
                       help="run the operator, energy, and tensor checks")
    p.add_argument("--chain-file", default=None)
    p.set_defaults(handler=cmd_verify_crystal)

    p = sub.add_parser("perfect", parents=[common], help="perfectness report per node")
    p.add_argument("--node", default="all", help="node index, long, short, or all")
    p.add_argument("--level", type=int, default=1)
    p.set_defaults(handler=cmd_perfect)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        datum = build_root_datum(args.type, args.rank)
        return args.handler(datum, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
