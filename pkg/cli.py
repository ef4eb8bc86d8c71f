#!/usr/bin/env python3
"""
Command-line interface for the char2-quartics verifier.
Run single verifications or the whole suite without starting the server.

Exit codes: 0 verified, 1 refuted or a check raised, 2 usage or input error,
3 not checked.
"""

import argparse
import json
import os
import random
import sys
from typing import Any, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel

import char2_weierstrass as cw
import fiber_combinatorics as fc
import lattice_core as lc
import quartic_family as qf
from binary_fields import BinaryField
from config import settings
from orchestrator import VerificationOrchestrator, save_report
from schemas import (RootLatticeModel, WeierstrassModelData, dump_json,
                     error_payload, to_builtin)

EXIT_CODES = {"verified": 0, "refuted": 1, "error": 1, "not_checked": 3}
EXIT_USAGE = 2


class CLIInputError(ValueError):
    """Raised for unreadable or inconsistent command-line input."""


def load_json(value: str) -> Any:
    """Parse a JSON literal, or the contents of the file it names."""
    try:
        if os.path.isfile(value):
            with open(value, encoding="utf-8") as handle:
                return json.load(handle)
        return json.loads(value)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIInputError(f"Cannot read JSON from {value!r}: {exc}") from exc


def as_data(payload: Any) -> Dict[str, Any]:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    return to_builtin(payload)


def status_of(payload: Dict[str, Any]) -> Optional[str]:
    if "status" in payload and payload["status"] in EXIT_CODES:
        return payload["status"]
    return None


# fibres

def cmd_fiber_table(args) -> Tuple[Any, Optional[str]]:
    return {"types": [fc.fiber_table(t).model_dump() for t in fc.all_types(args.max_n)]}, None


def cmd_nv(args) -> Tuple[Any, Optional[str]]:
    record = fc.fiber_table(args.type)
    result = {"type": record.kodaira, "N_v": fc.max_disjoint(args.type)}
    if args.a2 is not None:
        result["a2"] = args.a2
        result["N_v^(i)"] = fc.max_disjoint_with_A2(args.type, args.a2)
    if args.omit is not None:
        vertex = int(args.omit) if args.omit.isdigit() else args.omit
        result["omit"] = args.omit
        result["N_v_omitting"] = fc.max_disjoint_omitting(args.type, vertex)
    return result, None


def cmd_enumerate(args) -> Tuple[Any, Optional[str]]:
    result = fc.enumerate_configurations(args.budget, args.require_a2)
    data = result.model_dump(mode="json")
    if args.summary:
        data.pop("configurations")
    data["minimal_delta"] = fc.optimal_at_minimal_delta(result)
    return data, None


# lattices

def lattice_from_args(args) -> RootLatticeModel:
    if args.gram:
        data = load_json(args.gram)
        if isinstance(data, list):
            data = {"rank": len(data), "gram": data}
        return RootLatticeModel(**data)
    if not args.label:
        raise CLIInputError("Give --label (e.g. D6) or --gram")
    return lc.ade_gram(args.label)


def embedding_from_args(args, L: RootLatticeModel):
    if args.images:
        return lc.embed(L, load_json(args.images))
    if args.r:
        e = lc.find_disjoint_A1(L, args.r)
        if e is None:
            raise CLIInputError(f"A1^{args.r} does not embed by orthogonal roots")
        return e
    raise CLIInputError("Give --images or --r")


def positional_numbers(args) -> None:
    """Fold ``embed-a1 r`` and ``factor-through m r`` into --r/--m."""
    numbers = args.numbers or []
    if not numbers:
        return
    names = {"embed-a1": ["r"], "factor-through": ["m", "r"]}.get(args.action)
    if names is None or len(numbers) != len(names):
        expected = " ".join(names) if names else "no numbers"
        raise CLIInputError(f"{args.action} takes {expected}, got {numbers}")
    for name, value in zip(names, numbers):
        if getattr(args, name) is not None and getattr(args, name) != value:
            raise CLIInputError(f"{name} given twice: --{name} {getattr(args, name)} and {value}")
        setattr(args, name, value)


def cmd_lattice(args) -> Tuple[Any, Optional[str]]:
    positional_numbers(args)
    action = args.action
    if action in ("parity", "index-lemma") and not (args.label or args.kodaira):
        raise CLIInputError(f"{action} needs --label")
    if action == "factor-through":
        if args.m is None or args.r is None:
            raise CLIInputError("factor-through needs --m and --r")
        return lc.verify_factor_through(args.r, args.m, args.budget), None
    if action == "parity":
        if args.kodaira:
            if not args.vectors:
                raise CLIInputError("parity with --kodaira needs --vectors")
            X = lc.extended_lattice(args.kodaira)
            return lc.verify_parity_argument(X, load_json(args.vectors), args.vertex), None
        return lc.verify_root_subgroups(args.label, args.r), None
    if action == "index-lemma":
        return lc.verify_index_lemma(args.label, args.r), None
    if action == "l2-table":
        return {"rows": lc.l2_table(args.max_rank)}, None

    L = lattice_from_args(args)
    if action == "gram":
        return L, None
    if action == "roots":
        roots = lc.enumerate_roots(L, args.method)
        return {"lattice": L.label, "count": len(roots), "roots": roots}, None
    if action == "disc":
        return lc.discriminant_group(L), None
    if action == "two-length":
        return {"lattice": L.label, "l2": lc.two_length(L)}, None
    if action == "complement":
        if not args.images and args.r is None and L.label and L.label.startswith("D"):
            return lc.verify_complement_isometry(L.rank), None
        return lc.orthogonal_complement(embedding_from_args(args, L)), None
    if action == "closure":
        closure, index = lc.primitive_closure(embedding_from_args(args, L))
        return {"closure": closure.model_dump(mode="json"), "index": index}, None
    if action == "embed-a1":
        if args.r is None:
            raise CLIInputError("embed-a1 needs --r")
        e = lc.find_disjoint_A1(L, args.r)
        return {"lattice": L.label, "r": args.r, "embeds": e is not None,
                "embedding": e.model_dump(mode="json") if e else None}, None
    if action == "roots-in-quotient":
        return lc.roots_in_quotient(embedding_from_args(args, L)), None
    raise CLIInputError(f"Unknown lattice action: {action}")


# Weierstrass models

def model_from_args(args) -> cw.WeierstrassModel:
    if args.model:
        return cw.WeierstrassModel.from_data(WeierstrassModelData(**load_json(args.model)))
    field = BinaryField(args.k)
    return cw.random_model(field, random.Random(args.seed))


def cmd_wmodel(args) -> Tuple[Any, Optional[str]]:
    w = model_from_args(args)
    action = args.action
    result: Dict[str, Any] = {"model": w.to_data().model_dump(mode="json", exclude_none=True)}
    if action == "disc":
        delta = cw.discriminant(w)
        result.update(discriminant=delta.to_hex(), degree=delta.degree,
                      oracle_agrees=delta == cw.discriminant_oracle(w))
    elif action == "is-square":
        root = cw.is_square(cw.discriminant(w))
        result.update(square=root is not None, root=root.to_hex() if root is not None else None)
    elif action == "classify":
        result.update(cw.place_reports(w))
    elif action == "delta":
        if args.type is None:
            raise CLIInputError("delta needs --type")
        result.update(cw.wild_ramification_at(w, cw.parse_place(w.field, args.place), args.type))
    else:
        raise CLIInputError(f"Unknown wmodel action: {action}")
    return result, None


# quartics

def parameters_from_args(args) -> qf.FamilyParameters:
    if args.params:
        return qf.FamilyParameters.from_dict(load_json(args.params))
    field = qf.parse_field(args.k, args.p)
    return qf.generic_parameters(field, args.seed)


def cmd_quartic(args) -> Tuple[Any, Optional[str]]:
    action = args.action
    if action == "dwork-check":
        return qf.dwork_twisted_cubic_check(), None

    p = parameters_from_args(args)
    X = qf.build_family(p)
    field = p.field
    if action == "build":
        return {"parameters": p.to_dict(), "surface": X.to_dict()}, None
    if action == "scan":
        points = qf.singular_points_scan(X, args.workers)
        return {"parameters": p.to_dict(), "count": len(points),
                "points": [qf.format_point(field, x) for x in points],
                "isolated": qf.is_isolated(X, points)}, None
    if action == "expected":
        nodes = qf.expected_nodes(p)
        for node in nodes:
            if node["point"] is not None:
                node["point"] = qf.format_point(field, node["point"])
        return {"parameters": p.to_dict(), "nodes": nodes}, None
    if action == "planes":
        sections = [qf.plane_section(X, row) for row in p.linear]
        return {"parameters": p.to_dict(), "planes": [s.model_dump(mode="json") for s in sections]}, None
    if action == "census":
        return qf.family_report(p, args.workers), None
    raise CLIInputError(f"Unknown quartic action: {action}")


# suite

def cmd_verify_all(args) -> Tuple[Any, Optional[str]]:
    orchestrator = VerificationOrchestrator(seed=args.seed, workers=args.workers,
                                            verbose=args.verbose, search_budget=args.budget)
    report = orchestrator.run_all(args.only)
    if args.save:
        path = save_report(report, args.save_dir)
        if args.verbose:
            print(f"Report saved to {path}", file=sys.stderr)
    return report, report.status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="char2-quartics",
        description="Exact verifications behind the bound of 12 nodes on "
                    "non-supersingular quartic surfaces in characteristic 2",
    )
    parser.add_argument("--seed", type=int, default=settings.default_seed,
                        help=f"Seed for random draws (default: {settings.default_seed})")
    parser.add_argument("--format", choices=["json", "text"], default="json",
                        help="Output format (default: json)")
    parser.add_argument("-o", "--output", default=None, help="Write output to a file instead of stdout")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes for point scans")
    parser.add_argument("-v", "--verbose", action="store_true", default=settings.verbose,
                        help="Print progress to stderr")
    # also accepted after the subcommand; the global value stays when omitted
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="Seed for random draws")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fiber-table", help="Print the characteristic-2 fibre table")
    p.add_argument("--max-n", type=int, default=8, help="Largest n for I_n and I*_n (default: 8)")
    p.set_defaults(handler=cmd_fiber_table)

    p = sub.add_parser("nv", help="Maximum number of disjoint configurations in one fibre")
    p.add_argument("--type", required=True, help='Kodaira type, e.g. "I*_1"')
    p.add_argument("--a2", type=int, default=None, help="Number of A2 configurations to place")
    p.add_argument("--omit", default=None, help="Vertex (index or name) to remove first")
    p.set_defaults(handler=cmd_nv)

    p = sub.add_parser("enumerate", help="Optimal fibre configurations for an Euler budget")
    p.add_argument("--budget", type=int, default=fc.STANDARD_BUDGET)
    p.add_argument("--require-a2", type=int, default=0)
    p.add_argument("--summary", action="store_true", help="Leave out the configuration list")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("lattice", help="Root-lattice computations")
    p.add_argument("action", choices=["gram", "roots", "disc", "two-length", "complement", "closure",
                                      "embed-a1", "factor-through", "roots-in-quotient", "parity",
                                      "index-lemma", "l2-table"])
    p.add_argument("numbers", nargs="*", type=int,
                   help="r for embed-a1, m and r for factor-through")
    p.add_argument("--label", default=None, help="ADE label such as D6 or E7")
    p.add_argument("--gram", default=None, help="Gram matrix JSON (literal or file)")
    p.add_argument("--images", default=None, help="Sub-basis images as JSON (literal or file)")
    p.add_argument("--r", type=int, default=None, help="Number of orthogonal roots")
    p.add_argument("--m", type=int, default=None, help="m for D_(2m+1) -> D_(2m)")
    p.add_argument("--method", choices=["bounded", "reflection"], default="bounded")
    p.add_argument("--kodaira", default=None, help="Extended lattice for the parity argument")
    p.add_argument("--vectors", default=None, help="Root vectors in the extended lattice (JSON)")
    p.add_argument("--vertex", type=int, default=None, help="Section vertex of the extended lattice")
    p.add_argument("--budget", type=int, default=settings.search_budget_rank,
                   help="Largest ambient rank searched exhaustively")
    p.add_argument("--max-rank", type=int, default=20)
    p.set_defaults(handler=cmd_lattice)

    p = sub.add_parser("wmodel", parents=[seeded], help="Weierstrass models over GF(2^k)[t]")
    p.add_argument("action", choices=["disc", "is-square", "classify", "delta"])
    p.add_argument("--model", default=None, help="Model JSON (literal or file); random when omitted")
    p.add_argument("--k", type=int, default=8, help="k of GF(2^k) for random models (default: 8)")
    p.add_argument("--place", default="0", help='Place as a hex element or "inf"')
    p.add_argument("--type", default=None, help="Asserted Kodaira type for delta")
    p.set_defaults(handler=cmd_wmodel)

    p = sub.add_parser("quartic", parents=[seeded], help="The quartic family l1 l2 l3 l4 + q^2")
    p.add_argument("action", choices=["build", "scan", "expected", "planes", "census", "dwork-check"])
    p.add_argument("--params", default=None, help="Family parameters JSON; searched from --seed when omitted")
    p.add_argument("--k", type=int, default=None, help="k of GF(2^k)")
    p.add_argument("--p", type=int, default=None, help="Odd prime field instead of GF(2^k)")
    p.set_defaults(handler=cmd_quartic)

    p = sub.add_parser("verify-all", parents=[seeded], help="Run the whole verification suite")
    p.add_argument("--only", nargs="+", default=None, help="Run only the named checks")
    p.add_argument("--budget", type=int, default=None, help="Largest rank for factor-through searches")
    p.add_argument("--save", action="store_true", help="Also store the report as JSON")
    p.add_argument("--save-dir", default=None, help=f"Report directory (default: {settings.reports_dir})")
    p.set_defaults(handler=cmd_verify_all)

    return parser


def render_text(data: Dict[str, Any]) -> str:
    lines = []
    certificates = data.get("certificates")
    if certificates is not None:
        lines.append("=" * 60)
        lines.append(f"Status: {data['status']}  (seed {data['seed']})")
        lines.append("=" * 60)
        for cert in certificates:
            mark = {"verified": "ok", "refuted": "FAILED", "not_checked": "skipped"}[cert["status"]]
            lines.append(f"  {cert['check']:<40} {mark}")
        for error in data.get("errors", []):
            lines.append(f"  error: {error}")
        return "\n".join(lines)
    for key in sorted(data):
        value = data[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI function."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        payload, status = args.handler(args)
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 1
    except ValueError as e:
        # domain errors from every module derive from ValueError
        report(error_payload(type(e).__name__, str(e)), args)
        return EXIT_USAGE
    except Exception as e:
        report(error_payload("InternalError", str(e)), args)
        return 1

    data = as_data(payload)
    data.setdefault("seed", args.seed)
    if status is None:
        status = status_of(data)
    emit(dump_json(data) if args.format == "json" else render_text(data), args.output)
    return EXIT_CODES.get(status, 0) if status else 0


def report(error: Dict[str, Any], args) -> None:
    if args.format == "json":
        emit(dump_json(error), args.output)
    else:
        print(f"ERROR: {error['error']['message']}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
