"""Command-line interface.

Every subcommand prints one JSON document (default) or a plain-text
rendering of the same data.  Exit codes: 0 success or verified, 1 usage
or validation error, 2 a verification that ran and failed.

Group arguments accept a built-in name (C2..C8, V4, S3, D4, Q8, A4, and
'x'-joined products such as V4xC2) or a path to a JSON file in the
documented group description format.  Caps can be raised, never
lowered, via --degree-cap / --rank-cap / --order-cap or the environment
variables MULTINORM_DEGREE_CAP, MULTINORM_RANK_CAP, MULTINORM_ORDER_CAP.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cochains import DEFAULT_DEGREE_CAP, DEFAULT_RANK_CAP, cohomology
from .errors import MultinormError
from .gmodules import permutation_module, trivial_module
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    direct_product,
    group_from_json,
    named_group,
    subgroup_generated,
)
from .oracles import abelianization_invariants
from .pairings import cup_pairing, is_perfect, verify_adjointness
from .qarith import (
    PlaceOfQ,
    QuadraticTuple,
    critical_places,
    hilbert_symbol,
    multiquadratic_decomposition,
    phi_witness,
    sha_of_multiquadratic,
    triple_failure_report,
)
from .sha import DecompositionConfig, sha_tate, verify_multinorm_pair, \
    verify_sha_surjectivity
from .transfers import (
    corestriction_deg0,
    deflation,
    inflation,
    residuation,
    restriction_trivial,
)

SCHEMA_VERSION = 1


class _Caps:
    def __init__(self, args):
        env = os.environ
        self.degree = max(DEFAULT_DEGREE_CAP,
                          args.degree_cap or 0,
                          int(env.get("MULTINORM_DEGREE_CAP", 0)))
        self.rank = max(DEFAULT_RANK_CAP,
                        args.rank_cap or 0,
                        int(env.get("MULTINORM_RANK_CAP", 0)))
        self.order = max(DEFAULT_ORDER_CAP,
                         args.order_cap or 0,
                         int(env.get("MULTINORM_ORDER_CAP", 0)))


def _resolve_group(desc: str, caps: _Caps) -> FiniteGroup:
    if os.path.exists(desc):
        with open(desc, "r", encoding="utf-8") as fh:
            return group_from_json(json.load(fh), order_cap=caps.order)
    return named_group(desc, order_cap=caps.order)


def _parse_subgroup(g: FiniteGroup, text: str):
    seeds = [int(s) for s in text.split(",") if s.strip() != ""]
    return subgroup_generated(g, seeds)


def _module_for(g, desc: str):
    if desc is None or desc == "trivial":
        return trivial_module(g)
    if desc.startswith("perm:"):
        sub = _parse_subgroup(g, desc[len("perm:"):])
        return permutation_module(g, sub)
    raise MultinormError(f"unknown module description {desc!r}")


def _emit(args, payload: dict, exit_code: int = 0) -> int:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        lines = []

        def render(prefix, value):
            if isinstance(value, dict):
                for k in sorted(value):
                    render(f"{prefix}{k}.", value[k])
            elif isinstance(value, list):
                lines.append(f"{prefix[:-1]} = {value}")
            else:
                lines.append(f"{prefix[:-1]} = {value}")

        render("", payload)
        text = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return exit_code


# -- subcommand handlers -----------------------------------------------------


def _cmd_group(args, caps):
    g = _resolve_group(args.group, caps)
    payload = {
        "command": "group",
        "name": g.name,
        "order": g.order,
        "identity": g.identity,
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "abelianization": list(abelianization_invariants(g)),
        "is_product": g.product_structure is not None,
    }
    return _emit(args, payload)


def _cmd_cohomology(args, caps):
    g = _resolve_group(args.group, caps)
    module = _module_for(g, args.module)
    coh = cohomology(g, module, args.degree,
                     degree_cap=caps.degree, rank_cap=caps.rank)
    payload = {
        "command": "cohomology",
        "group": g.name,
        "module": module.name,
        "degree": args.degree,
        "invariant_factors": list(coh.invariant_factors),
        "order": coh.order(),
        "cochain_rank": coh.space.rank,
    }
    return _emit(args, payload)


def _cmd_transfer(args, caps):
    g = _resolve_group(args.group, caps)
    sub = _parse_subgroup(g, args.subgroup)
    kw = {"degree_cap": caps.degree, "rank_cap": caps.rank}
    kind = args.kind
    if kind == "res":
        m = restriction_trivial(g, sub, args.degree, **kw)
    elif kind == "inf":
        m = inflation(g, sub, args.degree, **kw)
    elif kind == "cor0":
        m = corestriction_deg0(g, sub, **kw)
    elif kind == "def":
        m = deflation(g, sub, args.degree, **kw)
    elif kind == "rsd":
        m = residuation(g, sub, args.degree, **kw)
    else:
        raise MultinormError(f"unknown transfer kind {kind!r}")
    payload = {
        "command": "transfer",
        "kind": m.kind,
        "group": g.name,
        "subgroup": list(sub.elements),
        "subgroup_normal": sub.is_normal,
        "degree": args.degree if kind != "cor0" else 0,
        "source_invariants": list(m.source.invariant_factors),
        "target_invariants": list(m.target.invariant_factors),
        "matrix": m.abstract_matrix.to_dense(),
    }
    return _emit(args, payload)


def _cmd_pairing(args, caps):
    g = _resolve_group(args.group, caps)
    table = cup_pairing(g, args.degree,
                        degree_cap=caps.degree, rank_cap=caps.rank)
    cert = is_perfect(table)
    payload = {
        "command": "pairing",
        "group": g.name,
        "degree": args.degree,
        "modulus": table.modulus,
        "left_invariants": list(table.left_mods),
        "right_invariants": list(table.right_mods),
        "values": table.values,
        "perfect": cert.perfect,
        "left_kernel_invariants": cert.left_kernel_invariants,
        "right_kernel_invariants": cert.right_kernel_invariants,
    }
    return _emit(args, payload, 0 if cert.perfect else 2)


def _cmd_adjointness(args, caps):
    g1 = _resolve_group(args.g1, caps)
    g2 = _resolve_group(args.g2, caps)
    g = direct_product(g1, g2, order_cap=caps.order)
    rep = verify_adjointness(g, args.degree,
                             degree_cap=caps.degree, rank_cap=caps.rank)
    payload = {
        "command": "adjointness",
        "group": g.name,
        "degree": args.degree,
        "pairs": rep.entries,
        "passed": rep.passed,
    }
    return _emit(args, payload, 0 if rep.passed else 2)


def _cmd_sha(args, caps):
    with open(args.config, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    cfg = DecompositionConfig.from_json(obj)
    rep = sha_tate(cfg, degree_cap=caps.degree, rank_cap=caps.rank)
    payload = {"command": "sha", **rep.to_json_dict()}
    return _emit(args, payload)


def _cmd_multinorm(args, caps):
    g1 = _resolve_group(args.g1, caps)
    g2 = _resolve_group(args.g2, caps)
    cert = verify_multinorm_pair(g1, g2,
                                 degree_cap=caps.degree, rank_cap=caps.rank)
    payload = {"command": "multinorm", **cert.to_json_dict()}
    code = 0 if cert.verdict == "VerifiedHolds" else 2
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        g = direct_product(g1, g2, order_cap=caps.order)
        cfg = DecompositionConfig.from_json(obj, group=g)
        sha_rep = verify_sha_surjectivity(cfg, degree_cap=caps.degree,
                                          rank_cap=caps.rank)
        payload["sha_surjectivity"] = sha_rep
        if not sha_rep["passed"]:
            code = 2
    return _emit(args, payload, code)


def _cmd_hilbert(args, caps):
    v = PlaceOfQ.parse(args.place)
    value = hilbert_symbol(args.a, args.b, v)
    payload = {
        "command": "hilbert",
        "a": args.a, "b": args.b, "place": str(v),
        "symbol": value,
    }
    return _emit(args, payload)


def _cmd_biquadratic(args, caps):
    tup = QuadraticTuple((args.a, args.b))
    rep = sha_of_multiquadratic(tup, degree_cap=caps.degree,
                                rank_cap=caps.rank)
    decomposition = {}
    group = None
    for v in critical_places(tup):
        dec = multiquadratic_decomposition(tup, v, group)
        decomposition[str(v)] = {
            "order": dec.subgroup.order,
            "elements": list(dec.subgroup.elements),
        }
    payload = {
        "command": "biquadratic",
        "generators": [args.a, args.b],
        "critical_places": [str(v) for v in critical_places(tup)],
        "decomposition": decomposition,
        "sha_invariant_factors": list(rep.kernel_invariant_factors),
        "sha_order": rep.order,
        "phi_witness": phi_witness(args.a, args.b),
    }
    return _emit(args, payload)


def _cmd_example2(args, caps):
    rep = triple_failure_report(seed=args.seed)
    payload = {"command": "example2", **rep}
    return _emit(args, payload, 0 if rep["multinorm_fails"] else 2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multinorm",
        description="Tate cohomology, transfer maps and norm-principle "
                    "verdicts on finite group and rational data")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write the report to a file")
    common.add_argument("--degree-cap", type=int, default=None)
    common.add_argument("--rank-cap", type=int, default=None)
    common.add_argument("--order-cap", type=int, default=None)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("group", help="describe a group", parents=[common])
    p.add_argument("--group", required=True)
    p.set_defaults(func=_cmd_group)

    p = sub.add_parser("cohomology", help="one Tate cohomology group", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--module", default="trivial",
                   help="'trivial' or 'perm:<generator indices>'")
    p.set_defaults(func=_cmd_cohomology)

    p = sub.add_parser("transfer", help="a transfer map and its matrix", parents=[common])
    p.add_argument("--kind", required=True,
                   choices=["res", "inf", "cor0", "def", "rsd"])
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", required=True,
                   help="comma-separated generator indices")
    p.add_argument("--degree", type=int, default=0)
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("pairing", help="cup pairing and perfectness", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=_cmd_pairing)

    p = sub.add_parser("adjointness", parents=[common],
                       help="the adjoint identity on a direct product")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--degree", type=int, default=3)
    p.set_defaults(func=_cmd_adjointness)

    p = sub.add_parser("sha", help="restriction kernel for a configuration", parents=[common])
    p.add_argument("--config", required=True,
                   help="JSON decomposition configuration file")
    p.set_defaults(func=_cmd_sha)

    p = sub.add_parser("multinorm", parents=[common],
                       help="verify the norm-principle core for a pair")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--config", default=None,
                   help="optional decomposition configuration for the "
                        "kernel-level check")
    p.set_defaults(func=_cmd_multinorm)

    p = sub.add_parser("hilbert", help="a local Hilbert symbol",
                       parents=[common])
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("place", help="a prime or 'inf'")
    p.set_defaults(func=_cmd_hilbert)

    p = sub.add_parser("biquadratic", parents=[common],
                       help="local data and obstruction for Q(sqrt a, sqrt b)")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.set_defaults(func=_cmd_biquadratic)

    p = sub.add_parser("example2", parents=[common],
                       help="failure report for the 13 / 17 / 221 triple")
    p.add_argument("--seed", type=int, default=20260808)
    p.set_defaults(func=_cmd_example2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    caps = _Caps(args)
    try:
        return args.func(args, caps)
    except MultinormError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
