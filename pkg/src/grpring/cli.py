"""Command-line front end.

Every verb reads an order expression (JSON), runs one pipeline and writes a
single JSON document to standard output. Numbers in the output are base-10
strings. Exit codes: 0 success, 2 malformed input, 3 unsupported input or
size bound exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import abgroups, autgroups, gradings, orders, starkdec
from .errors import GrpRingError, InputError
from .kernels import BACKEND
from .morphmods import DEFAULT_MAX_ENUM


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _vec(v: Sequence[int]) -> list[str]:
    return [str(x) for x in v]


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def _load_order(args) -> orders.Order:
    order = orders.build(_read_json(args.order))
    if order.rank == 0:
        raise InputError("the zero ring is not a valid input")
    return order


def _trusted(args, order: orders.Order) -> Optional[gradings.Grading]:
    path = getattr(args, "grading_file", None)
    if path is None:
        return None
    g = gradings.load_grading(order, _read_json(path))
    problems = gradings.grading_check(g)
    if problems:
        raise InputError("grading file is not a grading: " + "; ".join(problems))
    return g


def _mu(args, order: orders.Order) -> orders.RootsOfUnity:
    return orders.roots_of_unity(order, verify=args.verify_mu)


def _load_pairs(args, order: orders.Order, mu: orders.RootsOfUnity, count: int) -> list[starkdec.GpRgPair]:
    data = _read_json(args.pairs)
    if not isinstance(data, dict) or not isinstance(data.get("pairs"), list):
        raise InputError("pairs file needs a `pairs` list")
    items = data["pairs"]
    if len(items) != count:
        raise InputError(f"expected {count} pairs, got {len(items)}")
    out = []
    for item in items:
        if not isinstance(item, dict):
            raise InputError("each pair must be an object")
        basis = [orders.parse_vector(v, order.rank) for v in item.get("subring", [])]
        gens = [orders.parse_vector(v, order.rank) for v in item.get("group", [])]
        sub = orders.subring_from_basis(order, basis)
        out.append(starkdec.GpRgPair(order, sub, orders.UnitSubgroup.from_vectors(mu, gens)))
    return out


# --- verbs -----------------------------------------------------------------------


def cmd_validate(args) -> dict:
    order = _load_order(args)
    return {
        "rank": order.rank,
        "reduced": True,
        "connected": orders.is_connected(order),
        "gram_det": order.gram_det,
        "order": order.to_json(),
    }


def cmd_mu(args) -> dict:
    order = _load_order(args)
    mu = _mu(args, order)
    return {
        "group": mu.group.to_json(),
        "generators": [_vec(v) for v in mu.gens()],
        "elements": [_vec(v) for v in mu.elements()],
    }


def cmd_idempotents(args) -> dict:
    order = _load_order(args)
    return {"idempotents": [_vec(e) for e in sorted(orders.idempotents(order))]}


def cmd_components(args) -> dict:
    order = _load_order(args)
    return {
        "components": [
            {
                "idempotent": _vec(c.idempotent),
                "basis": [_vec(b) for b in c.lattice.basis],
                "order": c.order.to_json(),
            }
            for c in orders.components(order)
        ]
    }


def cmd_grading(args) -> dict:
    order = _load_order(args)
    g = gradings.universal_for(order, _trusted(args, order))
    out = g.to_json()
    out["violations"] = gradings.grading_check(g)
    return out


def cmd_degree_map(args) -> dict:
    order = _load_order(args)
    if not orders.is_connected(order):
        raise InputError("the degree map needs a connected order")
    g = gradings.universal_for(order, _trusted(args, order))
    dm = gradings.degree_map(g, _mu(args, order))
    return {
        "mu": dm.mu.group.to_json(),
        "mu_generators": [_vec(v) for v in dm.mu.gens()],
        "gamma": g.gamma.to_json(),
        "matrix": dm.hom.to_json(),
        "trusted_universality": g.trusted,
    }


def cmd_stark(args) -> dict:
    order = _load_order(args)
    trusted = _trusted(args, order)
    dec = starkdec.maximal_gprg(order, trusted, jobs=args.jobs)
    return {"stark": dec.group.order == 1, "trusted_universality": dec.trusted}


def cmd_decompose(args) -> dict:
    order = _load_order(args)
    _mu(args, order)
    dec = starkdec.maximal_gprg(order, _trusted(args, order), jobs=args.jobs)
    return dec.to_json()


def cmd_gprg_enum(args) -> dict:
    order = _load_order(args)
    _mu(args, order)
    ctx = starkdec.stark_context(order, _trusted(args, order))
    pairs, edges = starkdec.enumerate_gprg(ctx, args.max_enum)
    maximal = set(id(p) for p in starkdec.maximal_elements(pairs, edges))
    return {
        "pairs": [p.to_json() for p in pairs],
        "hasse_edges": [[i, j] for i, j in edges],
        "maximal": [i for i, p in enumerate(pairs) if id(p) in maximal],
        "trusted_universality": ctx.trusted,
    }


def cmd_swap_check(args) -> dict:
    order = _load_order(args)
    p1, p2 = _load_pairs(args, order, _mu(args, order), 2)
    return {"bijective": starkdec.swap_check(order, p1, p2)}


def cmd_refine(args) -> dict:
    order = _load_order(args)
    mu = _mu(args, order)
    ctx = starkdec.stark_context(order, _trusted(args, order))
    p1, p2 = _load_pairs(args, order, mu, 2)
    for p in (p1, p2):
        if not p.certificate():
            raise InputError("a supplied pair is not a group ring decomposition")
    out = starkdec.common_refinement(ctx, p1, p2).to_json()
    out["trusted_universality"] = ctx.trusted
    return out


def cmd_aut_count(args) -> dict:
    base = _load_order(args)
    aut = None
    if args.aut_file is not None:
        data = _read_json(args.aut_file)
        if not isinstance(data, dict) or not isinstance(data.get("automorphisms"), list):
            raise InputError("automorphism file needs an `automorphisms` list")
        aut = [[orders.parse_vector(r, base.rank) for r in m] for m in data["automorphisms"]]
    if not starkdec.is_stark(base):
        raise InputError("the base ring must be stark")
    ctx = autgroups.aut_data(base, aut)
    try:
        orders_ = [int(x) for x in args.group.split(",") if x.strip()]
    except ValueError as e:
        raise InputError(f"bad --group value {args.group!r}") from e
    if any(o < 1 for o in orders_):
        raise InputError("cyclic orders must be positive")
    group = abgroups.cyclic_product(orders_)[0]
    out = {
        "group": group.to_json(),
        "aut_base": len(ctx.aut),
        "hom_group_to_mu": abgroups.hom_count(group, ctx.mu.group),
        "hom_gamma_to_group": abgroups.hom_count(ctx.gamma, group),
        "aut_group": len(abgroups.automorphisms(group)),
        "aut_order": autgroups.aut_order(ctx, group),
    }
    if args.exact_sequence:
        rep = autgroups.exact_sequence_check(ctx, group, args.max_enum)
        out["exact_sequence"] = {
            "u_star_base": rep.u_star_base,
            "u_star_ring": rep.u_star_ring,
            "aut_ring": rep.aut_ring,
            "kernel_size": rep.kernel_size,
            "surjective": rep.surjective,
            "kernel_matches": rep.kernel_matches,
            "ok": rep.ok,
        }
    return out


VERBS = {
    "validate": (cmd_validate, "check an order and print basic data"),
    "mu": (cmd_mu, "roots of unity"),
    "idempotents": (cmd_idempotents, "all idempotents"),
    "components": (cmd_components, "connected components"),
    "grading": (cmd_grading, "universal grading"),
    "degree-map": (cmd_degree_map, "degree map from roots of unity to the grading group"),
    "stark": (cmd_stark, "whether the order is stark"),
    "decompose": (cmd_decompose, "maximal decomposition R = A[G] with A stark"),
    "gprg-enum": (cmd_gprg_enum, "all group ring decompositions with their partial order"),
    "swap-check": (cmd_swap_check, "check the four cross products of two pairs"),
    "refine": (cmd_refine, "common refinement of two pairs"),
    "aut-count": (cmd_aut_count, "order of Aut(A[G]) for a stark base A"),
}

GRADING_VERBS = {"grading", "degree-map", "stark", "decompose", "gprg-enum", "refine"}
PAIR_VERBS = {"swap-check", "refine"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-enum", type=int, default=DEFAULT_MAX_ENUM, metavar="N",
                        help="cap on enumerated Hom-group sizes (default %(default)s)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for per-component work")
    common.add_argument("--verify-mu", action="store_true",
                        help="cross-check roots of unity against the number field computation")
    parser = argparse.ArgumentParser(prog="grpring", description="Group ring decompositions of orders.")
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for name, (_, help_) in VERBS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("order", help="order expression file (JSON)")
        if name in GRADING_VERBS:
            p.add_argument("--grading-file", help="trusted universal grading (JSON)")
        if name in PAIR_VERBS:
            p.add_argument("--pairs", required=True, help="file with two (subring, group) pairs")
        if name == "aut-count":
            p.add_argument("--group", required=True, help="cyclic orders, comma separated, e.g. 2,2")
            p.add_argument("--aut-file", help="automorphism matrices of the base (JSON)")
            p.add_argument("--exact-sequence", action="store_true",
                           help="also verify the unit/automorphism exact sequence by enumeration")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, Optional[str]]:
    """Parse argv and run; returns (exit code, JSON text or None)."""
    args = build_parser().parse_args(argv)
    if args.max_enum < 1 or args.jobs < 1:
        raise InputError("--max-enum and --jobs must be positive")
    func = VERBS[args.verb][0]
    result = func(args)
    return 0, json.dumps(_jsonable(result), sort_keys=True, indent=2)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        code, text = run(argv)
    except GrpRingError as e:
        print(f"grpring: {e}", file=sys.stderr)
        return e.exit_code
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
