"""Command line front end.

Three subcommands: ``build`` constructs a geometry and writes it out,
``verify`` runs one of the library's correctness checks and exits 0 on pass
or 1 with a counterexample, ``export`` writes a graph. Counts and results go
to stdout as stable ``key=value`` lines; files are canonical JSON or DIMACS,
so identical invocations produce identical bytes.

Exit codes: 0 pass, 1 verification counterexample, 2 usage error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import autcount, isomaps, pointsets
from .coset import build_coset_geometry, cayley_graph, direction_count_report
from .errors import BudgetExceededError, VerificationError
from .fields import GF, CompanionAlgebra, parse_field_spec
from .incidence import to_canonical_json
from .linrep import LinRepSpec, build_gen_linrep, build_linrep
from .projgeom import DEFAULT_BUDGET, ProjSpace, subgeometry_points, standard_frame
from .xgeom import build_x

__all__ = ["main"]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text}")
    return value


def _prime_power(text: str) -> int:
    value = _positive_int(text)
    try:
        GF.of_order(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return value


def _emit(pairs):
    for key, value in pairs:
        if isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key}={value}")


def _write_text(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


def _structure_outputs(struct, args, extra=()):
    pairs = [
        ("kind", struct.kind),
        ("points", struct.n_points),
        ("lines", struct.n_lines),
        ("flags", struct.n_flags),
    ]
    pairs.extend(extra)
    _emit(pairs)
    if args.out:
        _write_text(args.out, struct.to_json())
        print(f"wrote={args.out}")
    if getattr(args, "dimacs", None):
        _write_text(args.dimacs, struct.incidence_dimacs())
        print(f"wrote={args.dimacs}")


def _subgeometry_infinity(field: GF, n: int) -> list:
    base_order = field.base.order if field.base is not None else field.order
    return [
        tuple(int(c) for c in p)
        for p in ProjSpace(n, field).points()
        if all(int(c) < base_order for c in p)
    ]


def _full_infinity(field: GF, n: int) -> list:
    return [tuple(int(c) for c in p) for p in ProjSpace(n, field).points()]


# -- build -------------------------------------------------------------------


def _cmd_build(args) -> int:
    budget = args.budget or DEFAULT_BUDGET
    if args.kind == "x":
        struct = build_x(args.n, args.t, GF.of_order(args.q), budget=budget)
        _structure_outputs(struct, args)
    elif args.kind == "coset":
        field = GF.of_order(args.q)
        struct = build_coset_geometry(args.n, args.t, field, budget=budget)
        rep = direction_count_report(args.n, args.t, args.q)
        _structure_outputs(
            struct,
            args,
            extra=[
                ("direction_count", rep["direction_count"]),
                ("pencil_formula", rep["pencil_formula"]),
                ("variant_formula", rep["variant_formula"]),
                ("variant_matches", rep["variant_matches"]),
            ],
        )
    elif args.kind == "linrep":
        field = parse_field_spec(args.field)
        if args.infinity == "full":
            inf = _full_infinity(field, args.n)
        else:
            inf = _subgeometry_infinity(field, args.n)
        struct = build_linrep(LinRepSpec(args.n, field, inf), budget=budget)
        _structure_outputs(struct, args, extra=[("infinity_points", len(inf))])
    else:  # genlinrep
        field = GF.of_order(args.q)
        alg = CompanionAlgebra(field, args.t)
        if args.k == "full":
            us = _full_infinity(alg.ext, args.n)
        else:
            us = _subgeometry_infinity(alg.ext, args.n)
        spread = [isomaps.field_reduce(alg, u) for u in us]
        struct = build_gen_linrep(args.t, field, spread, budget=budget)
        _structure_outputs(struct, args, extra=[("spread_size", len(spread))])
    return 0


# -- verify ------------------------------------------------------------------


def _report_out(args, report: dict):
    if getattr(args, "json", None):
        _write_text(args.json, to_canonical_json(report))
        print(f"wrote={args.json}")


def _verify_iso_x_coset(args) -> int:
    budget = args.budget or DEFAULT_BUDGET
    field = GF.of_order(args.q)
    try:
        m = isomaps.x_to_coset(args.n, args.t, field, budget=budget)
    except VerificationError as exc:
        _emit([("ok", False), ("reason", exc)])
        return 1
    rep = m.report or {}
    _emit([("ok", True), ("points", rep.get("points")), ("lines", rep.get("lines")),
           ("flags", rep.get("flags"))])
    _report_out(args, m.to_json_obj())
    return 0


def _verify_iso_coset_linrep(args) -> int:
    budget = args.budget or DEFAULT_BUDGET
    alg = CompanionAlgebra(GF.of_order(args.q), args.t)
    try:
        m, _target = isomaps.coset_to_linrep(args.n, args.t, alg, budget=budget)
    except VerificationError as exc:
        _emit([("ok", False), ("reason", exc)])
        return 1
    rep = m.report or {}
    _emit([("ok", True), ("points", rep.get("points")), ("lines", rep.get("lines")),
           ("flags", rep.get("flags"))])
    _report_out(args, m.to_json_obj())
    return 0


def _verify_barlotti(args) -> int:
    budget = args.budget or DEFAULT_BUDGET
    alg = CompanionAlgebra(GF.of_order(args.q), args.t)
    sub = _subgeometry_infinity(alg.ext, args.n)
    spec = LinRepSpec(args.n, alg.ext, sub)
    try:
        gm, _src, tgt = isomaps.barlotti_cofman(spec, alg, budget=budget)
    except VerificationError as exc:
        _emit([("ok", False), ("reason", exc)])
        return 1
    spread = [isomaps.field_reduce(alg, u) for u in spec.infinity_points]
    indep = build_gen_linrep(args.t, alg.base, spread, budget=budget)
    same = indep == tgt
    _emit([("ok", same), ("points", tgt.n_points), ("lines", tgt.n_lines),
           ("target_matches_independent_build", same)])
    _report_out(args, gm.to_json_obj())
    return 0 if same else 1


def _verify_orders(args) -> int:
    report = autcount.group_order_report(args.n, args.t, args.q)
    identities = [
        "pi_routes_agree",
        "segre_equals_pi",
        "pi_equals_geometric_times_ratio",
        "operator_mod_kernel_equals_pi",
    ]
    ok = all(report[name] for name in identities)
    pairs = [("ok", ok), ("stab_pi", report["stab_pi"]),
             ("stab_segre", report["stab_segre"]),
             ("geometric", report["geometric"]), ("ratio", report["ratio"]),
             ("operator_group", report["operator_group"]),
             ("operator_kernel", report["operator_kernel"])]
    for name in identities:
        pairs.append((name, report[name]))
    _emit(pairs)
    _report_out(args, report)
    return 0 if ok else 1


def _verify_brute(args) -> int:
    budget = args.budget or autcount.DEFAULT_NODE_BUDGET
    struct = build_x(args.n, args.t, GF.of_order(args.q))
    rep = autcount.automorphism_group_report(struct, node_budget=budget)
    formula = autcount.order_stab_pi(args.n, args.t, args.q)
    ok = rep["order"] == formula
    _emit([("ok", ok), ("brute_order", rep["order"]), ("formula_order", formula),
           ("generators", len(rep["generators"]))])
    _report_out(args, {"order": rep["order"], "formula": formula,
                       "orbit_sizes": rep["orbit_sizes"]})
    return 0 if ok else 1


def _verify_srg(args) -> int:
    struct = build_x(args.n, args.t, GF.of_order(args.q))
    report = autcount.srg_check(struct.point_graph())
    pairs = [("ok", report["is_srg"]), ("v", report.get("v"))]
    if report["is_srg"]:
        pairs += [("k", report["k"]), ("lam", report["lam"]), ("mu", report["mu"])]
    else:
        pairs += [("reason", report.get("reason"))]
        if "witness" in report:
            pairs += [("witness", json.dumps(report["witness"], sort_keys=True))]
    _emit(pairs)
    _report_out(args, report)
    return 0 if report["is_srg"] else 1


def _verify_closure(args) -> int:
    budget = args.budget or DEFAULT_BUDGET
    field = GF.of_order(args.q)
    sub_order = args.sub or field.p
    space = ProjSpace(2, field)
    frame = standard_frame(space)
    ps = pointsets.PointSet(space, frame)
    closed = pointsets.closure(ps, budget=budget)
    expected = subgeometry_points(space, sub_order)
    got = {tuple(int(c) for c in p) for p in closed}
    want = {tuple(int(c) for c in p) for p in expected}
    again = pointsets.closure(closed, budget=budget)
    idem = {tuple(int(c) for c in p) for p in again} == got
    ok = got == want and idem
    _emit([("ok", ok), ("closure_size", len(got)), ("expected_size", len(want)),
           ("idempotent", idem)])
    _report_out(args, {"closure_size": len(got), "expected_size": len(want),
                       "idempotent": idem, "ok": ok})
    return 0 if ok else 1


def _verify_property_star(args) -> int:
    field = GF.of_order(args.q)
    space = ProjSpace(args.n, field)
    if args.fixture == "two-lines":
        ps = pointsets.two_lines_fixture(space)
    elif args.fixture == "two-lines-minus-point":
        ps = pointsets.two_lines_fixture(space, minus_point=True)
    else:
        rng = np.random.default_rng(args.seed)
        size = args.size or 2 * args.q + 1
        ps = pointsets.random_point_set(space, size, rng)
    holds, witness = pointsets.has_property_star(ps, with_witness=True)
    pairs = [("ok", holds), ("set_size", len(ps))]
    if not holds:
        pairs.append(("witness_plane", json.dumps(jsonable_witness(witness["plane"]))))
    _emit(pairs)
    _report_out(args, {"holds": holds, "witness": jsonable_witness(witness)})
    return 0 if holds else 1


def jsonable_witness(obj):
    from .incidence import jsonable

    return jsonable(obj)


# -- export ------------------------------------------------------------------


def _graph_payload(graph, fmt: str) -> str:
    if fmt == "dimacs":
        return graph.to_dimacs()
    return graph.to_json()


def _cmd_export(args) -> int:
    budget = args.budget or DEFAULT_BUDGET
    field = GF.of_order(args.q)
    if args.graph == "cayley":
        graph = cayley_graph(args.n, args.t, field)
    else:
        if args.of == "x":
            struct = build_x(args.n, args.t, field, budget=budget)
        else:
            struct = build_coset_geometry(args.n, args.t, field, budget=budget)
        graph = struct.point_graph()
    payload = _graph_payload(graph, args.format)
    _emit([("n", graph.n), ("edges", graph.edge_count)])
    if args.out:
        _write_text(args.out, payload)
        print(f"wrote={args.out}")
    else:
        sys.stdout.write(payload)
    return 0


# -- parser ------------------------------------------------------------------


def _add_ntq(p, need_t=True):
    p.add_argument("--n", type=_positive_int, required=True)
    if need_t:
        p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--q", type=_prime_power, required=True)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fingeo",
        description="Finite geometry toolkit: build, verify, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a geometry and write it out")
    bsub = b.add_subparsers(dest="kind", required=True)
    for kind in ("x", "coset"):
        p = bsub.add_parser(kind)
        _add_ntq(p)
        p.add_argument("--out")
        p.add_argument("--dimacs")
        p.add_argument("--budget", type=_positive_int)
        p.set_defaults(func=_cmd_build)
    p = bsub.add_parser("linrep")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--field", required=True, help="field spec like 3^2 or 2^2/x2+x+1")
    p.add_argument("--infinity", choices=("full", "sub"), default="full")
    p.add_argument("--out")
    p.add_argument("--dimacs")
    p.add_argument("--budget", type=_positive_int)
    p.set_defaults(func=_cmd_build)
    p = bsub.add_parser("genlinrep")
    _add_ntq(p)
    p.add_argument("--k", choices=("full", "sub"), default="full")
    p.add_argument("--out")
    p.add_argument("--dimacs")
    p.add_argument("--budget", type=_positive_int)
    p.set_defaults(func=_cmd_build)

    v = sub.add_parser("verify", help="run a correctness check")
    vsub = v.add_subparsers(dest="check", required=True)
    checks = {
        "iso-x-coset": (_verify_iso_x_coset, True),
        "iso-coset-linrep": (_verify_iso_coset_linrep, True),
        "barlotti": (_verify_barlotti, True),
        "orders": (_verify_orders, True),
        "brute": (_verify_brute, True),
        "srg": (_verify_srg, True),
    }
    for name, (func, need_t) in checks.items():
        p = vsub.add_parser(name)
        _add_ntq(p, need_t=need_t)
        p.add_argument("--budget", type=_positive_int)
        p.add_argument("--json", help="write the full JSON report here")
        p.set_defaults(func=func)
    p = vsub.add_parser("closure")
    p.add_argument("--q", type=_prime_power, required=True)
    p.add_argument("--sub", type=_positive_int, help="subfield order (default: prime)")
    p.add_argument("--budget", type=_positive_int)
    p.add_argument("--json")
    p.set_defaults(func=_verify_closure)
    p = vsub.add_parser("property-star")
    p.add_argument("--fixture", choices=("two-lines", "two-lines-minus-point", "random"),
                   required=True)
    p.add_argument("--n", type=_positive_int, default=2)
    p.add_argument("--q", type=_prime_power, required=True)
    p.add_argument("--size", type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(func=_verify_property_star)

    e = sub.add_parser("export", help="write a graph as JSON or DIMACS")
    esub = e.add_subparsers(dest="graph", required=True)
    p = esub.add_parser("cayley")
    _add_ntq(p)
    p.add_argument("--format", choices=("json", "dimacs"), default="json")
    p.add_argument("--out")
    p.add_argument("--budget", type=_positive_int)
    p.set_defaults(func=_cmd_export)
    p = esub.add_parser("pointgraph")
    p.add_argument("--of", choices=("x", "coset"), default="x")
    _add_ntq(p)
    p.add_argument("--format", choices=("json", "dimacs"), default="json")
    p.add_argument("--out")
    p.add_argument("--budget", type=_positive_int)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget_exceeded={exc}", file=sys.stderr)
        return 3
