"""Command-line workbench.

Every command prints a single JSON report on stdout (compact and key-sorted;
``--human`` pretty-prints).  Exit codes: 0 = the property holds or the
artifact was produced, 1 = the property fails and the report carries the
witness, 2 = usage or input error.  Commands that randomize require an
explicit --seed; there is no implicit entropy.  Set DISMANTLE_LOG=debug for
verbose logging on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys

from . import acceptance, jsonio
from .dismantling import (
    component_dismantling_orders,
    copwin_oracle,
    dismantling_order,
    random_dismantlable,
)
from .errors import DismantleError, DisconnectedGraphError, NotDismantlableError
from .flag_complex import (
    fixed_subcomplex,
    gf2_homology,
    greedy_collapse,
    theorem15_reduction,
)
from .graph import Graph, automorphism_group, graph_to_dot, trivial_group
from .hyperbolic import (
    hyperbolicity_delta,
    invariant_subgraph_for,
    quasi_centre,
    rips_power_graph,
)
from .instances import (
    free_group_ball,
    polygon_diagonal_graph,
    polygon_diagonals,
    standard_graph,
)
from .invariant_clique import invariant_clique
from .projection import (
    invariant_clique_via_projections,
    order_from_projection,
    verify_axiom_acyclic,
    verify_axiom_exposed,
)

log = logging.getLogger("dismantle")


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_graph(path: str) -> Graph:
    return jsonio.graph_from_obj(_load_json(path))


def _load_group(args, g: Graph):
    if getattr(args, "full_aut", False):
        return automorphism_group(g)
    if getattr(args, "group", None):
        return jsonio.group_from_obj(_load_json(args.group), g)
    return trivial_group(g)


def _vertex_list(spec: str) -> frozenset[int]:
    return frozenset(int(x) for x in spec.split(",") if x != "")


def _emit_graph(args, g: Graph, report: dict) -> tuple[int, dict | str]:
    if getattr(args, "dot", False):
        return 0, graph_to_dot(g)
    report["graph"] = jsonio.graph_to_obj(g)
    return 0, report


# -- command handlers --------------------------------------------------------


def cmd_check(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    report = {"command": "check", "inputs": {"graph": _digest(args.graph)}}
    try:
        if args.per_component:
            traces = component_dismantling_orders(g, args.seed)
            report["dismantlable"] = traces is not None
            if traces is not None:
                report["traces"] = [jsonio.trace_to_obj(t) for t in traces]
        else:
            trace = dismantling_order(g, args.seed)
            report["dismantlable"] = trace is not None
            if trace is not None:
                report["trace"] = jsonio.trace_to_obj(trace)
    except DisconnectedGraphError as exc:
        return 2, {**report, "error": str(exc)}
    return (0 if report["dismantlable"] else 1), report


def cmd_order(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    trace = dismantling_order(g, args.seed)
    report = {
        "command": "order",
        "inputs": {"graph": _digest(args.graph)},
        "seed": args.seed,
    }
    if trace is None:
        return 1, {**report, "order": None, "reason": "graph is not dismantlable"}
    report["trace"] = jsonio.trace_to_obj(trace)
    return 0, report


def cmd_copwin(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    win = copwin_oracle(g)
    return (0 if win else 1), {
        "command": "copwin",
        "inputs": {"graph": _digest(args.graph)},
        "copwin": win,
    }


def cmd_gen_dismantlable(args) -> tuple[int, dict | str]:
    g = random_dismantlable(args.n, args.extra_edges, args.seed)
    return _emit_graph(
        args,
        g,
        {"command": "gen-dismantlable", "n": args.n, "seed": args.seed},
    )


def cmd_invariant_clique(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    h = _load_group(args, g)
    report = {
        "command": "invariant-clique",
        "inputs": {"graph": _digest(args.graph)},
        "group_order": len(h),
    }
    try:
        clique = invariant_clique(g, h)
    except NotDismantlableError as exc:
        return 1, {**report, "clique": None, "reason": str(exc)}
    return 0, {**report, "clique": sorted(clique), "verified": True}


def cmd_fixed_complex(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    h = _load_group(args, g)
    k = fixed_subcomplex(g, h)
    betti = gf2_homology(k)
    report = {
        "command": "fixed-complex",
        "inputs": {"graph": _digest(args.graph)},
        "group_order": len(h),
        "empty": k.is_empty,
        "betti": {str(d): b for d, b in sorted(betti.items())},
        "collapsed": (not k.is_empty) and greedy_collapse(k, seed=args.seed),
    }
    return 0, report


def cmd_thm15(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    h = _load_group(args, g)
    report = {
        "command": "thm15",
        "inputs": {"graph": _digest(args.graph)},
        "group_order": len(h),
    }
    try:
        cert = theorem15_reduction(g, h)
    except NotDismantlableError as exc:
        return 1, {**report, "certificate": None, "reason": str(exc)}
    report["certificate"] = [
        {
            "case": st.case,
            "vertices": len(st.graph),
            "removed": sorted(st.removed) if st.removed is not None else None,
            "quotient_map": (
                {str(v): c for v, c in st.quotient_map}
                if st.quotient_map is not None
                else None
            ),
            "betti_nonzero": {str(d): b for d, b in st.betti},
        }
        for st in cert.stages
    ]
    return 0, report


def cmd_verify_projection(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    p = jsonio.projection_from_obj(_load_json(args.proj))
    report = {
        "command": "verify-projection",
        "inputs": {"graph": _digest(args.graph), "proj": _digest(args.proj)},
    }
    if args.mode == "exact":
        exposed = verify_axiom_exposed(g, p, "exact")
    else:
        parts = args.mode.split(":")
        if len(parts) != 3 or parts[0] != "sample":
            return 2, {**report, "error": "mode must be 'exact' or 'sample:N:SEED'"}
        exposed = verify_axiom_exposed(
            g, p, "sampled", count=int(parts[1]), seed=int(parts[2])
        )
    acyclic = verify_axiom_acyclic(g, p)
    report["exposed"] = {
        "mode": exposed.mode,
        "checked": exposed.checked,
        "failures": exposed.failure_count,
        "failing_sets": [sorted(s) for s in exposed.failing],
    }
    report["acyclic"] = {"ok": acyclic.ok, "cycle": list(acyclic.cycle or ())}
    ok = exposed.ok and acyclic.ok
    return (0 if ok else 1), report


def cmd_order_from_proj(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    p = jsonio.projection_from_obj(_load_json(args.proj))
    trace = order_from_projection(g, p)
    return 0, {
        "command": "order-from-proj",
        "inputs": {"graph": _digest(args.graph), "proj": _digest(args.proj)},
        "trace": jsonio.trace_to_obj(trace),
    }


def cmd_prop210(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    h = jsonio.group_from_obj(_load_json(args.group), g)
    fam = jsonio.family_from_obj(_load_json(args.proj_family))
    r = _vertex_list(args.r)
    clique = invariant_clique_via_projections(g, h, fam, r)
    return 0, {
        "command": "prop210",
        "inputs": {
            "graph": _digest(args.graph),
            "group": _digest(args.group),
            "proj_family": _digest(args.proj_family),
        },
        "clique": sorted(clique),
        "verified": True,
    }


def cmd_hyperbolicity(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    rep = hyperbolicity_delta(g, geodesic_cap=args.cap)
    report = {
        "command": "hyperbolicity",
        "inputs": {"graph": _digest(args.graph)},
        "delta": rep.delta,
        "exact": rep.exact,
        "stats": dict(rep.stats),
    }
    if rep.witness is not None:
        w = rep.witness
        report["witness"] = {
            "triple": [w.u, w.v, w.w],
            "t": w.t,
            "base": list(w.base),
            "base_geodesic": list(w.base_geodesic),
            "other_geodesics": [list(p) for p in w.other_geodesics],
        }
    return 0, report


def cmd_rips(args) -> tuple[int, dict | str]:
    g = _load_graph(args.graph)
    power = rips_power_graph(g, args.D)
    return _emit_graph(
        args,
        power,
        {"command": "rips", "inputs": {"graph": _digest(args.graph)}, "D": args.D},
    )


def cmd_quasi_centre(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    qc = quasi_centre(g, _vertex_list(args.o))
    return 0, {
        "command": "quasi-centre",
        "inputs": {"graph": _digest(args.graph)},
        "centre": sorted(qc.vertices),
        "radius": qc.radius,
    }


def cmd_lemma101(args) -> tuple[int, dict]:
    g = _load_graph(args.graph)
    h = _load_group(args, g)
    s = _vertex_list(args.s)
    delta = hyperbolicity_delta(g).delta
    report = {
        "command": "lemma101",
        "inputs": {"graph": _digest(args.graph)},
        "delta": delta,
        "D": args.D,
    }
    b = invariant_subgraph_for(g, h, s, args.D)
    report["invariant_ball"] = sorted(b)
    if delta >= 1:
        from .hyperbolic import lemma101_claim_check

        centre = quasi_centre(g, frozenset(e(x) for e in h.elements for x in s)).vertices
        dist = g.distances()
        traces = []
        for v in sorted(b):
            if min(dist[v][x] for x in centre) < 2 * delta:
                continue
            res = lemma101_claim_check(g, delta, args.D, centre, v)
            traces.append(
                {
                    "v": v,
                    "u": res.u,
                    "w": res.w,
                    "a": res.a,
                    "steps": [
                        {
                            "t": st.t,
                            "case": st.case,
                            "u_prime": st.u_prime,
                            "bound": st.bound,
                            "distance": st.distance,
                            "inequalities": [
                                {"claim": lbl, "lhs": lhs, "rhs": rhs}
                                for lbl, lhs, rhs in st.inequalities
                            ],
                        }
                        for st in res.steps
                    ],
                }
            )
        report["claim_traces"] = traces
    return 0, report


def cmd_gen(args) -> tuple[int, dict | str]:
    params = [int(x) for x in args.params.split(",") if x != ""]
    g = standard_graph(args.kind, params)
    report = {"command": "gen", "kind": args.kind, "params": params}
    code, out = _emit_graph(args, g, report)
    if args.out and isinstance(out, dict):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(jsonio.canonical_dumps(out["graph"]) + "\n")
        out["written"] = args.out
    return code, out


def cmd_polygon(args) -> tuple[int, dict | str]:
    g = polygon_diagonal_graph(args.n)
    labels = polygon_diagonals(args.n)
    report = {
        "command": "polygon",
        "n": args.n,
        "diagonals": {str(i): list(d) for i, d in enumerate(labels)},
    }
    if args.dot:
        return 0, graph_to_dot(g, {i: f"{d[0]}-{d[1]}" for i, d in enumerate(labels)})
    report["graph"] = jsonio.graph_to_obj(g)
    return 0, report


def cmd_free_ball(args) -> tuple[int, dict | str]:
    g = free_group_ball(args.rank, args.radius)
    return _emit_graph(
        args, g, {"command": "free-ball", "rank": args.rank, "radius": args.radius}
    )


def cmd_suite(args) -> tuple[int, dict]:
    report = acceptance.suite(args.seed)
    report["command"] = "suite"
    return (0 if report["all_pass"] else 1), report


# -- wiring ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="dismantle", description="dismantlability workbench"
    )
    top.add_argument("--human", action="store_true", help="pretty-print the report")
    sub = top.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("check", cmd_check, help="decide dismantlability")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-component", action="store_true")

    p = add("order", cmd_order, help="produce a dismantling order")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("copwin", cmd_copwin, help="solve the pursuit game")
    p.add_argument("--graph", required=True)

    p = add("gen-dismantlable", cmd_gen_dismantlable, help="generate a dismantlable graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--extra-edges", type=int, default=0)
    p.add_argument("--dot", action="store_true")

    p = add("invariant-clique", cmd_invariant_clique, help="group-invariant clique")
    p.add_argument("--graph", required=True)
    p.add_argument("--group")
    p.add_argument("--full-aut", action="store_true")

    p = add("fixed-complex", cmd_fixed_complex, help="fixed subcomplex of the action")
    p.add_argument("--graph", required=True)
    p.add_argument("--group")
    p.add_argument("--full-aut", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = add("thm15", cmd_thm15, help="stagewise reduction certificate")
    p.add_argument("--graph", required=True)
    p.add_argument("--group")
    p.add_argument("--full-aut", action="store_true")

    p = add("verify-projection", cmd_verify_projection, help="check both projection axioms")
    p.add_argument("--graph", required=True)
    p.add_argument("--proj", required=True)
    p.add_argument("--mode", default="exact", help="exact or sample:N:SEED")

    p = add("order-from-proj", cmd_order_from_proj, help="order from a projection")
    p.add_argument("--graph", required=True)
    p.add_argument("--proj", required=True)

    p = add("prop210", cmd_prop210, help="invariant clique via a projection family")
    p.add_argument("--graph", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--proj-family", required=True)
    p.add_argument("--r", required=True, help="comma-separated vertex ids")

    p = add("hyperbolicity", cmd_hyperbolicity, help="exact thin-triangle constant")
    p.add_argument("--graph", required=True)
    p.add_argument("--cap", type=int, default=10_000)

    p = add("rips", cmd_rips, help="distance power graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--dot", action="store_true")

    p = add("quasi-centre", cmd_quasi_centre, help="centre minimizing max distance")
    p.add_argument("--graph", required=True)
    p.add_argument("--o", required=True, help="comma-separated vertex ids")

    p = add("lemma101", cmd_lemma101, help="invariant dismantlable ball with claim traces")
    p.add_argument("--graph", required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--s", required=True, help="comma-separated vertex ids")
    p.add_argument("--group")
    p.add_argument("--full-aut", action="store_true")

    p = add("gen", cmd_gen, help="standard graph families")
    p.add_argument("--kind", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--out")
    p.add_argument("--dot", action="store_true")

    p = add("polygon", cmd_polygon, help="polygon diagonal graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dot", action="store_true")

    p = add("free-ball", cmd_free_ball, help="ball in the free-group tree")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--dot", action="store_true")

    p = add("suite", cmd_suite, help="run the full acceptance battery (twice)")
    p.add_argument("--seed", type=int, required=True)

    return top


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("DISMANTLE_LOG", "warning").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        code, report = args.fn(args)
    except (DismantleError, OSError, json.JSONDecodeError) as exc:
        print(jsonio.canonical_dumps({"error": f"{type(exc).__name__}: {exc}"}))
        return 2
    if isinstance(report, str):
        sys.stdout.write(report)
    elif args.human:
        print(jsonio.human_dumps(report))
    else:
        print(jsonio.canonical_dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
