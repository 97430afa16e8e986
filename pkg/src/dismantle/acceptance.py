"""The acceptance battery: one function per criterion, shared by CLI and tests.

Every criterion is deterministic given its seed; the suite payload is the
canonical JSON of all criterion results, so a rerun with the same seed must
reproduce it byte for byte (that reproducibility is itself the last
criterion).  Wall-clock timing is deliberately excluded from the payload.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from . import jsonio
from .dismantling import (
    copwin_oracle,
    dismantling_order,
    is_dismantlable,
    random_dismantlable,
    remove_and_reorder,
    verify_trace,
)
from .errors import CapExceededError, NotDismantlableError
from .flag_complex import (
    fixed_subcomplex,
    gf2_homology,
    theorem15_reduction,
)
from .graph import (
    Graph,
    Permutation,
    automorphism_group,
    dominators,
    group_closure,
    induced_subgraph,
    is_tree,
    trivial_group,
)
from .hyperbolic import (
    ball,
    hyperbolicity_delta,
    lemma101_claim_check,
    quasi_centre,
    rips_ball_order,
    rips_power_graph,
    set_diameter,
)
from .instances import (
    cycle_graph,
    free_group_ball,
    path_graph,
    petersen_graph,
    polygon_diagonal_graph,
    random_tree,
    star_graph,
)
from .invariant_clique import invariant_clique, verify_invariant_clique
from .projection import (
    DismantlingProjection,
    Pair,
    ProjectionFamily,
    invariant_clique_via_projections,
    is_pi_convex,
    order_from_projection,
    restrict_projection,
    tree_power_projection,
    verify_axiom_acyclic,
    verify_axiom_exposed,
)

DEFAULT_SEED = 20260810


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    details: dict

    def to_obj(self) -> dict:
        return {
            "id": self.cid,
            "title": self.title,
            "passed": self.passed,
            "details": self.details,
        }


# -- P1 ----------------------------------------------------------------------


def criterion_p1(seed: int) -> CriterionResult:
    """Greedy decider agrees with the pursuit game on every connected graph
    with six labeled vertices, exhaustively over all adjacency matrices."""
    n = 6
    slots = list(combinations(range(n), 2))
    agree = 0
    checked = 0
    mismatches: list[dict] = []
    for code in range(1 << len(slots)):
        edges = [slots[i] for i in range(len(slots)) if code >> i & 1]
        g = Graph(range(n), edges)
        if not g.is_connected():
            continue
        checked += 1
        greedy = dismantling_order(g) is not None
        game = copwin_oracle(g)
        if greedy == game:
            agree += 1
        elif len(mismatches) < 5:
            mismatches.append({"edges": edges, "greedy": greedy, "game": game})
    return CriterionResult(
        "P1",
        "dismantling order exists iff cop wins (exhaustive, n=6)",
        agree == checked and not mismatches,
        {"connected_graphs": checked, "agreements": agree, "mismatches": mismatches},
    )


# -- P2 ----------------------------------------------------------------------


def criterion_p2(seed: int) -> CriterionResult:
    """Order repair after removing any dominated vertex yields a valid trace."""
    rng = random.Random(seed + 2)
    graphs = 300
    repairs = 0
    failures: list[dict] = []
    for i in range(graphs):
        n = rng.randint(2, 12)
        g = random_dismantlable(n, extra_edges=rng.randint(0, 8), seed=rng.randrange(1 << 30))
        t = dismantling_order(g, seed=rng.randrange(1 << 30))
        assert t is not None
        for sigma in g.vertices:
            if not dominators(g, sigma):
                continue
            try:
                remove_and_reorder(g, t, sigma)
                repairs += 1
            except Exception as exc:  # noqa: BLE001 - counterexample capture
                failures.append({"graph": jsonio.graph_to_obj(g), "sigma": sigma, "error": str(exc)})
    return CriterionResult(
        "P2",
        "order repair valid for every dominated vertex (300 graphs, n<=12)",
        not failures,
        {"graphs": graphs, "repairs": repairs, "failures": failures[:5]},
    )


# -- P3 ----------------------------------------------------------------------


def _modest_dismantlable(rng: random.Random, max_n: int, max_extra: int, max_clique: int) -> Graph:
    # Regenerate until the largest clique is modest; keeps brute-forced
    # automorphism groups and order complexes tractable.
    while True:
        n = rng.randint(2, max_n)
        g = random_dismantlable(n, extra_edges=rng.randint(0, max_extra), seed=rng.randrange(1 << 30))
        from .flag_complex import _maximal_cliques

        if max(len(c) for c in _maximal_cliques(g)) <= max_clique:
            return g


def criterion_p3(seed: int) -> CriterionResult:
    """Invariant clique under the full automorphism group, 200 graphs; the
    non-dismantlable controls are rejected at the precondition."""
    rng = random.Random(seed + 3)
    count = 200
    verified = 0
    failures: list[dict] = []
    for _ in range(count):
        g = _modest_dismantlable(rng, max_n=9, max_extra=6, max_clique=6)
        try:
            h = automorphism_group(g)
        except CapExceededError:
            continue
        clique = invariant_clique(g, h)
        if verify_invariant_clique(g, h, clique):
            verified += 1
        else:
            failures.append({"graph": jsonio.graph_to_obj(g)})
    rejected = 0
    for control in (cycle_graph(5), petersen_graph()):
        try:
            invariant_clique(control, trivial_group(control))
        except NotDismantlableError:
            rejected += 1
    return CriterionResult(
        "P3",
        "invariant clique under the full automorphism group (200 graphs, n<=9)",
        verified > 0 and not failures and rejected == 2,
        {
            "verified": verified,
            "failures": failures[:5],
            "controls_rejected": rejected,
        },
    )


# -- P4 ----------------------------------------------------------------------


def criterion_p4(seed: int) -> CriterionResult:
    """Tree projections: both axioms exactly, order valid, restriction to
    every tree-ball around the base preserves both axioms."""
    rng = random.Random(seed + 4)
    count = 100
    clean = 0
    failures: list[dict] = []
    for _ in range(count):
        n = rng.randint(2, 14)
        d = rng.randint(1, 4)
        tree = random_tree(n, seed=rng.randrange(1 << 30))
        sigma = rng.choice(tree.vertices)
        power = rips_power_graph(tree, d)
        proj = tree_power_projection(tree, d, sigma)
        problem = None
        if not verify_axiom_exposed(power, proj, "exact").ok:
            problem = "exposure axiom failed"
        elif not verify_axiom_acyclic(power, proj).ok:
            problem = "acyclicity failed"
        else:
            trace = order_from_projection(power, proj)
            if not verify_trace(power, trace):
                problem = "order invalid"
            else:
                ecc = max(tree.distances()[sigma].values())
                for radius in range(ecc + 1):
                    b = ball(tree, {sigma}, radius)
                    if not is_pi_convex(power, proj, b):
                        problem = f"tree ball radius {radius} not convex"
                        break
                    sub = induced_subgraph(power, b)
                    rproj = restrict_projection(power, proj, b)
                    if not verify_axiom_exposed(sub, rproj, "exact").ok:
                        problem = f"restricted exposure failed at radius {radius}"
                        break
                    if not verify_axiom_acyclic(sub, rproj).ok:
                        problem = f"restricted acyclicity failed at radius {radius}"
                        break
        if problem is None:
            clean += 1
        else:
            failures.append(
                {"tree": jsonio.graph_to_obj(tree), "d": d, "sigma": sigma, "problem": problem}
            )
    return CriterionResult(
        "P4",
        "tree projections: axioms, order, and ball restrictions (100 trees)",
        clean == count,
        {"clean": clean, "failures": failures[:5]},
    )


# -- P5 ----------------------------------------------------------------------


def _mirrored_tree(rng: random.Random, half: int) -> tuple[Graph, Permutation]:
    """A tree made of two mirrored copies hanging off a centre; returns the swap."""
    branch = random_tree(half, seed=rng.randrange(1 << 30))
    centre = 2 * half
    edges = list(branch.edges())
    edges += [(u + half, v + half) for (u, v) in branch.edges()]
    edges += [(0, centre), (half, centre)]
    g = Graph(range(2 * half + 1), edges)
    swap = {centre: centre}
    for v in range(half):
        swap[v] = v + half
        swap[v + half] = v
    return g, Permutation(swap)


def criterion_p5(seed: int) -> CriterionResult:
    """Orbit pipeline produces verified invariant cliques on symmetric trees;
    a deliberately non-equivariant family is rejected."""
    rng = random.Random(seed + 5)
    produced = 0
    failures: list[dict] = []

    cases = []
    for n in (5, 7, 9):
        g = path_graph(n)
        refl = Permutation({v: n - 1 - v for v in range(n)})
        cases.append(("path", g, refl, 0, n - 1))
    for half in (3, 4, 6):
        g, swap = _mirrored_tree(rng, half)
        cases.append(("mirror", g, swap, 0, half))
    star = star_graph(5)
    rot = Permutation({0: 0, **{1 + i: 1 + (i + 1) % 5 for i in range(5)}})
    cases.append(("star", star, rot, 1, 2))

    for name, tree, gen, base, mirror_base in cases:
        for d in (1, 2):
            power = rips_power_graph(tree, d)
            h = group_closure([gen], graph=power)
            orbit = frozenset(e(base) for e in h.elements)
            fam = ProjectionFamily(
                tree_power_projection(tree, d, s) for s in sorted(orbit)
            )
            r = frozenset(tree.vertices)
            try:
                clique = invariant_clique_via_projections(power, h, fam, r)
                if verify_invariant_clique(power, h, clique) and clique <= r:
                    produced += 1
                else:
                    failures.append({"case": name, "d": d, "problem": "bad clique"})
            except Exception as exc:  # noqa: BLE001
                failures.append({"case": name, "d": d, "problem": str(exc)})

    # Negative fixture: perturb one table entry of one family member.
    n = 7
    g = path_graph(n)
    refl = Permutation({v: n - 1 - v for v in range(n)})
    h = group_closure([refl], graph=g)
    p0 = tree_power_projection(g, 1, 0)
    p6 = tree_power_projection(g, 1, n - 1)
    broken_table = {rho: list(p6.pairs(rho)) for rho in p6.domain}
    broken_table[3] = [Pair(1, 1)]  # parent toward 6 is 4, not 1
    broken = DismantlingProjection(n - 1, broken_table)
    fixture_rejected = False
    try:
        invariant_clique_via_projections(
            g, h, ProjectionFamily([p0, broken]), frozenset(g.vertices)
        )
    except Exception:  # noqa: BLE001 - any hypothesis rejection counts
        fixture_rejected = True
    return CriterionResult(
        "P5",
        "orbit pipeline on symmetric trees; non-equivariant fixture rejected",
        produced == len(cases) * 2 and not failures and fixture_rejected,
        {
            "produced": produced,
            "expected": len(cases) * 2,
            "failures": failures[:5],
            "fixture_rejected": fixture_rejected,
        },
    )


# -- P6 ----------------------------------------------------------------------


def criterion_p6(seed: int) -> CriterionResult:
    """Fixed subcomplexes of dismantlable graphs are nonempty with trivial
    reduced homology; stagewise reduction keeps homology constant; the
    antipodal hexagon gives the empty fixed complex."""
    rng = random.Random(seed + 6)
    count = 200
    good = 0
    failures: list[dict] = []
    for _ in range(count):
        g = _modest_dismantlable(rng, max_n=9, max_extra=4, max_clique=6)
        try:
            h = automorphism_group(g)
        except CapExceededError:
            continue
        fixed = fixed_subcomplex(g, h)
        betti = gf2_homology(fixed)
        problem = None
        if fixed.is_empty:
            problem = "fixed complex empty"
        elif any(betti.values()):
            problem = f"nontrivial homology {betti}"
        else:
            try:
                theorem15_reduction(g, h)
            except Exception as exc:  # noqa: BLE001
                problem = f"reduction failed: {exc}"
        if problem is None:
            good += 1
        else:
            failures.append({"graph": jsonio.graph_to_obj(g), "problem": problem})

    c6 = cycle_graph(6)
    antipodal = Permutation({v: (v + 3) % 6 for v in range(6)})
    h6 = group_closure([antipodal], graph=c6)
    empty_fixed = fixed_subcomplex(c6, h6)
    empty_ok = empty_fixed.is_empty and gf2_homology(empty_fixed) == {-1: 1}

    return CriterionResult(
        "P6",
        "fixed subcomplex nonempty and homology-trivial; reduction constant (200 graphs)",
        good > 0 and not failures and empty_ok,
        {"good": good, "failures": failures[:5], "antipodal_hexagon_empty": empty_ok},
    )


# -- P7 ----------------------------------------------------------------------


def _random_connected(rng: random.Random, n: int, p: float) -> Graph:
    while True:
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        g = Graph(range(n), edges)
        if g.is_connected():
            return g


def _p7_graph(rng: random.Random) -> Graph:
    kind = rng.randrange(3)
    if kind == 0:
        n = rng.randint(4, 16)
        return _random_connected(rng, n, rng.uniform(0.15, 0.5))
    if kind == 1:
        k = rng.randint(4, 10)
        g = cycle_graph(k)
        extra = rng.randint(0, 16 - k)
        edges = list(g.edges())
        for i in range(extra):
            v = k + i
            edges.append((rng.randrange(v), v))
        return Graph(range(k + extra), edges)
    n = rng.randint(4, 16)
    t = random_tree(n, seed=rng.randrange(1 << 30))
    edges = set(t.edges())
    for _ in range(rng.randint(0, 2)):
        u, v = rng.sample(range(n), 2)
        if u > v:
            u, v = v, u
        if (u, v) not in edges and u != v:
            edges.add((u, v))
    return Graph(range(n), sorted(edges))


def criterion_p7(seed: int) -> CriterionResult:
    """Hyperbolicity constants: quasi-centre diameter bound, claim checks at
    D = 8*delta+1 with bounded inequality traces, valid ball orders, and the
    cop oracle cross-check on small instances."""
    rng = random.Random(seed + 7)
    count = 100
    stats = {
        "graphs": 0,
        "quasi_centre_checks": 0,
        "claim_checks": 0,
        "ball_orders": 0,
        "copwin_crosschecks": 0,
        "delta_histogram": {},
    }
    failures: list[dict] = []
    for _ in range(count):
        g = _p7_graph(rng)
        report = hyperbolicity_delta(g)
        if not report.exact:
            continue  # does not count toward exact-delta instances
        delta = report.delta
        key = str(delta)
        stats["delta_histogram"][key] = stats["delta_histogram"].get(key, 0) + 1
        stats["graphs"] += 1
        problem = None

        for _ in range(3):
            size = rng.randint(1, len(g))
            o = frozenset(rng.sample(g.vertices, size))
            qc = quasi_centre(g, o)
            stats["quasi_centre_checks"] += 1
            if set_diameter(g, qc.vertices) > 4 * delta + 1:
                problem = f"quasi-centre diameter bound broken for {sorted(o)}"
                break
        if problem is None:
            # A small target set keeps its quasi-centre tight, so other
            # vertices are far enough away to be eligible for the claim.
            o = frozenset(rng.sample(g.vertices, rng.randint(1, max(1, len(g) // 5))))
            centre = quasi_centre(g, o).vertices
            dd = 8 * delta + 1
            dist = g.distances()
            if delta >= 1:
                for v in sorted(g.vertices):
                    away = min(dist[v][x] for x in centre)
                    if away < 2 * delta:
                        continue
                    try:
                        res = lemma101_claim_check(g, delta, dd, centre, v)
                        stats["claim_checks"] += 1
                        if any(s.distance > s.bound or s.bound > dd for s in res.steps):
                            problem = f"inequality trace exceeds D at {v}"
                            break
                    except Exception as exc:  # noqa: BLE001
                        problem = f"claim check failed at {v}: {exc}"
                        break
            if problem is None:
                rmax = max(min(dist[v][x] for x in centre) for v in g.vertices)
                for r in sorted({0, rmax // 2, rmax}):
                    trace = rips_ball_order(g, delta, dd, centre, r)
                    stats["ball_orders"] += 1
                    sub = induced_subgraph(
                        rips_power_graph(g, dd), ball(g, centre, r)
                    )
                    if not verify_trace(sub, trace):
                        problem = f"ball order invalid at r={r}"
                        break
                    if len(g) <= 12:
                        stats["copwin_crosschecks"] += 1
                        if not copwin_oracle(sub):
                            problem = f"cop oracle disagrees at r={r}"
                            break
        if problem is not None:
            failures.append({"graph": jsonio.graph_to_obj(g), "problem": problem})
    return CriterionResult(
        "P7",
        "hyperbolicity constants: quasi-centres, claims at D=8d+1, ball orders",
        stats["graphs"] > 0 and not failures,
        {**stats, "failures": failures[:5]},
    )


# -- P8 ----------------------------------------------------------------------


def criterion_p8(seed: int) -> CriterionResult:
    """Tree branch: powers of free-group balls and random trees are
    dismantlable through the projection pipeline for D = 1..5."""
    rng = random.Random(seed + 8)
    trees: list[Graph] = []
    for rank in (1, 2):
        for radius in (1, 2, 3, 4):
            trees.append(free_group_ball(rank, radius))
    for _ in range(50):
        trees.append(random_tree(rng.randint(2, 40), seed=rng.randrange(1 << 30)))
    checked = 0
    failures: list[dict] = []
    for tree in trees:
        sigma = tree.vertices[rng.randrange(len(tree))]
        for d in range(1, 6):
            power = rips_power_graph(tree, d)
            proj = tree_power_projection(tree, d, sigma)
            try:
                trace = order_from_projection(power, proj)
                if not verify_trace(power, trace):
                    raise AssertionError("trace failed verification")
                if not verify_axiom_acyclic(power, proj).ok:
                    raise AssertionError("step relation has a cycle")
                checked += 1
            except Exception as exc:  # noqa: BLE001
                failures.append(
                    {"n": len(tree), "d": d, "sigma": sigma, "problem": str(exc)}
                )
    return CriterionResult(
        "P8",
        "powers of trees dismantlable via projections (free-group balls + 50 trees, D=1..5)",
        checked == len(trees) * 5 and not failures,
        {"checked": checked, "expected": len(trees) * 5, "failures": failures[:5]},
    )


# -- P9 ----------------------------------------------------------------------


def criterion_p9(seed: int) -> CriterionResult:
    """Negative controls: the pentagon diagonal graph is the 5-cycle; none of
    the polygon diagonal graphs for n = 5..8 is dismantlable or cop-win."""
    g5 = polygon_diagonal_graph(5)
    pentagon_ok = (
        len(g5) == 5
        and g5.is_connected()
        and all(g5.degree(v) == 2 for v in g5.vertices)
    )
    details: dict = {"pentagon_is_c5": pentagon_ok, "controls": []}
    all_negative = True
    for n in range(5, 9):
        g = polygon_diagonal_graph(n)
        dismantlable = is_dismantlable(g, per_component=True)
        copwin = copwin_oracle(g)
        details["controls"].append(
            {"n": n, "vertices": len(g), "dismantlable": dismantlable, "copwin": copwin}
        )
        if dismantlable or copwin:
            all_negative = False
    return CriterionResult(
        "P9",
        "polygon diagonal graphs: C5 shape at n=5; never dismantlable or cop-win",
        pentagon_ok and all_negative,
        details,
    )


# -- battery and suite -------------------------------------------------------

CRITERIA = {
    "P1": criterion_p1,
    "P2": criterion_p2,
    "P3": criterion_p3,
    "P4": criterion_p4,
    "P5": criterion_p5,
    "P6": criterion_p6,
    "P7": criterion_p7,
    "P8": criterion_p8,
    "P9": criterion_p9,
}


def run_battery(seed: int = DEFAULT_SEED) -> dict[str, CriterionResult]:
    return {cid: fn(seed) for cid, fn in CRITERIA.items()}


def battery_payload(seed: int = DEFAULT_SEED) -> str:
    """Canonical JSON of all criterion results; timing is excluded so that a
    rerun with the same seed is byte-identical."""
    results = run_battery(seed)
    return jsonio.canonical_dumps(
        {"seed": seed, "criteria": [results[cid].to_obj() for cid in sorted(results)]}
    )


def suite(seed: int = DEFAULT_SEED) -> dict:
    """Run the whole battery twice: once for the verdicts, once for the
    reproducibility criterion."""
    import json as _json

    first = battery_payload(seed)
    second = battery_payload(seed)
    obj = _json.loads(first)
    p10 = {
        "id": "P10",
        "title": "rerunning the suite with the same seed is byte-identical",
        "passed": first == second,
        "details": {"bytes": len(first)},
    }
    obj["criteria"].append(p10)
    obj["all_pass"] = all(c["passed"] for c in obj["criteria"])
    return obj
