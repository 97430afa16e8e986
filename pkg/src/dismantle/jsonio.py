"""JSON wire formats for graphs, permutations, traces, projections, complexes.

Graph: {"vertices": [0, 1, ...], "edges": [[u, v], ...]} with u < v, no
duplicates.  Permutation: array p aligned with the sorted vertex list, p[i]
being the image of the i-th smallest vertex (for graphs with contiguous ids
this is just "p[i] is the image of vertex i").  Group: {"generators":
[perm, ...]}.  Trace: {"order": [...], "witnesses": [...]}.  Projection:
{"sigma": s, "table": {"rho": [[a, b], ...], ...}}.  Family: {"members":
[projection, ...]}.  Complex: {"maximal_faces": [[...], ...]}.
"""

from __future__ import annotations

import json
from typing import Any

from .dismantling import DismantlingTrace
from .errors import InvalidInput
from .flag_complex import SimplicialComplex
from .graph import Graph, Permutation, PermutationGroup, group_closure
from .projection import DismantlingProjection, Pair, ProjectionFamily


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def human_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidInput(msg)


def graph_to_obj(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges()],
    }


def graph_from_obj(obj: Any) -> Graph:
    _expect(isinstance(obj, dict), "graph JSON must be an object")
    _expect("vertices" in obj and "edges" in obj, "graph JSON needs vertices and edges")
    verts = obj["vertices"]
    edges = obj["edges"]
    _expect(isinstance(verts, list), "vertices must be a list")
    _expect(isinstance(edges, list), "edges must be a list")
    seen = set()
    for e in edges:
        _expect(
            isinstance(e, list) and len(e) == 2,
            "each edge must be a two-element list",
        )
        u, v = e
        _expect(u < v, f"edge [{u},{v}] must be listed with u < v")
        _expect((u, v) not in seen, f"duplicate edge [{u},{v}]")
        seen.add((u, v))
    return Graph(verts, edges)


def perm_to_obj(p: Permutation) -> list[int]:
    return [p(v) for v in p.domain]


def perm_from_obj(obj: Any, g: Graph) -> Permutation:
    _expect(isinstance(obj, list), "permutation JSON must be an array")
    _expect(
        len(obj) == len(g),
        f"permutation length {len(obj)} does not match vertex count {len(g)}",
    )
    return Permutation({v: obj[i] for i, v in enumerate(g.vertices)})


def group_to_obj(h: PermutationGroup) -> dict:
    return {"generators": [perm_to_obj(p) for p in h.generators]}


def group_from_obj(obj: Any, g: Graph, cap: int = 100_000) -> PermutationGroup:
    _expect(isinstance(obj, dict) and "generators" in obj, "group JSON needs generators")
    gens = [perm_from_obj(p, g) for p in obj["generators"]]
    return group_closure(gens, cap=cap, graph=g)


def trace_to_obj(t: DismantlingTrace) -> dict:
    return {"order": list(t.order), "witnesses": list(t.witnesses)}


def trace_from_obj(obj: Any) -> DismantlingTrace:
    _expect(
        isinstance(obj, dict) and "order" in obj and "witnesses" in obj,
        "trace JSON needs order and witnesses",
    )
    return DismantlingTrace(tuple(obj["order"]), tuple(obj["witnesses"]))


def projection_to_obj(p: DismantlingProjection) -> dict:
    return {
        "sigma": p.sigma,
        "table": {
            str(rho): [list(q.members) for q in pairs] for rho, pairs in p.items()
        },
    }


def projection_from_obj(obj: Any) -> DismantlingProjection:
    _expect(
        isinstance(obj, dict) and "sigma" in obj and "table" in obj,
        "projection JSON needs sigma and table",
    )
    table = {}
    for rho, pairs in obj["table"].items():
        table[int(rho)] = [Pair(a, b) for a, b in pairs]
    return DismantlingProjection(int(obj["sigma"]), table)


def family_to_obj(fam: ProjectionFamily) -> dict:
    return {"members": [projection_to_obj(p) for p in fam]}


def family_from_obj(obj: Any) -> ProjectionFamily:
    _expect(isinstance(obj, dict) and "members" in obj, "family JSON needs members")
    return ProjectionFamily(projection_from_obj(p) for p in obj["members"])


def complex_to_obj(k: SimplicialComplex) -> dict:
    faces = []
    for f in k.maximal_faces:
        _expect(
            all(isinstance(v, int) for v in f),
            "only integer-vertex complexes have a JSON form",
        )
        faces.append(sorted(f))
    return {"maximal_faces": faces}


def complex_from_obj(obj: Any) -> SimplicialComplex:
    _expect(
        isinstance(obj, dict) and "maximal_faces" in obj,
        "complex JSON needs maximal_faces",
    )
    return SimplicialComplex(obj["maximal_faces"])
