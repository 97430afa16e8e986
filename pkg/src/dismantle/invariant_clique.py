"""Invariant cliques of dismantlable graphs under automorphism groups.

The recursion alternates two reductions.  When two vertices share a closed
neighborhood, all such classes are collapsed at once and the group descends
to the quotient; the answer is pulled back as the full preimage.  Otherwise
domination is a strict partial order, the (nonempty) set of dominated
vertices is removed, and the group restricts to the rest.  Both reductions
preserve dismantlability and every automorphism, so the recursion reaches a
single vertex.
"""

from __future__ import annotations

from .dismantling import dismantling_order
from .errors import (
    DisconnectedGraphError,
    InvalidInput,
    NotDismantlableError,
    VerificationBugError,
)
from .graph import (
    Graph,
    Permutation,
    PermutationGroup,
    VertexSet,
    dominators,
    equal_neighborhood_quotient,
    induced_subgraph,
    is_automorphism,
    is_clique,
)


def invariant_clique(g: Graph, h: PermutationGroup, debug: bool = False) -> VertexSet:
    """A clique invariant under the given automorphism group.

    Requires a dismantlable graph (checked; disconnected or order-less
    graphs are rejected with NotDismantlableError) and a group acting by
    automorphisms.  The result is re-verified before being returned; an
    internal inconsistency raises VerificationBugError and is never
    silently returned.  ``debug`` re-checks dismantlability at every
    recursion level instead of only at the boundary.
    """
    _validate_action(g, h)
    if len(g) == 0:
        raise InvalidInput("need a nonempty graph")
    try:
        trace = dismantling_order(g)
    except DisconnectedGraphError:
        raise NotDismantlableError("disconnected graphs are not dismantlable") from None
    if trace is None:
        raise NotDismantlableError("graph admits no dismantling order")
    clique = _recurse(g, h.elements, debug)
    if not verify_invariant_clique(g, h, clique):
        raise VerificationBugError("computed set failed invariant-clique verification")
    return clique


def verify_invariant_clique(g: Graph, h: PermutationGroup, s: VertexSet) -> bool:
    """True iff s is a clique of g mapped onto itself by every group element."""
    sset = frozenset(s)
    for v in sset:
        g.require(v)
    return is_clique(g, sset) and all(e.apply_set(sset) == sset for e in h.elements)


def _validate_action(g: Graph, h: PermutationGroup) -> None:
    for e in h.generators:
        if not is_automorphism(g, e):
            raise InvalidInput("group does not act on the graph by automorphisms")


def _recurse(g: Graph, elems: tuple[Permutation, ...], debug: bool) -> VertexSet:
    if debug and len(g) > 1 and dismantling_order(g) is None:
        raise VerificationBugError("recursion reached a non-dismantlable stage")
    if len(g) == 1:
        return frozenset(g.vertices)

    closed_sets = {v: g.closed(v) for v in g.vertices}
    if len(set(closed_sets.values())) < len(g):
        # Collapse: some vertices share a closed neighborhood.
        q, cmap = equal_neighborhood_quotient(g)
        members: dict[int, list[int]] = {}
        for v, c in cmap.items():
            members.setdefault(c, []).append(v)
        qelems = _dedupe(_push_through_quotient(e, cmap, members, q) for e in elems)
        sub_clique = _recurse(q, qelems, debug)
        return frozenset(v for v in g.vertices if cmap[v] in sub_clique)

    # Peel: closed neighborhoods are pairwise distinct, so domination is a
    # strict partial order and undominated vertices exist.
    dominated = frozenset(v for v in g.vertices if dominators(g, v))
    if not dominated:
        raise VerificationBugError(
            "multi-vertex dismantlable graph with no dominated vertex"
        )
    keep = frozenset(g.vertices) - dominated
    if not keep:
        raise VerificationBugError(
            "all vertices dominated although closed neighborhoods are distinct"
        )
    for v in dominated:
        if not (dominators(g, v) & keep):
            raise VerificationBugError(
                f"dominated vertex {v} lacks an undominated dominator"
            )
    sub = induced_subgraph(g, keep)
    selems = _dedupe(_restrict_perm(e, keep, sub) for e in elems)
    return _recurse(sub, selems, debug)


def _push_through_quotient(
    e: Permutation,
    cmap: dict[int, int],
    members: dict[int, list[int]],
    q: Graph,
) -> Permutation:
    img: dict[int, int] = {}
    for cls_id, verts in members.items():
        targets = {cmap[e(v)] for v in verts}
        if len(targets) != 1:
            raise VerificationBugError(
                "automorphism does not descend to the neighborhood quotient"
            )
        img[cls_id] = targets.pop()
    pushed = Permutation(img)
    if not is_automorphism(q, pushed):
        raise VerificationBugError("quotient image of an automorphism is not one")
    return pushed


def _restrict_perm(e: Permutation, keep: VertexSet, sub: Graph) -> Permutation:
    if e.apply_set(keep) != keep:
        raise VerificationBugError(
            "automorphism does not preserve the undominated vertex set"
        )
    restricted = Permutation({v: e(v) for v in keep})
    if not is_automorphism(sub, restricted):
        raise VerificationBugError("restriction of an automorphism is not one")
    return restricted


def _dedupe(perms) -> tuple[Permutation, ...]:
    seen: dict[Permutation, None] = {}
    for p in perms:
        seen.setdefault(p, None)
    return tuple(seen)
