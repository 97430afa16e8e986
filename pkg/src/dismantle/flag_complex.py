"""Flag complexes, invariant simplices, fixed subcomplexes, and homology oracles.

The fixed subcomplex of a group acting simplicially on a flag complex is
triangulated combinatorially as the order complex of the invariant cliques:
its vertices are the invariant cliques, its faces the chains under
inclusion.  This is the full subcomplex of the barycentric subdivision
spanned on fixed barycenters, which keeps every check finite.  Homology is
computed over the two-element field; collapsibility gives the constructive
contractibility certificate, homology only a consistency check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable

from .dismantling import dismantling_order
from .errors import (
    CapExceededError,
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
from .invariant_clique import _dedupe, _push_through_quotient, _restrict_perm, _validate_action

_FACE_SIZE_CAP = 25  # expanding a face of this size would mean 2^25 subfaces


def _vkey(v):
    return (1, tuple(sorted(v))) if isinstance(v, frozenset) else (0, v)


def _face_key(face: frozenset):
    return (len(face), tuple(sorted(_vkey(v) for v in face)))


class SimplicialComplex:
    """Finite abstract simplicial complex stored by its maximal faces.

    Vertices are arbitrary hashables (ints for flag complexes, frozensets
    for order complexes).  The face set is expanded on demand.
    """

    __slots__ = ("_maximal", "_vertices", "_cache")

    def __init__(self, maximal_faces: Iterable[Iterable[Hashable]]):
        candidates = sorted(
            {frozenset(f) for f in maximal_faces if frozenset(f)},
            key=len,
            reverse=True,
        )
        kept: list[frozenset] = []
        for f in candidates:
            if not any(f < other for other in kept):
                kept.append(f)
        self._maximal = frozenset(kept)
        self._vertices = frozenset().union(*kept) if kept else frozenset()
        self._cache: dict = {}

    @property
    def maximal_faces(self) -> tuple[frozenset, ...]:
        return tuple(sorted(self._maximal, key=_face_key))

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def is_empty(self) -> bool:
        return not self._maximal

    def dim(self) -> int:
        """Dimension; -1 for the empty complex."""
        if self.is_empty:
            return -1
        return max(len(f) for f in self._maximal) - 1

    def faces(self) -> frozenset:
        """All nonempty faces (downward closure of the maximal ones)."""
        if "faces" not in self._cache:
            out: set[frozenset] = set()
            for mf in self._maximal:
                if len(mf) > _FACE_SIZE_CAP:
                    raise CapExceededError(
                        f"face with {len(mf)} vertices is too large to expand"
                    )
                items = tuple(mf)
                for k in range(1, len(items) + 1):
                    out.update(frozenset(c) for c in combinations(items, k))
            self._cache["faces"] = frozenset(out)
        return self._cache["faces"]

    def faces_by_dim(self) -> dict[int, tuple[frozenset, ...]]:
        if "by_dim" not in self._cache:
            buckets: dict[int, list[frozenset]] = {}
            for f in self.faces():
                buckets.setdefault(len(f) - 1, []).append(f)
            self._cache["by_dim"] = {
                d: tuple(sorted(fs, key=_face_key)) for d, fs in sorted(buckets.items())
            }
        return self._cache["by_dim"]

    def has_face(self, f: Iterable[Hashable]) -> bool:
        ff = frozenset(f)
        return bool(ff) and any(ff <= mf for mf in self._maximal)

    def num_faces(self) -> int:
        return len(self.faces())

    def euler_characteristic(self) -> int:
        return sum(
            (-1) ** d * len(fs) for d, fs in self.faces_by_dim().items()
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._maximal == other._maximal

    def __hash__(self) -> int:
        return hash(self._maximal)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self._vertices)} vertices, dim {self.dim()})"


def _maximal_cliques(g: Graph) -> list[frozenset]:
    """Bron-Kerbosch with pivoting; singletons count for isolated vertices."""
    out: list[frozenset] = []
    adj = {v: g.neighbors(v) for v in g.vertices}

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(g.vertices), set())
    return out


def flag_complex(g: Graph, dim_cap: int = 20) -> SimplicialComplex:
    """The complex whose faces are exactly the cliques of the graph."""
    maximal = _maximal_cliques(g)
    for f in maximal:
        if len(f) > dim_cap + 1:
            raise CapExceededError(
                f"clique on {len(f)} vertices exceeds dimension cap {dim_cap}"
            )
    return SimplicialComplex(maximal)


def _all_cliques(g: Graph, dim_cap: int = 20) -> frozenset:
    return flag_complex(g, dim_cap).faces()


def invariant_simplex_poset(
    g: Graph, h: PermutationGroup, dim_cap: int = 20
) -> tuple[VertexSet, ...]:
    """All cliques mapped onto themselves by every group element, by inclusion.

    Returned sorted by (size, members); the order relation is set inclusion.
    """
    _validate_action(g, h)
    out = [
        c
        for c in _all_cliques(g, dim_cap)
        if all(e.apply_set(c) == c for e in h.generators)
    ]
    return tuple(sorted(out, key=_face_key))


def fixed_subcomplex(
    g: Graph, h: PermutationGroup, dim_cap: int = 20
) -> SimplicialComplex:
    """The fixed-point set of the action, as the order complex of invariant cliques.

    Vertices are the invariant cliques; faces are chains under inclusion
    (maximal faces: maximal chains).  For the trivial group this is the
    barycentric subdivision of the flag complex.  The result may be empty.
    """
    inv = invariant_simplex_poset(g, h, dim_cap)
    if not inv:
        return SimplicialComplex(())
    supersets: dict[frozenset, list[frozenset]] = {
        x: [y for y in inv if x < y] for x in inv
    }
    covers: dict[frozenset, list[frozenset]] = {}
    for x, ups in supersets.items():
        covers[x] = [y for y in ups if not any(z < y for z in ups if x < z)]
    minimal = [x for x in inv if not any(y < x for y in inv)]

    chains: list[frozenset] = []

    def grow(chain: list[frozenset]) -> None:
        tip = chain[-1]
        if not covers[tip]:
            chains.append(frozenset(chain))
            return
        for nxt in covers[tip]:
            chain.append(nxt)
            grow(chain)
            chain.pop()

    for start in minimal:
        grow([start])
    return SimplicialComplex(chains)


@dataclass(frozen=True)
class DomSimplex:
    """The simplex spanned by all vertices dominating a vertex (or itself)."""

    base: int
    vertices: VertexSet


def dom_simplex(g: Graph, sigma: int) -> DomSimplex:
    """Dominating-set simplex of a vertex.

    For a dominated vertex this is the set of all its dominators, which is
    always a clique: any two dominators contain each other in their closed
    neighborhoods through the vertex itself.  That fact is verified rather
    than assumed; a violation would be a reading error worth investigating
    and raises VerificationBugError.  Undominated vertices span themselves.
    """
    g.require(sigma)
    doms = dominators(g, sigma)
    if not doms:
        return DomSimplex(sigma, frozenset({sigma}))
    if not is_clique(g, doms):
        raise VerificationBugError(
            f"dominators of {sigma} do not span a clique; investigate"
        )
    return DomSimplex(sigma, doms)


@dataclass(frozen=True)
class ReductionStage:
    graph: Graph
    group_generators: tuple[Permutation, ...]
    case: str  # "collapse", "peel", or "terminal"
    removed: VertexSet | None
    quotient_map: tuple[tuple[int, int], ...] | None
    betti: tuple[tuple[int, int], ...]  # nonzero reduced Betti numbers


@dataclass(frozen=True)
class ReductionCertificate:
    stages: tuple[ReductionStage, ...]

    @property
    def terminal_graph(self) -> Graph:
        return self.stages[-1].graph


def theorem15_reduction(
    g: Graph, h: PermutationGroup, dim_cap: int = 20
) -> ReductionCertificate:
    """Reduce a dismantlable graph to a point, certifying fixed-set homology.

    Stages alternate between collapsing equal-neighborhood classes (pushing
    the group to the quotient) and peeling the dominated-but-not-dominating
    vertices (restricting the group), until one vertex remains.  At every
    stage the reduced homology of the fixed subcomplex is recomputed and
    must match the previous stage; a change is reported as a counterexample
    candidate via VerificationBugError, and is never expected.
    """
    _validate_action(g, h)
    try:
        if dismantling_order(g) is None:
            raise NotDismantlableError("graph admits no dismantling order")
    except DisconnectedGraphError:
        raise NotDismantlableError("disconnected graphs are not dismantlable") from None

    stages: list[ReductionStage] = []
    cur_g = g
    cur_elems = h.elements
    prev_betti: tuple[tuple[int, int], ...] | None = None
    while True:
        fixed = fixed_subcomplex(
            cur_g, PermutationGroup(cur_elems, cur_elems), dim_cap
        )
        betti = tuple(sorted((d, b) for d, b in gf2_homology(fixed).items() if b))
        if prev_betti is not None and betti != prev_betti:
            raise VerificationBugError(
                f"fixed-set homology changed across a stage: {prev_betti} -> {betti}"
            )
        prev_betti = betti

        if len(cur_g) == 1:
            stages.append(
                ReductionStage(cur_g, cur_elems, "terminal", None, None, betti)
            )
            break

        closed_sets = {v: cur_g.closed(v) for v in cur_g.vertices}
        if len(set(closed_sets.values())) < len(cur_g):
            q, cmap = equal_neighborhood_quotient(cur_g)
            members: dict[int, list[int]] = {}
            for v, c in cmap.items():
                members.setdefault(c, []).append(v)
            new_elems = _dedupe(
                _push_through_quotient(e, cmap, members, q) for e in cur_elems
            )
            stages.append(
                ReductionStage(
                    cur_g,
                    cur_elems,
                    "collapse",
                    None,
                    tuple(sorted(cmap.items())),
                    betti,
                )
            )
            cur_g, cur_elems = q, new_elems
            continue

        dominated = {v for v in cur_g.vertices if dominators(cur_g, v)}
        dominating = {
            v for v in cur_g.vertices if any(v in dominators(cur_g, u) for u in cur_g.vertices if u != v)
        }
        removed = frozenset(dominated - dominating)
        if not removed:
            raise VerificationBugError(
                "no removable vertex although neighborhoods are distinct"
            )
        keep = frozenset(cur_g.vertices) - removed
        for v in removed:
            if not dom_simplex(cur_g, v).vertices <= keep:
                raise VerificationBugError(
                    f"dominating simplex of {v} leaks outside the kept set"
                )
        sub = induced_subgraph(cur_g, keep)
        new_elems = _dedupe(_restrict_perm(e, keep, sub) for e in cur_elems)
        stages.append(
            ReductionStage(cur_g, cur_elems, "peel", removed, None, betti)
        )
        cur_g, cur_elems = sub, new_elems

    return ReductionCertificate(tuple(stages))


def gf2_homology(k: SimplicialComplex) -> dict[int, int]:
    """Reduced Betti numbers over the two-element field, by rank computation.

    Uses the augmented chain complex, so the empty complex reports the
    (-1)-dimensional class: {-1: 1}.  This keeps "empty" and "contractible"
    machine-distinguishable.  For nonempty complexes the -1 entry is zero.
    """
    if k.is_empty:
        return {-1: 1}
    by_dim = dict(k.faces_by_dim())
    by_dim[-1] = (frozenset(),)
    top = k.dim()

    ranks: dict[int, int] = {}
    for d in range(0, top + 1):
        lower_index = {f: i for i, f in enumerate(by_dim[d - 1])}
        cols = []
        for f in by_dim[d]:
            mask = 0
            items = tuple(f)
            for sub in combinations(items, len(items) - 1):
                mask ^= 1 << lower_index[frozenset(sub)]
            cols.append(mask)
        ranks[d] = _gf2_rank(cols)
    ranks[top + 1] = 0

    betti = {-1: 1 - ranks[0]}
    for d in range(0, top + 1):
        betti[d] = len(by_dim[d]) - ranks[d] - ranks[d + 1]
    return betti


def _gf2_rank(cols: list[int]) -> int:
    basis: dict[int, int] = {}  # leading-bit position -> reduced vector
    rank = 0
    for v in cols:
        while v:
            lead = v.bit_length() - 1
            if lead in basis:
                v ^= basis[lead]
            else:
                basis[lead] = v
                rank += 1
                break
    return rank


def is_homology_trivial(k: SimplicialComplex) -> bool:
    return all(b == 0 for b in gf2_homology(k).values())


def greedy_collapse(k: SimplicialComplex, seed: int = 0) -> bool:
    """Collapse free faces until a single vertex remains, or get stuck.

    A free face has exactly one proper coface (then necessarily of one
    dimension higher and maximal); an elementary collapse removes both.
    True certifies contractibility.  False only means this greedy run got
    stuck; it is NOT a proof of non-contractibility.
    """
    if k.is_empty:
        raise InvalidInput("cannot collapse the empty complex")
    faces = set(k.faces())
    ranked = sorted(faces, key=_face_key)
    rng = random.Random(seed)
    rng.shuffle(ranked)
    prio = {f: i for i, f in enumerate(ranked)}

    # coface_count[f]: number of present faces of size |f|+1 containing f.
    # f is free exactly when this count is 1 (anything bigger above f would
    # contribute at least two such faces).
    coface_count: dict[frozenset, int] = {f: 0 for f in faces}
    for f in faces:
        for sub in _boundary(f):
            coface_count[sub] += 1

    free = {f for f, c in coface_count.items() if c == 1}
    while True:
        if len(faces) == 1:
            return len(next(iter(faces))) == 1
        if not free:
            return False
        f = min(free, key=prio.__getitem__)
        g_face = next(
            gf for gf in faces if len(gf) == len(f) + 1 and f < gf
        )
        for gone in (f, g_face):
            faces.remove(gone)
            free.discard(gone)
            coface_count.pop(gone)
        for sub in _boundary(g_face):
            if sub in coface_count:
                coface_count[sub] -= 1
                if coface_count[sub] == 1:
                    free.add(sub)
                else:
                    free.discard(sub)
        for sub in _boundary(f):
            if sub in coface_count:
                coface_count[sub] -= 1
                if coface_count[sub] == 1:
                    free.add(sub)
                else:
                    free.discard(sub)


def _boundary(f: frozenset):
    if len(f) <= 1:
        return
    items = tuple(f)
    for sub in combinations(items, len(items) - 1):
        yield frozenset(sub)
