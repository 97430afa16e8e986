"""Finite simple graphs with stable vertex ids, plus permutation-group machinery.

Vertex ids are opaque nonnegative integers assigned at construction and
preserved by induced subgraphs, so orderings and witnesses stay auditable
across derived graphs.  Every value is immutable after construction; all
operations return new objects and are safe to share between threads.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapExceededError,
    InvalidInput,
    NotAnAutomorphismError,
    UnknownVertexError,
)

VertexSet = frozenset[int]


class Graph:
    """Immutable simple undirected graph: no loops, no parallel edges."""

    __slots__ = ("_verts", "_adj", "_idx", "_cmasks", "_cache")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Iterable[int]] = ()):
        verts = sorted({int(v) for v in vertices})
        if verts and verts[0] < 0:
            raise InvalidInput("vertex ids must be nonnegative integers")
        self._verts: tuple[int, ...] = tuple(verts)
        self._idx: dict[int, int] = {v: i for i, v in enumerate(self._verts)}
        adj: dict[int, set[int]] = {v: set() for v in self._verts}
        for e in edges:
            u, v = e
            u, v = int(u), int(v)
            if u == v:
                raise InvalidInput(f"loop at vertex {u} not allowed")
            if u not in adj or v not in adj:
                raise UnknownVertexError(f"edge ({u},{v}) mentions an unlisted vertex")
            adj[u].add(v)
            adj[v].add(u)
        self._adj: dict[int, VertexSet] = {v: frozenset(s) for v, s in adj.items()}
        cmasks = []
        for v in self._verts:
            m = 1 << self._idx[v]
            for u in self._adj[v]:
                m |= 1 << self._idx[u]
            cmasks.append(m)
        self._cmasks: tuple[int, ...] = tuple(cmasks)
        self._cache: dict = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._verts

    def __len__(self) -> int:
        return len(self._verts)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._verts)

    def require(self, v: int) -> None:
        if v not in self._adj:
            raise UnknownVertexError(f"vertex {v} is not in the graph")

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            sorted((u, v) for u in self._verts for v in self._adj[u] if u < v)
        )

    def num_edges(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    def neighbors(self, v: int) -> VertexSet:
        self.require(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def closed(self, v: int) -> VertexSet:
        """Closed neighborhood: v together with its neighbors."""
        self.require(v)
        return self._adj[v] | {v}

    def adjacent(self, u: int, v: int) -> bool:
        self.require(u)
        return v in self._adj[u]

    # -- index/bitmask helpers (used by the exhaustive verifiers) ----------

    def index(self, v: int) -> int:
        self.require(v)
        return self._idx[v]

    def vertex_at(self, i: int) -> int:
        return self._verts[i]

    def closed_mask(self, v: int) -> int:
        return self._cmasks[self.index(v)]

    def closed_mask_at(self, i: int) -> int:
        return self._cmasks[i]

    def mask(self, vs: Iterable[int]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.index(v)
        return m

    def unmask(self, m: int) -> VertexSet:
        out = []
        while m:
            low = m & -m
            out.append(self._verts[low.bit_length() - 1])
            m ^= low
        return frozenset(out)

    # -- metric helpers ----------------------------------------------------

    def distances(self) -> dict[int, dict[int, int]]:
        """All-pairs BFS distances; only reachable pairs appear."""
        if "dist" not in self._cache:
            table: dict[int, dict[int, int]] = {}
            for s in self._verts:
                d = {s: 0}
                q = deque([s])
                while q:
                    x = q.popleft()
                    for y in self._adj[x]:
                        if y not in d:
                            d[y] = d[x] + 1
                            q.append(y)
                table[s] = d
            self._cache["dist"] = table
        return self._cache["dist"]

    def dist(self, u: int, v: int) -> int | None:
        self.require(u)
        self.require(v)
        return self.distances()[u].get(v)

    def components(self) -> tuple[VertexSet, ...]:
        seen: set[int] = set()
        comps = []
        for s in self._verts:
            if s in seen:
                continue
            comp = set(self.distances()[s])
            seen |= comp
            comps.append(frozenset(comp))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self) <= 1 or len(self.components()) == 1

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._verts == other._verts and self._adj == other._adj

    def __hash__(self) -> int:
        if "hash" not in self._cache:
            self._cache["hash"] = hash((self._verts, self.edges()))
        return self._cache["hash"]

    def __repr__(self) -> str:
        return f"Graph({len(self)} vertices, {self.num_edges()} edges)"


# -- neighborhood/domination operations -------------------------------------


def is_tree(g: Graph) -> bool:
    return len(g) >= 1 and g.is_connected() and g.num_edges() == len(g) - 1


def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    """The vertex together with all its neighbors."""
    return g.closed(v)


def dominators(g: Graph, rho: int) -> VertexSet:
    """All vertices pi != rho whose closed neighborhood contains that of rho.

    Equality of neighborhoods is allowed.  The empty set means rho is not
    dominated.  Every dominator is adjacent to rho, so only neighbors are
    candidates.
    """
    need = g.closed_mask(rho)
    return frozenset(
        pi for pi in g.neighbors(rho) if need & ~g.closed_mask(pi) == 0
    )


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on a vertex subset, keeping exactly the inner edges and ids."""
    ss = frozenset(s)
    for v in ss:
        g.require(v)
    edges = [(u, v) for (u, v) in g.edges() if u in ss and v in ss]
    return Graph(ss, edges)


def equal_neighborhood_quotient(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Identify all vertices sharing a closed neighborhood.

    Returns the quotient graph on fresh class ids 0..k-1 together with the
    total, surjective vertex-to-class map.  Classes are numbered by their
    smallest member.  Loops and duplicate edges disappear by construction.
    """
    by_closed: dict[VertexSet, list[int]] = {}
    for v in g.vertices:
        by_closed.setdefault(g.closed(v), []).append(v)
    classes = sorted(by_closed.values(), key=lambda members: members[0])
    cmap = {v: i for i, members in enumerate(classes) for v in members}
    qedges = set()
    for (u, v) in g.edges():
        cu, cv = cmap[u], cmap[v]
        if cu != cv:
            qedges.add((min(cu, cv), max(cu, cv)))
    return Graph(range(len(classes)), sorted(qedges)), cmap


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    """True iff s is nonempty and pairwise adjacent.  The empty set is not a clique."""
    vs = sorted(frozenset(s))
    for v in vs:
        g.require(v)
    if not vs:
        return False
    return all(
        g.adjacent(vs[i], vs[j])
        for i in range(len(vs))
        for j in range(i + 1, len(vs))
    )


# -- permutations and groups -------------------------------------------------


class Permutation:
    """Bijection of a fixed vertex set onto itself."""

    __slots__ = ("_domain", "_images", "_map")

    def __init__(self, mapping: Mapping[int, int]):
        domain = tuple(sorted(mapping))
        images = tuple(mapping[v] for v in domain)
        if sorted(images) != list(domain):
            raise InvalidInput("mapping is not a bijection of its domain")
        self._domain = domain
        self._images = images
        self._map = dict(zip(domain, images))

    @property
    def domain(self) -> tuple[int, ...]:
        return self._domain

    def __call__(self, v: int) -> int:
        try:
            return self._map[v]
        except KeyError:
            raise UnknownVertexError(f"vertex {v} outside permutation domain") from None

    def apply_set(self, s: Iterable[int]) -> VertexSet:
        return frozenset(self(v) for v in s)

    def compose(self, other: "Permutation") -> "Permutation":
        """(self.compose(other))(v) == self(other(v))."""
        if self._domain != other._domain:
            raise InvalidInput("permutations act on different vertex sets")
        return Permutation({v: self._map[other._map[v]] for v in self._domain})

    def inverse(self) -> "Permutation":
        return Permutation({img: v for v, img in self._map.items()})

    def is_identity(self) -> bool:
        return self._domain == self._images

    def to_mapping(self) -> dict[int, int]:
        return dict(self._map)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._domain == other._domain and self._images == other._images

    def __hash__(self) -> int:
        return hash((self._domain, self._images))

    def __repr__(self) -> str:
        moved = {v: i for v, i in self._map.items() if v != i}
        return f"Permutation({moved or 'id'})"


def identity_permutation(g: Graph) -> Permutation:
    return Permutation({v: v for v in g.vertices})


def is_automorphism(g: Graph, p: Permutation) -> bool:
    """True iff p is a bijection of g's vertices preserving adjacency.

    A bijection mapping edges into edges maps the (finite, equal-sized) edge
    set onto itself, so non-adjacency is preserved automatically.
    """
    if p.domain != g.vertices:
        return False
    return all(g.adjacent(p(u), p(v)) for (u, v) in g.edges())


class PermutationGroup:
    """A finite permutation group given by generators, with its element list."""

    __slots__ = ("_generators", "_elements")

    def __init__(self, generators: Iterable[Permutation], elements: Iterable[Permutation]):
        self._generators = tuple(generators)
        self._elements = tuple(elements)
        if not self._elements:
            raise InvalidInput("a permutation group has at least the identity")

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self._generators

    @property
    def elements(self) -> tuple[Permutation, ...]:
        return self._elements

    @property
    def domain(self) -> tuple[int, ...]:
        return self._elements[0].domain

    def order(self) -> int:
        return len(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self._elements)

    def is_trivial(self) -> bool:
        return len(self._elements) == 1

    def __repr__(self) -> str:
        return f"PermutationGroup(order {len(self._elements)})"


def trivial_group(g: Graph) -> PermutationGroup:
    e = identity_permutation(g)
    return PermutationGroup((e,), (e,))


def group_closure(
    gens: Iterable[Permutation],
    cap: int = 100_000,
    graph: Graph | None = None,
) -> PermutationGroup:
    """Materialize the group generated by ``gens`` by breadth-first closure.

    When ``graph`` is given, every generator is checked to be one of its
    automorphisms first.  Raises CapExceededError if the element count
    passes ``cap``.
    """
    gens = tuple(gens)
    if graph is not None:
        for p in gens:
            if not is_automorphism(graph, p):
                raise NotAnAutomorphismError(f"{p!r} is not an automorphism")
        if not gens:
            gens = (identity_permutation(graph),)
    if not gens:
        raise InvalidInput("no generators and no graph to take the identity from")
    domain = gens[0].domain
    for p in gens:
        if p.domain != domain:
            raise InvalidInput("generators act on different vertex sets")
    ident = Permutation({v: v for v in domain})
    seen = {ident}
    order_found = [ident]
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for gen in gens:
            nxt = gen.compose(cur)
            if nxt not in seen:
                if len(seen) >= cap:
                    raise CapExceededError(f"group order exceeds cap {cap}")
                seen.add(nxt)
                order_found.append(nxt)
                queue.append(nxt)
    return PermutationGroup(gens, tuple(order_found))


def automorphism_group(
    g: Graph,
    cap_vertices: int = 12,
    cap_elements: int = 100_000,
) -> PermutationGroup:
    """The full automorphism group, by backtracking search with degree pruning.

    Brute force is factorial in the worst case, hence the default vertex cap;
    beyond it callers must supply generators themselves.
    """
    if len(g) > cap_vertices:
        raise CapExceededError(
            f"{len(g)} vertices exceeds the brute-force cap {cap_vertices}"
        )
    if len(g) == 0:
        raise InvalidInput("empty graph has no permutation group representation")

    verts = list(g.vertices)
    # Assign images in an order that keeps each new vertex adjacent to an
    # already-assigned one when possible: adjacency constraints prune early.
    order: list[int] = []
    remaining = set(verts)
    while remaining:
        anchored = [v for v in remaining if any(u in order for u in g.neighbors(v))]
        pool = anchored or sorted(remaining)
        nxt = max(pool, key=lambda v: (g.degree(v), -v))
        order.append(nxt)
        remaining.remove(nxt)

    by_degree: dict[int, list[int]] = {}
    for v in verts:
        by_degree.setdefault(g.degree(v), []).append(v)

    found: list[Permutation] = []
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(pos: int) -> None:
        if pos == len(order):
            found.append(Permutation(dict(assignment)))
            if len(found) > cap_elements:
                raise CapExceededError(
                    f"automorphism count exceeds cap {cap_elements}"
                )
            return
        v = order[pos]
        for w in by_degree[g.degree(v)]:
            if w in used:
                continue
            ok = True
            for u in order[:pos]:
                if g.adjacent(u, v) != g.adjacent(assignment[u], w):
                    ok = False
                    break
            if ok:
                assignment[v] = w
                used.add(w)
                backtrack(pos + 1)
                used.remove(w)
                del assignment[v]

    backtrack(0)
    elements = tuple(sorted(found, key=lambda p: p._images))
    return PermutationGroup(elements, elements)


def graph_to_dot(g: Graph, labels: Mapping[int, str] | None = None) -> str:
    """GraphViz rendering of the graph, for eyeballing instances."""
    lines = ["graph G {"]
    for v in g.vertices:
        label = labels.get(v) if labels else None
        if label is not None:
            lines.append(f'  {v} [label="{label}"];')
        else:
            lines.append(f"  {v};")
    for (u, v) in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
