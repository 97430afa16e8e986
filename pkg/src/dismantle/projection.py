"""Dismantling projections: axiom verification, order construction, convexity.

A projection with base vertex sigma assigns to every other vertex a nonempty
finite set of unordered vertex pairs (members may coincide).  Two axioms make
it useful:

* exposure: every finite vertex set R (with something besides sigma in it)
  contains a vertex rho whose neighborhood within R is contained in the
  neighborhoods of BOTH members of one of its pairs;
* acyclicity: the directed step relation "rho to any member of one of its
  pairs" has no directed cycle.

Together they force the graph to be dismantlable, via an explicit order
construction with witness redirection (``order_from_projection``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .dismantling import DismantlingTrace, verify_trace
from .errors import (
    ConvexityError,
    ExposureError,
    HypothesisError,
    InvalidInput,
    NotATreeError,
    VerificationBugError,
)
from .graph import Graph, PermutationGroup, VertexSet, induced_subgraph


class Pair:
    """Unordered pair of vertices; the two members may coincide."""

    __slots__ = ("_m",)

    def __init__(self, x, y):
        self._m = (x, y) if x <= y else (y, x)

    @property
    def members(self) -> tuple:
        return self._m

    @property
    def coincident(self) -> bool:
        return self._m[0] == self._m[1]

    def member_set(self) -> frozenset:
        return frozenset(self._m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pair):
            return NotImplemented
        return self._m == other._m

    def __lt__(self, other: "Pair") -> bool:
        return self._m < other._m

    def __hash__(self) -> int:
        return hash(self._m)

    def __iter__(self):
        return iter(self._m)

    def __repr__(self) -> str:
        a, b = self._m
        return f"{{{a},{b}}}" if a != b else f"{{{a},{a}}}"


class DismantlingProjection:
    """A base vertex sigma plus a table rho -> nonempty set of pairs."""

    __slots__ = ("_sigma", "_table")

    def __init__(self, sigma: int, table: Mapping[int, Iterable[Pair]]):
        self._sigma = sigma
        tb: dict[int, tuple[Pair, ...]] = {}
        for rho, pairs in table.items():
            if rho == sigma:
                raise InvalidInput("the table must not assign pairs to the base vertex")
            ps = tuple(sorted(set(pairs)))
            if not ps:
                raise InvalidInput(f"empty pair set for vertex {rho}")
            tb[rho] = ps
        self._table = dict(sorted(tb.items()))

    @property
    def sigma(self) -> int:
        return self._sigma

    @property
    def domain(self) -> VertexSet:
        return frozenset(self._table)

    def pairs(self, rho: int) -> tuple[Pair, ...]:
        try:
            return self._table[rho]
        except KeyError:
            raise InvalidInput(f"projection has no entry for vertex {rho}") from None

    def pi_star(self, rho: int) -> frozenset:
        """All vertices appearing in pairs assigned to rho."""
        out: set = set()
        for p in self.pairs(rho):
            out.update(p.members)
        return frozenset(out)

    def items(self):
        return self._table.items()

    def validate_for(self, g: Graph) -> None:
        """Totality on the graph's vertex set minus the base, members in range."""
        g.require(self._sigma)
        expected = frozenset(g.vertices) - {self._sigma}
        if frozenset(self._table) != expected:
            raise InvalidInput("projection table is not total on the other vertices")
        for rho, ps in self._table.items():
            for p in ps:
                for m in p.members:
                    g.require(m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DismantlingProjection):
            return NotImplemented
        return self._sigma == other._sigma and self._table == other._table

    def __repr__(self) -> str:
        return f"DismantlingProjection(base {self._sigma}, {len(self._table)} entries)"


class ProjectionFamily:
    """Several projections over one graph, indexed by their base vertices."""

    __slots__ = ("_members",)

    def __init__(self, projections: Iterable[DismantlingProjection]):
        members: dict[int, DismantlingProjection] = {}
        for p in projections:
            if p.sigma in members:
                raise InvalidInput(f"duplicate base vertex {p.sigma}")
            members[p.sigma] = p
        if not members:
            raise InvalidInput("a projection family needs at least one member")
        self._members = dict(sorted(members.items()))

    @property
    def bases(self) -> VertexSet:
        return frozenset(self._members)

    def __getitem__(self, sigma: int) -> DismantlingProjection:
        try:
            return self._members[sigma]
        except KeyError:
            raise InvalidInput(f"no projection with base {sigma}") from None

    def __iter__(self):
        return iter(self._members.values())

    def __len__(self) -> int:
        return len(self._members)


@dataclass(frozen=True)
class ExposureReport:
    """Outcome of checking the exposure axiom over a collection of sets."""

    mode: str  # "exact" or "sampled:<count>:<seed>"
    checked: int
    failing: tuple[VertexSet, ...]  # recorded failing sets (capped)
    failure_count: int

    @property
    def ok(self) -> bool:
        return self.failure_count == 0


@dataclass(frozen=True)
class AcyclicityReport:
    cycle: tuple[int, ...] | None

    @property
    def ok(self) -> bool:
        return self.cycle is None


EXACT_LIMIT = 15  # exhaustive subset enumeration is 2^n; cut off above this
_RECORD_CAP = 32


def _pair_masks(g: Graph, p: DismantlingProjection) -> dict[int, list[int]]:
    # For the subset check only the intersection of the two members'
    # neighborhoods matters: N(rho) & R must fit inside both.
    out: dict[int, list[int]] = {}
    for rho, ps in p.items():
        out[g.index(rho)] = [
            g.closed_mask(a) & g.closed_mask(b) for (a, b) in (q.members for q in ps)
        ]
    return out


def _set_is_exposed_free(g: Graph, masks: dict[int, list[int]], r_mask: int, sigma_bit: int) -> bool:
    """True when r_mask contains NO exposed vertex (a genuine failure)."""
    rem = r_mask & ~sigma_bit
    while rem:
        low = rem & -rem
        idx = low.bit_length() - 1
        rem ^= low
        need = g.closed_mask_at(idx) & r_mask
        for pm in masks[idx]:
            if need & ~pm == 0:
                return False
    return True


def verify_axiom_exposed(
    g: Graph,
    p: DismantlingProjection,
    mode: str = "exact",
    count: int = 10_000,
    seed: int = 0,
) -> ExposureReport:
    """Check the exposure axiom over vertex subsets.

    Exact mode enumerates every subset R with R minus the base nonempty and
    requires at most 15 vertices.  Sampled mode draws ``count`` random
    subsets; a passing sampled report is evidence, not a proof, and says so
    in its mode label.
    """
    p.validate_for(g)
    n = len(g)
    masks = _pair_masks(g, p)
    sigma_bit = 1 << g.index(p.sigma)
    failing: list[VertexSet] = []
    failure_count = 0
    checked = 0

    if mode == "exact":
        if n > EXACT_LIMIT:
            raise InvalidInput(
                f"exact exposure check needs at most {EXACT_LIMIT} vertices, got {n}"
            )
        for r_mask in range(1, 1 << n):
            if r_mask == sigma_bit:
                continue
            checked += 1
            if _set_is_exposed_free(g, masks, r_mask, sigma_bit):
                failure_count += 1
                if len(failing) < _RECORD_CAP:
                    failing.append(g.unmask(r_mask))
        label = "exact"
    elif mode == "sampled":
        rng = random.Random(seed)
        full = (1 << n) - 1
        for _ in range(count):
            r_mask = rng.randrange(1, full + 1)
            if r_mask == sigma_bit:
                continue
            checked += 1
            if _set_is_exposed_free(g, masks, r_mask, sigma_bit):
                failure_count += 1
                if len(failing) < _RECORD_CAP:
                    failing.append(g.unmask(r_mask))
        label = f"sampled:{count}:{seed}"
    else:
        raise InvalidInput(f"unknown mode {mode!r}; use 'exact' or 'sampled'")

    return ExposureReport(label, checked, tuple(failing), failure_count)


def exposure_failure_is_genuine(g: Graph, p: DismantlingProjection, r: Iterable[int]) -> bool:
    """Re-verify a failing set reported by ``verify_axiom_exposed``."""
    p.validate_for(g)
    masks = _pair_masks(g, p)
    sigma_bit = 1 << g.index(p.sigma)
    r_mask = g.mask(r)
    if r_mask == 0 or r_mask == sigma_bit:
        return False
    return _set_is_exposed_free(g, masks, r_mask, sigma_bit)


def verify_axiom_acyclic(g: Graph, p: DismantlingProjection) -> AcyclicityReport:
    """Find a directed cycle of the step relation, if any.

    The relation sends rho to every member of every pair assigned to it;
    a self-step is a cycle of length one.  The base vertex has no steps.
    """
    p.validate_for(g)
    succ = {rho: sorted(p.pi_star(rho)) for rho in p.domain}
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in g.vertices}
    stack_pos: dict[int, int] = {}

    def dfs(start: int) -> tuple[int, ...] | None:
        path = [start]
        color[start] = GRAY
        stack_pos[start] = 0
        frames = [iter(succ.get(start, ()))]
        while frames:
            it = frames[-1]
            nxt = next(it, None)
            if nxt is None:
                done = path.pop()
                color[done] = BLACK
                del stack_pos[done]
                frames.pop()
                continue
            if color[nxt] == GRAY:
                return tuple(path[stack_pos[nxt]:])
            if color[nxt] == WHITE:
                color[nxt] = GRAY
                stack_pos[nxt] = len(path)
                path.append(nxt)
                frames.append(iter(succ.get(nxt, ())))
        return None

    for v in g.vertices:
        if color[v] == WHITE:
            cyc = dfs(v)
            if cyc is not None:
                return AcyclicityReport(cyc)
    return AcyclicityReport(None)


def order_from_projection(g: Graph, p: DismantlingProjection) -> DismantlingTrace:
    """Build a dismantling order from a projection satisfying both axioms.

    Vertices are eliminated by repeatedly picking an exposed vertex of the
    remaining set (lowest id first) and recording the lowest-id member of
    the first qualifying pair as its provisional witness.  Witnesses that
    point at already-eliminated vertices are then redirected along the
    elimination: whenever a recorded witness equals the vertex just
    eliminated, it is replaced by that vertex's own final witness.  The
    result is checked with ``verify_trace`` before it is returned.

    Raises ExposureError, carrying the stuck set, if some step finds no
    exposed vertex (an exposure-axiom violation on that set).
    """
    p.validate_for(g)
    n = len(g)
    alive = g.mask(g.vertices)
    remaining = set(g.vertices)
    order: list[int] = []
    wits: list[int] = []
    while len(remaining) > 1:
        found = None
        for rho in sorted(remaining - {p.sigma}):
            need = g.closed_mask(rho) & alive
            for q in p.pairs(rho):
                a, b = q.members
                if need & ~g.closed_mask(a) == 0 and need & ~g.closed_mask(b) == 0:
                    found = (rho, min(a, b))
                    break
            if found:
                break
        if found is None:
            raise ExposureError(
                "no exposed vertex in the remaining set", frozenset(remaining)
            )
        rho, wit = found
        order.append(rho)
        wits.append(wit)
        remaining.remove(rho)
        alive ^= 1 << g.index(rho)
    order.append(remaining.pop())
    if order[-1] != p.sigma and n > 1:
        raise VerificationBugError("elimination did not finish at the base vertex")

    # Redirect witnesses through the elimination order.
    for i in range(1, n - 1):
        val = wits[i - 1]
        gone = order[i - 1]
        for jj in range(i, n - 1):
            if wits[jj] == gone:
                wits[jj] = val
    trace = DismantlingTrace(tuple(order), tuple(wits))
    if not verify_trace(g, trace):
        raise VerificationBugError("projection order failed trace verification")
    return trace


def is_pi_convex(g: Graph, p: DismantlingProjection, r: Iterable[int]) -> bool:
    """True iff every pair of every member of r (except the base) meets r."""
    rset = frozenset(r)
    for v in rset:
        g.require(v)
    for rho in rset - {p.sigma}:
        for q in p.pairs(rho):
            if not (q.member_set() & rset):
                return False
    return True


def restrict_projection(
    g: Graph, p: DismantlingProjection, r: Iterable[int]
) -> DismantlingProjection:
    """Restrict a projection to a convex vertex set.

    Each pair is intersected with the set; an intersection consisting of a
    single vertex becomes a coincident pair.  The base is retained: a
    nonempty convex set always contains it (follow the longest step chain;
    only the base has no steps), so its absence is reported as a convexity
    bug rather than tolerated.
    """
    rset = frozenset(r)
    if not is_pi_convex(g, p, rset):
        offender = next(
            (rho, q)
            for rho in sorted(rset - {p.sigma})
            for q in p.pairs(rho)
            if not (q.member_set() & rset)
        )
        raise ConvexityError(
            f"set is not convex: vertex {offender[0]} has pair {offender[1]} outside"
        )
    if p.sigma not in rset:
        raise ConvexityError(
            "convex set misses the base vertex; this contradicts acyclicity "
            "of the step relation and indicates a convexity bug"
        )
    table: dict[int, list[Pair]] = {}
    for rho in rset - {p.sigma}:
        new_pairs = []
        for q in p.pairs(rho):
            inside = sorted(q.member_set() & rset)
            if len(inside) == 2:
                new_pairs.append(Pair(inside[0], inside[1]))
            else:
                new_pairs.append(Pair(inside[0], inside[0]))
        table[rho] = new_pairs
    return DismantlingProjection(p.sigma, table)


def verify_equivariant(g: Graph, fam: ProjectionFamily, h: PermutationGroup) -> bool:
    """Check that the family commutes with the group action.

    The index set must be invariant under every element (checked, raising
    InvalidInput otherwise); then the image of each table entry under each
    element must equal the corresponding entry of the image base.
    """
    bases = fam.bases
    for e in h.elements:
        if e.apply_set(bases) != bases:
            raise InvalidInput("family index set is not invariant under the group")
    for sigma in sorted(bases):
        p = fam[sigma]
        p.validate_for(g)
        for e in h.elements:
            q = fam[e(sigma)]
            for rho, ps in p.items():
                mapped = {Pair(e(x), e(y)) for (x, y) in (pr.members for pr in ps)}
                if mapped != set(q.pairs(e(rho))):
                    return False
    return True


def tree_power_projection(tree: Graph, d: int, sigma: int) -> DismantlingProjection:
    """Geodesic step-to-parent projection for the distance-d power of a tree.

    For every vertex other than sigma the single (coincident) pair is its
    tree neighbor on the unique geodesic toward sigma.  The table does not
    depend on d; d is validated because the projection is meant for the
    power graph with edges between vertices at tree distance at most d.
    """
    from .graph import is_tree

    if not is_tree(tree):
        raise NotATreeError("tree power projection needs a tree")
    if d < 1:
        raise InvalidInput("power parameter must be at least 1")
    tree.require(sigma)
    parent: dict[int, int] = {}
    dist = tree.distances()[sigma]
    for v in tree.vertices:
        if v == sigma:
            continue
        parent[v] = min(u for u in tree.neighbors(v) if dist[u] == dist[v] - 1)
    table = {rho: (Pair(u, u),) for rho, u in parent.items()}
    return DismantlingProjection(sigma, table)


def invariant_clique_via_projections(
    g: Graph,
    h: PermutationGroup,
    fam: ProjectionFamily,
    r: Iterable[int],
) -> VertexSet:
    """Produce a group-invariant clique from projections and a convex set.

    Two alternative hypotheses are machine-checked, mirroring the proof:

    (i)  r is invariant under the group and convex for some family member; or
    (ii) the family is indexed by a single group orbit, is equivariant, and
         r is convex for every member.

    In either case the orbit T of r induces a dismantlable subgraph (the
    chosen projection restricts to T; the resulting order is verified) and
    the invariant-clique recursion runs on it.  The returned clique is
    re-verified against the full graph before being returned.
    """
    from .invariant_clique import invariant_clique, verify_invariant_clique

    rset = frozenset(r)
    for v in rset:
        g.require(v)
    if not rset:
        raise InvalidInput("need a nonempty vertex set")
    _validate_group_action(g, h)

    case = None
    if all(e.apply_set(rset) == rset for e in h.elements):
        for sigma in sorted(fam.bases):
            if is_pi_convex(g, fam[sigma], rset):
                case = ("i", sigma)
                break
    if case is None:
        bases = fam.bases
        some = min(bases)
        orbit = frozenset(e(some) for e in h.elements)
        if orbit != bases:
            raise HypothesisError(
                "hypothesis (ii) needs the family indexed by one group orbit; "
                f"orbit of {some} is {sorted(orbit)} but bases are {sorted(bases)}"
            )
        if not verify_equivariant(g, fam, h):
            raise HypothesisError("family is not equivariant under the group")
        for sigma in sorted(bases):
            if not is_pi_convex(g, fam[sigma], rset):
                raise HypothesisError(
                    f"set is not convex for base {sigma}; hypothesis (ii) fails"
                )
        case = ("ii", min(bases))

    t_set = frozenset().union(*(e.apply_set(rset) for e in h.elements))
    sigma = case[1]
    # The proof of the orbit reduction: T inherits convexity for the chosen
    # member.  A failure here would be a counterexample, not bad input.
    if not is_pi_convex(g, fam[sigma], t_set):
        raise VerificationBugError(
            "orbit of a convex set failed the pair-intersection check"
        )
    sub = induced_subgraph(g, t_set)
    restricted = restrict_projection(g, fam[sigma], t_set)
    order_from_projection(sub, restricted)  # dismantlability witness, self-verified

    from .graph import Permutation, group_closure

    restricted_gens = [
        Permutation({v: e(v) for v in t_set}) for e in h.generators
    ]
    h_t = group_closure(restricted_gens, graph=sub)
    clique = invariant_clique(sub, h_t)
    if not verify_invariant_clique(g, h, clique):
        raise VerificationBugError("pipeline clique failed full-graph verification")
    return clique


def _validate_group_action(g: Graph, h: PermutationGroup) -> None:
    from .graph import is_automorphism

    for e in h.generators:
        if not is_automorphism(g, e):
            raise InvalidInput("group does not act on the graph by automorphisms")
