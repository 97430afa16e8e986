"""Dismantling orders: decision, verification, order repair, and oracles.

A vertex ordering is a dismantling order when every vertex is dominated in
the subgraph induced on it and its successors.  Removing any dominated
vertex preserves the existence of such an order, which is why the greedy
decider below is complete; ``remove_and_reorder`` implements the explicit
order-repair construction behind that fact, so the construction itself
stays under test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    DisconnectedGraphError,
    InvalidInput,
    InvalidTraceError,
    NotDominatedError,
    VerificationBugError,
)
from .graph import Graph, dominators, induced_subgraph


@dataclass(frozen=True)
class DismantlingTrace:
    """A vertex elimination order plus, for each removed vertex, a dominating witness.

    ``witnesses[i]`` must dominate ``order[i]`` in the subgraph induced on
    ``order[i:]``.  The final vertex needs no witness.
    """

    order: tuple[int, ...]
    witnesses: tuple[int, ...]

    def __post_init__(self):
        if len(self.order) == 0:
            raise InvalidTraceError("empty trace")
        if len(self.witnesses) != len(self.order) - 1:
            raise InvalidTraceError(
                "need exactly one witness per vertex except the last"
            )


def dismantling_order(g: Graph, seed: int = 0) -> DismantlingTrace | None:
    """Greedy search for a dismantling order; None means there is none.

    Ties are broken by a seed-keyed shuffle of the vertex ids: among the
    dominated vertices of the current subgraph, the one earliest in the
    shuffled priority is removed; its witness is the lowest-id dominator.
    Greedy choices lose no generality because removing any dominated vertex
    preserves dismantlability.

    Disconnected graphs are rejected with DisconnectedGraphError: a graph
    with two or more components is never dismantlable, and silently
    answering None would mask misuse.  Use ``component_dismantling_orders``
    for the per-component notion.
    """
    if len(g) == 0:
        raise InvalidInput("dismantlability is about nonempty graphs")
    if not g.is_connected():
        raise DisconnectedGraphError(
            "disconnected graph; use component_dismantling_orders for the per-component game"
        )
    priority = list(g.vertices)
    random.Random(seed).shuffle(priority)
    remaining = set(g.vertices)
    alive = g.mask(remaining)
    order: list[int] = []
    wits: list[int] = []
    while len(remaining) > 1:
        chosen = None
        for v in priority:
            if v not in remaining:
                continue
            need = g.closed_mask(v) & alive
            for u in sorted(g.neighbors(v)):
                if u in remaining and need & ~g.closed_mask(u) == 0:
                    chosen = (v, u)
                    break
            if chosen:
                break
        if chosen is None:
            return None
        v, u = chosen
        order.append(v)
        wits.append(u)
        remaining.remove(v)
        alive ^= 1 << g.index(v)
    order.append(remaining.pop())
    return DismantlingTrace(tuple(order), tuple(wits))


def component_dismantling_orders(
    g: Graph, seed: int = 0
) -> tuple[DismantlingTrace, ...] | None:
    """One trace per connected component, or None if any component has none."""
    traces = []
    for comp in g.components():
        t = dismantling_order(induced_subgraph(g, comp), seed)
        if t is None:
            return None
        traces.append(t)
    return tuple(traces)


def is_dismantlable(g: Graph, seed: int = 0, per_component: bool = False) -> bool:
    if per_component:
        return component_dismantling_orders(g, seed) is not None
    return dismantling_order(g, seed) is not None


def verify_trace(g: Graph, t: DismantlingTrace) -> bool:
    """Check the trace invariant literally against the graph."""
    if sorted(t.order) != list(g.vertices):
        raise InvalidTraceError("order is not a permutation of the vertex set")
    alive = g.mask(g.vertices)
    remaining = set(g.vertices)
    for i, v in enumerate(t.order[:-1]):
        w = t.witnesses[i]
        if w == v or w not in remaining:
            return False
        need = g.closed_mask(v) & alive
        if need & ~g.closed_mask(w):
            return False
        remaining.remove(v)
        alive ^= 1 << g.index(v)
    return True


def remove_and_reorder(g: Graph, t: DismantlingTrace, sigma: int) -> DismantlingTrace:
    """Repair a dismantling order after deleting a dominated vertex.

    Given a valid trace for ``g`` and a vertex ``sigma`` dominated in ``g``,
    produce a valid trace for the subgraph on the other vertices, by the
    witness-chain construction: follow the chain k_1 = position of a
    dominator of sigma, k_i = k_{i-1} unless the chain has caught up with
    the running index, in which case it jumps along the old witness.  If
    the chain never reaches sigma's position, witnesses pointing at sigma
    are redirected through the chain; otherwise the vertex where the chain
    stalled is transplanted into sigma's position.
    """
    g.require(sigma)
    if not verify_trace(g, t):
        raise InvalidTraceError("input trace does not verify against the graph")
    doms = dominators(g, sigma)
    if not doms:
        raise NotDominatedError(f"vertex {sigma} is not dominated")

    m = len(t.order)
    sig = [0] + list(t.order)  # 1-based positions, as in the construction
    pos = {v: i for i, v in enumerate(t.order, start=1)}
    f = [0] * m  # f[i] = position of the witness of sig[i], defined for i < m
    for i in range(1, m):
        f[i] = pos[t.witnesses[i - 1]]
    j = pos[sigma]
    k = pos[min(doms)]

    kk = [0] * (j + 1)
    kk[1] = k
    for i in range(2, j + 1):
        kk[i] = kk[i - 1] if kk[i - 1] != i - 1 else f[kk[i - 1]]
    hit = next((i for i in range(1, j + 1) if kk[i] == j), None)

    entries: list[tuple[int, int | None]] = []
    if hit is None:
        for i in range(1, m + 1):
            if i == j:
                continue
            if i == m:
                entries.append((sig[i], None))
            elif f[i] != j:
                entries.append((sig[i], sig[f[i]]))
            else:
                entries.append((sig[i], sig[kk[i]]))
    else:
        l = hit - 1
        if kk[l] != l:
            raise VerificationBugError("witness chain stalled at an unexpected index")
        for i in range(1, l):
            entries.append((sig[i], sig[f[i]] if f[i] != j else sig[kk[i]]))
        for i in range(l + 1, j):
            entries.append((sig[i], sig[f[i]] if f[i] != j else sig[l]))
        entries.append((sig[l], sig[f[j]] if j < m else None))
        for i in range(j + 1, m + 1):
            entries.append((sig[i], sig[f[i]] if i < m else None))

    new_order = tuple(v for v, _ in entries)
    new_wits = tuple(w for _, w in entries[:-1])
    if any(w is None for w in new_wits):
        raise VerificationBugError("order repair produced a hole in the witness list")
    out = DismantlingTrace(new_order, new_wits)
    sub = induced_subgraph(g, frozenset(g.vertices) - {sigma})
    if not verify_trace(sub, out):
        raise VerificationBugError(
            f"order repair after removing {sigma} produced an invalid trace"
        )
    return out


def copwin_oracle(g: Graph) -> bool:
    """Exact solution of the one-cop pursuit game, by backward induction.

    Independent of the greedy decider: a finite graph is dismantlable
    exactly when the cop wins.  The cop picks a start vertex, the robber
    answers, then they alternate moves (staying put allowed) with the cop
    first; capture means occupying the robber's vertex.  Each component is
    evaluated on its own and the verdicts are conjoined.
    """
    if len(g) == 0:
        raise InvalidInput("the pursuit game needs a nonempty graph")
    return all(
        _copwin_connected(induced_subgraph(g, comp)) for comp in g.components()
    )


def _copwin_connected(g: Graph) -> bool:
    n = len(g)
    if n == 1:
        return True
    cm = [g.closed_mask_at(i) for i in range(n)]
    full = (1 << n) - 1
    # win_cop[c] / win_rob[c]: bitmask over robber positions from which the
    # cop (to move / having just moved) eventually captures.  Least fixpoint.
    win_cop = [0] * n
    win_rob = [0] * n
    changed = True
    while changed:
        changed = False
        for c in range(n):
            acc = 0
            for r in range(n):
                if cm[r] & ~win_cop[c] == 0:
                    acc |= 1 << r
            if acc != win_rob[c]:
                win_rob[c] = acc
                changed = True
        for c in range(n):
            acc = cm[c]
            rest = cm[c]
            while rest:
                low = rest & -rest
                acc |= win_rob[low.bit_length() - 1]
                rest ^= low
            if acc != win_cop[c]:
                win_cop[c] = acc
                changed = True
    return any(win_cop[c] | (1 << c) == full for c in range(n))


def random_dismantlable(n: int, extra_edges: int = 0, seed: int = 0) -> Graph:
    """Generate a dismantlable graph constructively.

    Start from one vertex and repeatedly attach a vertex inside the closed
    neighborhood of an existing one, so the reverse insertion order is a
    dismantling order by construction.  Extra edges are then added only when
    the recorded order still verifies with recomputed witnesses; the edge
    budget clamps at the complete graph.  The result is re-verified before
    return.
    """
    if n < 1:
        raise InvalidInput("need n >= 1")
    rng = random.Random(seed)
    adj: dict[int, set[int]] = {0: set()}
    for v in range(1, n):
        pi = rng.randrange(v)
        nbrs = {pi} | {u for u in adj[pi] if rng.random() < 0.5}
        adj[v] = set(nbrs)
        for u in nbrs:
            adj[u].add(v)
    elimination = list(range(n - 1, -1, -1))

    edge_count = sum(len(s) for s in adj.values()) // 2
    target = min(max(extra_edges, 0), n * (n - 1) // 2 - edge_count)
    added = 0
    for _ in range(target + 1):
        if added >= target:
            break
        missing = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if v not in adj[u]
        ]
        rng.shuffle(missing)
        progress = False
        for (u, v) in missing:
            if added >= target:
                break
            adj[u].add(v)
            adj[v].add(u)
            if _order_still_valid(adj, elimination):
                added += 1
                progress = True
            else:
                adj[u].remove(v)
                adj[v].remove(u)
        if not progress:
            break

    g = Graph(range(n), [(u, v) for u in adj for v in adj[u] if u < v])
    if dismantling_order(g) is None:
        raise VerificationBugError("generator emitted a non-dismantlable graph")
    return g


def _order_still_valid(adj: dict[int, set[int]], order: list[int]) -> bool:
    remaining = set(order)
    for v in order[:-1]:
        need = (adj[v] & remaining) | {v}
        remaining.remove(v)
        if not any(need <= adj[u] | {u} for u in adj[v] & remaining):
            return False
    return True
