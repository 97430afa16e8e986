"""Instance generators: standard families, random trees, free-group balls,
and the polygon-diagonal graphs used as negative controls.

Diagonals of a convex polygon with the non-crossing relation form a graph
whose flag complex is a sphere, so dismantlability must fail on it; the
surgery pairs defined on diagonals assemble into a projection whose
exposure axiom fails in a way the verifier can pin down.  That failure is
the point: the hypotheses that rescue the construction elsewhere are absent
here.
"""

from __future__ import annotations

import random
from typing import Iterable

from .errors import CapExceededError, InvalidInput
from .graph import Graph, Permutation
from .projection import DismantlingProjection, Pair

Diagonal = tuple[int, int]


# -- standard families -------------------------------------------------------


def path_graph(n: int) -> Graph:
    if n < 1:
        raise InvalidInput("path needs n >= 1")
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidInput("cycle needs n >= 3")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise InvalidInput("complete graph needs n >= 1")
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """Centre 0 joined to ``leaves`` leaves."""
    if leaves < 0:
        raise InvalidInput("need a nonnegative leaf count")
    return Graph(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


def wheel_graph(rim: int) -> Graph:
    """Hub 0 joined to every vertex of a rim cycle 1..rim."""
    if rim < 3:
        raise InvalidInput("wheel needs a rim of size >= 3")
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph(range(rim + 1), edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(range(10), outer + inner + spokes)


def grid_graph(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise InvalidInput("grid needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(range(rows * cols), edges)


def standard_graph(kind: str, params: Iterable[int] = ()) -> Graph:
    params = tuple(int(x) for x in params)
    try:
        if kind == "path":
            return path_graph(*params)
        if kind == "cycle":
            return cycle_graph(*params)
        if kind == "complete":
            return complete_graph(*params)
        if kind == "star":
            return star_graph(*params)
        if kind == "wheel":
            return wheel_graph(*params)
        if kind == "petersen":
            return petersen_graph(*params)
        if kind == "grid":
            return grid_graph(*params)
    except TypeError as exc:
        raise InvalidInput(f"bad parameters {params} for kind {kind!r}: {exc}") from None
    raise InvalidInput(f"unknown graph kind {kind!r}")


def random_tree(n: int, seed: int = 0) -> Graph:
    """Random tree from a random parent array: vertex i attaches below i."""
    if n < 1:
        raise InvalidInput("need n >= 1")
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return Graph(range(n), edges)


def free_group_ball(rank: int, radius: int, cap: int = 20_000) -> Graph:
    """Ball in the 2*rank-regular tree: the Cayley graph of a free group.

    The root has 2*rank children; every other internal vertex has
    2*rank - 1 (no immediate backtracking).  Vertex count is capped.
    """
    if rank < 1 or radius < 0:
        raise InvalidInput("need rank >= 1 and radius >= 0")
    edges: list[tuple[int, int]] = []
    frontier = [0]
    count = 1
    for level in range(radius):
        nxt = []
        for v in frontier:
            children = 2 * rank if level == 0 else 2 * rank - 1
            for _ in range(children):
                if count >= cap:
                    raise CapExceededError(f"ball exceeds {cap} vertices")
                edges.append((v, count))
                nxt.append(count)
                count += 1
        frontier = nxt
    return Graph(range(count), edges)


# -- polygon diagonals -------------------------------------------------------


def _validate_polygon(n: int) -> None:
    if n < 4:
        raise InvalidInput("a polygon needs n >= 4 for any diagonal to exist")


def normalize_diagonal(n: int, d: Iterable[int]) -> Diagonal:
    i, j = sorted(int(x) % n for x in d)
    if i == j:
        raise InvalidInput(f"degenerate segment ({i},{j})")
    if (j - i) % n in (1, n - 1):
        raise InvalidInput(f"({i},{j}) is a polygon side, not a diagonal")
    return (i, j)


def is_polygon_diagonal(n: int, d: Iterable[int]) -> bool:
    try:
        normalize_diagonal(n, d)
        return True
    except InvalidInput:
        return False


def polygon_diagonals(n: int) -> tuple[Diagonal, ...]:
    """All diagonals of the convex n-gon, lexicographically; the tuple index
    is the vertex id used by ``polygon_diagonal_graph``."""
    _validate_polygon(n)
    return tuple(
        (i, j)
        for i in range(n)
        for j in range(i + 2, n)
        if (j - i) % n != n - 1
    )


def diagonals_cross(n: int, d1: Iterable[int], d2: Iterable[int]) -> bool:
    """Two diagonals cross iff their endpoints strictly interleave on the circle."""
    a, b = normalize_diagonal(n, d1)
    c, d = normalize_diagonal(n, d2)
    if {a, b} & {c, d}:
        return False

    def strictly_inside(x: int) -> bool:
        return 0 < (x - a) % n < (b - a) % n

    return strictly_inside(c) != strictly_inside(d)


def polygon_diagonal_graph(n: int) -> Graph:
    """Vertices: diagonals of the convex n-gon; edges: non-crossing pairs."""
    diags = polygon_diagonals(n)
    edges = [
        (i, j)
        for i in range(len(diags))
        for j in range(i + 1, len(diags))
        if not diagonals_cross(n, diags[i], diags[j])
    ]
    return Graph(range(len(diags)), edges)


def polygon_surgery(
    n: int, sigma: Iterable[int], rho: Iterable[int]
) -> tuple[Pair, ...]:
    """Resolution pairs of rho in direction of sigma, on polygon diagonals.

    Non-crossing (but distinct) diagonals resolve to the single coincident
    pair {sigma, sigma}.  When they cross, each endpoint p of sigma yields
    the pair of segments from p to rho's endpoints; members that are
    polygon sides are dropped (a surviving singleton becomes a coincident
    pair), and a pair losing both members is dropped entirely.  An empty
    result means the assignment is undefined at this vertex, which happens
    only for n = 4.
    """
    sig = normalize_diagonal(n, sigma)
    rh = normalize_diagonal(n, rho)
    if sig == rh:
        raise InvalidInput("surgery needs two distinct diagonals")
    if not diagonals_cross(n, sig, rh):
        return (Pair(sig, sig),)
    out: list[Pair] = []
    for p in sig:
        members = [
            normalize_diagonal(n, (p, q))
            for q in rh
            if is_polygon_diagonal(n, (p, q))
        ]
        if not members:
            continue
        if len(members) == 1:
            out.append(Pair(members[0], members[0]))
        else:
            out.append(Pair(members[0], members[1]))
    return tuple(sorted(set(out)))


def polygon_projection(n: int, sigma: Iterable[int]) -> DismantlingProjection:
    """Assemble the surgery pairs into a projection over the diagonal graph.

    For n >= 5 every entry is nonempty; n = 4 is rejected since the two
    crossing diagonals leave each other nothing but sides.
    """
    sig = normalize_diagonal(n, sigma)
    diags = polygon_diagonals(n)
    id_of = {d: i for i, d in enumerate(diags)}
    table: dict[int, list[Pair]] = {}
    for d in diags:
        if d == sig:
            continue
        pairs = polygon_surgery(n, sig, d)
        if not pairs:
            raise InvalidInput(
                f"projection undefined at {d}: every surgery result is a side"
            )
        table[id_of[d]] = [
            Pair(id_of[p.members[0]], id_of[p.members[1]]) for p in pairs
        ]
    return DismantlingProjection(id_of[sig], table)


def polygon_dihedral_generators(n: int) -> tuple[Permutation, Permutation]:
    """Rotation and reflection of the polygon, acting on diagonal ids."""
    diags = polygon_diagonals(n)
    id_of = {d: i for i, d in enumerate(diags)}

    def label_map(f) -> Permutation:
        return Permutation(
            {id_of[d]: id_of[normalize_diagonal(n, f(d))] for d in diags}
        )

    rotation = label_map(lambda d: ((d[0] + 1) % n, (d[1] + 1) % n))
    reflection = label_map(lambda d: ((-d[0]) % n, (-d[1]) % n))
    return rotation, reflection
