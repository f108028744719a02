"""The coloured bipartite graph of a base sequence and alternating-path machinery.

Colour vertices ``u_i`` are plain ints ``0 .. n-1``; element vertices ``v_j``
are the element labels ``0 .. m-1``.  ``G_p`` is the graph left after ``p``
rainbow matchings have been removed, and ``eta = n - p`` is its maximum degree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ConsistencyError, InputError
from .matroid import BaseSequence


@dataclass(frozen=True)
class Matching:
    """A set of ``(colour, element)`` edges, no two sharing an endpoint."""

    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        colours = [c for c, _ in self.edges]
        elements = [e for _, e in self.edges]
        if len(set(colours)) != len(colours) or len(set(elements)) != len(elements):
            raise InputError("edges of a matching must not share endpoints")

    @classmethod
    def from_assignment(cls, elements: Sequence[int]) -> "Matching":
        """Matching where colour ``i`` is matched to ``elements[i]``."""
        return cls(frozenset(enumerate(elements)))

    @cached_property
    def element_of(self) -> dict[int, int]:
        return dict(self.edges)

    @cached_property
    def colour_of(self) -> dict[int, int]:
        return {e: c for c, e in self.edges}

    @cached_property
    def saturated(self) -> frozenset[int]:
        return frozenset(e for _, e in self.edges)

    def uncovered(self, m: int) -> tuple[int, ...]:
        """Unsaturated element vertices, in increasing order."""
        return tuple(e for e in range(m) if e not in self.colour_of)

    def assignment(self) -> tuple[int, ...]:
        return tuple(self.element_of[c] for c in range(len(self.edges)))

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class AltPath:
    """Alternating path ``v0, u1, v1, ..., ut, vt`` with respect to a matching ``W``.

    ``v0`` is unsaturated, each ``(v_{i-1}, u_i)`` is a non-matching edge and
    each ``(u_i, v_i)`` a matching edge, so the terminus ``vt`` is saturated.
    """

    elements: tuple[int, ...]
    colours: tuple[int, ...]

    def __post_init__(self):
        if len(self.elements) != len(self.colours) + 1 or not self.colours:
            raise InputError("an alternating path needs t >= 1 colour vertices and t+1 elements")

    @property
    def origin(self) -> int:
        return self.elements[0]

    @property
    def terminus(self) -> int:
        return self.elements[-1]

    def __len__(self):
        return len(self.colours)

    def intersects(self, other: "AltPath") -> bool:
        return bool(set(self.elements) & set(other.elements) or set(self.colours) & set(other.colours))

    def is_simple(self) -> bool:
        return len(set(self.elements)) == len(self.elements) and len(set(self.colours)) == len(
            self.colours
        )


@dataclass(frozen=True, eq=False)
class ColouredGraph:
    """``G_p``: edge ``(i, j)`` is present iff ``e_j`` is in ``B_i`` and no removed
    matching used it."""

    n: int
    m: int
    adjacency: tuple[frozenset[int], ...]
    removed: tuple[Matching, ...] = ()

    @property
    def p(self) -> int:
        return len(self.removed)

    @property
    def eta(self) -> int:
        return self.n - self.p

    @cached_property
    def element_adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.m)]
        for c, es in enumerate(self.adjacency):
            for e in es:
                nbrs[e].add(c)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.element_adjacency)

    def has_edge(self, colour: int, element: int) -> bool:
        return element in self.adjacency[colour]

    def deficit(self, e: int) -> int:
        return self.eta - self.degrees[e]

    def deficit_of(self, X: Iterable[int]) -> int:
        return sum(self.eta - self.degrees[e] for e in X)

    @cached_property
    def deficits(self) -> tuple[int, ...]:
        return tuple(self.eta - d for d in self.degrees)

    def total_deficit(self) -> int:
        """Sum of all element deficits; always ``k * eta``."""
        total = sum(self.deficits)
        if total != (self.m - self.n) * self.eta:
            raise ConsistencyError(
                f"total deficit {total} != k*eta = {(self.m - self.n) * self.eta}"
            )
        return total

    def edge_list(self) -> list[str]:
        """Debug dump, one ``u<i> v<j>`` line per edge (1-based)."""
        return [f"u{c + 1} v{e + 1}" for c in range(self.n) for e in sorted(self.adjacency[c])]


def build_graph(B: BaseSequence, m: int) -> ColouredGraph:
    return ColouredGraph(n=len(B), m=m, adjacency=tuple(frozenset(b) for b in B.bases))


def remove_matching(G: ColouredGraph, W: Matching) -> ColouredGraph:
    """``G_{p+1} = G_p - W``; ``W`` must saturate the colour side."""
    if len(W) != G.n or set(W.element_of) != set(range(G.n)):
        raise InputError("a removed matching must saturate every colour")
    adjacency = [set(es) for es in G.adjacency]
    for c, e in W.edges:
        if e not in adjacency[c]:
            raise InputError(f"edge (u{c + 1}, v{e + 1}) is not in G_{G.p}")
        adjacency[c].discard(e)
    return ColouredGraph(G.n, G.m, tuple(frozenset(s) for s in adjacency), G.removed + (W,))


def total_deficit(G: ColouredGraph) -> int:
    return G.total_deficit()


def konig_ore_matching(adjacency: Mapping[Hashable, Iterable[Hashable]]):
    """Maximum matching of a bipartite graph with a deficiency witness.

    ``adjacency`` maps each left vertex to its right neighbours.  Returns
    ``(matching, witness)`` where ``matching`` maps left to right vertices and
    ``witness`` is a left subset with ``|witness| - |N(witness)| = |X| - |matching|``.
    Left vertices are processed in iteration order, neighbours in given order.
    """
    left = list(adjacency)
    nbrs = {x: list(adjacency[x]) for x in left}
    match_left: dict = {}
    match_right: dict = {}

    def augment(x, seen):
        for y in nbrs[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_right or augment(match_right[y], seen):
                match_left[x] = y
                match_right[y] = x
                return True
        return False

    for x in left:
        augment(x, set())

    # Left vertices reachable from free left vertices by alternating paths form
    # the Hall violator; their neighbourhood is entirely matched back into it.
    witness = {x for x in left if x not in match_left}
    queue = deque(witness)
    seen_right = set()
    while queue:
        x = queue.popleft()
        for y in nbrs[x]:
            if y in seen_right:
                continue
            seen_right.add(y)
            x2 = match_right[y]
            if x2 not in witness:
                witness.add(x2)
                queue.append(x2)
    return match_left, frozenset(witness)


def deficiency(adjacency: Mapping[Hashable, Iterable[Hashable]], subset: Iterable[Hashable]) -> int:
    """``def(X') = max(0, |X'| - |N(X')|)``."""
    subset = list(subset)
    nbrs = set()
    for x in subset:
        nbrs.update(adjacency[x])
    return max(0, len(subset) - len(nbrs))


def _check_saturating(G: ColouredGraph, W: Matching):
    if len(W) != G.n:
        raise InputError("matching must saturate every colour")
    for c, e in W.edges:
        if not G.has_edge(c, e):
            raise InputError(f"matching edge (u{c + 1}, v{e + 1}) is not in G_{G.p}")


def reachable_U(G: ColouredGraph, W: Matching, Y: Iterable[int]) -> frozenset[int]:
    """Colours reachable by alternating paths that start in ``Y`` with a matching edge."""
    Y = frozenset(Y)
    if not Y <= W.saturated:
        raise InputError("Y must consist of saturated element vertices")
    seen_u: set[int] = set()
    seen_v = set(Y)
    queue = deque(sorted(Y))
    while queue:
        v = queue.popleft()
        c = W.colour_of[v]
        if c in seen_u:
            continue
        seen_u.add(c)
        for e in sorted(G.adjacency[c]):
            if e == v or e in seen_v:
                continue
            seen_v.add(e)
            if e in W.colour_of:
                queue.append(e)
    return frozenset(seen_u)


def find_Y_path(
    G: ColouredGraph,
    W: Matching,
    Y: Iterable[int],
    exclude: Iterable[int] = (),
    order: Sequence[int] | None = None,
) -> AltPath | None:
    """Shortest alternating path from an unsaturated vertex to ``Y - V̄_W``.

    Origins come from ``V̄_W - exclude``; a breadth-first search runs from all
    origins at once.  Ties go to the lowest element in ``order`` (index order
    by default), which makes the result deterministic.
    """
    uncovered = W.uncovered(G.m)
    excluded = set(exclude)
    targets = frozenset(Y) - set(uncovered)
    if not targets:
        return None
    rank = {e: i for i, e in enumerate(order)} if order is not None else None
    sort = (lambda xs: sorted(xs, key=rank.__getitem__)) if rank is not None else sorted
    origins = sort([v for v in uncovered if v not in excluded])
    parent_v: dict[int, tuple[int, int] | None] = {v: None for v in origins}
    seen_u: set[int] = set()
    queue = deque(origins)
    while queue:
        v = queue.popleft()
        mate = W.colour_of.get(v)
        for c in sort(G.element_adjacency[v]):
            if c == mate or c in seen_u:
                continue
            seen_u.add(c)
            w = W.element_of[c]
            if w in parent_v:
                continue
            parent_v[w] = (c, v)
            if w in targets:
                return _trace(parent_v, w)
            queue.append(w)
    return None


def _trace(parent_v, end) -> AltPath:
    elements = [end]
    colours = []
    while parent_v[elements[-1]] is not None:
        c, v = parent_v[elements[-1]]
        colours.append(c)
        elements.append(v)
    return AltPath(tuple(reversed(elements)), tuple(reversed(colours)))


def validate_path(G: ColouredGraph, W: Matching, P: AltPath) -> None:
    """Raise InputError unless ``P`` is a simple alternating path of ``G`` w.r.t. ``W``."""
    if not P.is_simple():
        raise InputError("alternating path repeats a vertex")
    if P.origin in W.colour_of:
        raise InputError(f"path origin v{P.origin + 1} is saturated")
    for i, c in enumerate(P.colours):
        prev, nxt = P.elements[i], P.elements[i + 1]
        if not G.has_edge(c, prev) or W.element_of.get(c) == prev:
            raise InputError(f"(v{prev + 1}, u{c + 1}) is not a non-matching edge")
        if W.element_of.get(c) != nxt:
            raise InputError(f"(u{c + 1}, v{nxt + 1}) is not a matching edge")


def apply_paths(G: ColouredGraph, W: Matching, paths: Sequence[AltPath]) -> Matching:
    """Swap matching and non-matching edges along pairwise vertex-disjoint paths."""
    for P in paths:
        validate_path(G, W, P)
    for i, P in enumerate(paths):
        for Q in paths[i + 1 :]:
            if P.intersects(Q):
                raise InputError("paths passed to apply_paths must be vertex-disjoint")
    assign = dict(W.element_of)
    for P in paths:
        for i, c in enumerate(P.colours):
            assign[c] = P.elements[i]
    return Matching(frozenset(assign.items()))


def splice(P1: AltPath, P2: AltPath) -> AltPath:
    """Alternating path from the origin of ``P2`` to the terminus of ``P1``.

    Requires the two paths to share a vertex.  Follows ``P2`` up to its first
    vertex on ``P1`` and then follows ``P1``.
    """
    on_p1_elements = {e: i for i, e in enumerate(P1.elements)}
    on_p1_colours = {c: i for i, c in enumerate(P1.colours)}
    if P2.origin in on_p1_elements:
        # an unsaturated vertex can only sit on P1 as its origin
        return P1
    for i, c in enumerate(P2.colours):
        if c in on_p1_colours:
            j = on_p1_colours[c]
            return AltPath(
                P2.elements[: i + 1] + P1.elements[j + 1 :],
                P2.colours[: i + 1] + P1.colours[j + 1 :],
            )
        # a saturated element is entered through its matched colour, met above
        if P2.elements[i + 1] in on_p1_elements:
            raise ConsistencyError("paths met at an element without sharing its matched colour")
    raise InputError("paths do not intersect")
