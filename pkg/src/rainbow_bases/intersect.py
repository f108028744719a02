"""Rainbow bases of ``G_p`` as common bases of a transversal matroid and ``M``.

``M1`` is the transversal matroid on the elements: a set is independent when
its element vertices can be matched into the colour side of ``G_p``.  ``M2``
is ``M`` itself.  A common independent set of size ``n`` is exactly a matching
that saturates every colour and whose elements form a basis of ``M``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from . import gf2
from .errors import ResourceLimitError
from .graph import ColouredGraph, Matching, konig_ore_matching
from .matroid import BinaryMatroid, Flat, QuotientMatroid

MIN_MAX_CAP = 12


def check_deficit_inequalities(
    G: ColouredGraph, Q: QuotientMatroid, slack: int = 0, flats: Sequence[Flat] | None = None
) -> list[Flat]:
    """Flats ``F`` with ``deficit(F) > r_N(F) * (eta - slack)``.

    With ``slack=0`` an empty result means every deficit inequality holds;
    with ``slack=1`` the result is the family of tight flats that drives the
    repair machinery.
    """
    from .matroid import enumerate_flats

    flats = flats if flats is not None else enumerate_flats(Q)
    bound = G.eta - slack
    return [F for F in flats if G.deficit_of(F.members) > F.rank * bound]


@dataclass
class IntersectionInstance:
    graph: ColouredGraph
    matroid: BinaryMatroid

    @property
    def ground(self) -> range:
        return range(self.matroid.m)

    def r1(self, A: Iterable[int]) -> int:
        adj = {e: sorted(self.graph.element_adjacency[e]) for e in sorted(A)}
        return len(konig_ore_matching(adj)[0])

    def r2(self, A: Iterable[int]) -> int:
        return self.matroid.rank(A)


class RainbowSearch(NamedTuple):
    """Outcome of the intersection algorithm.

    ``common`` is a maximum common independent set; ``witness`` is a set ``A``
    with ``r1(A) + r2(E - A) == len(common)``.  ``matching`` is set only when
    ``common`` has size ``n``.
    """

    matching: Matching | None
    common: frozenset[int]
    witness: frozenset[int]


def _transversal_matching(G: ColouredGraph, I: Iterable[int], order) -> dict[int, int]:
    adj = {e: sorted(G.element_adjacency[e]) for e in sorted(I, key=order.__getitem__)}
    return konig_ore_matching(adj)[0]


def _m1_exchanges(G: ColouredGraph, I: frozenset[int], match: dict[int, int], x: int):
    """Return ``(free, swappable)`` for an outside element ``x``.

    ``free`` says whether ``I + x`` is transversal-independent; otherwise
    ``swappable`` lists the ``y`` in ``I`` with ``I - y + x`` independent.
    """
    owner = {c: e for e, c in match.items()}
    reached: set[int] = set()
    seen_c: set[int] = set()
    queue = deque([x])
    while queue:
        e = queue.popleft()
        for c in G.element_adjacency[e]:
            if c in seen_c:
                continue
            seen_c.add(c)
            y = owner.get(c)
            if y is None:
                return True, I
            if y not in reached:
                reached.add(y)
                queue.append(y)
    return False, frozenset(reached)


def max_common_independent(
    G: ColouredGraph, M: BinaryMatroid, order: Sequence[int] | None = None
) -> tuple[frozenset[int], frozenset[int]]:
    """Edmonds' matroid intersection by shortest augmenting paths.

    Returns ``(I, A)``: a maximum common independent set and a set ``A`` with
    ``r1(A) + r2(E - A) = |I|``.  ``order`` ranks the elements for tie-breaking.
    """
    order = list(order) if order is not None else list(range(M.m))
    rank = {e: i for i, e in enumerate(order)}
    I: frozenset[int] = frozenset()
    while True:
        match = _transversal_matching(G, I, rank)
        tb = gf2.TrackedBasis()
        for y in I:
            tb.add(M.columns[y], y)
        outside = [x for x in order if x not in I]
        # arcs y -> x when I - y + x is M1-independent, x -> y for M2
        out_arcs: dict[int, list[int]] = {y: [] for y in I}
        in_m2: dict[int, list[int]] = {}
        sources, sinks = set(), set()
        for x in outside:
            free, swaps = _m1_exchanges(G, I, match, x)
            if free:
                sources.add(x)
            else:
                for y in swaps:
                    out_arcs[y].append(x)
            combo = tb.express(M.columns[x])
            if combo is None:
                sinks.add(x)
            else:
                in_m2[x] = sorted(gf2.bits_of(combo), key=rank.__getitem__)
        for y in out_arcs:
            out_arcs[y].sort(key=rank.__getitem__)

        def successors(v):
            return in_m2.get(v, ()) if v not in I else out_arcs[v]

        parent: dict[int, int | None] = {}
        queue = deque()
        for x in outside:
            if x in sources:
                parent[x] = None
                queue.append(x)
        end = None
        while queue:
            v = queue.popleft()
            if v in sinks:
                end = v
                break
            for w in successors(v):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        if end is None:
            # everything that can reach a sink; r1(A) = |I & A|, r2(E - A) = |I - A|
            reverse: dict[int, list[int]] = {}
            for v in list(I) + outside:
                for w in successors(v):
                    reverse.setdefault(w, []).append(v)
            can_reach = set(sinks)
            queue = deque(sinks)
            while queue:
                w = queue.popleft()
                for v in reverse.get(w, ()):
                    if v not in can_reach:
                        can_reach.add(v)
                        queue.append(v)
            return I, frozenset(can_reach)
        path = []
        v = end
        while v is not None:
            path.append(v)
            v = parent[v]
        I = I.symmetric_difference(path)


def find_rainbow_basis(
    G: ColouredGraph, M: BinaryMatroid, order: Sequence[int] | None = None
) -> RainbowSearch:
    """A matching of ``G_p`` saturating all colours whose elements form a basis."""
    I, witness = max_common_independent(G, M, order)
    matching = None
    if len(I) == G.n:
        rank = {e: i for i, e in enumerate(order if order is not None else range(M.m))}
        assign = _transversal_matching(G, I, rank)
        matching = Matching(frozenset((c, e) for e, c in assign.items()))
    return RainbowSearch(matching, I, witness)


def min_max_verify(inst: IntersectionInstance, cap: int = MIN_MAX_CAP) -> bool:
    """Compare the algorithm's optimum with ``min_A r1(A) + r2(E - A)`` by brute force."""
    m = inst.matroid.m
    if m > cap:
        raise ResourceLimitError(f"m = {m} exceeds the exhaustive min-max cap {cap}")
    I, witness = max_common_independent(inst.graph, inst.matroid)
    ground = frozenset(range(m))
    best = min(
        inst.r1(A) + inst.r2(ground - set(A))
        for r in range(m + 1)
        for A in itertools.combinations(range(m), r)
    )
    certified = inst.r1(witness) + inst.r2(ground - witness)
    return best == len(I) == certified
