"""Repairing a rainbow matching with chains of alternating paths.

Given ``G_p`` and a matching ``W`` of ``G_p`` whose elements form a basis of
``M``, the uncovered elements ``a_0 .. a_{k-1}`` (``A``) form a basis of the
quotient ``N``.  Two repairs are implemented:

* :func:`repair_zero_deficit` moves every uncovered element onto a vertex of
  positive deficit, so removing ``W`` keeps all deficits non-negative.
* :func:`improve_matching` raises ``|A & F0|`` for the lowest-rank flat
  ``F0`` of the tight family that ``A`` does not yet span, without losing any
  flat that was already spanned.

Both work by growing a tangle of alternating paths, cutting it down to a
simple chain and swapping along the chain.  Every exchange is re-checked by a
direct rank computation in ``N``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import gf2
from .errors import ConsistencyError, InputError, RepairFailed
from .graph import AltPath, ColouredGraph, Matching, apply_paths, find_Y_path, splice, validate_path
from .matroid import Flat, QuotientMatroid

log = logging.getLogger(__name__)


def theoretical_constants(k: int) -> tuple[int, int] | None:
    """``(c0, c1) = (k * 2**(2**(2**k)), k * c0)``, or None when too large to build.

    For ``k >= 5`` the exponent alone is ``2**32`` bits; such constants exceed
    any ``eta`` this package can handle, so callers treat None as infinity.
    """
    if k > 4:
        return None
    c0 = k * 2 ** (2 ** (2**k))
    return c0, k * c0


def eta_exceeds(eta: int, k: int, which: str = "c0") -> bool:
    consts = theoretical_constants(k)
    if consts is None:
        return False
    c0, c1 = consts
    bound = {"c0": c0, "c0+c1": c0 + c1}[which]
    return eta > bound


# ----------------------------------------------------------------------------
# the tight flat family


def tight_flats(G: ColouredGraph, flats: Sequence[Flat]) -> list[Flat]:
    """Flats with ``deficit(F) > r_N(F) * (eta - 1)``."""
    return [F for F in flats if G.deficit_of(F.members) > F.rank * (G.eta - 1)]


def intersection_closure(Q: QuotientMatroid, family: Iterable[Flat]) -> list[Flat]:
    """Close a family of flats under pairwise intersection."""
    members = {F.members: F for F in family}
    frontier = list(members.values())
    while frontier:
        fresh = []
        current = list(members.values())
        for F in frontier:
            for G in current:
                X = F.members & G.members
                if X not in members:
                    flat = Flat(X, Q.rank(X))
                    members[X] = flat
                    fresh.append(flat)
        frontier = fresh
    return sorted(members.values(), key=Flat.sort_key)


@dataclass(frozen=True, eq=False)
class FlatFamily:
    """The tight family, its intersection closure and the per-element data tied to ``A``.

    Index ``i`` refers to the ``i``-th uncovered element ``uncovered[i]``.
    ``minimal[i]`` is the least-rank closed flat containing it, ``inner[i]``
    and ``outer[i]`` split that flat along the fundamental hyperplane
    ``hyperplanes[i]`` and its complement ``cocircuits[i]``.
    """

    quotient: QuotientMatroid
    eta: int
    tight: tuple[Flat, ...]
    closed: tuple[Flat, ...]
    uncovered: tuple[int, ...]
    coords: tuple[int, ...]
    hyperplanes: tuple[frozenset[int], ...]
    cocircuits: tuple[frozenset[int], ...]
    minimal: tuple[Flat, ...]
    inner: tuple[frozenset[int], ...]
    outer: tuple[frozenset[int], ...]
    diagnostics: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.uncovered)

    @property
    def constants(self):
        return theoretical_constants(self.quotient.k)

    def omega(self, F: Flat | Iterable[int]) -> int:
        members = F.members if isinstance(F, Flat) else F
        return sum(1 for a in self.uncovered if a in members)

    def index_of(self, label: int) -> int:
        return self.uncovered.index(label)

    def cocycle(self, indices: Iterable[int]) -> frozenset[int]:
        """Symmetric difference of the fundamental cocircuits ``C*_i``, ``i`` in ``indices``."""
        mask = 0
        for i in indices:
            mask |= 1 << i
        return frozenset(e for e, c in enumerate(self.coords) if bin(c & mask).count("1") % 2)


def basis_coordinates(Q: QuotientMatroid, A: Sequence[int]) -> tuple[int, ...]:
    """For every label, the mask of ``A``-indices whose vectors sum to its vector."""
    tb = gf2.TrackedBasis()
    for i, a in enumerate(A):
        if not tb.add(Q.vectors[a], i):
            raise InputError("uncovered elements are not a basis of N")
    if len(A) != Q.k:
        raise InputError("uncovered elements are not a basis of N")
    out = []
    for v in Q.vectors:
        combo = tb.express(v)
        if combo is None:
            raise ConsistencyError("A does not span N")
        out.append(combo)
    return tuple(out)


def build_flat_family(
    Q: QuotientMatroid,
    G: ColouredGraph,
    W: Matching,
    flats: Sequence[Flat] | None = None,
    closed: Sequence[Flat] | None = None,
) -> FlatFamily:
    """Tight flats, their intersection closure and ``F_i``, ``F_i'``, ``F_i''`` per ``a_i``.

    ``closed`` may be passed in when it is already known for this ``G``; it
    depends on ``G`` only, not on ``W``.
    """
    from .matroid import enumerate_flats

    if flats is None:
        flats = enumerate_flats(Q)
    tight = tight_flats(G, flats)
    if closed is None:
        closed = intersection_closure(Q, tight)
    uncovered = W.uncovered(G.m)
    coords = basis_coordinates(Q, uncovered)
    ground = Q.ground
    hyper, cocirc, minimal, inner, outer = [], [], [], [], []
    for i, a in enumerate(uncovered):
        C = frozenset(e for e, c in enumerate(coords) if (c >> i) & 1)
        H = ground - C
        F = next(F for F in closed if a in F.members)
        hyper.append(H)
        cocirc.append(C)
        minimal.append(F)
        inner.append(F.members & H)
        outer.append(F.members & C)
    eta = G.eta
    diagnostics = {}
    consts = theoretical_constants(Q.k)
    if consts is not None and eta > consts[0]:
        low = [i for i, X in enumerate(outer) if G.deficit_of(X) < eta - consts[0]]
        diagnostics["outer_deficit_below_bound"] = low
        if low:
            log.warning("deficit of F_i'' below eta - c0 for indices %s", low)
    return FlatFamily(
        quotient=Q,
        eta=eta,
        tight=tuple(tight),
        closed=tuple(closed),
        uncovered=uncovered,
        coords=coords,
        hyperplanes=tuple(hyper),
        cocircuits=tuple(cocirc),
        minimal=tuple(minimal),
        inner=tuple(inner),
        outer=tuple(outer),
        diagnostics=diagnostics,
    )


def select_F0(fam: FlatFamily) -> Flat | None:
    """Lowest-rank closed flat not spanned by ``A`` (ties by member key)."""
    for F in fam.closed:
        if fam.omega(F) < F.rank:
            return F
    return None


# ----------------------------------------------------------------------------
# targets


@dataclass(frozen=True)
class Target:
    """Per-index sets ``T_i`` with ``a_i`` in ``T_i`` inside ``C*_i``."""

    sets: tuple[frozenset[int], ...]
    mode: str = "full"
    F0: Flat | None = None
    starred: frozenset[int] = frozenset()

    def __getitem__(self, i):
        return self.sets[i]

    def __len__(self):
        return len(self.sets)


def full_target(fam: FlatFamily) -> Target:
    return Target(fam.cocircuits, "full")


def build_F0_target(fam: FlatFamily, F0: Flat) -> Target:
    """``T_i = F_i''`` for ``a_i`` in ``F0`` or already saturated below ``F0``, else ``C*_i``.

    ``starred`` holds the indices of ``A*``.
    """
    starred = frozenset(
        i
        for i, F in enumerate(fam.minimal)
        if F.rank <= F0.rank and fam.omega(F) == F.rank
    )
    sets = []
    for i, a in enumerate(fam.uncovered):
        if a in F0.members or i in starred:
            sets.append(fam.outer[i])
        else:
            sets.append(fam.cocircuits[i])
    target = Target(tuple(sets), "F0", F0, starred)
    bad = target_lemma_violations(fam, target)
    if bad:
        raise ConsistencyError("F0-target structure violated: " + "; ".join(bad))
    return target


def target_lemma_violations(fam: FlatFamily, target: Target) -> list[str]:
    """Set-level checks of the four structural facts about an ``F0``-target."""
    out = []
    F0 = target.F0
    starred = target.starred
    C, T, Fm = fam.cocircuits, target.sets, fam.minimal
    in_F0 = {i for i, a in enumerate(fam.uncovered) if a in F0.members}
    for i in range(fam.k):
        if not (fam.uncovered[i] in T[i] and T[i] <= C[i]):
            out.append(f"T_{i} is not a target set")
    for i in starred:
        for j in range(fam.k):
            if fam.uncovered[j] not in Fm[i].members and C[j] & T[i]:
                out.append(f"(a) i={i} j={j}")
            if T[i] & T[j]:
                if Fm[i] != Fm[j] or j not in starred or (T[i] & C[j]) != (T[i] & T[j]):
                    out.append(f"(b) i={i} j={j}")
            if j in starred and (C[i] - T[i]) & T[j]:
                if not (Fm[i].members < Fm[j].members):
                    out.append(f"(c) i={i} j={j}")
    for i in in_F0 - starred:
        for j in in_F0 - starred:
            if (C[i] & T[j]) != (T[i] & T[j]):
                out.append(f"(d) i={i} j={j}")
    return out


# ----------------------------------------------------------------------------
# path chains


@dataclass(frozen=True)
class PathChain:
    """Alternating paths ``P_0 .. P_{t-1}``; path ``j`` starts at ``uncovered[beta[j]]``."""

    paths: tuple[AltPath, ...]
    beta: tuple[int, ...]
    root: frozenset[int]
    kind: str = "chain"

    def __len__(self):
        return len(self.paths)

    @property
    def origins(self) -> tuple[int, ...]:
        return tuple(P.origin for P in self.paths)

    @property
    def termini(self) -> tuple[int, ...]:
        return tuple(P.terminus for P in self.paths)


def chain_violations(
    chain: PathChain, G: ColouredGraph, W: Matching, fam: FlatFamily, target: Target, kind: str
) -> list[str]:
    """Everything that keeps ``chain`` from being a ``kind`` (tangle | chain | simple)."""
    out = []
    zones = target.sets
    for j, (P, b) in enumerate(zip(chain.paths, chain.beta)):
        try:
            validate_path(G, W, P)
        except InputError as exc:
            out.append(f"path {j}: {exc}")
        if fam.uncovered[b] != P.origin:
            out.append(f"path {j}: origin does not match beta")
    if not chain.paths:
        return out + ["empty chain"]
    if chain.termini[0] not in chain.root:
        out.append("first terminus outside the root")
    for j in range(1, len(chain)):
        y = chain.termini[j]
        if kind == "tangle":
            if y not in chain.root and not any(y in zones[chain.beta[i]] for i in range(j)):
                out.append(f"path {j}: terminus outside root and earlier zones")
        elif y not in zones[chain.beta[j - 1]]:
            out.append(f"path {j}: terminus outside the previous zone")
    if kind == "simple":
        for i in range(len(chain)):
            for j in range(i + 1, len(chain)):
                if chain.paths[i].intersects(chain.paths[j]):
                    out.append(f"paths {i} and {j} intersect")
        for j in range(2, len(chain)):
            y = chain.termini[j]
            if any(y in zones[chain.beta[i]] for i in range(j - 1)):
                out.append(f"path {j}: terminus not fresh")
    return out


def _positive(G: ColouredGraph) -> frozenset[int]:
    return frozenset(e for e in range(G.m) if G.deficit(e) > 0)


def _grow_tangle(G, W, fam, zones, root, stop_at=None):
    """Add Y-paths from fresh uncovered origins while any exists.

    Each path ends on a positive-deficit vertex of the root or of a zone of an
    earlier origin.  Stops early once ``stop_at`` has been used as an origin.
    """
    positive = _positive(G)
    reach = set(root)
    used: list[int] = []
    paths, beta = [], []
    while True:
        P = find_Y_path(G, W, reach & positive, exclude=used)
        if P is None:
            break
        i = fam.index_of(P.origin)
        paths.append(P)
        beta.append(i)
        used.append(P.origin)
        if stop_at is not None and P.origin == stop_at:
            break
        reach |= zones[i]
    return paths, beta


def _chain_to(paths, beta, root, zones, j) -> list[int]:
    """Indices of a shortest chain inside the tangle from the root to path ``j``."""
    best: dict[int, list[int]] = {}
    for i in range(j + 1):
        if paths[i].terminus in root:
            best[i] = [i]
            continue
        options = [best[h] + [i] for h in range(i) if h in best and paths[i].terminus in zones[beta[h]]]
        if options:
            best[i] = min(options, key=len)
    if j not in best:
        raise ConsistencyError("tangle path is not connected to the root")
    return best[j]


def simplify_chain(
    chain: PathChain,
    zones: Sequence[frozenset[int]],
    spade: frozenset[int] | None = None,
    fresh_root: bool = False,
) -> PathChain:
    """Shrink a chain until it is simple.

    Each rule removes at least one path, so this terminates:

    * two paths meet: splice the later origin onto the earlier terminus;
    * a terminus already lies in a zone two or more steps back: drop the
      paths in between;
    * with ``fresh_root``, a later terminus in the root: drop everything before it;
    * with ``spade`` (indices whose zone is the whole cocircuit), a proper
      sub-chain that starts in the root and closes on a ``spade`` origin
      replaces the chain.

    The last origin and the first terminus are preserved by the first two rules.
    """
    items = list(zip(chain.paths, chain.beta))
    root = chain.root
    while True:
        t = len(items)
        changed = False
        for a in range(t):
            for b in range(a + 1, t):
                if items[a][0].intersects(items[b][0]):
                    merged = splice(items[a][0], items[b][0])
                    items = items[:a] + [(merged, items[b][1])] + items[b + 1 :]
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        for j in range(1, t):
            y = items[j][0].terminus
            if fresh_root and y in root:
                items = items[j:]
                changed = True
                break
            back = next((i for i in range(j - 1) if y in zones[items[i][1]]), None)
            if back is not None:
                items = items[: back + 1] + items[j:]
                changed = True
                break
        if changed:
            continue
        if spade is not None:
            for j in range(t):
                if items[j][1] not in spade:
                    continue
                for i in range(j + 1):
                    if j - i >= t - 1:
                        continue
                    y = items[i][0].terminus
                    if y in root and y in zones[items[j][1]]:
                        items = items[i : j + 1]
                        changed = True
                        break
                if changed:
                    break
        if not changed:
            break
    return PathChain(
        tuple(P for P, _ in items), tuple(b for _, b in items), root, kind="simple"
    )


# ----------------------------------------------------------------------------
# the parity partition and basis exchange


def _is_acyclic(vertices: Sequence, arcs: set) -> bool:
    indeg = {v: 0 for v in vertices}
    for _, w in arcs:
        indeg[w] += 1
    stack = [v for v in vertices if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for a, w in arcs:
            if a == v:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
    return seen == len(vertices)


def parity_partition(vertices: Sequence, arcs: Iterable[tuple], u) -> tuple[frozenset, frozenset]:
    """Split an acyclic digraph into ``(X, Y)`` with ``u`` in ``X`` such that
    ``[v in X] + |X & in-neighbours(v)|`` is odd exactly at ``v = u``.

    Vertices other than ``u`` that are sources or sinks are peeled off one at a
    time; rebuilding in reverse puts a source in ``Y`` and a sink in ``X`` iff
    an odd number of its in-neighbours already sit in ``X``.
    """
    vertices = list(vertices)
    arcs = {(a, b) for a, b in arcs if a != b}
    if u not in vertices:
        raise InputError("root vertex is not in the digraph")
    if not _is_acyclic(vertices, arcs):
        raise InputError("parity_partition needs an acyclic digraph")
    alive = set(vertices)
    peeled: list[tuple[object, str]] = []
    while len(alive) > 1:
        for v in vertices:
            if v == u or v not in alive:
                continue
            has_in = any(a in alive and b == v for a, b in arcs)
            has_out = any(a == v and b in alive for a, b in arcs)
            if not has_in:
                peeled.append((v, "source"))
                break
            if not has_out:
                peeled.append((v, "sink"))
                break
        else:
            raise ConsistencyError("acyclic digraph without a removable source or sink")
        alive.discard(peeled[-1][0])
    X = {u}
    for v, kind in reversed(peeled):
        if kind == "sink":
            if sum(1 for a, b in arcs if b == v and a in X) % 2:
                X.add(v)
    return frozenset(X), frozenset(vertices) - X


def parity_sums(vertices, arcs, X) -> dict:
    return {v: int(v in X) + sum(1 for a, b in arcs if b == v and a in X and a != b) for v in vertices}


@dataclass
class ExchangeRecord:
    kind: str
    beta: tuple[int, ...]
    origins: tuple[int, ...]
    termini: tuple[int, ...]
    rank_ok: bool
    certificates_ok: bool = True
    hypotheses_ok: bool = True
    after: tuple[int, ...] = ()

    def line(self) -> str:
        def fmt(xs):
            return ",".join(str(x + 1) for x in xs) or "-"

        return (
            f"exchange kind={self.kind} beta={fmt(self.beta)} origins={fmt(self.origins)} "
            f"termini={fmt(self.termini)} rank={'ok' if self.rank_ok else 'FAIL'} "
            f"certs={'ok' if self.certificates_ok else 'FAIL'}"
        )


def exchange_digraph(fam: FlatFamily, chain: PathChain) -> set[tuple[int, int]]:
    """Arc ``i -> j`` (``i != j``) when the terminus following ``j`` (cyclically) lies in ``C*_beta(i)``."""
    t = len(chain)
    nxt = [chain.termini[(j + 1) % t] for j in range(t)]
    return {
        (i, j)
        for i in range(t)
        for j in range(t)
        if i != j and nxt[j] in fam.cocircuits[chain.beta[i]]
    }


def exchange_hypothesis_violations(fam: FlatFamily, chain: PathChain, target: Target) -> list[str]:
    """Preconditions for swapping the whole chain at once into a new basis of ``N``."""
    out = []
    F0 = target.F0
    t = len(chain)
    spade = _spade(fam, target)
    if chain.beta[-1] not in spade:
        out.append("last origin is not outside F0 and A*")
    if chain.termini[0] not in target[chain.beta[-1]]:
        out.append("first terminus is not in the last origin's target")
    for j in range(t):
        if chain.beta[j] not in spade:
            continue
        for jp in range(j + 1):
            if j - jp < t - 1:
                y = chain.termini[jp]
                if y in F0.members and y in target[chain.beta[j]]:
                    out.append(f"short closing pair ({jp}, {j})")
    return out


def _spade(fam: FlatFamily, target: Target) -> frozenset[int]:
    F0 = target.F0
    return frozenset(
        i
        for i, a in enumerate(fam.uncovered)
        if a not in F0.members and i not in target.starred
    )


def _swap(fam: FlatFamily, chain: PathChain) -> frozenset[int]:
    A = set(fam.uncovered)
    A.difference_update(chain.origins)
    A.update(chain.termini)
    return frozenset(A)


def exchange_basis_valid(fam: FlatFamily, chain: PathChain, target: Target) -> tuple[frozenset[int], bool]:
    """New uncovered set after swapping along an ``F0``-chain, with certificate status.

    The returned set is always checked to be a basis of ``N`` by a rank
    computation; a failure raises ConsistencyError.  The second value reports
    whether the cocircuit certificates built from the parity partition of the
    exchange digraph were all confirmed.
    """
    bad = exchange_hypothesis_violations(fam, chain, target)
    if bad:
        raise InputError("chain does not satisfy the exchange hypotheses: " + "; ".join(bad))
    Q = fam.quotient
    t = len(chain)
    arcs = exchange_digraph(fam, chain)
    certs = _is_acyclic(range(t), arcs)
    A = fam.uncovered
    a = [A[b] for b in chain.beta]
    a_new = chain.termini
    if certs:
        # prefix certificates: for s = 1 .. t-2 (0-based), on vertices s-1 .. t-2
        for s in range(1, t - 1):
            verts = list(range(s - 1, t - 1))
            sub = {(x, y) for x, y in arcs if x in verts and y in verts}
            X, _ = parity_partition(verts, sub, s - 1)
            C = fam.cocycle(chain.beta[x] for x in X)
            kept = (set(A) - set(a[s : t - 1])) | set(a_new[s:])
            if C & kept != {a[s - 1], a_new[s]}:
                certs = False
        X, _ = parity_partition(range(t), arcs, t - 1)
        C = fam.cocycle(chain.beta[x] for x in X)
        kept = (set(A) - set(a[: t - 1])) | set(a_new)
        if C & kept != {a[t - 1], a_new[0]}:
            certs = False
    new = _swap(fam, chain)
    if not Q.is_basis(new):
        raise ConsistencyError(
            f"exchange along beta={chain.beta} broke the basis of N (certificates ok: {certs})"
        )
    return new, certs


def _stepwise_certificate(fam: FlatFamily, chain: PathChain, closing: int) -> bool:
    """Swap along the chain one element at a time, checking each step by fundamental cocircuit."""
    Q = fam.quotient
    current = set(fam.uncovered)
    t = len(chain)
    steps = [(chain.beta[j - 1], chain.termini[j]) for j in range(t - 1, 0, -1)]
    steps.append((closing, chain.termini[0]))
    for idx, new in steps:
        old = fam.uncovered[idx]
        if (current | {new}) & fam.cocircuits[idx] != {old, new}:
            return False
        current = (current - {old}) | {new}
        if not Q.is_basis(current):
            return False
    return True


# ----------------------------------------------------------------------------
# the two repairs


def repair_zero_deficit(
    G: ColouredGraph,
    W: Matching,
    Q: QuotientMatroid,
    fam_factory=None,
    records: list | None = None,
) -> Matching:
    """Move uncovered vertices of zero deficit onto vertices of positive deficit.

    Each round grows a tangle rooted at the cocircuit of one zero-deficit
    uncovered vertex, shrinks it to a simple chain ending at that vertex and
    swaps along it; the number of zero-deficit uncovered vertices drops by at
    least one per round.
    """
    fam_factory = fam_factory or (lambda W_: build_flat_family(Q, G, W_))
    if any(G.deficit(e) < 0 for e in range(G.m)):
        raise InputError("deficits must be non-negative before repairing")
    while True:
        zero = [y for y in W.uncovered(G.m) if G.deficit(y) == 0]
        if not zero:
            return W
        fam = fam_factory(W)
        y_k = zero[0]
        k_idx = fam.index_of(y_k)
        zones = fam.cocircuits
        root = zones[k_idx] - {y_k}
        paths, beta = _grow_tangle(G, W, fam, zones, root, stop_at=y_k)
        if not paths or paths[-1].origin != y_k:
            raise RepairFailed(
                f"no path-tangle reaches uncovered v{y_k + 1} of zero deficit", stage="zero-deficit"
            )
        idx = _chain_to(paths, beta, root, zones, len(paths) - 1)
        chain = PathChain(tuple(paths[i] for i in idx), tuple(beta[i] for i in idx), root)
        chain = simplify_chain(chain, zones, fresh_root=True)
        target = full_target(fam)
        bad = chain_violations(chain, G, W, fam, target, "simple")
        if bad or chain.origins[-1] != y_k or any(y in root for y in chain.termini[1:]):
            raise ConsistencyError("zero-deficit chain is not simple: " + "; ".join(bad))
        new_uncovered = _swap(fam, chain)
        rank_ok = Q.is_basis(new_uncovered)
        certs = _stepwise_certificate(fam, chain, k_idx)
        rec = ExchangeRecord(
            "zero-deficit", chain.beta, chain.origins, chain.termini, rank_ok, certs,
            after=tuple(sorted(new_uncovered)),
        )
        if records is not None:
            records.append(rec)
        log.debug(rec.line())
        if not rank_ok:
            raise ConsistencyError(f"zero-deficit exchange broke the basis of N: {rec.line()}")
        W_new = apply_paths(G, W, chain.paths)
        if set(W_new.uncovered(G.m)) != new_uncovered:
            raise ConsistencyError("applied paths disagree with the exchanged basis")
        before = len(zero)
        after = sum(1 for y in W_new.uncovered(G.m) if G.deficit(y) == 0)
        if after >= before:
            raise ConsistencyError("zero-deficit repair made no progress")
        W = W_new


def find_path_chain(
    G: ColouredGraph, W: Matching, fam: FlatFamily, target: Target, F0: Flat
) -> PathChain:
    """A chain rooted at ``F0 - cl(F0 & A)``, consistent with ``target``, whose last
    origin lies outside ``F0`` and ``A*`` and whose first terminus lies in that
    origin's target set.

    Paths are added from fresh uncovered origins while any exists; the chain
    is then assembled from the tangle by composing root-to-origin chains.
    """
    Q = fam.quotient
    span = Q.closure(F0.members & set(fam.uncovered))
    root = F0.members - span
    spade = _spade(fam, target)
    zones = target.sets
    paths, beta = _grow_tangle(G, W, fam, zones, root)
    if not paths:
        raise RepairFailed("no alternating path reaches the unspanned part of F0", flat=F0)
    covered = set()
    for P, b in zip(paths, beta):
        if b in spade:
            covered |= zones[b]
    if not root <= covered:
        raise RepairFailed("targets of the grown tangle do not cover F0 - cl(F0 & A)", flat=F0)

    def sub(j):
        idx = _chain_to(paths, beta, root, zones, j)
        return [(paths[i], beta[i]) for i in idx]

    last_spade = max(j for j, b in enumerate(beta) if b in spade)
    links = [sub(last_spade)]
    used_last = {beta[last_spade]}
    while True:
        first_terminus = links[-1][0][0].terminus
        for q in range(len(links)):
            if first_terminus in zones[links[q][-1][1]]:
                # compose: newest link first, oldest (q) last
                items = [it for link in reversed(links[q:]) for it in link]
                return PathChain(
                    tuple(P for P, _ in items), tuple(b for _, b in items), root, kind="chain"
                )
        nxt = next(
            (
                j
                for j, b in enumerate(beta)
                if b in spade and b not in used_last and first_terminus in zones[b]
            ),
            None,
        )
        if nxt is None:
            raise RepairFailed("composition of path-chains did not close", flat=F0)
        used_last.add(beta[nxt])
        links.append(sub(nxt))


def improve_matching(
    G: ColouredGraph,
    W: Matching,
    fam: FlatFamily,
    F0: Flat,
    records: list | None = None,
) -> Matching:
    """One improvement step: ``|A & F0|`` grows and no spanned flat of rank at most
    ``r(F0)`` in the closed family is lost."""
    if any(G.deficit(y) <= 0 for y in W.uncovered(G.m)):
        raise InputError("improve_matching needs every uncovered vertex to have positive deficit")
    target = build_F0_target(fam, F0)
    chain = find_path_chain(G, W, fam, target, F0)
    spade = _spade(fam, target)
    chain = simplify_chain(chain, target.sets, spade=spade)
    bad = chain_violations(chain, G, W, fam, target, "simple")
    if bad:
        raise ConsistencyError("simplified chain is not simple: " + "; ".join(bad))
    hyp = exchange_hypothesis_violations(fam, chain, target)
    if hyp:
        raise RepairFailed("simplified chain misses the exchange hypotheses: " + "; ".join(hyp), flat=F0)
    new_uncovered, certs = exchange_basis_valid(fam, chain, target)
    rec = ExchangeRecord(
        "improve", chain.beta, chain.origins, chain.termini, True, certs,
        after=tuple(sorted(new_uncovered)),
    )
    if records is not None:
        records.append(rec)
    log.debug(rec.line())
    W_new = apply_paths(G, W, chain.paths)
    new_A = set(W_new.uncovered(G.m))
    if new_A != new_uncovered:
        raise ConsistencyError("applied paths disagree with the exchanged basis")
    before = fam.omega(F0)
    after = sum(1 for a in new_A if a in F0.members)
    if after <= before:
        raise ConsistencyError(f"omega(F0) did not grow ({before} -> {after})")
    for F in fam.closed:
        if F.rank <= F0.rank and fam.omega(F) == F.rank:
            if sum(1 for a in new_A if a in F.members) != F.rank:
                raise ConsistencyError(f"spanned flat {F.key} lost by the improvement")
    if any(G.deficit(y) <= 0 for y in new_A):
        raise ConsistencyError("improvement uncovered a vertex of zero deficit")
    return W_new


def saturate_family(
    G: ColouredGraph,
    W: Matching,
    Q: QuotientMatroid,
    flats: Sequence[Flat],
    closed: Sequence[Flat] | None = None,
    records: list | None = None,
    max_rounds: int = 10_000,
) -> Matching:
    """Improve ``W`` until ``A`` spans every flat of the closed tight family."""
    if closed is None:
        closed = intersection_closure(Q, tight_flats(G, flats))
    for _ in range(max_rounds):
        fam = build_flat_family(Q, G, W, flats=flats, closed=closed)
        F0 = select_F0(fam)
        if F0 is None:
            return W
        W = improve_matching(G, W, fam, F0, records=records)
    raise ConsistencyError("flat saturation did not terminate")
