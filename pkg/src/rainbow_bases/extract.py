"""Extract disjoint rainbow bases one at a time.

Each step finds a rainbow matching ``W`` of ``G_p`` by matroid intersection,
repairs it so that every uncovered element has positive deficit and the
uncovered set spans every tight flat, then removes it.  The repairs are what
keep every deficit inequality alive for the next step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .chains import ExchangeRecord, build_flat_family, intersection_closure, repair_zero_deficit, saturate_family, tight_flats
from .errors import ConsistencyError, InputError, RepairFailed
from .graph import ColouredGraph, Matching, build_graph, remove_matching
from .intersect import check_deficit_inequalities, find_rainbow_basis
from .matroid import DEFAULT_FLAT_CAP, BaseSequence, BinaryMatroid, Flat, QuotientMatroid, build_quotient, enumerate_flats

log = logging.getLogger(__name__)

EXHAUSTED = "exhausted"
NO_RAINBOW = "no-rainbow-matching"
REPAIR_FAILED = "repair-failed"


@dataclass(frozen=True)
class ExtractionConfig:
    seed: int = 0
    retries: int = 8
    flat_cap: int = DEFAULT_FLAT_CAP
    repair: bool = True
    # when every repair attempt fails, accept an unrepaired candidate whose
    # removal is checked directly to keep all deficit inequalities
    fallback: bool = False


@dataclass(frozen=True)
class StepRecord:
    p: int
    eta: int
    total_deficit: int
    attempts: int
    exchanges: tuple[ExchangeRecord, ...]
    failures: tuple[str, ...] = ()
    fallback: bool = False
    # exchanges made during attempts whose repair later failed
    discarded: tuple[ExchangeRecord, ...] = ()


@dataclass(frozen=True)
class Stop:
    """Why extraction ended.  ``witness`` is a min-max set for ``no-rainbow-matching``."""

    reason: str
    detail: str = ""
    witness: frozenset[int] | None = None
    flat: Flat | None = None
    discarded: tuple[ExchangeRecord, ...] = ()


@dataclass(frozen=True, eq=False)
class ExtractionState:
    matroid: BinaryMatroid
    bases: BaseSequence
    quotient: QuotientMatroid
    flats: tuple[Flat, ...]
    graph: ColouredGraph
    history: tuple[StepRecord, ...] = ()

    @property
    def removed(self) -> tuple[Matching, ...]:
        return self.graph.removed

    @property
    def p(self) -> int:
        return self.graph.p

    @property
    def eta(self) -> int:
        return self.graph.eta


@dataclass(frozen=True)
class Certificate:
    """``rows[j][i]`` is the element (0-based) of colour ``i`` in the ``j``-th rainbow basis."""

    n: int
    k: int
    rows: tuple[tuple[int, ...], ...]
    stop: Stop | None = None
    verified: bool | None = None
    history: tuple[StepRecord, ...] = field(default=(), compare=False, repr=False)

    @property
    def t(self) -> int:
        return len(self.rows)

    @property
    def b0_observed(self) -> int:
        return self.n - self.t

    @property
    def exchanges(self) -> list[ExchangeRecord]:
        out = [x for step in self.history for x in step.discarded + step.exchanges]
        return out + list(self.stop.discarded if self.stop else ())


def initial_state(M: BinaryMatroid, B: BaseSequence, config: ExtractionConfig = ExtractionConfig()) -> ExtractionState:
    if len(B) != M.n:
        raise InputError(f"expected {M.n} bases, got {len(B)}")
    for i, b in enumerate(B.bases):
        if not M.is_basis(b):
            raise InputError(f"B_{i + 1} is not a basis")
    Q = build_quotient(M)
    flats = tuple(enumerate_flats(Q, cap=config.flat_cap))
    return ExtractionState(M, B, Q, flats, build_graph(B, M.m))


def _orders(m: int, seed: int, p: int, retries: int):
    yield list(range(m))
    rng = np.random.default_rng([seed, p])
    for _ in range(retries):
        yield [int(x) for x in rng.permutation(m)]


def _check_after_removal(G: ColouredGraph, Q: QuotientMatroid, flats: Sequence[Flat]) -> None:
    G.total_deficit()
    if any(d < 0 for d in G.deficits):
        raise ConsistencyError(f"negative deficit after removing matching {G.p}")
    bad = check_deficit_inequalities(G, Q, 0, flats)
    if bad:
        raise ConsistencyError(f"deficit inequality fails after removal for flat {bad[0].key}")


def repair(G: ColouredGraph, W: Matching, Q: QuotientMatroid, flats: Sequence[Flat], records: list | None = None) -> Matching:
    """Zero-deficit repair followed by saturation of the closed tight family."""
    closed = intersection_closure(Q, tight_flats(G, flats))
    fam_factory = lambda W_: build_flat_family(Q, G, W_, flats=flats, closed=closed)
    W = repair_zero_deficit(G, W, Q, fam_factory=fam_factory, records=records)
    return saturate_family(G, W, Q, flats, closed=closed, records=records)


def extract_step(st: ExtractionState, config: ExtractionConfig = ExtractionConfig()) -> ExtractionState | Stop:
    """Remove one more rainbow basis, or report why that is not possible."""
    G, Q, M = st.graph, st.quotient, st.matroid
    if G.eta == 0:
        return Stop(EXHAUSTED, "every colour has used all of its base")
    failures: list[str] = []
    candidates: list[Matching] = []
    discarded: list[ExchangeRecord] = []
    last_flat = None
    tries = config.retries if config.repair else 0
    for attempt, order in enumerate(_orders(M.m, config.seed, G.p, tries), start=1):
        found = find_rainbow_basis(G, M, order)
        if found.matching is None:
            return Stop(
                NO_RAINBOW,
                f"largest common independent set has size {len(found.common)} < {G.n}",
                witness=found.witness,
            )
        records: list[ExchangeRecord] = []
        W = found.matching
        candidates.append(W)
        if config.repair:
            try:
                W = repair(G, W, Q, st.flats, records)
            except RepairFailed as exc:
                failures.append(f"attempt {attempt}: {exc}")
                discarded.extend(records)
                last_flat = exc.flat
                log.info("repair failed at p=%d: %s", G.p, exc)
                continue
        G_next = remove_matching(G, W)
        if config.repair:
            _check_after_removal(G_next, Q, st.flats)
        else:
            G_next.total_deficit()
        rec = StepRecord(
            G.p, G.eta, G.total_deficit(), attempt, tuple(records), tuple(failures), discarded=tuple(discarded)
        )
        return replace(st, graph=G_next, history=st.history + (rec,))
    if config.fallback:
        for attempt, W in enumerate(candidates, start=1):
            G_next = remove_matching(G, W)
            try:
                _check_after_removal(G_next, Q, st.flats)
            except ConsistencyError:
                continue
            rec = StepRecord(
                G.p, G.eta, G.total_deficit(), attempt, (), tuple(failures), True, tuple(discarded)
            )
            return replace(st, graph=G_next, history=st.history + (rec,))
    return Stop(REPAIR_FAILED, failures[-1] if failures else "", flat=last_flat, discarded=tuple(discarded))


def extract_all(
    M: BinaryMatroid, B: BaseSequence | Sequence[Sequence[int]], config: ExtractionConfig = ExtractionConfig()
) -> Certificate:
    """Run :func:`extract_step` until it stops and return a verified certificate."""
    from .oracle import verify_certificate

    if not isinstance(B, BaseSequence):
        B = BaseSequence.validated(M, B)
    st = initial_state(M, B, config)
    while True:
        nxt = extract_step(st, config)
        if isinstance(nxt, Stop):
            stop = nxt
            break
        st = nxt
    rows = tuple(W.assignment() for W in st.removed)
    cert = Certificate(M.n, M.k, rows, stop, None, st.history)
    ok = verify_certificate(M, B, cert)
    if not ok:
        raise ConsistencyError("extracted certificate failed independent verification")
    return replace(cert, verified=True)
