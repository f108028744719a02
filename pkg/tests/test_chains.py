import itertools
import logging

import pytest
from hypothesis import given, strategies as st

from rainbow_bases import InstanceSpec, extract_all, gen_instance
from rainbow_bases.chains import (
    AltPath,
    PathChain,
    build_F0_target,
    build_flat_family,
    chain_violations,
    full_target,
    improve_matching,
    intersection_closure,
    parity_partition,
    parity_sums,
    repair_zero_deficit,
    select_F0,
    simplify_chain,
    target_lemma_violations,
    theoretical_constants,
    tight_flats,
)
from rainbow_bases.errors import InputError
from rainbow_bases.extract import initial_state
from rainbow_bases.graph import Matching, build_graph, remove_matching
from rainbow_bases.intersect import find_rainbow_basis
from rainbow_bases.matroid import build_quotient, enumerate_flats


def harvest(n_range=range(2, 7), k_range=range(1, 4), seeds=range(6)):
    """States (Q, flats, G, W) right after the zero-deficit repair of each extraction step."""
    out = []
    for n, k, seed in itertools.product(n_range, k_range, seeds):
        M, B = gen_instance(InstanceSpec(n, k, seed))
        cert = extract_all(M, B)
        st = initial_state(M, B)
        Q, flats = st.quotient, st.flats
        G = st.graph
        for row in cert.rows:
            W = find_rainbow_basis(G, M).matching
            closed = intersection_closure(Q, tight_flats(G, flats))
            factory = lambda W_, G=G, closed=closed: build_flat_family(Q, G, W_, flats, closed)
            W = repair_zero_deficit(G, W, Q, fam_factory=factory)
            out.append((Q, flats, G, W))
            G = remove_matching(G, Matching.from_assignment(row))
    return out


STATES = harvest()


def test_constants():
    assert theoretical_constants(1) == (16, 16)
    assert theoretical_constants(2) == (2 * 2**16, 4 * 2**16)
    assert theoretical_constants(5) is None


def test_parity_examples():
    assert parity_partition(["u"], [], "u") == ({"u"}, frozenset())
    X, Y = parity_partition([1, 2], [(1, 2)], 1)
    assert X == {1, 2} and parity_sums([1, 2], [(1, 2)], X) == {1: 1, 2: 2}
    X, Y = parity_partition([1, 2], [(1, 2)], 2)
    assert X == {2} and Y == {1}
    with pytest.raises(InputError):
        parity_partition([1, 2], [(1, 2), (2, 1)], 1)


@given(st.integers(1, 6), st.data())
def test_parity_random_dags(nv, data):
    pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
    arcs = data.draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    perm = data.draw(st.permutations(range(nv)))
    arcs = {(perm[a], perm[b]) for a, b in arcs}
    u = data.draw(st.integers(0, nv - 1))
    X, Y = parity_partition(range(nv), arcs, u)
    assert u in X and not X & Y and X | Y == set(range(nv))
    sums = parity_sums(range(nv), arcs, X)
    assert [v for v in range(nv) if sums[v] % 2] == [u]


def test_flat_family_invariants():
    assert STATES
    for Q, flats, G, W in STATES:
        fam = build_flat_family(Q, G, W, flats)
        closed = {F.members for F in fam.closed}
        assert Q.ground in closed
        assert all(A & B in closed for A in closed for B in closed)
        expected = [F.members for F in flats if G.deficit_of(F.members) > F.rank * (G.eta - 1)]
        assert [F.members for F in fam.tight] == expected
        for i, a in enumerate(fam.uncovered):
            F = fam.minimal[i]
            assert a in F.members
            assert min(G.rank for G in fam.closed if a in G.members) == F.rank
            assert fam.inner[i] | fam.outer[i] == F.members and not fam.inner[i] & fam.outer[i]
            assert fam.hyperplanes[i] == Q.closure(set(fam.uncovered) - {a})
            assert Q.is_cocircuit(fam.cocircuits[i])


def test_k1_family_contains_whole_ground_set():
    for Q, flats, G, W in STATES:
        if Q.k == 1:
            fam = build_flat_family(Q, G, W, flats)
            assert Q.ground in [F.members for F in fam.tight]
            if not Q.loops:
                assert [F.members for F in fam.closed] == [Q.ground]
            assert select_F0(fam) is None


def test_select_F0_and_targets():
    picked = 0
    for Q, flats, G, W in STATES:
        fam = build_flat_family(Q, G, W, flats)
        F0 = select_F0(fam)
        for F in fam.closed:
            if F0 is not None and F.rank < F0.rank:
                assert fam.omega(F) == F.rank
        assert fam.omega(Q.ground) == Q.k
        if F0 is None:
            assert all(fam.omega(F) == F.rank for F in fam.closed)
            continue
        picked += 1
        assert fam.omega(F0) < F0.rank
        T = build_F0_target(fam, F0)
        assert target_lemma_violations(fam, T) == []
        for i, a in enumerate(fam.uncovered):
            if a not in F0.members and i not in T.starred:
                assert T[i] == fam.cocircuits[i]
            else:
                assert T[i] == fam.outer[i]
    assert picked > 10


def test_improvement_steps():
    records = []
    done = 0
    for Q, flats, G, W in STATES:
        fam = build_flat_family(Q, G, W, flats)
        F0 = select_F0(fam)
        if F0 is None:
            continue
        try:
            W2 = improve_matching(G, W, fam, F0, records=records)
        except Exception as exc:
            assert type(exc).__name__ == "RepairFailed"
            continue
        done += 1
        fam2 = build_flat_family(Q, G, W2, flats, fam.closed)
        assert fam2.omega(F0) > fam.omega(F0)
        for F in fam.closed:
            if F.rank <= F0.rank and fam.omega(F) == F.rank:
                assert fam2.omega(F) == F.rank
        assert Q.is_basis(fam2.uncovered)
        assert all(G.deficit(y) > 0 for y in fam2.uncovered)
    assert done > 10
    assert all(r.rank_ok and r.certificates_ok for r in records)


def test_zero_deficit_hand_example(running_example):
    M, B = running_example
    Q = build_quotient(M)
    G = build_graph(B, M.m)
    assert G.deficits == (0, 1, 1)
    W = Matching.from_assignment([1, 2])
    records = []
    W2 = repair_zero_deficit(G, W, Q, records=records)
    assert W2.uncovered(3) == (1,) and W2.assignment() == (0, 2)
    assert [r.line() for r in records] == [
        "exchange kind=zero-deficit beta=1 origins=1 termini=2 rank=ok certs=ok"
    ]
    assert repair_zero_deficit(G, W2, Q) is W2


def test_zero_deficit_repair_postconditions():
    for Q, flats, G, W in STATES:
        assert all(G.deficit(y) > 0 for y in W.uncovered(G.m))
        assert Q.is_basis(W.uncovered(G.m))


def test_simplify_leaves_simple_chain_alone():
    P = AltPath((2, 0, 1), (0, 1))
    chain = PathChain((P,), (0,), frozenset({1}))
    assert simplify_chain(chain, [frozenset({2})]).paths == (P,)


def test_simplify_splices_crossing_paths():
    # two uncovered origins 2 and 3 whose paths share colour 0
    P1 = AltPath((2, 0, 1), (0, 1))
    P2 = AltPath((3, 0, 1), (0, 1))
    chain = PathChain((P1, P2), (0, 1), frozenset({1}))
    out = simplify_chain(chain, [frozenset({2, 1}), frozenset({3, 1})])
    assert out.paths == (AltPath((3, 0, 1), (0, 1)),) and out.beta == (1,)


def test_chain_validator_flags_stale_terminus(running_example):
    M, B = running_example
    Q = build_quotient(M)
    G = build_graph(B, M.m)
    W = Matching.from_assignment([1, 2])
    fam = build_flat_family(Q, G, W, enumerate_flats(Q))
    P = AltPath((0, 1), (0,))
    chain = PathChain((P,), (0,), frozenset({1}))
    assert chain_violations(chain, G, W, fam, full_target(fam), "simple") == []
    far = PathChain((P,), (0,), frozenset({2}))
    assert chain_violations(far, G, W, fam, full_target(fam), "chain") == ["first terminus outside the root"]


def test_trace_lines_are_logged(caplog):
    M, B = gen_instance(InstanceSpec(5, 3, 2))
    with caplog.at_level(logging.DEBUG, logger="rainbow_bases.chains"):
        cert = extract_all(M, B)
    lines = [r.getMessage() for r in caplog.records if r.getMessage().startswith("exchange ")]
    assert len(lines) == len(cert.exchanges) > 0
    assert all(" rank=ok " in ln and ln.split()[1].startswith("kind=") for ln in lines)
