import itertools

import pytest
from hypothesis import given, strategies as st

from rainbow_bases import InstanceSpec, gen_instance
from rainbow_bases.errors import InputError
from rainbow_bases.graph import (
    AltPath,
    ColouredGraph,
    Matching,
    apply_paths,
    build_graph,
    deficiency,
    find_Y_path,
    konig_ore_matching,
    reachable_U,
    remove_matching,
    splice,
    total_deficit,
    validate_path,
)
from rainbow_bases.intersect import find_rainbow_basis


def bipartite(max_side=6):
    return st.tuples(st.integers(0, max_side), st.integers(0, max_side)).flatmap(
        lambda s: st.lists(
            st.sets(st.integers(0, s[1] - 1)) if s[1] else st.just(set()), min_size=s[0], max_size=s[0]
        )
    )


def brute_matching_size(adj) -> int:
    left = list(range(len(adj)))
    for size in range(len(left), -1, -1):
        for xs in itertools.combinations(left, size):
            for ys in itertools.product(*(sorted(adj[x]) for x in xs)):
                if len(set(ys)) == size:
                    return size
    return 0


def brute_max_deficiency(adj) -> int:
    return max(
        deficiency(dict(enumerate(adj)), xs)
        for r in range(len(adj) + 1)
        for xs in itertools.combinations(range(len(adj)), r)
    )


def test_running_example_graph(running_example):
    M, B = running_example
    G = build_graph(B, M.m)
    assert G.edge_list() == ["u1 v1", "u1 v2", "u2 v1", "u2 v3"]
    assert G.degrees[0] == 2
    assert total_deficit(G) == 2


def test_remove_matching_running_example(running_example):
    M, B = running_example
    G = build_graph(B, M.m)
    G1 = remove_matching(G, Matching.from_assignment([1, 0]))
    # v2 loses its only edge, v1 and v3 keep one each
    assert G1.deficits == (0, 1, 0)
    assert G1.p == 1 and G1.eta == 1 and total_deficit(G1) == 1
    G2 = remove_matching(G1, Matching.from_assignment([0, 2]))
    assert total_deficit(G2) == 0
    with pytest.raises(InputError):
        remove_matching(G1, Matching.from_assignment([1, 0]))
    with pytest.raises(InputError):
        remove_matching(G, Matching(frozenset({(0, 0)})))


def test_identical_bases_and_k0():
    G = ColouredGraph(3, 4, (frozenset({0, 1, 2}),) * 3)
    assert set(G.degrees) == {0, 3}
    G0 = ColouredGraph(2, 2, (frozenset({0, 1}),) * 2)
    assert G0.degrees == (2, 2)
    G1 = remove_matching(G0, Matching.from_assignment([0, 1]))
    assert G1.deficits == (0, 0)


def test_total_deficit_formula():
    for seed in range(10):
        M, B = gen_instance(InstanceSpec(5, 2, seed))
        G = build_graph(B, M.m)
        W = find_rainbow_basis(G, M).matching
        assert total_deficit(remove_matching(G, W)) == 8


def test_matching_rejects_shared_endpoint():
    with pytest.raises(InputError):
        Matching(frozenset({(0, 1), (1, 1)}))


def test_konig_examples():
    match, witness = konig_ore_matching({0: [0, 1], 1: [0, 1]})
    assert len(match) == 2 and deficiency({0: [0, 1], 1: [0, 1]}, witness) == 0
    adj = {0: [0], 1: [0]}
    match, witness = konig_ore_matching(adj)
    assert len(match) == 1 and witness == {0, 1} and deficiency(adj, witness) == 1


@given(bipartite())
def test_konig_ore_formula(adj):
    match, witness = konig_ore_matching(dict(enumerate(adj)))
    mu = brute_matching_size(adj)
    assert len(match) == mu
    assert mu == len(adj) - brute_max_deficiency(adj)
    assert deficiency(dict(enumerate(adj)), witness) == len(adj) - mu
    assert len(set(match.values())) == len(match)
    assert all(y in adj[x] for x, y in match.items())


def test_reachable_examples():
    G = ColouredGraph(1, 2, (frozenset({0}),))
    W = Matching.from_assignment([0])
    assert reachable_U(G, W, []) == frozenset()
    assert reachable_U(G, W, [0]) == {0}


def test_Y_path_running_example(running_example):
    M, B = running_example
    G = build_graph(B, M.m)
    W = Matching.from_assignment([0, 2])
    P = find_Y_path(G, W, {0})
    assert P == AltPath((1, 0), (0,))
    W2 = apply_paths(G, W, [P])
    assert W2.assignment() == (1, 2) and W2.uncovered(3) == (0,)
    assert apply_paths(G, W, []) == W
    assert find_Y_path(G, W, {1}) is None


def test_validate_path_rejects():
    G = ColouredGraph(2, 3, (frozenset({0, 1}), frozenset({0, 2})))
    W = Matching.from_assignment([0, 2])
    with pytest.raises(InputError):
        validate_path(G, W, AltPath((0, 1), (0,)))
    with pytest.raises(InputError):
        validate_path(G, W, AltPath((1, 2), (0,)))


@given(st.integers(1, 5), st.integers(1, 3), st.integers(0, 10**6), st.data())
def test_Y_paths_are_valid_and_shortest(n, k, seed, data):
    M, B = gen_instance(InstanceSpec(n, k, seed))
    G = build_graph(B, M.m)
    W = find_rainbow_basis(G, M).matching
    Y = data.draw(st.sets(st.integers(0, M.m - 1)))
    P = find_Y_path(G, W, Y)
    reach = reachable_U(G, W, Y & W.saturated)
    # some uncovered vertex sees a reachable colour through a non-matching edge iff a path exists
    exists = any(c in reach for v in W.uncovered(M.m) for c in G.element_adjacency[v])
    assert (P is not None) == exists
    if P is not None:
        validate_path(G, W, P)
        assert P.terminus in Y and P.origin in W.uncovered(M.m)
        W2 = apply_paths(G, W, [P])
        assert len(W2) == n
        assert set(W2.uncovered(M.m)) == (set(W.uncovered(M.m)) - {P.origin}) | {P.terminus}


def test_splice():
    # u0 - v0 matched, u1 - v1 matched; v2, v3 uncovered
    G = ColouredGraph(2, 4, (frozenset({0, 2, 3}), frozenset({1, 0})))
    W = Matching.from_assignment([0, 1])
    P1 = AltPath((2, 0, 1), (0, 1))
    P2 = AltPath((3, 0, 1), (0, 1))
    validate_path(G, W, P1)
    validate_path(G, W, P2)
    S = splice(P1, P2)
    assert S.origin == 3 and S.terminus == 1
    validate_path(G, W, S)
    with pytest.raises(InputError):
        splice(AltPath((2, 0), (0,)), AltPath((3, 1), (1,)))
    with pytest.raises(InputError):
        apply_paths(G, W, [P1, P2])
