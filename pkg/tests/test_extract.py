import pytest
from hypothesis import given, strategies as st

from rainbow_bases import InstanceSpec, extract_all, gen_instance
from rainbow_bases.errors import InputError
from rainbow_bases.extract import (
    EXHAUSTED,
    ExtractionConfig,
    Stop,
    extract_step,
    initial_state,
)
from rainbow_bases.graph import Matching, remove_matching
from rainbow_bases.intersect import check_deficit_inequalities
from rainbow_bases.matroid import BinaryMatroid
from rainbow_bases.oracle import brute_force_t, verify_certificate


def test_k0_extracts_everything():
    for seed in range(5):
        M, B = gen_instance(InstanceSpec(4, 0, seed))
        cert = extract_all(M, B)
        assert cert.t == 4 and cert.b0_observed == 0 and cert.stop.reason == EXHAUSTED


def test_running_example(running_example):
    M, B = running_example
    cert = extract_all(M, B)
    assert cert.t == 2 == brute_force_t(M, B)
    assert cert.verified


def test_step_on_empty_graph(running_example):
    M, B = running_example
    st = initial_state(M, B)
    for row in extract_all(M, B).rows:
        st = type(st)(st.matroid, st.bases, st.quotient, st.flats, remove_matching(st.graph, Matching.from_assignment(row)))
    out = extract_step(st)
    assert isinstance(out, Stop) and out.reason == EXHAUSTED


def test_invalid_bases_rejected():
    M = BinaryMatroid.from_strings(["101", "011"])
    with pytest.raises(InputError):
        extract_all(M, [[0, 1]])
    with pytest.raises(InputError):
        extract_all(M, [[0, 1], [0, 0]])


@given(st.integers(1, 8), st.integers(0, 3), st.integers(0, 10**6))
def test_every_step_keeps_deficit_invariants(n, k, seed):
    M, B = gen_instance(InstanceSpec(n, k, seed))
    st = initial_state(M, B)
    while True:
        assert st.graph.total_deficit() == k * st.eta
        assert all(d >= 0 for d in st.graph.deficits)
        assert check_deficit_inequalities(st.graph, st.quotient, 0, st.flats) == []
        nxt = extract_step(st)
        if isinstance(nxt, Stop):
            break
        st = nxt


@given(st.integers(1, 5), st.integers(0, 2), st.integers(0, 10**6))
def test_never_beats_brute_force(n, k, seed):
    M, B = gen_instance(InstanceSpec(n, k, seed))
    cert = extract_all(M, B)
    assert verify_certificate(M, B, cert)
    assert cert.t <= brute_force_t(M, B)


def test_fallback_is_checked_and_never_worse():
    gained = 0
    for seed in range(30):
        M, B = gen_instance(InstanceSpec(5, 3, seed))
        strict = extract_all(M, B)
        loose = extract_all(M, B, ExtractionConfig(fallback=True))
        assert loose.verified and loose.t >= strict.t
        gained += loose.t - strict.t
    assert gained > 0


def test_determinism():
    M, B = gen_instance(InstanceSpec(6, 3, 11))
    a = extract_all(M, B, ExtractionConfig(seed=4))
    b = extract_all(M, B, ExtractionConfig(seed=4))
    assert a.rows == b.rows and a.stop == b.stop
