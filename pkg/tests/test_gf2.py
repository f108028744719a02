import numpy as np
from hypothesis import given, strategies as st

from rainbow_bases import gf2
from rainbow_bases.gf2 import Gf2Matrix, TrackedBasis
from rainbow_bases.errors import InputError
import pytest

from conftest import brute_rank


def matrices(max_rows=6, max_cols=7):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0, max_cols).flatmap(
            lambda c: st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r).map(
                lambda bits: Gf2Matrix(r, c, bits)
            )
        )
    )


def test_identity_rank():
    assert Gf2Matrix.identity(3).rank() == 3


def test_zero_rank():
    assert Gf2Matrix.zeros(3, 4).rank() == 0


def test_dependent_rows_rank():
    # the third row is the sum of the first two
    assert Gf2Matrix.from_strings(["110", "011", "101"]).rank() == 2


def test_string_roundtrip():
    rows = ["1010", "0111"]
    X = Gf2Matrix.from_strings(rows)
    assert X.to_strings() == rows
    assert X[0, 0] == 1 and X[0, 1] == 0 and X[1, 3] == 1


def test_rejects_bad_bits():
    with pytest.raises(InputError):
        Gf2Matrix.from_strings(["102"])
    with pytest.raises(InputError):
        Gf2Matrix.from_strings(["10", "1"])


@given(matrices())
def test_rank_matches_span_size(X):
    assert X.rank() == brute_rank(X.bits)
    assert X.rank() == brute_rank(X.columns())
    assert 0 <= X.rank() <= min(X.rows, X.cols)


@given(matrices())
def test_rref_idempotent(X):
    R = X.rref()
    assert R.rref() == R
    assert R.rank() == X.rank()


@given(matrices())
def test_array_roundtrip(X):
    A = np.array([[X[i, j] for j in range(X.cols)] for i in range(X.rows)], dtype=np.uint8).reshape(X.rows, X.cols)
    if X.rows:
        assert Gf2Matrix.from_array(A) == X


@given(st.lists(st.integers(1, 255), max_size=8), st.integers(0, 255))
def test_tracked_basis_expresses_members_of_span(vs, target):
    tb = TrackedBasis()
    for i, v in enumerate(vs):
        tb.add(v, i)
    combo = tb.express(target)
    in_span = brute_rank(vs + [target]) == brute_rank(vs)
    assert (combo is not None) == in_span
    if combo is not None:
        acc = 0
        for i in gf2.bits_of(combo):
            acc ^= vs[i]
        assert acc == target
