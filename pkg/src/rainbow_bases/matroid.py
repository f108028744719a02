"""Binary matroids, their rank-k quotient ``N`` and the flats of ``N``.

Elements of ``M`` are labelled ``0 .. m-1`` (file formats use 1-based labels).
The quotient ``N`` lives on the same labels: label ``e`` carries the vector
``psi(e)`` in GF(2)^k, so parallel classes and loops of ``N`` are kept at the
label level and every flat is a set of labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import gf2
from .errors import InputError, ResourceLimitError
from .gf2 import Gf2Matrix, TrackedBasis

DEFAULT_FLAT_CAP = 6


def _as_set(X: Iterable[int]) -> frozenset[int]:
    return X if isinstance(X, frozenset) else frozenset(X)


class BinaryMatroid:
    """Vector matroid of the columns of an ``n x (n+k)`` GF(2) matrix of rank ``n``."""

    def __init__(self, rep: Gf2Matrix):
        if rep.rank() != rep.rows:
            raise InputError(f"representation has rank {rep.rank()}, expected {rep.rows}")
        self.rep = rep
        self.n = rep.rows
        self.m = rep.cols
        self.k = self.m - self.n
        self.columns: tuple[int, ...] = tuple(rep.columns())
        self.ground = frozenset(range(self.m))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BinaryMatroid":
        return cls(Gf2Matrix.from_strings(rows))

    @classmethod
    def from_columns(cls, n: int, columns: Sequence[int]) -> "BinaryMatroid":
        bits = [0] * n
        for j, c in enumerate(columns):
            for i in range(n):
                if (c >> i) & 1:
                    bits[i] |= 1 << j
        return cls(Gf2Matrix(n, len(columns), bits))

    def __repr__(self):
        return f"BinaryMatroid(n={self.n}, k={self.k}, rows={self.rep.to_strings()})"

    def _check(self, X: Iterable[int]) -> frozenset[int]:
        X = _as_set(X)
        for e in X:
            if not 0 <= e < self.m:
                raise InputError(f"element {e} out of range 0..{self.m - 1}")
        return X

    def rank(self, X: Iterable[int]) -> int:
        X = self._check(X)
        return gf2.vector_rank(self.columns[e] for e in X)

    def is_independent(self, X: Iterable[int]) -> bool:
        X = self._check(X)
        return self.rank(X) == len(X)

    def is_basis(self, X: Iterable[int]) -> bool:
        X = self._check(X)
        return len(X) == self.n and self.rank(X) == self.n

    def closure(self, X: Iterable[int]) -> frozenset[int]:
        X = self._check(X)
        basis: dict[int, int] = {}
        for e in X:
            gf2.insert(basis, self.columns[e])
        return frozenset(e for e in range(self.m) if gf2.reduce(basis, self.columns[e]) == 0)

    def fundamental_circuit(self, B: Iterable[int], e: int) -> frozenset[int]:
        """The unique circuit of ``M`` inside ``B + e``."""
        B = self._check(B)
        if not self.is_basis(B):
            raise InputError("fundamental_circuit needs a basis")
        if e in B:
            raise InputError(f"element {e} already lies in the basis")
        self._check([e])
        tb = TrackedBasis()
        for b in B:
            tb.add(self.columns[b], b)
        combo = tb.express(self.columns[e])
        return frozenset(gf2.bits_of(combo)) | {e}

    def greedy_basis(self, order: Sequence[int] | None = None) -> tuple[int, ...]:
        """First basis met by scanning columns in ``order`` (index order by default)."""
        basis: dict[int, int] = {}
        chosen = []
        for e in order if order is not None else range(self.m):
            if gf2.insert(basis, self.columns[e]):
                chosen.append(e)
        return tuple(sorted(chosen))


@dataclass(frozen=True)
class BaseSequence:
    """``n`` coloured bases; ``bases[i]`` carries colour ``i``."""

    bases: tuple[frozenset[int], ...]

    @classmethod
    def validated(cls, M: BinaryMatroid, bases: Iterable[Iterable[int]]) -> "BaseSequence":
        seq = cls(tuple(frozenset(b) for b in bases))
        if len(seq.bases) != M.n:
            raise InputError(f"expected {M.n} bases, got {len(seq.bases)}")
        for i, b in enumerate(seq.bases):
            if not M.is_basis(b):
                raise InputError(f"B_{i + 1} = {sorted(x + 1 for x in b)} is not a basis")
        return seq

    def __len__(self):
        return len(self.bases)

    def __getitem__(self, i):
        return self.bases[i]


def gf2_rank(X: Gf2Matrix) -> int:
    return X.rank()


def subset_rank(M: BinaryMatroid, X: Iterable[int]) -> int:
    return M.rank(X)


def fundamental_circuit(M: BinaryMatroid, B: Iterable[int], e: int) -> frozenset[int]:
    return M.fundamental_circuit(B, e)


def closure(matroid, X: Iterable[int]) -> frozenset[int]:
    """Closure in ``M`` or in a quotient ``N``."""
    return matroid.closure(X)


@dataclass(frozen=True)
class Flat:
    members: frozenset[int]
    rank: int

    @cached_property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __contains__(self, e):
        return e in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.key)

    def sort_key(self):
        return (self.rank, self.key)


@dataclass(frozen=True, eq=False)
class QuotientMatroid:
    """The rank-``k`` vector matroid ``N`` on the labels of ``M``.

    ``vectors[e]`` is ``psi(e)`` as a k-bit int; bit ``i`` is set exactly when
    ``e`` lies in the fundamental circuit ``circuits[i]`` of the ``i``-th
    non-basis element with respect to ``base_star``.
    """

    n: int
    k: int
    vectors: tuple[int, ...]
    base_star: tuple[int, ...]
    circuits: tuple[frozenset[int], ...]
    classes: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.vectors)

    @cached_property
    def ground(self) -> frozenset[int]:
        return frozenset(range(self.m))

    @cached_property
    def loops(self) -> frozenset[int]:
        return frozenset(e for e, v in enumerate(self.vectors) if v == 0)

    def rank(self, X: Iterable[int]) -> int:
        return gf2.vector_rank(self.vectors[e] for e in X)

    def closure(self, X: Iterable[int]) -> frozenset[int]:
        basis: dict[int, int] = {}
        for e in X:
            gf2.insert(basis, self.vectors[e])
        return frozenset(e for e, v in enumerate(self.vectors) if gf2.reduce(basis, v) == 0)

    def is_flat(self, X: Iterable[int]) -> bool:
        X = _as_set(X)
        return self.closure(X) == X

    def is_basis(self, X: Iterable[int]) -> bool:
        X = _as_set(X)
        return len(X) == self.k and self.rank(X) == self.k

    def is_cocircuit(self, X: Iterable[int]) -> bool:
        """``X`` is a cocircuit iff its complement is a hyperplane."""
        X = _as_set(X)
        if not X or self.k == 0:
            return False
        rest = self.ground - X
        return self.rank(rest) == self.k - 1 and self.closure(rest) == rest

    def preimage(self, vectors: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for v in vectors:
            out.update(self.classes.get(v, ()))
        return frozenset(out)


def build_quotient(M: BinaryMatroid, Bstar: Iterable[int] | None = None) -> QuotientMatroid:
    """Construct ``N`` from the fundamental circuits of the non-basis elements.

    ``Bstar`` defaults to the lexicographically first basis of ``M``.
    """
    Bstar = tuple(sorted(Bstar)) if Bstar is not None else M.greedy_basis()
    if not M.is_basis(Bstar):
        raise InputError("B* is not a basis")
    outside = [e for e in range(M.m) if e not in set(Bstar)]
    circuits = tuple(M.fundamental_circuit(Bstar, e) for e in outside)
    vectors = []
    for e in range(M.m):
        v = 0
        for i, C in enumerate(circuits):
            if e in C:
                v |= 1 << i
        vectors.append(v)
    classes: dict[int, list[int]] = {}
    for e, v in enumerate(vectors):
        classes.setdefault(v, []).append(e)
    return QuotientMatroid(
        n=M.n,
        k=M.k,
        vectors=tuple(vectors),
        base_star=Bstar,
        circuits=circuits,
        classes={v: tuple(es) for v, es in classes.items()},
    )


def is_circuit(M: BinaryMatroid, C: Iterable[int]) -> bool:
    C = _as_set(C)
    if not C or M.is_independent(C):
        return False
    return all(M.is_independent(C - {e}) for e in C)


def circuit_cocircuit_dual(M: BinaryMatroid, Q: QuotientMatroid, C: Iterable[int]) -> bool:
    """Check that ``C`` is a circuit of ``M`` exactly when ``psi(C)`` is a cocircuit of ``N``
    whose preimage is ``C``."""
    C = _as_set(C)
    image = {Q.vectors[e] for e in C}
    pre = Q.preimage(image)
    quotient_side = pre == C and Q.is_cocircuit(pre)
    return is_circuit(M, C) == quotient_side


def basis_complement_dual(M: BinaryMatroid, Q: QuotientMatroid, B: Iterable[int]) -> bool:
    """Check that ``B`` is a basis of ``M`` exactly when ``E - B`` is a basis of ``N``."""
    B = _as_set(B)
    return M.is_basis(B) == Q.is_basis(Q.ground - B)


def rank_via_quotient(Q: QuotientMatroid, X: Iterable[int]) -> int:
    """``r(X) = n - |E - X| + r_N(E - X)``."""
    rest = Q.ground - _as_set(X)
    return Q.n - len(rest) + Q.rank(rest)


def enumerate_flats(Q: QuotientMatroid, cap: int = DEFAULT_FLAT_CAP) -> list[Flat]:
    """All flats of ``N``, sorted by ``(rank, members)``.

    Flats of a vector matroid are the preimages of subspaces spanned by its
    points, so the subspace lattice is explored by adding one point vector at
    a time starting from the zero subspace.
    """
    if Q.k > cap:
        raise ResourceLimitError(f"k = {Q.k} exceeds the flat-enumeration cap {cap}")
    points = sorted({v for v in Q.vectors if v})

    def span_key(basis: dict[int, int]) -> frozenset[int]:
        return frozenset(v for v in points if gf2.reduce(basis, v) == 0)

    start: dict[int, int] = {}
    seen = {span_key(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for basis in frontier:
            for v in points:
                if gf2.reduce(basis, v) == 0:
                    continue
                grown = dict(basis)
                gf2.insert(grown, v)
                key = span_key(grown)
                if key not in seen:
                    seen[key] = grown
                    nxt.append(grown)
        frontier = nxt
    flats = []
    for pts, basis in seen.items():
        members = Q.loops | Q.preimage(pts)
        flats.append(Flat(frozenset(members), len(basis)))
    flats.sort(key=Flat.sort_key)
    return flats
