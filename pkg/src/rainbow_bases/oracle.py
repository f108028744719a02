"""Instance generation, exact brute force and certificate checking for tiny cases.

Nothing here touches the extraction machinery: ranks are recomputed from the
representation matrix with a separate elimination over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, ResourceLimitError
from .gf2 import Gf2Matrix
from .matroid import BaseSequence, BinaryMatroid

BRUTE_N_CAP = 5
BRUTE_K_CAP = 2


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    k: int
    seed: int = 0
    mode: str = "uniform"

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise InputError("need n >= 1 and k >= 0")
        if self.mode not in ("uniform", "planted"):
            raise InputError(f"unknown generation mode {self.mode!r}")


def np_rank(A: np.ndarray) -> int:
    """Rank over GF(2) of a 0/1 matrix by row reduction."""
    A = (np.array(A, dtype=np.uint8) & 1).copy()
    if A.size == 0:
        return 0
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        hits = np.nonzero(A[r:, c])[0]
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        mask = A[:, c].astype(bool)
        mask[r] = False
        A[mask] ^= A[r]
        r += 1
        if r == rows:
            break
    return r


def _matrix(M: BinaryMatroid) -> np.ndarray:
    return np.array([[M.rep[i, j] for j in range(M.m)] for i in range(M.n)], dtype=np.uint8)


def _random_basis(A: np.ndarray, rng: np.random.Generator) -> frozenset[int]:
    n, m = A.shape
    chosen: list[int] = []
    for e in rng.permutation(m):
        trial = chosen + [int(e)]
        if np_rank(A[:, trial]) == len(trial):
            chosen = trial
            if len(chosen) == n:
                break
    return frozenset(chosen)


def gen_instance(spec: InstanceSpec) -> tuple[BinaryMatroid, BaseSequence]:
    """Random instance, identical for identical ``spec``.

    ``uniform`` draws nonzero columns until the matrix has rank ``n``;
    ``planted`` draws ``n`` independent columns and makes the ``k`` extra
    elements parallel copies of some of them.
    """
    rng = np.random.default_rng([spec.n, spec.k, spec.seed, spec.mode == "planted"])
    n, m = spec.n, spec.n + spec.k
    while True:
        if spec.mode == "uniform":
            A = rng.integers(0, 2, size=(n, m), dtype=np.uint8)
            zero = ~A.any(axis=0)
            while zero.any():
                A[:, zero] = rng.integers(0, 2, size=(n, int(zero.sum())), dtype=np.uint8)
                zero = ~A.any(axis=0)
        else:
            core = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
            if np_rank(core) < n:
                continue
            extra = core[:, rng.integers(0, n, size=spec.k)]
            A = np.concatenate([core, extra], axis=1)[:, rng.permutation(m)]
        if np_rank(A) == n:
            break
    M = BinaryMatroid(Gf2Matrix.from_array(A))
    bases = [_random_basis(A, rng) for _ in range(n)]
    return M, BaseSequence.validated(M, bases)


def rainbow_bases(M: BinaryMatroid, B: BaseSequence) -> list[tuple[int, ...]]:
    """Every rainbow basis as a colour-indexed tuple, found by depth-first search
    that abandons any partial choice that is already dependent."""
    A = _matrix(M)
    n = M.n
    choices = [sorted(b) for b in B.bases]
    out: list[tuple[int, ...]] = []

    def grow(prefix: list[int]):
        i = len(prefix)
        if i == n:
            out.append(tuple(prefix))
            return
        for e in choices[i]:
            if e in prefix:
                continue
            trial = prefix + [e]
            if np_rank(A[:, trial]) == len(trial):
                grow(trial)

    grow([])
    return out


def brute_force_t(M: BinaryMatroid, B: BaseSequence) -> int:
    """Largest number of rainbow bases whose colour-``i`` representatives are pairwise distinct."""
    if M.n > BRUTE_N_CAP or M.k > BRUTE_K_CAP:
        raise ResourceLimitError(
            f"brute force is capped at n <= {BRUTE_N_CAP}, k <= {BRUTE_K_CAP}"
        )
    n, m = M.n, M.m
    rb = rainbow_bases(M, B)
    # colour-i representative e occupies bit i*m + e
    groups: dict[int, list[int]] = {}
    for r in rb:
        groups.setdefault(r[0], []).append(sum(1 << (i * m + e) for i, e in enumerate(r)))
    keys = sorted(groups)
    cap = min(n, len(keys))
    best = 0

    def search(g: int, used: int, count: int):
        nonlocal best
        if count > best:
            best = count
        if best == cap or g == len(keys) or count + len(keys) - g <= best:
            return
        for mask in groups[keys[g]]:
            if not mask & used:
                search(g + 1, used | mask, count + 1)
                if best == cap:
                    return
        search(g + 1, used, count)

    search(0, 0, 0)
    return best


def verify_certificate(M: BinaryMatroid, B: BaseSequence | Sequence[Sequence[int]], cert) -> bool:
    """True iff every row is a rainbow basis and rows never share a colour's representative.

    ``cert`` needs ``rows`` (colour-indexed, 0-based) and, when present, ``n``/``k`` matching ``M``.
    """
    bases = B.bases if isinstance(B, BaseSequence) else tuple(frozenset(b) for b in B)
    rows = getattr(cert, "rows", None)
    if rows is None:
        raise InputError("certificate has no rows")
    if getattr(cert, "n", M.n) != M.n or getattr(cert, "k", M.k) != M.k:
        return False
    A = _matrix(M)
    for row in rows:
        if len(row) != M.n:
            raise InputError("certificate row has the wrong length")
        for i, e in enumerate(row):
            if not 0 <= e < M.m:
                raise InputError(f"element index {e + 1} out of range")
            if e not in bases[i]:
                return False
        if len(set(row)) != M.n or np_rank(A[:, list(row)]) != M.n:
            return False
    for i in range(M.n):
        reps = [row[i] for row in rows]
        if len(set(reps)) != len(reps):
            return False
    return True
