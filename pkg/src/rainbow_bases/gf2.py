"""Dense GF(2) linear algebra on Python integers used as bit rows.

A row (or column vector) is an ``int`` whose bit ``j`` holds entry ``j``.
Python integers are arbitrary precision, so there is no word-size limit and
XOR of two rows is a single machine-level operation for the sizes used here.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import InputError


class Gf2Matrix:
    """An immutable ``rows x cols`` matrix over GF(2).

    Rows are stored as ints; bit ``j`` of ``self.bits[i]`` is entry ``(i, j)``.
    """

    __slots__ = ("rows", "cols", "bits")

    def __init__(self, rows: int, cols: int, bits: Sequence[int]):
        if rows < 0 or cols < 0:
            raise InputError("matrix dimensions must be non-negative")
        if len(bits) != rows:
            raise InputError(f"expected {rows} rows, got {len(bits)}")
        mask = (1 << cols) - 1
        for r in bits:
            if r < 0 or r & ~mask:
                raise InputError("row has bits outside the column range")
        self.rows = rows
        self.cols = cols
        self.bits = tuple(bits)

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "Gf2Matrix":
        """Build from bit strings, character ``j`` being column ``j``."""
        if not lines:
            return cls(0, 0, ())
        cols = len(lines[0])
        bits = []
        for line in lines:
            if len(line) != cols:
                raise InputError("ragged rows")
            value = 0
            for j, ch in enumerate(line):
                if ch == "1":
                    value |= 1 << j
                elif ch != "0":
                    raise InputError(f"non-bit character {ch!r}")
            bits.append(value)
        return cls(len(lines), cols, bits)

    @classmethod
    def from_array(cls, array) -> "Gf2Matrix":
        """Build from a 2-d array-like of 0/1 entries (numpy arrays work)."""
        rows = [list(r) for r in array]
        cols = len(rows[0]) if rows else 0
        bits = []
        for r in rows:
            value = 0
            for j, x in enumerate(r):
                if int(x) % 2:
                    value |= 1 << j
            bits.append(value)
        return cls(len(rows), cols, bits)

    @classmethod
    def identity(cls, size: int) -> "Gf2Matrix":
        return cls(size, size, [1 << i for i in range(size)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, [0] * rows)

    def __getitem__(self, index):
        i, j = index
        return (self.bits[i] >> j) & 1

    def __eq__(self, other):
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.bits) == (other.rows, other.cols, other.bits)

    def __hash__(self):
        return hash((self.rows, self.cols, self.bits))

    def __repr__(self):
        return f"Gf2Matrix({self.rows}x{self.cols}, {self.to_strings()})"

    def to_strings(self) -> list[str]:
        return ["".join(str((r >> j) & 1) for j in range(self.cols)) for r in self.bits]

    def column(self, j: int) -> int:
        """Column ``j`` as an int whose bit ``i`` is entry ``(i, j)``."""
        v = 0
        for i, r in enumerate(self.bits):
            if (r >> j) & 1:
                v |= 1 << i
        return v

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.cols)]

    def rref(self) -> "Gf2Matrix":
        """Reduced row echelon form; zero rows are moved to the bottom."""
        rows = list(self.bits)
        pivot_row = 0
        for col in range(self.cols):
            bit = 1 << col
            found = next((i for i in range(pivot_row, len(rows)) if rows[i] & bit), None)
            if found is None:
                continue
            rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
            for i in range(len(rows)):
                if i != pivot_row and rows[i] & bit:
                    rows[i] ^= rows[pivot_row]
            pivot_row += 1
        return Gf2Matrix(self.rows, self.cols, rows)

    def rank(self) -> int:
        return vector_rank(self.bits)


def gf2_rank(matrix: Gf2Matrix) -> int:
    """Row rank of ``matrix`` over GF(2)."""
    return matrix.rank()


def reduce(basis: dict[int, int], v: int) -> int:
    """Reduce ``v`` against an echelon basis keyed by leading bit."""
    while v:
        b = basis.get(v.bit_length() - 1)
        if b is None:
            return v
        v ^= b
    return 0


def insert(basis: dict[int, int], v: int) -> bool:
    """Add ``v`` to the echelon basis; return False if it was dependent."""
    v = reduce(basis, v)
    if not v:
        return False
    basis[v.bit_length() - 1] = v
    return True


def vector_rank(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    return sum(1 for v in vectors if insert(basis, v))


def span_contains(vectors: Iterable[int], v: int) -> bool:
    basis: dict[int, int] = {}
    for w in vectors:
        insert(basis, w)
    return reduce(basis, v) == 0


class TrackedBasis:
    """Echelon basis that remembers which inputs produced each basis vector.

    ``combo`` masks are over caller-chosen labels, so ``express`` returns the
    set of labels whose vectors sum to the query.
    """

    def __init__(self):
        self._rows: dict[int, tuple[int, int]] = {}

    def add(self, v: int, label: int) -> bool:
        combo = 1 << label
        while v:
            lead = v.bit_length() - 1
            hit = self._rows.get(lead)
            if hit is None:
                self._rows[lead] = (v, combo)
                return True
            v ^= hit[0]
            combo ^= hit[1]
        return False

    def express(self, v: int) -> int | None:
        """Label mask whose vectors sum to ``v``, or None if ``v`` is outside the span."""
        combo = 0
        while v:
            hit = self._rows.get(v.bit_length() - 1)
            if hit is None:
                return None
            v ^= hit[0]
            combo ^= hit[1]
        return combo


def bits_of(mask: int) -> list[int]:
    """Indices of set bits in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
