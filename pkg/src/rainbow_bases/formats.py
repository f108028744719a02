"""Text formats for instances and certificates (1-based element indices on disk)."""

from __future__ import annotations

from .errors import InputError
from .gf2 import Gf2Matrix
from .matroid import BaseSequence, BinaryMatroid


def _lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def _ints(line: str, what: str) -> list[int]:
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise InputError(f"non-integer entry in {what}: {line!r}") from None


def parse_instance(text: str) -> tuple[BinaryMatroid, BaseSequence]:
    lines = _lines(text)
    if not lines:
        raise InputError("empty instance")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "MATROID":
        raise InputError("first line must be 'MATROID n k'")
    n, k = _ints(" ".join(head[1:]), "header")
    if n < 1 or k < 0:
        raise InputError("need n >= 1 and k >= 0")
    if len(lines) != 2 * n + 2:
        raise InputError(f"expected {2 * n + 2} non-empty lines, got {len(lines)}")
    rows = lines[1 : n + 1]
    for r in rows:
        if len(r) != n + k or set(r) - {"0", "1"}:
            raise InputError(f"matrix row must be {n + k} bits: {r!r}")
    if lines[n + 1] != "BASES":
        raise InputError("expected 'BASES' after the matrix")
    M = BinaryMatroid(Gf2Matrix.from_strings(rows))
    bases = []
    for ln in lines[n + 2 :]:
        idx = _ints(ln, "bases")
        if any(not 1 <= x <= n + k for x in idx):
            raise InputError(f"element index out of range 1..{n + k}: {ln!r}")
        if len(set(idx)) != len(idx):
            raise InputError(f"repeated element in a base: {ln!r}")
        bases.append([x - 1 for x in idx])
    return M, BaseSequence.validated(M, bases)


def format_instance(M: BinaryMatroid, B: BaseSequence) -> str:
    out = [f"MATROID {M.n} {M.k}", *M.rep.to_strings(), "BASES"]
    out += [" ".join(str(e + 1) for e in sorted(b)) for b in B.bases]
    return "\n".join(out) + "\n"


def format_certificate(cert) -> str:
    out = [f"RAINBOW {cert.t} {cert.n} {cert.k}"]
    out += [" ".join(str(e + 1) for e in row) for row in cert.rows]
    out.append(f"B0 {cert.n - cert.t}")
    return "\n".join(out) + "\n"


def parse_certificate(text: str):
    """Read a certificate; the result has ``n``, ``k``, ``rows`` (0-based) and ``t``."""
    from .extract import Certificate

    lines = _lines(text)
    if not lines:
        raise InputError("empty certificate")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "RAINBOW":
        raise InputError("first line must be 'RAINBOW t n k'")
    t, n, k = _ints(" ".join(head[1:]), "header")
    if len(lines) != t + 2:
        raise InputError(f"expected {t + 2} non-empty lines, got {len(lines)}")
    rows = []
    for ln in lines[1 : t + 1]:
        idx = _ints(ln, "certificate row")
        if len(idx) != n:
            raise InputError(f"certificate row must have {n} entries: {ln!r}")
        rows.append(tuple(x - 1 for x in idx))
    tail = lines[t + 1].split()
    if len(tail) != 2 or tail[0] != "B0" or _ints(tail[1], "B0") != [n - t]:
        raise InputError(f"last line must be 'B0 {n - t}'")
    return Certificate(n, k, tuple(rows))
