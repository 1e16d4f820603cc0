"""Finite loops given by Cayley tables.

A loop is a Latin square with a two-sided identity.  The predicates here
(inverse property, Moufang, flexible, associative) are decided by brute
force over all pairs or triples; loops of order up to 64 are supported.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

MAX_LOOP_ORDER = 64

# Oriented Fano-plane lines: e_i e_j = e_k for (i, j, k) read cyclically.
# Indices are binary labels, so every line satisfies i ^ j == k.
FANO_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))


class LoopError(ValueError):
    """Invalid Cayley table or failed loop precondition."""


@dataclass(frozen=True)
class Loop:
    size: int
    table: Tuple[Tuple[int, ...], ...]
    identity: int = 0
    name: Optional[str] = None

    def mul(self, s: int, t: int) -> int:
        return self.table[s][t]

    def elements(self) -> range:
        return range(self.size)

    def to_json(self) -> dict:
        return {"size": self.size, "identity": self.identity, "table": [list(r) for r in self.table]}


@dataclass(frozen=True)
class LoopFlags:
    has_inverse_property: bool
    is_moufang: bool
    is_flexible: bool
    is_associative: bool

    def as_dict(self) -> dict:
        return {
            "inverse_property": self.has_inverse_property,
            "moufang": self.is_moufang,
            "flexible": self.is_flexible,
            "associative": self.is_associative,
        }


def validate_loop(table: Sequence[Sequence[int]], identity: int = 0, name: Optional[str] = None) -> Loop:
    """Check that ``table`` is a Latin square with two-sided identity ``identity``."""
    n = len(table)
    if n == 0:
        raise LoopError("empty table")
    if n > MAX_LOOP_ORDER:
        raise LoopError(f"loops of order {n} > {MAX_LOOP_ORDER} are not supported")
    rows = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise LoopError(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                raise LoopError(f"row {i} has entry {x!r} outside 0..{n - 1}")
        rows.append(tuple(row))
    if isinstance(identity, bool) or not isinstance(identity, int) or not 0 <= identity < n:
        raise LoopError(f"identity {identity!r} outside 0..{n - 1}")
    full = set(range(n))
    for i, row in enumerate(rows):
        if set(row) != full:
            raise LoopError(f"not a Latin square: row {i} repeats an entry")
    for j in range(n):
        if {rows[i][j] for i in range(n)} != full:
            raise LoopError(f"not a Latin square: column {j} repeats an entry")
    for x in range(n):
        if rows[identity][x] != x or rows[x][identity] != x:
            raise LoopError(f"identity fails: element {identity} is not an identity for x={x}")
    return Loop(n, tuple(rows), identity, name)


def _left_inverse(L: Loop, s: int) -> int:
    return next(t for t in L.elements() if L.table[t][s] == L.identity)


def _has_ip(L: Loop) -> bool:
    T = L.table
    for s in L.elements():
        si = _left_inverse(L, s)
        for t in L.elements():
            if T[si][T[s][t]] != t or T[T[t][s]][si] != t:
                return False
    return True


def _is_moufang(L: Loop) -> bool:
    T = L.table
    for s, t, r in itertools.product(L.elements(), repeat=3):
        if T[s][T[t][T[s][r]]] != T[T[T[s][t]][s]][r]:
            return False
    return True


def _is_flexible(L: Loop) -> bool:
    T = L.table
    return all(T[s][T[t][s]] == T[T[s][t]][s] for s, t in itertools.product(L.elements(), repeat=2))


def _is_associative(L: Loop) -> bool:
    T = L.table
    for s, t, r in itertools.product(L.elements(), repeat=3):
        if T[s][T[t][r]] != T[T[s][t]][r]:
            return False
    return True


def classify(L: Loop) -> LoopFlags:
    """Decide the four loop predicates by exhaustive enumeration.

    The Moufang test uses the single identity ``s(t(sr)) = ((st)s)r``.
    """
    return LoopFlags(
        has_inverse_property=_has_ip(L),
        is_moufang=_is_moufang(L),
        is_flexible=_is_flexible(L),
        is_associative=_is_associative(L),
    )


def inverse_map(L: Loop) -> List[int]:
    """``s -> s^-1`` for an inverse-property loop."""
    if not _has_ip(L):
        raise LoopError("no inverse property")
    return [_left_inverse(L, s) for s in L.elements()]


def cyclic_loop(n: int) -> Loop:
    if n < 1:
        raise LoopError("cyclic group order must be positive")
    return validate_loop([[(i + j) % n for j in range(n)] for i in range(n)], 0, f"cyclic({n})")


def s3_loop() -> Loop:
    """The symmetric group on 3 letters; element 0 is the identity permutation."""
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    return validate_loop(table, 0, "s3")


def octonion_element(k: int, negative: bool = False) -> int:
    """Index of ``+-e_k`` in :func:`octonion_loop` (``k = 0`` is the unit 1)."""
    return 2 * k + int(negative)


def _octonion_sign(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    if a == b:
        return 1
    for tri in FANO_TRIPLES:
        if a in tri and b in tri:
            ia, ib = tri.index(a), tri.index(b)
            return 0 if (ib - ia) % 3 == 1 else 1
    raise AssertionError(f"no Fano line through {a}, {b}")


def octonion_loop() -> Loop:
    """The 16-element loop ``{+-1, +-e_1, ..., +-e_7}`` of unit basis octonions.

    Element ``2k`` is ``e_k`` and ``2k+1`` is ``-e_k`` (``e_0 = 1``).  Signs
    come from the oriented lines in :data:`FANO_TRIPLES` together with
    ``e_k^2 = -1`` and anticommutation of distinct imaginary units.
    """
    table = []
    for x in range(16):
        a, sa = divmod(x, 2)
        row = []
        for y in range(16):
            b, sb = divmod(y, 2)
            row.append(2 * (a ^ b) + (sa ^ sb ^ _octonion_sign(a, b)))
        table.append(row)
    return validate_loop(table, 0, "octonion16")


_CYCLIC = re.compile(r"^(?:cyclic|c)\(?(\d+)\)?$")


def builtin_loop(name: str) -> Loop:
    """``cyclic(n)`` (also ``cyclicN``/``cN``), ``s3`` or ``octonion16``."""
    key = name.strip().lower()
    m = _CYCLIC.match(key)
    if m:
        return cyclic_loop(int(m.group(1)))
    if key == "s3":
        return s3_loop()
    if key in ("octonion16", "octonion"):
        return octonion_loop()
    raise LoopError(f"unknown builtin loop {name!r}")


def loop_from_json(data: dict) -> Loop:
    try:
        size, table = data["size"], data["table"]
    except (KeyError, TypeError) as exc:
        raise LoopError(f"loop file must have 'size' and 'table' keys: {exc}") from exc
    if "identity" not in data:
        raise LoopError("loop file must declare its 'identity' element")
    if len(table) != size:
        raise LoopError(f"declared size {size} but table has {len(table)} rows")
    return validate_loop(table, data["identity"], data.get("name"))


def load_loop(path) -> Loop:
    with open(path) as fh:
        return loop_from_json(json.load(fh))


def save_loop(L: Loop, path) -> None:
    Path(path).write_text(json.dumps(L.to_json()) + "\n")


def is_loop_automorphism(L: Loop, perm: Sequence[int]):
    """Return ``None`` if ``perm`` is an automorphism, else a witness pair ``(s, t)``."""
    T = L.table
    for s, t in itertools.product(L.elements(), repeat=2):
        if perm[T[s][t]] != T[perm[s]][perm[t]]:
            return (s, t)
    return None
