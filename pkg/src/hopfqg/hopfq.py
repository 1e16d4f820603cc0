"""Hopf quasigroups and Hopf coquasigroups given by structure constants.

Every Sweedler-notation identity is compiled into two composites of the
structure maps (lazy tensor products, flips and composition) and
compared on all basis vectors of the domain.  Composites are written in
composition order, so ``[m, LazyTensor(S, I), comult]``
means ``m o (S (x) id) o Delta``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .exactlin import (
    DimensionError,
    LazyTensor,
    LinearMap,
    SingularMatrixError,
    apply_sparse,
    format_scalar,
    identity,
    invert,
    permutation_map,
    scalar,
    scalar_map,
    swap,
)
from .loops import Loop, LoopError, inverse_map, is_loop_automorphism
from .report import Report


class AxiomError(ValueError):
    """A structure failed its axioms; ``report`` holds the witnesses."""

    def __init__(self, message: str, report: Optional[Report] = None):
        super().__init__(message)
        self.report = report


def _tm(*maps):
    return maps[0] if len(maps) == 1 else LazyTensor(*maps)


class _Structure:
    """Shared storage for the five structure maps of a (co)quasigroup."""

    kind = "structure"

    def __init__(self, mult: LinearMap, unit, comult: LinearMap, counit, antipode: LinearMap,
                 *, name: Optional[str] = None, check: bool = True):
        n = antipode.dom
        self.dim = n
        self.mult = mult
        self.unit_map = unit if isinstance(unit, LinearMap) else LinearMap([[x] for x in unit], dom=1)
        self.comult = comult
        self.counit = counit if isinstance(counit, LinearMap) else LinearMap([list(counit)], dom=n)
        self.antipode = antipode
        self.name = name
        expected = {
            "mult": (mult, (n, n * n)),
            "unit": (self.unit_map, (n, 1)),
            "comult": (comult, (n * n, n)),
            "counit": (self.counit, (1, n)),
            "antipode": (antipode, (n, n)),
        }
        for label, (f, shape) in expected.items():
            if f.shape != shape:
                raise DimensionError(f"{label} has shape {f.shape}, expected {shape} for dim {n}")
        try:
            self.antipode_inv = invert(antipode)
        except SingularMatrixError:
            if check:
                raise AxiomError("antipode is not invertible")
            self.antipode_inv = None
        self.id = identity(n)
        self.flip = swap(n, n)
        if check:
            rep = self.check()
            if not rep.passed:
                bad = ", ".join(e.name for e in rep.failures)
                raise AxiomError(f"{self.kind} axioms fail: {bad}", rep)

    @classmethod
    def unchecked(cls, *args, **kwargs):
        """Build without validating axioms (for mutation tests)."""
        return cls(*args, check=False, **kwargs)

    def check(self) -> Report:
        raise NotImplementedError

    @property
    def unit(self) -> List:
        return [self.unit_map[i, 0] for i in range(self.dim)]

    def replace(self, **changes):
        """Copy with some structure maps replaced; the copy is not validated."""
        fields = dict(mult=self.mult, unit=self.unit_map, comult=self.comult,
                      counit=self.counit, antipode=self.antipode)
        fields.update(changes)
        return type(self)(**fields, name=self.name, check=False)

    def structure_maps(self):
        return (self.mult, self.unit_map, self.comult, self.counit, self.antipode)

    def __eq__(self, other):
        return type(self) is type(other) and self.structure_maps() == other.structure_maps()

    def __hash__(self):
        return hash(self.structure_maps())

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} dim={self.dim}>"

    # -- helpers for writing identities -------------------------------
    def multiply(self, x: dict, y: dict) -> dict:
        """Product of two sparse vectors."""
        n = self.dim
        xy = {i * n + j: a * b for i, a in x.items() for j, b in y.items()}
        return apply_sparse(self.mult, xy)

    def to_json(self) -> dict:
        n = self.dim
        m = self.mult
        d = self.comult
        return {
            "kind": self.kind,
            "dim": n,
            "mult": [[[format_scalar(m[k, i * n + j]) for k in range(n)] for j in range(n)] for i in range(n)],
            "comult": [[[format_scalar(d[j * n + k, i]) for k in range(n)] for j in range(n)] for i in range(n)],
            "unit": [format_scalar(x) for x in self.unit],
            "counit": [format_scalar(self.counit[0, i]) for i in range(n)],
            "antipode": [[format_scalar(x) for x in row] for row in self.antipode.entries],
        }


def _common_checks(H: _Structure, rep: Report) -> None:
    n, I, m, D, e, u = H.dim, H.id, H.mult, H.comult, H.counit, H.unit_map
    rep.identity("left counit", [_tm(e, I), D], [I], [n])
    rep.identity("right counit", [_tm(I, e), D], [I], [n])
    rep.identity("left unit", [m, _tm(u, I)], [I], [n])
    rep.identity("right unit", [m, _tm(I, u)], [I], [n])
    mid = _tm(I, H.flip, I)
    rep.identity("comult multiplicative", [D, m], [_tm(m, m), mid, _tm(D, D)], [n, n])
    rep.identity("comult unital", [D, u], [_tm(u, u)], [1])
    rep.identity("counit multiplicative", [e, m], [_tm(e, e)], [n, n])
    rep.identity("counit unital", [e, u], [scalar_map(1)], [1])


class HopfQuasigroup(_Structure):
    """Unital (possibly nonassociative) algebra with coassociative coalgebra and antipode.

    ``mult`` is ``n^2 -> n``, ``unit`` a length-``n`` vector (or ``n x 1``
    map), ``comult`` ``n -> n^2``, ``counit`` a length-``n`` row, ``antipode``
    ``n -> n``.  The antipode must be bijective; its inverse is cached as
    ``antipode_inv``.
    """

    kind = "hopf_quasigroup"

    def check(self) -> Report:
        return check_hopf_quasigroup(self)


class HopfCoquasigroup(_Structure):
    """Associative unital algebra with counital (possibly non-coassociative) coalgebra."""

    kind = "hopf_coquasigroup"

    def check(self) -> Report:
        return check_coquasigroup(self, optional_flags=False)


def check_hopf_quasigroup(H: HopfQuasigroup) -> Report:
    """All defining identities of a Hopf quasigroup, each with a witness on failure.

    Left antipode identities are indexed by basis pairs ``(h, g)``, right ones
    by ``(g, h)``.
    """
    n, I, m, D, e, S = H.dim, H.id, H.mult, H.comult, H.counit, H.antipode
    rep = Report("hopf_quasigroup")
    rep.identity("coassociativity", [_tm(D, I), D], [_tm(I, D), D], [n])
    _common_checks(H, rep)
    DI, ID = _tm(D, I), _tm(I, D)
    rep.identity("S(h1)(h2 g) = e(h) g", [m, _tm(S, m), DI], [_tm(e, I)], [n, n])
    rep.identity("h1(S(h2) g) = e(h) g", [m, _tm(I, m), _tm(I, S, I), DI], [_tm(e, I)], [n, n])
    rep.identity("(g S(h1)) h2 = g e(h)", [m, _tm(m, I), _tm(I, S, I), ID], [_tm(I, e)], [n, n])
    rep.identity("(g h1) S(h2) = g e(h)", [m, _tm(m, I), _tm(I, I, S), ID], [_tm(I, e)], [n, n])
    return rep


def antipode_properties(H: HopfQuasigroup) -> Report:
    """Antimultiplicativity and anticomultiplicativity of the antipode."""
    n, m, D, S = H.dim, H.mult, H.comult, H.antipode
    rep = Report("antipode_properties")
    rep.identity("S(hg) = S(g)S(h)", [S, m], [m, _tm(S, S), H.flip], [n, n])
    rep.identity("D(S(h)) = S(h2) (x) S(h1)", [D, S], [H.flip, _tm(S, S), D], [n])
    return rep


@dataclass(frozen=True)
class HopfFlags:
    moufang: bool
    flexible: bool
    report: Report

    def as_dict(self):
        return {"moufang": self.moufang, "flexible": self.flexible}


def hopf_predicates(H: HopfQuasigroup) -> HopfFlags:
    """Moufang ``h1(g(h2 f)) = ((h1 g)h2)f`` and flexible ``h1(g h2) = (h1 g)h2``."""
    n, I, m, D, t = H.dim, H.id, H.mult, H.comult, H.flip
    rep = Report("hopf_predicates")
    # h1 (x) h2 (x) g (x) f  ->  h1 (x) g (x) h2 (x) f
    spread3 = [_tm(I, t, I), _tm(D, I, I)]
    lhs = [m, _tm(I, m), _tm(I, I, m)] + spread3
    rhs = [m, _tm(m, I), _tm(m, I, I)] + spread3
    mou = rep.identity("moufang", lhs, rhs, [n, n, n])
    spread2 = [_tm(I, t), _tm(D, I)]
    flex = rep.identity("flexible", [m, _tm(I, m)] + spread2, [m, _tm(m, I)] + spread2, [n, n])
    return HopfFlags(mou.passed, flex.passed, rep)


def ab_flexible(H: HopfQuasigroup, alpha, beta, *, report: Optional[Report] = None) -> bool:
    """``alpha(h1)(g beta(h2)) = (alpha(h1) g) beta(h2)`` on all basis pairs ``(h, g)``."""
    a, b = _matrix(alpha), _matrix(beta)
    n, I, m = H.dim, H.id, H.mult
    spread = [_tm(a, I, b), _tm(I, H.flip), _tm(H.comult, I)]
    rep = report if report is not None else Report("ab_flexible")
    return rep.identity("(alpha,beta)-flexible", [m, _tm(I, m)] + spread,
                        [m, _tm(m, I)] + spread, [n, n]).passed


def check_coquasigroup(H, optional_flags: bool = True) -> Report:
    """Axioms of a Hopf coquasigroup, plus co-flexible/co-Moufang flags.

    Iterated legs follow the subscript nesting literally: ``h_21`` is the
    first leg of the comultiplication applied to ``h_2``.
    """
    n, I, m, D, S, u = H.dim, H.id, H.mult, H.comult, H.antipode, H.unit_map
    rep = Report("hopf_coquasigroup")
    rep.identity("associativity", [m, _tm(m, I)], [m, _tm(I, m)], [n, n, n])
    _common_checks(H, rep)
    D2R = [_tm(I, D), D]  # h1 (x) h21 (x) h22
    D2L = [_tm(D, I), D]  # h11 (x) h12 (x) h2
    rep.identity("S(h1)h21 (x) h22 = 1 (x) h", [_tm(m, I), _tm(S, I, I)] + D2R, [_tm(u, I)], [n])
    rep.identity("h1 S(h21) (x) h22 = 1 (x) h", [_tm(m, I), _tm(I, S, I)] + D2R, [_tm(u, I)], [n])
    rep.identity("h11 (x) S(h12) h2 = h (x) 1", [_tm(I, m), _tm(I, S, I)] + D2L, [_tm(I, u)], [n])
    rep.identity("h11 (x) h12 S(h2) = h (x) 1", [_tm(I, m), _tm(I, I, S)] + D2L, [_tm(I, u)], [n])
    if optional_flags:
        t = H.flip
        rep.identity("co-flexible", [_tm(m, I), _tm(I, t)] + D2R, [_tm(m, I), _tm(I, t)] + D2L, [n])
        lhs = [_tm(m, I, I), _tm(I, t, I), _tm(I, I, D), _tm(I, D), D]  # h1 h221 (x) h21 (x) h222
        rhs = [_tm(m, I, I), _tm(I, t, I), _tm(D, I, I), _tm(D, I), D]  # h111 h12 (x) h112 (x) h2
        rep.identity("co-moufang", lhs, rhs, [n])
    return rep


def dualize(H: HopfQuasigroup, *, check: bool = True) -> HopfCoquasigroup:
    """The dual structure on ``H*`` in the dual basis (all maps transposed)."""
    return HopfCoquasigroup(
        mult=H.comult.T, unit=H.counit.T, comult=H.mult.T, counit=H.unit_map.T,
        antipode=H.antipode.T, name=f"dual({H.name})" if H.name else None, check=check,
    )


def dualize_coquasigroup(C: HopfCoquasigroup, *, check: bool = True) -> HopfQuasigroup:
    """Inverse of :func:`dualize` under the canonical double-dual identification."""
    return HopfQuasigroup(
        mult=C.comult.T, unit=C.counit.T, comult=C.mult.T, counit=C.unit_map.T,
        antipode=C.antipode.T, name=C.name[5:-1] if C.name and C.name.startswith("dual(") else C.name,
        check=check,
    )


def loop_algebra(L: Loop) -> HopfQuasigroup:
    """Linearise an inverse-property loop: grouplike basis, product and inverse extended linearly."""
    try:
        inv = inverse_map(L)
    except LoopError:
        raise LoopError("no inverse property") from None
    n = L.size
    mult = LinearMap.from_columns(n, ({L.table[s][t]: 1} for s in range(n) for t in range(n)))
    comult = LinearMap.from_columns(n * n, ({s * n + s: 1} for s in range(n)))
    H = HopfQuasigroup(
        mult=mult,
        unit=LinearMap.from_columns(n, [{L.identity: 1}]),
        comult=comult,
        counit=LinearMap.from_columns(1, ({0: 1} for _ in range(n))),
        antipode=permutation_map(inv),
        name=L.name,
    )
    H.loop = L
    return H


# -- automorphisms ----------------------------------------------------------

class HqgAutomorphism:
    """A Hopf quasigroup automorphism: bijective algebra and coalgebra map commuting with S."""

    __slots__ = ("matrix", "inverse_matrix", "label")

    def __init__(self, matrix: LinearMap, inverse: Optional[LinearMap] = None, label: Optional[str] = None):
        if matrix.dom != matrix.cod:
            raise DimensionError(f"automorphism must be square, got {matrix.shape}")
        self.matrix = matrix
        self.inverse_matrix = inverse if inverse is not None else invert(matrix)
        self.label = label

    @classmethod
    def identity(cls, n: int) -> "HqgAutomorphism":
        i = identity(n)
        return cls(i, i, "id")

    @property
    def dim(self) -> int:
        return self.matrix.dom

    def __matmul__(self, other: "HqgAutomorphism") -> "HqgAutomorphism":
        label = None
        if self.label and other.label:
            label = f"{self.label}.{other.label}"
        return HqgAutomorphism(self.matrix @ other.matrix, other.inverse_matrix @ self.inverse_matrix, label)

    def inverse(self) -> "HqgAutomorphism":
        label = f"{self.label}^-1" if self.label else None
        return HqgAutomorphism(self.inverse_matrix, self.matrix, label)

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def __eq__(self, other):
        return isinstance(other, HqgAutomorphism) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"HqgAutomorphism({self.label or self.matrix!r})"


def _matrix(a) -> LinearMap:
    return a.matrix if isinstance(a, HqgAutomorphism) else a


def check_automorphism(H: HopfQuasigroup, alpha) -> Report:
    """Invertibility, algebra map, coalgebra map, (co)unit preservation, ``S alpha = alpha S``."""
    a = _matrix(alpha)
    n = H.dim
    rep = Report("automorphism")
    if a.shape != (n, n):
        rep.add("shape", False, {"shape": list(a.shape), "expected": [n, n]})
        return rep
    try:
        invert(a)
        rep.add("invertible", True)
    except SingularMatrixError:
        rep.add("invertible", False, {"reason": "singular matrix"})
    rep.identity("algebra map", [a, H.mult], [H.mult, _tm(a, a)], [n, n])
    rep.identity("unit preserved", [a, H.unit_map], [H.unit_map], [1])
    rep.identity("coalgebra map", [H.comult, a], [_tm(a, a), H.comult], [n])
    rep.identity("counit preserved", [H.counit, a], [H.counit], [n])
    rep.identity("commutes with antipode", [H.antipode, a], [a, H.antipode], [n])
    return rep


def make_automorphism(H: HopfQuasigroup, alpha: LinearMap, label: Optional[str] = None) -> HqgAutomorphism:
    """Validate ``alpha`` against ``H`` and wrap it."""
    rep = check_automorphism(H, alpha)
    if not rep.passed:
        bad = ", ".join(e.name for e in rep.failures)
        raise AxiomError(f"not a Hopf quasigroup automorphism: {bad}", rep)
    return HqgAutomorphism(alpha, label=label)


def automorphism_from_loop_perm(L: Loop, perm: Sequence[int], label: Optional[str] = None) -> HqgAutomorphism:
    """Linear extension of a loop automorphism to ``loop_algebra(L)``."""
    perm = list(perm)
    if sorted(perm) != list(range(L.size)):
        raise LoopError(f"not a loop automorphism: {perm} is not a permutation of the loop")
    if perm[L.identity] != L.identity:
        raise LoopError(f"not a loop automorphism: identity {L.identity} is sent to {perm[L.identity]}")
    bad = is_loop_automorphism(L, perm)
    if bad is not None:
        s, t = bad
        raise LoopError(f"not a loop automorphism: witness pair (s, t) = ({s}, {t})")
    P = permutation_map(perm)
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return HqgAutomorphism(P, permutation_map(inv), label)


def inner_automorphism_perm(L: Loop, g: int) -> List[int]:
    """``x -> g x g^-1`` as a permutation (an automorphism when ``L`` is a group)."""
    inv = inverse_map(L)
    return [L.table[L.table[g][x]][inv[g]] for x in L.elements()]


# -- structure-constant files -----------------------------------------------

def hopf_from_json(data: dict, *, check: bool = True):
    """Parse the structure-constant format; rationals are ``"p/q"`` strings or ints."""
    try:
        n = int(data["dim"])
        mult = LinearMap.from_columns(n, (
            {k: scalar(x) for k, x in enumerate(data["mult"][i][j])} for i in range(n) for j in range(n)))
        comult = LinearMap.from_columns(n * n, (
            {j * n + k: scalar(data["comult"][i][j][k]) for j in range(n) for k in range(n)}
            for i in range(n)))
        unit = [scalar(x) for x in data["unit"]]
        counit = [scalar(x) for x in data["counit"]]
        antipode = LinearMap(data["antipode"], dom=n)
    except (KeyError, IndexError, TypeError) as exc:
        raise ValueError(f"malformed structure-constant data: {exc!r}") from exc
    kind = data.get("kind", "hopf_quasigroup")
    cls = HopfCoquasigroup if kind == "hopf_coquasigroup" else HopfQuasigroup
    return cls(mult, unit, comult, counit, antipode, name=data.get("name"), check=check)


def load_hopf(path, *, check: bool = True):
    with open(path) as fh:
        return hopf_from_json(json.load(fh), check=check)


def save_hopf(H, path) -> None:
    data = H.to_json()
    if H.name:
        data["name"] = H.name
    with open(path, "w") as fh:
        json.dump(data, fh)
        fh.write("\n")
