"""Exact rational linear algebra on basis-indexed finite-dimensional spaces.

Every structure map in the package (multiplication, comultiplication,
antipode, module actions, coactions, braidings) is a :class:`LinearMap`
with :class:`fractions.Fraction` entries.  Tensor products of spaces are
flattened row-major: ``e_i (x) e_j`` in ``V (x) W`` with ``dim W = n`` has
index ``i*n + j``.  Flattening is strictly associative, so the monoidal
structure is strict.

Maps are stored column-compressed (the column of ``e_j`` is a tuple of
``(row, value)`` pairs with zero values dropped).  This is only a storage
choice: the public view is the dense ``cod x dom`` matrix ``entries``.
Structure maps of loop algebras are monomial, so column storage makes the
exhaustive identity checks cost O(number of basis vectors).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

Scalar = Fraction
SparseVector = Dict[int, Union[int, Fraction]]
ScalarLike = Union[int, Fraction, str]

__all__ = [
    "Scalar",
    "DimensionError",
    "SingularMatrixError",
    "LinearMap",
    "scalar",
    "format_scalar",
    "identity",
    "zero_map",
    "scalar_map",
    "diag",
    "permutation_map",
    "compose",
    "compose_all",
    "tensor_map",
    "swap",
    "apply",
    "apply_sparse",
    "invert",
    "rref",
    "nullspace",
    "nullspace_sparse",
    "basis_vector",
    "evaluate_chain",
    "materialize_chain",
    "LazyTensor",
    "FactorPermutation",
    "first_mismatch",
]


class DimensionError(ValueError):
    """Raised when shapes of maps or vectors are incompatible."""


class SingularMatrixError(ValueError):
    """Raised when inverting a singular matrix."""


def _norm(x):
    # ints are kept as ints internally: int arithmetic is much faster than Fraction
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def scalar(x: ScalarLike) -> Fraction:
    """Parse an exact scalar from an int, a Fraction or a ``"p/q"`` string.

    Floats are rejected: they would silently introduce rounding.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {x!r}") from exc
    raise TypeError(f"not an exact scalar: {x!r} ({type(x).__name__})")


def format_scalar(x) -> str:
    """Serialize a scalar as ``"p"`` or ``"p/q"`` in lowest terms."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _freeze_column(col: SparseVector) -> Tuple[Tuple[int, object], ...]:
    return tuple(sorted((i, _norm(v)) for i, v in col.items() if v != 0))


class LinearMap:
    """An exact linear map ``k^dom -> k^cod``.

    Construct from a dense row list ``LinearMap(rows, dom=...)`` (``dom`` is
    only needed when there are no rows) or from sparse columns with
    :meth:`from_columns`.  Instances are immutable and hashable.
    """

    __slots__ = ("dom", "cod", "_cols", "_lookup", "_hash")

    def __init__(self, rows: Sequence[Sequence[ScalarLike]], dom: Optional[int] = None):
        rows = [list(r) for r in rows]
        cod = len(rows)
        if dom is None:
            if cod == 0:
                raise DimensionError("dom must be given for a map with no rows")
            dom = len(rows[0])
        cols: List[Dict[int, object]] = [{} for _ in range(dom)]
        for i, row in enumerate(rows):
            if len(row) != dom:
                raise DimensionError(f"row {i} has length {len(row)}, expected {dom}")
            for j, x in enumerate(row):
                x = scalar(x)
                if x:
                    cols[j][i] = x
        self._init(dom, cod, tuple(_freeze_column(c) for c in cols))

    def _init(self, dom, cod, cols):
        self.dom = dom
        self.cod = cod
        self._cols = cols
        self._lookup = None
        self._hash = None

    @classmethod
    def from_columns(cls, cod: int, columns: Iterable[SparseVector]) -> "LinearMap":
        """Build a map from one sparse column (``{row: value}``) per basis vector."""
        cols = tuple(_freeze_column(c) for c in columns)
        for j, col in enumerate(cols):
            if col and (col[0][0] < 0 or col[-1][0] >= cod):
                raise DimensionError(f"column {j} has a row index outside 0..{cod - 1}")
        obj = cls.__new__(cls)
        obj._init(len(cols), cod, cols)
        return obj

    @property
    def dom_dim(self) -> int:
        return self.dom

    @property
    def cod_dim(self) -> int:
        return self.cod

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.cod, self.dom)

    @property
    def entries(self) -> Tuple[Tuple[Fraction, ...], ...]:
        rows = [[Fraction(0)] * self.dom for _ in range(self.cod)]
        for j, col in enumerate(self._cols):
            for i, v in col:
                rows[i][j] = Fraction(v)
        return tuple(tuple(r) for r in rows)

    def column(self, j: int) -> SparseVector:
        """Sparse image of the ``j``-th basis vector."""
        return dict(self._cols[j])

    def columns(self):
        return self._cols

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        if self._lookup is None:
            self._lookup = [dict(c) for c in self._cols]
        return Fraction(self._lookup[j].get(i, 0))

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(c == ((j, 1),) for j, c in enumerate(self._cols))

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, self._cols))
        return self._hash

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return compose(self, other)

    def __mul__(self, c):
        if isinstance(c, LinearMap):
            return NotImplemented
        c = _norm(scalar(c))
        return LinearMap.from_columns(self.cod, ({i: c * v for i, v in col} for col in self._cols))

    __rmul__ = __mul__

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add maps of shapes {self.shape} and {other.shape}")
        cols = []
        for a, b in zip(self._cols, other._cols):
            acc = dict(a)
            for i, v in b:
                acc[i] = acc.get(i, 0) + v
            cols.append(acc)
        return LinearMap.from_columns(self.cod, cols)

    def __neg__(self):
        return self * -1

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-other)

    def __call__(self, v):
        return apply(self, v)

    def transpose(self) -> "LinearMap":
        cols: List[Dict[int, object]] = [{} for _ in range(self.cod)]
        for j, col in enumerate(self._cols):
            for i, v in col:
                cols[i][j] = v
        return LinearMap.from_columns(self.dom, cols)

    T = property(transpose)

    def __repr__(self):
        if self.cod * self.dom <= 64:
            body = [[format_scalar(x) for x in row] for row in self.entries]
            return f"LinearMap({body}, dom={self.dom})"
        return f"LinearMap(<{self.cod}x{self.dom}, nnz={self.nnz}>)"


def identity(n: int) -> LinearMap:
    return LinearMap.from_columns(n, ({j: 1} for j in range(n)))


def zero_map(cod: int, dom: int) -> LinearMap:
    return LinearMap.from_columns(cod, ({} for _ in range(dom)))


def scalar_map(c: ScalarLike) -> LinearMap:
    """The 1x1 map ``[c]``."""
    return LinearMap.from_columns(1, [{0: scalar(c)}])


def diag(*values: ScalarLike) -> LinearMap:
    return LinearMap.from_columns(len(values), ({j: scalar(v)} for j, v in enumerate(values)))


def permutation_map(perm: Sequence[int]) -> LinearMap:
    """The map sending ``e_j`` to ``e_perm[j]``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {list(perm)}")
    return LinearMap.from_columns(n, ({p: 1} for p in perm))


def apply_sparse(f, vec: SparseVector) -> SparseVector:
    """Apply ``f`` (a map or lazy operator) to a sparse vector; zero coefficients are dropped."""
    if type(f) is not LinearMap:
        return f.apply(vec)
    out: Dict[int, object] = {}
    cols = f._cols
    for j, c in vec.items():
        for i, v in cols[j]:
            out[i] = out.get(i, 0) + c * v
    return {i: _norm(v) for i, v in out.items() if v != 0}


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """``f o g`` (apply ``g`` first)."""
    if f.dom != g.cod:
        raise DimensionError(
            f"cannot compose f of shape {f.shape} with g of shape {g.shape}: "
            f"f.dom={f.dom} != g.cod={g.cod}"
        )
    return LinearMap.from_columns(f.cod, (apply_sparse(f, dict(col)) for col in g._cols))


def compose_all(*maps: LinearMap) -> LinearMap:
    """``maps[0] o maps[1] o ... o maps[-1]``."""
    if not maps:
        raise ValueError("compose_all needs at least one map")
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = compose(f, out)
    return out


def _tensor2(f: LinearMap, g: LinearMap) -> LinearMap:
    gd, gc = g.dom, g.cod
    cols = []
    for fcol in f._cols:
        for gcol in g._cols:
            cols.append({r * gc + s: a * b for r, a in fcol for s, b in gcol})
    obj = LinearMap.from_columns(f.cod * gc, cols) if cols else zero_map(f.cod * gc, f.dom * gd)
    return obj


def tensor_map(f: LinearMap, g: LinearMap, *more: LinearMap) -> LinearMap:
    """Kronecker product ``f (x) g (x) ...`` under the row-major flattening."""
    out = _tensor2(f, g)
    for h in more:
        out = _tensor2(out, h)
    return out


def swap(m: int, n: int) -> LinearMap:
    """The flip ``V (x) W -> W (x) V`` for ``dim V = m``, ``dim W = n``."""
    if m < 0 or n < 0:
        raise ValueError("dimensions must be non-negative")
    cols = [None] * (m * n)
    for i in range(m):
        for j in range(n):
            cols[i * n + j] = {j * m + i: 1}
    return LinearMap.from_columns(m * n, cols)


def apply(f: LinearMap, v: Sequence[ScalarLike]) -> List[Fraction]:
    """Dense matrix-vector product."""
    if len(v) != f.dom:
        raise DimensionError(f"vector of length {len(v)} does not match map domain {f.dom}")
    sparse = {j: _norm(scalar(x)) for j, x in enumerate(v) if scalar(x) != 0}
    out = [Fraction(0)] * f.cod
    for i, x in apply_sparse(f, sparse).items():
        out[i] = Fraction(x)
    return out


def basis_vector(n: int, i: int) -> List[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def rref(rows: Sequence[Sequence[ScalarLike]], ncols: Optional[int] = None):
    """Reduced row echelon form over Q.

    Returns ``(reduced_rows, pivot_columns)`` where ``reduced_rows`` holds only
    the nonzero rows as lists of Fractions.
    """
    mat = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        if p != 1:
            mat[r] = [x / p for x in mat[r]]
        prow = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                k = mat[i][c]
                mat[i] = [a - k * b for a, b in zip(mat[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace_sparse(rows: Iterable[SparseVector], ncols: int) -> List[SparseVector]:
    """Basis of the solution space of a homogeneous system given by sparse rows.

    Rows are eliminated incrementally; pivot rows are kept mutually reduced,
    so each incoming row needs a single reduction pass.
    """
    piv: Dict[int, Dict[int, object]] = {}
    for row in rows:
        r = {k: v for k, v in row.items() if v != 0}
        for c in [c for c in r if c in piv]:
            k = r.get(c, 0)
            if k:
                for cc, vv in piv[c].items():
                    r[cc] = r.get(cc, 0) - k * vv
        r = {k: v for k, v in r.items() if v != 0}
        if not r:
            continue
        c0 = min(r)
        lead = r[c0]
        r = {k: _norm(Fraction(v) / lead) for k, v in r.items()}
        for c, prow in piv.items():
            k = prow.get(c0, 0)
            if k:
                for cc, vv in r.items():
                    prow[cc] = prow.get(cc, 0) - k * vv
                piv[c] = {kk: _norm(vv) for kk, vv in prow.items() if vv != 0}
        piv[c0] = r
    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        x = {f: 1}
        for c, prow in piv.items():
            v = prow.get(f, 0)
            if v:
                x[c] = _norm(-v)
        basis.append(x)
    return basis


def nullspace(rows: Sequence[Sequence[ScalarLike]], ncols: int) -> List[List[Fraction]]:
    """A basis of ``{x : A x = 0}`` for the matrix with the given dense rows."""
    sparse_rows = ({j: scalar(v) for j, v in enumerate(r) if scalar(v) != 0} for r in rows)
    out = []
    for x in nullspace_sparse(sparse_rows, ncols):
        dense = [Fraction(0)] * ncols
        for j, v in x.items():
            dense[j] = Fraction(v)
        out.append(dense)
    return out


def invert(f: LinearMap) -> LinearMap:
    """Exact inverse by Gauss-Jordan elimination over Q."""
    if f.dom != f.cod:
        raise DimensionError(f"only square maps can be inverted, got shape {f.shape}")
    n = f.dom
    ent = f.entries
    aug = [list(ent[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise SingularMatrixError(f"{n}x{n} matrix is not invertible")
    return LinearMap([row[n:] for row in red], dom=n)


class LazyTensor:
    """``f_1 (x) ... (x) f_k`` applied on demand, never stored as a matrix.

    Used inside identity checks on large tensor powers, where the
    materialized Kronecker product would have millions of columns.
    """

    def __init__(self, *maps: LinearMap):
        if not maps:
            raise ValueError("LazyTensor needs at least one factor")
        self.maps = maps
        self.dom_dims = tuple(f.dom for f in maps)
        self.cod_dims = tuple(f.cod for f in maps)
        self.dom = _prod(self.dom_dims)
        self.cod = _prod(self.cod_dims)

    @property
    def shape(self):
        return (self.cod, self.dom)

    def apply(self, vec: SparseVector) -> SparseVector:
        out: Dict[int, object] = {}
        maps, ddims, cdims = self.maps, self.dom_dims, self.cod_dims
        k = len(maps)
        for idx, c in vec.items():
            parts = [0] * k
            for t in range(k - 1, -1, -1):
                idx, parts[t] = divmod(idx, ddims[t])
            acc = [(0, c)]
            for f, p, cd in zip(maps, parts, cdims):
                col = f._cols[p]
                if not col:
                    acc = []
                    break
                acc = [(r * cd + i, v * w) for r, v in acc for i, w in col]
            for r, v in acc:
                out[r] = out.get(r, 0) + v
        return {i: _norm(v) for i, v in out.items() if v != 0}

    def materialize(self) -> LinearMap:
        return tensor_map(*self.maps) if len(self.maps) > 1 else self.maps[0]


class FactorPermutation:
    """Reorder tensor factors: output factor ``k`` is input factor ``order[k]``.

    ``FactorPermutation((m, n), (1, 0))`` is :func:`swap` ``(m, n)``.
    """

    def __init__(self, dims: Sequence[int], order: Sequence[int]):
        if sorted(order) != list(range(len(dims))):
            raise ValueError(f"{list(order)} is not a permutation of the factors")
        self.dims = tuple(dims)
        self.order = tuple(order)
        self.out_dims = tuple(dims[o] for o in order)
        self.dom = self.cod = _prod(self.dims)
        # stride of input factor order[k] inside the output index
        strides = [1] * len(dims)
        acc = 1
        for k in range(len(order) - 1, -1, -1):
            strides[order[k]] = acc
            acc *= self.out_dims[k]
        self._strides = tuple(strides)

    @property
    def shape(self):
        return (self.cod, self.dom)

    def apply(self, vec: SparseVector) -> SparseVector:
        out = {}
        dims, strides = self.dims, self._strides
        for idx, c in vec.items():
            r = 0
            for t in range(len(dims) - 1, -1, -1):
                idx, p = divmod(idx, dims[t])
                r += p * strides[t]
            out[r] = c
        return out

    def materialize(self) -> LinearMap:
        return LinearMap.from_columns(self.cod, (self.apply({j: 1}) for j in range(self.dom)))


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def materialize_chain(chain: Sequence) -> LinearMap:
    """Compose a chain (composition order) into one :class:`LinearMap`."""
    dom, cod = _check_chain(chain)
    return LinearMap.from_columns(cod, (evaluate_chain(chain, {j: 1}) for j in range(dom)))


def evaluate_chain(chain: Sequence, vec: SparseVector) -> SparseVector:
    """Apply ``chain[0] o chain[1] o ... o chain[-1]`` to ``vec`` without composing."""
    for f in reversed(chain):
        vec = apply_sparse(f, vec)
    return vec


def _check_chain(chain: Sequence) -> Tuple[int, int]:
    for f, g in zip(chain, chain[1:]):
        if f.dom != g.cod:
            raise DimensionError(f"chain is not composable: {(f.cod, f.dom)} after {(g.cod, g.dom)}")
    return chain[-1].dom, chain[0].cod


def first_mismatch(lhs: Sequence, rhs: Sequence):
    """Compare two composites basis vector by basis vector.

    ``lhs`` and ``rhs`` are lists in composition order (``[f, g]`` means
    ``f o g``).  Returns ``None`` when the composites agree, otherwise
    ``(j, lhs(e_j), rhs(e_j))`` for the first differing basis index ``j``.
    """
    ld, lc = _check_chain(lhs)
    rd, rc = _check_chain(rhs)
    if (ld, lc) != (rd, rc):
        raise DimensionError(f"composites have different shapes: {(lc, ld)} vs {(rc, rd)}")
    for j in range(ld):
        a = evaluate_chain(lhs, {j: 1})
        b = evaluate_chain(rhs, {j: 1})
        if a != b:
            return j, a, b
    return None
