"""Filtered simplicial complexes and normalized tuple chain complexes.

Both kinds expose the same small chain-complex surface used by ``homology``:

* ``cells(n)``   -- ``(N, n+1)`` int array of the degree-``n`` basis,
* ``values(n)``  -- filtration value of each basis element,
* ``boundary(n)`` -- ``(indptr, indices, data)`` CSC triple of ``d_n`` with
  rows indexing the degree ``n-1`` basis (sorted and duplicate-free per column).

Simplices are sorted by ``(value, lexicographic)``; tuple bases are sorted
lexicographically.
"""

from __future__ import annotations

import copy
import itertools
import json
import math
import os
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceededError, CoverError, FiltrationError
from .metric import INF, SYMMETRIC_ORDER_CAP, FiniteMetricSpace, LeftInterval, NormDescriptor, norm_constant
from .weights import subset_weights, tuple_weights

DEFAULT_MAX_CELLS = 10**6


def max_cells() -> int:
    """Per-degree basis guard; ``LPRIPS_MAX_CELLS`` overrides the default."""
    raw = os.environ.get("LPRIPS_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


def _guard(count: int, what: str) -> None:
    cap = max_cells()
    if count > cap:
        raise CapExceededError(f"{what}: {count} cells exceeds the guard {cap} (set LPRIPS_MAX_CELLS)", count)


class _RowIndex:
    """Position lookup for the rows of an int array."""

    def __init__(self, rows: np.ndarray, base: int):
        rows = np.asarray(rows, dtype=np.int64)
        self.n = rows.shape[0]
        k = rows.shape[1] if rows.ndim == 2 else 0
        self.base = max(int(base), 1)
        self.packed = k == 0 or k * math.log2(self.base + 1) < 62
        if self.packed:
            self.weights = self.base ** np.arange(k - 1, -1, -1, dtype=np.int64) if k else np.zeros(0, np.int64)
            codes = rows @ self.weights if k else np.zeros(self.n, np.int64)
            self.order = np.argsort(codes, kind="stable")
            self.sorted = codes[self.order]
        else:
            self.table = {tuple(r): i for i, r in enumerate(rows.tolist())}

    def find(self, queries: np.ndarray) -> np.ndarray:
        """Positions of ``queries`` rows, ``-1`` where absent."""
        queries = np.asarray(queries, dtype=np.int64)
        if queries.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        if not self.packed:
            return np.array([self.table.get(tuple(q), -1) for q in queries.tolist()], dtype=np.int64)
        if self.n == 0:
            return np.full(queries.shape[0], -1, dtype=np.int64)
        # entries outside [0, base) would alias other codes
        valid = ((queries >= 0) & (queries < self.base)).all(axis=1) if queries.ndim == 2 else np.ones(len(queries), bool)
        codes = np.where(valid, queries @ self.weights, -1)
        pos = np.searchsorted(self.sorted, codes)
        pos_c = np.minimum(pos, self.n - 1)
        hit = valid & (pos < self.n) & (self.sorted[pos_c] == codes)
        return np.where(hit, self.order[pos_c], -1)


def _csc(cols: np.ndarray, rows: np.ndarray, vals: np.ndarray, ncols: int):
    """Assemble a CSC triple; duplicate (row, col) entries are summed, zeros dropped."""
    if len(cols):
        key = np.lexsort((rows, cols))
        cols, rows, vals = cols[key], rows[key], vals[key]
        start = np.ones(len(cols), dtype=bool)
        start[1:] = (cols[1:] != cols[:-1]) | (rows[1:] != rows[:-1])
        groups = np.cumsum(start) - 1
        summed = np.bincount(groups, weights=vals).astype(np.int64)
        cols, rows, vals = cols[start], rows[start], summed
        keep = vals != 0
        cols, rows, vals = cols[keep], rows[keep], vals[keep]
    indptr = np.zeros(ncols + 1, dtype=np.int64)
    np.cumsum(np.bincount(cols, minlength=ncols), out=indptr[1:])
    return indptr, rows.astype(np.int64), vals.astype(np.int64)


class ChainComplex:
    """Based chain complex with one filtration value per basis element."""

    kind = "chain"

    def __init__(self, cells: list[np.ndarray], values: list[np.ndarray]):
        self._cells = [np.asarray(c, dtype=np.int64) for c in cells]
        self._values = [np.asarray(v, dtype=np.float64) for v in values]
        for c, v in zip(self._cells, self._values):
            c.setflags(write=False)
            v.setflags(write=False)
        self._index: dict[int, _RowIndex] = {}
        self._boundary: dict[int, tuple] = {}
        self.complete = False

    @property
    def max_deg(self) -> int:
        return len(self._cells) - 1

    def cells(self, n: int) -> np.ndarray:
        if 0 <= n < len(self._cells):
            return self._cells[n]
        return np.zeros((0, max(n + 1, 1)), dtype=np.int64)

    def values(self, n: int) -> np.ndarray:
        if 0 <= n < len(self._values):
            return self._values[n]
        return np.zeros(0, dtype=np.float64)

    def size(self, n: int) -> int:
        return int(self.cells(n).shape[0])

    def sizes(self) -> list[int]:
        return [self.size(n) for n in range(self.max_deg + 1)]

    def homology_valid(self, n: int) -> bool:
        """Whether ``H_n`` is determined by the stored degrees."""
        if n < 0:
            return False
        return n <= self.max_deg - 1 or self.complete or self.size(self.max_deg) == 0

    def reordered(self, perms: Sequence[Sequence[int]]) -> "ChainComplex":
        """Same complex with each degree's basis permuted (``perms[n][k]`` is the old index of new cell ``k``)."""
        new = copy.copy(self)
        new._cells = [self._cells[n][np.asarray(p, dtype=np.int64)] for n, p in enumerate(perms)]
        new._values = [self._values[n][np.asarray(p, dtype=np.int64)] for n, p in enumerate(perms)]
        new._index = {}
        new._boundary = {}
        return new

    def _base(self) -> int:
        top = max((int(c.max()) for c in self._cells if c.size), default=0)
        return top + 1

    def index(self, n: int) -> _RowIndex:
        if n not in self._index:
            self._index[n] = _RowIndex(self.cells(n), self._base())
        return self._index[n]

    def find(self, n: int, cells) -> np.ndarray:
        q = np.asarray(cells, dtype=np.int64).reshape(-1, n + 1)
        return self.index(n).find(q)

    # subclasses yield (face position i, column ids, face rows) for each i
    def _faces(self, n: int):
        raise NotImplementedError

    _missing_faces = "error"

    def boundary(self, n: int):
        """CSC triple of ``d_n : C_n -> C_{n-1}`` with signs ``(-1)^i``."""
        if n in self._boundary:
            return self._boundary[n]
        N = self.size(n)
        if n <= 0 or N == 0:
            out = (np.zeros(N + 1, dtype=np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64))
            self._boundary[n] = out
            return out
        cols_l, rows_l, vals_l = [], [], []
        for i, cols, faces in self._faces(n):
            pos = self.find(n - 1, faces)
            missing = pos < 0
            if missing.any():
                if self._missing_faces == "error":
                    j = int(cols[np.flatnonzero(missing)[0]])
                    raise FiltrationError(
                        f"face {i} of degree-{n} cell {self.cells(n)[j].tolist()} is not in the complex",
                        self.cells(n)[j].tolist(),
                    )
                cols, pos = cols[~missing], pos[~missing]
            cols_l.append(cols)
            rows_l.append(pos)
            vals_l.append(np.full(len(cols), -1 if i % 2 else 1, dtype=np.int64))
        cols = np.concatenate(cols_l) if cols_l else np.zeros(0, np.int64)
        rows = np.concatenate(rows_l) if rows_l else np.zeros(0, np.int64)
        vals = np.concatenate(vals_l) if vals_l else np.zeros(0, np.int64)
        out = _csc(cols, rows, vals, N)
        self._boundary[n] = out
        return out

    def boundary_dense(self, n: int) -> np.ndarray:
        """Dense integer matrix of ``d_n`` (rows: degree ``n-1``)."""
        indptr, idx, data = self.boundary(n)
        M = np.zeros((self.size(n - 1) if n > 0 else 0, self.size(n)), dtype=np.int64)
        for j in range(self.size(n)):
            M[idx[indptr[j]:indptr[j + 1]], j] = data[indptr[j]:indptr[j + 1]]
        return M

    def to_json(self, key: str = "cells") -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "max_deg": self.max_deg,
                "degrees": [
                    [{key: c, "value": v} for c, v in zip(self.cells(n).tolist(), self.values(n).tolist())]
                    for n in range(self.max_deg + 1)
                ],
            },
            indent=1,
        )


# --------------------------------------------------------------------------
# simplicial complexes


class FilteredComplex(ChainComplex):
    """Simplices (sorted vertex tuples) per dimension with monotone filtration values."""

    kind = "filtered_complex"

    def __init__(self, cells, values, check: bool = True):
        ordered_c, ordered_v = [], []
        for c, v in zip(cells, values):
            c = np.asarray(c, dtype=np.int64)
            v = np.asarray(v, dtype=np.float64)
            if len(c):
                key = np.lexsort(tuple(c[:, k] for k in range(c.shape[1] - 1, -1, -1)) + (v,))
                c, v = c[key], v[key]
            ordered_c.append(c)
            ordered_v.append(v)
        super().__init__(ordered_c, ordered_v)
        if check:
            self.validate()

    @property
    def max_dim(self) -> int:
        return self.max_deg

    def validate(self) -> None:
        """Sorted unique vertices, downward closed, monotone under faces."""
        for d in range(self.max_deg + 1):
            c = self.cells(d)
            if len(c) == 0:
                continue
            if d and np.any(np.diff(c, axis=1) <= 0):
                j = int(np.flatnonzero(np.any(np.diff(c, axis=1) <= 0, axis=1))[0])
                raise FiltrationError(f"simplex {c[j].tolist()} is not a strictly increasing vertex list", c[j].tolist())
            if len(np.unique(c, axis=0)) != len(c):
                raise FiltrationError(f"duplicate simplices in dimension {d}")
            if d == 0:
                continue
            vals = self.values(d)
            for i, cols, faces in self._faces(d):
                pos = self.find(d - 1, faces)
                if np.any(pos < 0):
                    j = int(cols[np.flatnonzero(pos < 0)[0]])
                    raise FiltrationError(f"face of {c[j].tolist()} missing: complex is not downward closed", c[j].tolist())
                bad = self.values(d - 1)[pos] > vals[cols]
                if bad.any():
                    j = int(cols[np.flatnonzero(bad)[0]])
                    raise FiltrationError(
                        f"non-monotone filtration: face {faces[np.flatnonzero(bad)[0]].tolist()} of {c[j].tolist()} has larger value",
                        c[j].tolist(),
                    )

    def _faces(self, n: int):
        c = self.cells(n)
        cols = np.arange(len(c), dtype=np.int64)
        for i in range(n + 1):
            yield i, cols, np.delete(c, i, axis=1)

    def simplices(self, d: int) -> list[tuple[tuple[int, ...], float]]:
        return [(tuple(c), v) for c, v in zip(self.cells(d).tolist(), self.values(d).tolist())]

    def value_of(self, simplex: Sequence[int]) -> float:
        s = sorted(int(v) for v in simplex)
        j = int(self.find(len(s) - 1, [s])[0])
        if j < 0:
            raise KeyError(tuple(s))
        return float(self.values(len(s) - 1)[j])

    def to_json(self, key: str = "vertices") -> str:
        return super().to_json(key)

    @classmethod
    def from_simplices(cls, simplices: Iterable[tuple[Sequence[int], float]], check: bool = True) -> "FilteredComplex":
        by_dim: dict[int, list] = {}
        for s, v in simplices:
            s = tuple(sorted(int(x) for x in s))
            by_dim.setdefault(len(s) - 1, []).append((s, float(v)))
        top = max(by_dim, default=0)
        cells, values = [], []
        for d in range(top + 1):
            items = by_dim.get(d, [])
            cells.append(np.array([s for s, _ in items], dtype=np.int64).reshape(-1, d + 1))
            values.append(np.array([v for _, v in items], dtype=np.float64))
        return cls(cells, values, check=check)


def build_vr_filtration(
    X: FiniteMetricSpace, nu: NormDescriptor, max_dim: int, max_value: float | None = None
) -> FilteredComplex:
    """Every subset of at most ``max_dim + 1`` points, filtered by its subset weight.

    ``max_value`` optionally drops simplices of larger value (still downward
    closed since weights are monotone under faces).
    """
    if not nu.symmetric:
        raise ValueError("the simplicial Vietoris-Rips filtration needs a symmetric norm")
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    if max_dim + 1 > SYMMETRIC_ORDER_CAP and nu.p != INF:
        raise CapExceededError(f"max_dim {max_dim} exceeds the permutation-search cap {SYMMETRIC_ORDER_CAP - 1}", max_dim)
    m = X.size
    cells, values = [], []
    for d in range(max_dim + 1):
        count = math.comb(m, d + 1)
        _guard(count, f"dimension {d} of the Vietoris-Rips filtration")
        c = np.array(list(itertools.combinations(range(m), d + 1)), dtype=np.int64).reshape(-1, d + 1)
        if d == 0 or len(c) == 0:
            v = np.zeros(len(c))
        elif nu.p == INF:
            sub = X.dist[c[:, :, None], c[:, None, :]]
            v = sub.reshape(len(c), -1).max(axis=1)
        else:
            w = subset_weights(nu, X, [tuple(r) for r in c.tolist()])
            v = np.array([w[tuple(r)] for r in c.tolist()], dtype=np.float64)
        if max_value is not None:
            keep = v <= max_value
            c, v = c[keep], v[keep]
        cells.append(c)
        values.append(v)
    return FilteredComplex(cells, values, check=False)


class SimplicialComplex:
    """Finite downward-closed family of vertex sets, optionally with values."""

    def __init__(self, simplices: Iterable[Sequence[int]] = (), closure: bool = True):
        faces: set[tuple[int, ...]] = set()
        for s in simplices:
            s = tuple(sorted(set(int(v) for v in s)))
            if not s:
                continue
            if closure:
                for k in range(1, len(s) + 1):
                    faces.update(itertools.combinations(s, k))
            else:
                faces.add(s)
        if not closure:
            for s in faces:
                for k in range(1, len(s)):
                    for f in itertools.combinations(s, k):
                        if f not in faces:
                            raise FiltrationError(f"simplex {s} has missing face {f}", s)
        self.faces = frozenset(faces)

    def __contains__(self, s) -> bool:
        return tuple(sorted(set(int(v) for v in s))) in self.faces

    def __len__(self) -> int:
        return len(self.faces)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.faces == other.faces

    __hash__ = None

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.faces), default=0) - 1

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self.faces if len(s) == 1)

    def simplices(self, d: int) -> list[tuple[int, ...]]:
        return sorted(s for s in self.faces if len(s) == d + 1)

    def induced(self, vertex_set: Iterable[int]) -> "SimplicialComplex":
        U = set(int(v) for v in vertex_set)
        return SimplicialComplex((s for s in self.faces if U.issuperset(s)), closure=False)

    def chain_complex(self, max_dim: int | None = None) -> FilteredComplex:
        """Simplicial chains (all values 0)."""
        if not self.faces:
            F = FilteredComplex([np.zeros((0, 1), np.int64)], [np.zeros(0)], check=False)
            F.complete = True
            return F
        top = self.dim if max_dim is None else max_dim
        F = FilteredComplex.from_simplices([(s, 0.0) for s in self.faces if len(s) <= top + 1], check=False)
        F.complete = top >= self.dim
        return F

    def __repr__(self):
        return f"SimplicialComplex({sorted(self.faces, key=lambda s: (len(s), s))})"


def slice_at(F: FilteredComplex, L: LeftInterval) -> SimplicialComplex:
    """Simplices of ``F`` whose value lies in ``L``."""
    keep = []
    for d in range(F.max_dim + 1):
        mask = L.mask(F.values(d))
        keep.extend(tuple(r) for r in F.cells(d)[mask].tolist())
    return SimplicialComplex(keep, closure=False)


# --------------------------------------------------------------------------
# tuple complexes


class TupleChainComplex(ChainComplex):
    """Normalized chains on consecutive-distinct tuples.

    With ``relative_to`` set, this is the quotient of the complex by its
    subcomplex of cells with value in that interval: such cells are absent from
    the basis and faces landing on them are zero.
    """

    kind = "tuple_complex"

    def __init__(self, cells, values, relative: bool = False):
        super().__init__(cells, values)
        self._missing_faces = "drop" if relative else "error"
        self.relative = relative

    def _faces(self, n: int):
        c = self.cells(n)
        for i in range(n + 1):
            if 0 < i < n:
                ok = c[:, i - 1] != c[:, i + 1]
            else:
                ok = np.ones(len(c), dtype=bool)
            cols = np.flatnonzero(ok).astype(np.int64)
            yield i, cols, np.delete(c[ok], i, axis=1)

    def to_json(self, key: str = "tuple") -> str:
        return super().to_json(key)

    def quotient(self, sub: LeftInterval) -> "TupleChainComplex":
        """Relative complex ``C / C_sub`` where ``C_sub`` has all cells with value in ``sub``."""
        cells, values = [], []
        for n in range(self.max_deg + 1):
            keep = ~sub.mask(self.values(n))
            cells.append(self.cells(n)[keep])
            values.append(self.values(n)[keep])
        return TupleChainComplex(cells, values, relative=True)


def _grow_tuples(
    vertices: Sequence[int], max_deg: int, accept: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
) -> TupleChainComplex:
    # extending lex-sorted parents by increasing last letters keeps lex order;
    # acceptance must be closed under the last face for this to be complete
    verts = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
    cells, values = [], []
    cur = verts[:, None]
    keep, vals = accept(cur)
    cur, vals = cur[keep], vals[keep]
    cells.append(cur)
    values.append(vals)
    for n in range(1, max_deg + 1):
        if len(cur) == 0:
            cells.append(np.zeros((0, n + 1), dtype=np.int64))
            values.append(np.zeros(0))
            continue
        _guard(len(cur) * max(len(verts) - 1, 0), f"degree {n} tuple candidates")
        parent = np.repeat(cur, len(verts), axis=0)
        last = np.tile(verts, len(cur))
        cand = np.column_stack([parent, last])
        cand = cand[cand[:, -2] != cand[:, -1]]
        keep, vals = accept(cand)
        cur, vals = cand[keep], vals[keep]
        _guard(len(cur), f"degree {n} of the tuple complex")
        cells.append(cur)
        values.append(vals)
    return TupleChainComplex(cells, values)


def build_tuple_complex(
    X: FiniteMetricSpace,
    nu: NormDescriptor,
    L: LeftInterval,
    max_deg: int,
    vertices: Sequence[int] | None = None,
) -> TupleChainComplex:
    """Normalized chains of the nu-Vietoris-Rips simplicial set at ``L``.

    Degree ``n`` basis: consecutive-distinct ``(n+1)``-tuples of points (from
    ``vertices``, default all) whose weight lies in ``L``.
    """
    if max_deg < 0:
        raise ValueError("max_deg must be nonnegative")
    if vertices is None:
        vertices = range(X.size)

    def accept(T):
        w = tuple_weights(nu, X, T) if T.shape[1] > 1 else np.zeros(len(T))
        return L.mask(w), w

    return _grow_tuples(vertices, max_deg, accept)


def ss_of_complex(K: SimplicialComplex, max_deg: int) -> TupleChainComplex:
    """Normalized chains of SS(K): consecutive-distinct tuples with support in ``K``."""

    def accept(T):
        ok = np.array([tuple(sorted(set(r))) in K.faces for r in T.tolist()], dtype=bool)
        return ok, np.zeros(len(T))

    return _grow_tuples(K.vertices, max_deg, accept)


# --------------------------------------------------------------------------
# covers, nerves, inclusions


def nerve_complex(cover: Sequence[Iterable[int]], K: SimplicialComplex | None = None) -> SimplicialComplex:
    """Nerve of the family of induced subcomplexes ``K[U_i]``.

    When ``K`` is given the induced subcomplexes must cover it; otherwise the
    cover sets are intersected as plain vertex sets.
    """
    sets = [frozenset(int(v) for v in U) for U in cover]
    if K is not None:
        verts = set(K.vertices)
        sets = [U & verts for U in sets]
        for s in sorted(K.faces, key=lambda s: (len(s), s)):
            if not any(U.issuperset(s) for U in sets):
                raise CoverError(f"simplex {list(s)} lies in no cover element", s)
    nerve = []
    k = len(sets)
    for size in range(1, k + 1):
        found = False
        for idx in itertools.combinations(range(k), size):
            inter = frozenset.intersection(*(sets[i] for i in idx))
            if inter:
                nerve.append(idx)
                found = True
        if not found:
            break
    return SimplicialComplex(nerve, closure=False)


def ellipse_cover_criterion(
    X: FiniteMetricSpace, nu: NormDescriptor, L: LeftInterval, cover: Sequence[Iterable[int]]
) -> tuple[bool, tuple | None]:
    """For every ``x, y`` with ``d(x, y)`` in ``L``, is the ellipse ``Ell(x, y)`` inside one cover set?

    Returns ``(ok, witness)`` with ``witness = (x, y, stray point)`` on failure.
    """
    sets = [set(int(v) for v in U) for U in cover]
    m = X.size
    triples = np.array([(x, a, y) for x in range(m) for y in range(m) for a in range(m)], dtype=np.int64)
    w = tuple_weights(nu, X, triples).reshape(m, m, m)
    for x in range(m):
        for y in range(m):
            if float(X.dist[x, y]) not in L:
                continue
            ell = {a for a in range(m) if float(w[x, y, a]) in L}
            if not any(ell <= U for U in sets):
                stray = None
                for U in sets:
                    out = sorted(ell - U)
                    if out:
                        stray = out[0]
                        break
                return False, (x, y, stray)
    return True, None


def sandwich_check(X: FiniteMetricSpace, nu: NormDescriptor, r: float, n: int) -> dict:
    """Check ``VR^1_L <= VR^nu_L <= VR^inf_L`` on tuple bases up to degree ``n``.

    Both ``L = (-inf, r]`` and ``(-inf, r)`` are checked, plus the skeleton
    inclusion ``VR^{inf,n}_{<r/C_n} <= VR^{nu,n}_{<r}`` in degree ``n``.
    """
    nu1 = NormDescriptor(1.0, nu.symmetric, nu.cyclic)
    nuinf = NormDescriptor(INF, nu.symmetric, nu.cyclic)
    failures = []

    def basis(norm, L):
        C = build_tuple_complex(X, norm, L, n)
        return [set(map(tuple, C.cells(k).tolist())) for k in range(n + 1)]

    for L in (LeftInterval.le(r), LeftInterval.lt(r)):
        b1, bnu, binf = basis(nu1, L), basis(nu, L), basis(nuinf, L)
        for k in range(n + 1):
            for name, small, big in (("1<=nu", b1[k], bnu[k]), ("nu<=inf", bnu[k], binf[k])):
                extra = small - big
                if extra:
                    failures.append({"inclusion": name, "interval": str(L), "degree": k, "witness": sorted(extra)[0]})
    Cn = norm_constant(nu, n) if n >= 1 else 1.0
    low = basis(nuinf, LeftInterval.lt(r / Cn))[n]
    high = basis(nu, LeftInterval.lt(r))[n]
    extra = low - high
    if extra:
        failures.append({"inclusion": "skeleton", "interval": f"(-inf, {r / Cn!r})", "degree": n, "witness": sorted(extra)[0]})
    return {"pass": not failures, "r": r, "n": n, "norm": str(nu), "C_n": Cn, "failures": failures}


__all__ = [
    "ChainComplex",
    "FilteredComplex",
    "SimplicialComplex",
    "TupleChainComplex",
    "build_vr_filtration",
    "build_tuple_complex",
    "ss_of_complex",
    "slice_at",
    "nerve_complex",
    "ellipse_cover_criterion",
    "sandwich_check",
    "max_cells",
]
