"""Homology, persistence and magnitude homology over prime fields.

All linear algebra goes through ``kernels.reduce_columns`` (left-to-right
column reduction mod p) on the CSC boundary triples of ``complexes``.
Chains outside the kernels are ``{cell index: coefficient}`` dicts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ._backend import kernels
from .complexes import (
    ChainComplex,
    SimplicialComplex,
    TupleChainComplex,
    build_tuple_complex,
    ellipse_cover_criterion,
    nerve_complex,
)
from .errors import CoverError, FiltrationError, MapError
from .metric import INF, FiniteMetricSpace, LeftInterval, NormDescriptor

# --------------------------------------------------------------------------
# fields and small dense linear algebra


@dataclass(frozen=True)
class PrimeField:
    p: int = 2

    def __post_init__(self):
        p = int(self.p)
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"field characteristic must be prime, got {self.p!r}")
        object.__setattr__(self, "p", p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)

    def __str__(self):
        return f"Z/{self.p}"


def _char(field) -> int:
    return field.p if isinstance(field, PrimeField) else PrimeField(int(field)).p


def matrix_rank(M, p: int) -> int:
    """Rank of an integer matrix mod ``p`` (dense Gaussian elimination)."""
    A = np.array(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = np.flatnonzero(A[r:, c])
        if len(piv) == 0:
            continue
        k = r + int(piv[0])
        A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if len(others):
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        r += 1
        if r == rows:
            break
    return r


def _unpack(csc, j: int) -> dict[int, int]:
    indptr, idx, data = csc
    a, b = indptr[j], indptr[j + 1]
    return dict(zip(idx[a:b].tolist(), data[a:b].tolist()))


def _axpy(z: dict, c: int, col: dict, p: int) -> None:
    for r, v in col.items():
        nv = (z.get(r, 0) + c * v) % p
        if nv:
            z[r] = nv
        else:
            z.pop(r, None)


def _reduce(C: ChainComplex, n: int, p: int, track: bool = False, clear=None):
    indptr, idx, data = C.boundary(n)
    return kernels.reduce_columns(indptr, idx, data, p, clear, track)


# --------------------------------------------------------------------------
# homology


@dataclass
class HomologyBasis:
    """Cycle representatives of a basis of ``H_n``, with coordinates of arbitrary cycles."""

    degree: int
    p: int
    representatives: list[dict[int, int]]
    _pivots: dict[int, tuple[dict, int]] = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.representatives)

    def coordinates(self, chain: dict[int, int]) -> np.ndarray:
        """Coefficients of the class of the cycle ``chain`` in this basis."""
        z = {int(k): int(v) % self.p for k, v in chain.items() if int(v) % self.p}
        out = np.zeros(self.rank, dtype=np.int64)
        while z:
            lo = max(z)
            hit = self._pivots.get(lo)
            if hit is None:
                raise ValueError(f"chain is not a cycle (stray cell {lo})")
            col, k = hit
            c = (z[lo] * pow(col[lo], -1, self.p)) % self.p
            if k >= 0:
                out[k] = (out[k] + c) % self.p
            _axpy(z, -c, col, self.p)
        return out

    def cells(self, C: ChainComplex) -> list[list[tuple[tuple[int, ...], int]]]:
        """Representatives spelled out as ``(cell, coefficient)`` lists."""
        cells = C.cells(self.degree).tolist()
        return [[(tuple(cells[i]), c) for i, c in sorted(z.items())] for z in self.representatives]


def _check_degree(C: ChainComplex, n: int) -> None:
    if not C.homology_valid(n):
        raise ValueError(f"degree {n} needs degree {n + 1} cells; complex stops at degree {C.max_deg}")


def homology(C: ChainComplex, n: int, field=2) -> HomologyBasis:
    """Basis of ``H_n(C)`` over ``Z/p``."""
    _check_degree(C, n)
    p = _char(field)
    N = C.size(n)
    low_n, _, V = _reduce(C, n, p, track=True)
    low_up, R_up, _ = _reduce(C, n + 1, p)
    killed = set(low_up[low_up >= 0].tolist())
    pivots: dict[int, tuple[dict, int]] = {}
    for j in np.flatnonzero(low_up >= 0).tolist():
        pivots[int(low_up[j])] = (_unpack(R_up, j), -1)
    reps = []
    for j in range(N):
        if low_n[j] < 0 and j not in killed:
            z = _unpack(V, j) if n > 0 else {j: 1}
            pivots[j] = (z, len(reps))
            reps.append(z)
    return HomologyBasis(n, p, reps, pivots)


def betti(C: ChainComplex, n: int, field=2) -> int:
    """``dim ker d_n - rank d_{n+1}``."""
    _check_degree(C, n)
    p = _char(field)
    rank_n = int(np.count_nonzero(_reduce(C, n, p)[0] >= 0)) if n > 0 else 0
    rank_up = int(np.count_nonzero(_reduce(C, n + 1, p)[0] >= 0))
    return C.size(n) - rank_n - rank_up


def reduced_betti(C: ChainComplex, n: int, field=2) -> int:
    b = betti(C, n, field)
    if n == 0 and C.size(0) > 0:
        b -= 1
    return b


def boundary_squared_zero(C: ChainComplex, field=2) -> bool:
    p = _char(field)
    for n in range(2, C.max_deg + 1):
        A = C.boundary_dense(n - 1)
        B = C.boundary_dense(n)
        if A.size and B.size and np.any((A @ B) % p):
            return False
    return True


# --------------------------------------------------------------------------
# persistence


@dataclass
class Barcode:
    """Bars ``[birth, death)`` with ``death = inf`` for essential classes."""

    bars: list[tuple[int, float, float]] = field(default_factory=list)

    def __post_init__(self):
        self.bars = sorted((int(d), float(b), float(e)) for d, b, e in self.bars)

    def __len__(self):
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def __eq__(self, other):
        return isinstance(other, Barcode) and self.bars == other.bars

    def in_dim(self, dim: int) -> list[tuple[float, float]]:
        return [(b, e) for d, b, e in self.bars if d == dim]

    @property
    def dims(self) -> list[int]:
        return sorted({d for d, _, _ in self.bars})

    def betti_at(self, r: float, dim: int, strict: bool = False) -> int:
        """Rank at ``(-inf, r)`` (``b < r <= d``) or at ``(-inf, r]`` (``b <= r < d``)."""
        if strict:
            return sum(1 for b, e in self.in_dim(dim) if b < r <= e)
        return sum(1 for b, e in self.in_dim(dim) if b <= r < e)

    def dominant(self, dim: int) -> tuple[float, float] | None:
        """Bar of maximal persistence, earliest birth among ties."""
        bars = self.in_dim(dim)
        if not bars:
            return None
        return min(bars, key=lambda be: (-(be[1] - be[0]), be[0]))

    def to_tsv(self) -> str:
        return "".join(f"{d}\t{_fmt(b)}\t{_fmt(e)}\n" for d, b, e in self.bars)

    def to_json(self) -> str:
        return json.dumps([{"dim": d, "birth": b, "death": _fmt(e) if e == INF else e} for d, b, e in self.bars])

    @classmethod
    def from_tsv(cls, text: str) -> "Barcode":
        bars = []
        for line in text.splitlines():
            if line.strip():
                d, b, e = line.split("\t")
                bars.append((int(d), float(b), float(e)))
        return cls(bars)

    def to_svg(self, width: int = 600, bar_height: int = 8) -> str:
        """Standalone SVG: one band per dimension, essential bars run to the right edge."""
        finite = [v for _, b, e in self.bars for v in (b, e) if v != INF]
        top = max(finite, default=1.0) or 1.0
        span = top * 1.1
        margin, gap = 40, 4
        x = lambda v: margin + (width - 2 * margin) * (min(v, span) / span)
        rows, y = [], 20
        for dim in self.dims:
            rows.append(f'<text x="4" y="{y + bar_height}" font-size="10">H{dim}</text>')
            for b, e in self.in_dim(dim):
                rows.append(
                    f'<rect x="{x(b):.6f}" y="{y}" width="{max(x(e) - x(b), 0.5):.6f}" height="{bar_height}" '
                    f'fill="{"#b22" if e == INF else "#225"}"><title>[{b:.6f}, {_fmt(e, 6)})</title></rect>'
                )
                y += bar_height + gap
            y += 3 * gap
        height = y + 20
        axis = f'<line x1="{margin}" y1="{height - 15}" x2="{width - margin}" y2="{height - 15}" stroke="black"/>'
        ticks = "".join(
            f'<text x="{x(t):.6f}" y="{height - 3}" font-size="9" text-anchor="middle">{t:.6f}</text>'
            for t in (0.0, top / 2, top)
        )
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            + "".join(rows) + axis + ticks + "</svg>\n"
        )


def _fmt(v: float, digits: int | None = None) -> str:
    if v == INF:
        return "inf"
    return f"{v:.{digits}f}" if digits is not None else repr(float(v))


def _filtration_order(C: ChainComplex) -> list[np.ndarray]:
    return [np.argsort(C.values(n), kind="stable") for n in range(C.max_deg + 1)]


def _check_monotone(C: ChainComplex) -> None:
    for n in range(1, C.max_deg + 1):
        indptr, idx, _ = C.boundary(n)
        cols = np.repeat(np.arange(C.size(n)), np.diff(indptr))
        bad = C.values(n - 1)[idx] > C.values(n)[cols]
        if bad.any():
            j = int(cols[np.flatnonzero(bad)[0]])
            raise FiltrationError(f"non-monotone filtration at degree-{n} cell {C.cells(n)[j].tolist()}", j)


def persistence(C: ChainComplex, field=2, max_dim: int | None = None) -> Barcode:
    """Barcode of the filtration by cell values (sorted by value, ties by basis order).

    Uses clearing: degrees are reduced top-down and columns that are already
    known pivots of the degree above are skipped.  Dimensions above
    ``max_dim`` (default: every dimension whose homology the stored degrees
    determine) are not reported.
    """
    p = _char(field)
    _check_monotone(C)
    order = _filtration_order(C)
    P = C.reordered(order)
    top = P.max_deg
    report = [n for n in range(top + 1) if P.homology_valid(n)]
    if max_dim is not None:
        report = [n for n in report if n <= max_dim]
    lows: dict[int, np.ndarray] = {}
    for n in range(top, 0, -1):
        if n - 1 not in report and n not in report:
            continue
        clear = None
        if n + 1 in lows:
            clear = np.zeros(P.size(n), dtype=np.uint8)
            up = lows[n + 1]
            clear[up[up >= 0]] = 1
        lows[n] = _reduce(P, n, p, clear=clear)[0]
    bars = []
    for n in report:
        vals = P.values(n)
        low_here = lows.get(n)
        low_up = lows.get(n + 1, np.full(P.size(n + 1), -1, dtype=np.int64))
        paired = np.zeros(P.size(n), dtype=bool)
        up_vals = P.values(n + 1)
        for j in np.flatnonzero(low_up >= 0).tolist():
            i = int(low_up[j])
            paired[i] = True
            b, d = float(vals[i]), float(up_vals[j])
            if b < d:
                bars.append((n, b, d))
        for i in range(P.size(n)):
            negative = low_here is not None and low_here[i] >= 0
            if not negative and not paired[i]:
                bars.append((n, float(vals[i]), INF))
    return Barcode(bars)


# --------------------------------------------------------------------------
# chain maps


def _as_function(vertex_map) -> Callable[[int], int]:
    if callable(vertex_map):
        return lambda v: int(vertex_map(v))
    if isinstance(vertex_map, dict):
        return lambda v: int(vertex_map[v])
    arr = list(vertex_map)
    return lambda v: int(arr[v])


def image_cell(kind: str, cell: Sequence[int], f: Callable[[int], int]) -> tuple[tuple[int, ...] | None, int]:
    """Image of a basis cell under a vertex map, as ``(cell, sign)``; ``None`` if it is zero.

    Tuples: zero when a consecutive repeat appears.  Simplices: zero on a
    repeated vertex, otherwise sorted with the sign of the sorting permutation.
    """
    img = [f(int(v)) for v in cell]
    if kind == "tuple_complex":
        if any(a == b for a, b in zip(img, img[1:])):
            return None, 0
        return tuple(img), 1
    if len(set(img)) < len(img):
        return None, 0
    order = sorted(range(len(img)), key=lambda k: img[k])
    sign = 1
    seen = [False] * len(order)
    for s in range(len(order)):
        if seen[s]:
            continue
        k, length = s, 0
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return tuple(img[k] for k in order), sign


def push_chain(
    source: ChainComplex, target: ChainComplex, n: int, chain: dict[int, int], vertex_map, p: int, missing: str = "error"
) -> dict[int, int]:
    f = _as_function(vertex_map)
    cells = source.cells(n)
    out: dict[int, int] = {}
    for i, c in chain.items():
        img, sign = image_cell(source.kind, cells[i].tolist(), f)
        if img is None:
            continue
        j = int(target.find(n, [img])[0])
        if j < 0:
            if missing == "zero":
                continue
            raise MapError(f"cell {cells[i].tolist()} maps to {list(img)}, which is not in the target", (cells[i].tolist(), list(img)))
        v = (out.get(j, 0) + sign * c) % p
        if v:
            out[j] = v
        else:
            out.pop(j)
    return out


def induced_map(
    source: ChainComplex,
    target: ChainComplex,
    vertex_map,
    degree: int,
    field=2,
    missing: str = "error",
    bases: tuple[HomologyBasis, HomologyBasis] | None = None,
) -> np.ndarray:
    """Matrix of ``H_n(source) -> H_n(target)`` in the bases of :func:`homology`.

    Column ``k`` holds the target coordinates of the image of the ``k``-th
    source class.  ``missing="zero"`` treats cells absent from the target as
    zero (maps into a relative complex).
    """
    p = _char(field)
    if bases is None:
        bases = (homology(source, degree, p), homology(target, degree, p))
    Hs, Ht = bases
    M = np.zeros((Ht.rank, Hs.rank), dtype=np.int64)
    for k, z in enumerate(Hs.representatives):
        M[:, k] = Ht.coordinates(push_chain(source, target, degree, z, vertex_map, p, missing))
    return M


# --------------------------------------------------------------------------
# magnitude homology


def magnitude_complex(X: FiniteMetricSpace, r: float, variant: str, max_deg: int) -> TupleChainComplex:
    nu1 = NormDescriptor(1.0)
    if variant == "strict":
        return build_tuple_complex(X, nu1, LeftInterval.lt(r), max_deg)
    if variant == "nonstrict":
        return build_tuple_complex(X, nu1, LeftInterval.le(r), max_deg)
    if variant == "graded":
        return build_tuple_complex(X, nu1, LeftInterval.le(r), max_deg).quotient(LeftInterval.lt(r))
    raise ValueError(f"unknown variant {variant!r} (strict | nonstrict | graded)")


def magnitude_homology(X: FiniteMetricSpace, r: float, variant: str, n: int, field=2) -> tuple[int, HomologyBasis]:
    """``MH_{n,<r}``, ``MH_{n,<=r}`` or ``MH_{n,r}`` (the quotient of the two), with a basis.

    The graded group is the homology of the relative complex: tuples of weight
    exactly ``r``, faces of smaller weight set to zero.  This is the reduced
    homology of the quotient simplicial set.
    """
    C = magnitude_complex(X, r, variant, n + 1)
    H = homology(C, n, field)
    return H.rank, H


def realized_weights(X: FiniteMetricSpace, max_deg: int, nu: NormDescriptor | None = None) -> list[float]:
    nu = nu or NormDescriptor(1.0)
    C = build_tuple_complex(X, nu, LeftInterval.everything(), max_deg)
    vals = set()
    for n in range(max_deg + 1):
        vals.update(C.values(n).tolist())
    return sorted(vals)


def les_magnitude_check(X: FiniteMetricSpace, r: float, n: int, field=2) -> dict:
    """Exactness of ``MH_{n,<r} -> MH_{n,<=r} -> MH_{n,r}`` at the middle term."""
    p = _char(field)
    A = magnitude_complex(X, r, "strict", n + 1)
    B = magnitude_complex(X, r, "nonstrict", n + 1)
    Q = B.quotient(LeftInterval.lt(r))
    HA, HB, HQ = homology(A, n, p), homology(B, n, p), homology(Q, n, p)
    ident = list(range(X.size))
    i_star = induced_map(A, B, ident, n, p, bases=(HA, HB))
    q_star = induced_map(B, Q, ident, n, p, missing="zero", bases=(HB, HQ))
    comp = (q_star @ i_star) % p if i_star.size and q_star.size else np.zeros((HQ.rank, HA.rank), dtype=np.int64)
    rank_i = matrix_rank(i_star, p)
    rank_q = matrix_rank(q_star, p)
    composite_zero = not np.any(comp)
    exact = composite_zero and rank_i == HB.rank - rank_q
    return {
        "r": r,
        "n": n,
        "field": p,
        "dims": {"strict": HA.rank, "nonstrict": HB.rank, "graded": HQ.rank},
        "rank_inclusion": rank_i,
        "rank_quotient": rank_q,
        "composite_zero": composite_zero,
        "exact": exact,
    }


# --------------------------------------------------------------------------
# prism homotopy


def _nondegenerate(t) -> bool:
    return all(a != b for a, b in zip(t, t[1:]))


def _tuple_boundary(t: tuple, p: int) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for i in range(len(t)):
        face = t[:i] + t[i + 1:]
        if len(t) > 1 and _nondegenerate(face):
            out[face] = (out.get(face, 0) + (-1 if i % 2 else 1)) % p
    return {k: v for k, v in out.items() if v}


def _add(acc: dict, chain: dict, c: int, p: int) -> None:
    for k, v in chain.items():
        nv = (acc.get(k, 0) + c * v) % p
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def prism(t: tuple, f: Callable[[int], int], g: Callable[[int], int], p: int) -> dict[tuple, int]:
    """``P(t) = sum_i (-1)^i (f x_0, ..., f x_i, g x_i, ..., g x_n)``, degenerate terms dropped."""
    out: dict[tuple, int] = {}
    for i in range(len(t)):
        h = tuple(f(v) for v in t[: i + 1]) + tuple(g(v) for v in t[i:])
        if _nondegenerate(h):
            _add(out, {h: 1}, -1 if i % 2 else 1, p)
    return out


def _push_tuple(t: tuple, f) -> dict[tuple, int]:
    img = tuple(f(v) for v in t)
    return {img: 1} if _nondegenerate(img) else {}


def chain_homotopy_check(f, g, source: TupleChainComplex, target: TupleChainComplex, field=2, max_deg: int | None = None) -> dict:
    """Verify ``dP + Pd = g_# - f_#`` on every source basis tuple up to ``max_deg``.

    Every prism tuple, and every image tuple, must lie in the target basis;
    otherwise :class:`MapError` names it.
    """
    p = _char(field)
    f, g = _as_function(f), _as_function(g)
    top = source.max_deg if max_deg is None else max_deg
    if top + 1 > target.max_deg:
        raise ValueError(f"target must be built to degree {top + 1}")
    members = {n: set(map(tuple, target.cells(n).tolist())) for n in range(top + 2)}
    checked = 0
    for n in range(top + 1):
        for t in map(tuple, source.cells(n).tolist()):
            Pt = prism(t, f, g, p)
            for h in Pt:
                if h not in members[n + 1]:
                    raise MapError(f"prism tuple {list(h)} of {list(t)} is outside the target", h)
            lhs: dict = {}
            for h, c in Pt.items():
                _add(lhs, _tuple_boundary(h, p), c, p)
            for face, c in _tuple_boundary(t, p).items():
                _add(lhs, prism(face, f, g, p), c, p)
            rhs: dict = {}
            _add(rhs, _push_tuple(t, g), 1, p)
            _add(rhs, _push_tuple(t, f), -1, p)
            for img in rhs:
                if img not in members[n]:
                    raise MapError(f"image {list(img)} of {list(t)} is outside the target", img)
            if lhs != rhs:
                return {"holds": False, "witness": list(t), "degree": n, "checked": checked, "field": p}
            checked += 1
    return {"holds": True, "witness": None, "checked": checked, "field": p}


def lipschitz_shift(X: FiniteMetricSpace, Y: FiniteMetricSpace, f, g, L: LeftInterval, a: float = 1.0) -> float:
    """Least ``b`` making ``(f, g)`` an ``L``-local ``(a, b)``-Lipschitz pair.

    Pairs ``(x, x')`` with ``d(x, x')`` in ``L`` (including ``x = x'``) must
    satisfy ``d(u x, v x') <= a d(x, x') + b`` for all ``u, v`` in ``{f, g}``.
    """
    f, g = _as_function(f), _as_function(g)
    b = 0.0
    for x in range(X.size):
        for y in range(X.size):
            d = float(X.dist[x, y])
            if d not in L:
                continue
            for u in (f, g):
                for v in (f, g):
                    b = max(b, float(Y.dist[u(x), v(y)]) - a * d)
    return b


# --------------------------------------------------------------------------
# covers


def mayer_vietoris_check(
    X: FiniteMetricSpace, U: Iterable[int], V: Iterable[int], nu: NormDescriptor, L: LeftInterval, n: int, field=2
) -> dict:
    """Exactness of ``H_n(U cap V) -> H_n(U) + H_n(V) -> H_n(X)`` at the middle term."""
    p = _char(field)
    U, V = sorted(set(int(v) for v in U)), sorted(set(int(v) for v in V))
    ok, witness = ellipse_cover_criterion(X, nu, L, [U, V])
    if not ok:
        x, y, a = witness
        raise CoverError(f"ellipse with foci ({x},{y}) contains {a}, escaping both cover sets", witness)
    W = sorted(set(U) & set(V))
    build = lambda verts: build_tuple_complex(X, nu, L, n + 1, vertices=verts)
    CU, CV, CW, CX = build(U), build(V), build(W), build(range(X.size))
    HU, HV, HW, HX = (homology(C, n, p) for C in (CU, CV, CW, CX))
    ident = list(range(X.size))
    iU = induced_map(CW, CU, ident, n, p, bases=(HW, HU))
    iV = induced_map(CW, CV, ident, n, p, bases=(HW, HV))
    jU = induced_map(CU, CX, ident, n, p, bases=(HU, HX))
    jV = induced_map(CV, CX, ident, n, p, bases=(HV, HX))
    alpha = np.vstack([iU, (-iV) % p]) % p
    beta = np.hstack([jU, jV]) % p
    comp = (beta @ alpha) % p if alpha.size and beta.size else np.zeros((HX.rank, HW.rank), dtype=np.int64)
    ra, rb = matrix_rank(alpha, p), matrix_rank(beta, p)
    middle = HU.rank + HV.rank
    counts = {
        k: {"X": CX.size(k), "U": CU.size(k), "V": CV.size(k), "UV": CW.size(k)} for k in range(n + 2)
    }
    euler_ok = all(c["X"] == c["U"] + c["V"] - c["UV"] for c in counts.values())
    exact = not np.any(comp) and ra + rb == middle
    return {
        "n": n,
        "field": p,
        "dims": {"UV": HW.rank, "U": HU.rank, "V": HV.rank, "X": HX.rank},
        "rank_alpha": ra,
        "rank_beta": rb,
        "composite_zero": not np.any(comp),
        "exact": exact,
        "chain_counts": counts,
        "inclusion_exclusion": euler_ok,
    }


def nerve_report(cover: Sequence[Iterable[int]], K: SimplicialComplex, max_deg: int, field=2) -> dict:
    """Nerve of ``cover`` over ``K`` and whether each ``K[U_sigma]`` is acyclic up to ``max_deg``.

    Acyclicity up to a degree is weaker than contractibility, which the nerve
    theorem actually needs; the report says so.
    """
    p = _char(field)
    N = nerve_complex(cover, K)
    sets = [set(int(v) for v in U) for U in cover]
    acyclic = {}
    for sigma in sorted(N.faces, key=lambda s: (len(s), s)):
        inter = set.intersection(*(sets[i] for i in sigma))
        C = K.induced(inter).chain_complex(max_deg + 1)
        acyclic[sigma] = all(
            reduced_betti(C, k, p) == 0 for k in range(max_deg + 1) if C.homology_valid(k)
        )
    KC, NC = K.chain_complex(), N.chain_complex()
    agree = all(
        betti(KC, k, p) == betti(NC, k, p) for k in range(max_deg + 1) if KC.homology_valid(k) and NC.homology_valid(k)
    )
    return {
        "nerve": sorted(N.faces, key=lambda s: (len(s), s)),
        "acyclic_up_to_degree": max_deg,
        "all_acyclic": all(acyclic.values()),
        "betti_agree": agree,
        "note": "acyclicity up to a finite degree is weaker than the contractibility the nerve theorem requires",
    }


__all__ = [
    "PrimeField",
    "HomologyBasis",
    "Barcode",
    "homology",
    "betti",
    "reduced_betti",
    "persistence",
    "induced_map",
    "magnitude_homology",
    "les_magnitude_check",
    "chain_homotopy_check",
    "lipschitz_shift",
    "mayer_vietoris_check",
    "nerve_report",
    "matrix_rank",
    "boundary_squared_zero",
]
