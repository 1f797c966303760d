"""Finite (pseudo)metric spaces and distance matrix norms.

A distance matrix here is a plain ``float64`` ndarray.  Norms are described by
:class:`NormDescriptor` and evaluated through the batch kernels in
``lprips._backend``; ``p = inf`` is ``math.inf``, never a large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import CapExceededError, MetricError

INF = math.inf

#: largest matrix order for which the min over permutations is brute-forced
SYMMETRIC_ORDER_CAP = 8

VALIDATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with a validated symmetric distance matrix."""

    labels: tuple
    dist: np.ndarray = field(repr=False)
    pseudo: bool = False

    def __post_init__(self):
        self.dist.setflags(write=False)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def distance_matrix(self, points: Sequence[int]) -> np.ndarray:
        idx = np.asarray(points, dtype=np.int64)
        return self.dist[np.ix_(idx, idx)]

    def subspace(self, points: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(points)
        return FiniteMetricSpace(
            tuple(self.labels[i] for i in idx), np.array(self.distance_matrix(idx)), self.pseudo
        )

    def diameter(self) -> float:
        return float(self.dist.max()) if self.size else 0.0

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.pseudo == other.pseudo
            and np.array_equal(self.dist, other.dist)
        )

    __hash__ = None


def validate_metric(matrix, pseudo: bool = False, labels=None, tol: float = VALIDATION_TOL) -> FiniteMetricSpace:
    """Check the (pseudo)metric axioms and wrap ``matrix``.

    Raises :class:`MetricError` naming the first offending indices.
    """
    D = np.array(matrix, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise MetricError(f"distance matrix must be square, got shape {D.shape}")
    n = D.shape[0]
    if n == 0:
        raise MetricError("distance matrix is empty")
    if not np.all(np.isfinite(D)):
        i, j = map(int, np.argwhere(~np.isfinite(D))[0])
        raise MetricError(f"non-finite entry at ({i},{j})", (i, j))
    bad = np.argwhere(D < 0)
    if len(bad):
        i, j = map(int, bad[0])
        raise MetricError(f"negative entry {float(D[i, j])!r} at ({i},{j})", (i, j))
    diag = np.flatnonzero(np.diag(D) != 0)
    if len(diag):
        i = int(diag[0])
        raise MetricError(f"nonzero diagonal entry {float(D[i, i])!r} at ({i},{i})", (i, i))
    bad = np.argwhere(np.abs(D - D.T) > tol)
    if len(bad):
        i, j = map(int, bad[0])
        raise MetricError(f"asymmetric entries at ({i},{j}): {float(D[i, j])!r} != {float(D[j, i])!r}", (i, j))
    D = np.minimum(D, D.T)
    # D[i,j] + D[j,k] >= D[i,k]
    viol = D[:, :, None] + D[None, :, :] < D[:, None, :] - tol
    if viol.any():
        i, j, k = map(int, np.argwhere(viol)[0])
        raise MetricError(
            f"triangle violation at ({i},{j},{k}): d({i},{j}) + d({j},{k}) = {float(D[i, j] + D[j, k])!r} < d({i},{k}) = {float(D[i, k])!r}",
            (i, j, k),
        )
    if not pseudo:
        off = D + np.eye(n)
        bad = np.argwhere(off == 0)
        if len(bad):
            i, j = map(int, bad[0])
            raise MetricError(f"zero distance between distinct points ({i},{j}); pass pseudo=True to allow", (i, j))
    if labels is None:
        labels = tuple(range(n))
    labels = tuple(labels)
    if len(labels) != n:
        raise MetricError(f"{len(labels)} labels for {n} points")
    return FiniteMetricSpace(labels, D, pseudo)


def restrict(D, indices: Sequence[int]) -> np.ndarray:
    """Pull a distance matrix back along a monotone index map ``f^*D = D(f x f)``.

    Dropping index ``i`` is the face ``d_i``; repeating it is the degeneracy ``s_i``.
    """
    D = np.asarray(D, dtype=np.float64)
    idx = np.asarray(list(indices), dtype=np.int64)
    if len(idx) == 0:
        raise IndexError("empty index list")
    if np.any(idx < 0) or np.any(idx >= D.shape[0]):
        raise IndexError(f"indices {idx.tolist()} out of range for order {D.shape[0]}")
    if np.any(np.diff(idx) < 0):
        raise ValueError(f"indices {idx.tolist()} are not monotone")
    return D[np.ix_(idx, idx)]


def face(D, i: int) -> np.ndarray:
    n = np.asarray(D).shape[0]
    return restrict(D, [k for k in range(n) if k != i])


def degeneracy(D, i: int) -> np.ndarray:
    n = np.asarray(D).shape[0]
    return restrict(D, sorted(list(range(n)) + [i]))


def ones_matrix(n: int) -> np.ndarray:
    """``E_n``: order ``n+1``, ones off the diagonal."""
    return np.ones((n + 1, n + 1)) - np.eye(n + 1)


@dataclass(frozen=True)
class LeftInterval:
    """``(-inf, bound)`` if strict, ``(-inf, bound]`` otherwise; ``bound = inf`` is all of R."""

    bound: float = INF
    strict: bool = False

    @classmethod
    def lt(cls, r: float) -> "LeftInterval":
        return cls(float(r), True)

    @classmethod
    def le(cls, r: float) -> "LeftInterval":
        return cls(float(r), False)

    @classmethod
    def everything(cls) -> "LeftInterval":
        return cls(INF, False)

    def __contains__(self, t: float) -> bool:
        if self.bound == INF:
            return True
        return t < self.bound if self.strict else t <= self.bound

    def contains(self, t: float) -> bool:
        return t in self

    def mask(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        if self.bound == INF:
            return np.ones(values.shape, dtype=bool)
        return values < self.bound if self.strict else values <= self.bound

    def scaled(self, a: float = 1.0, b: float = 0.0) -> "LeftInterval":
        """``a*L + b``."""
        if self.bound == INF:
            return self
        return LeftInterval(a * self.bound + b, self.strict)

    def __str__(self):
        if self.bound == INF:
            return "R"
        return f"(-inf, {self.bound!r}{')' if self.strict else ']'}"


@dataclass(frozen=True)
class NormDescriptor:
    """The norms nu_p, nu_p^sym, nu_p^c and nu_p^c.sym."""

    p: float = 1.0
    symmetric: bool = False
    cyclic: bool = False

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValueError(f"p must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)

    @classmethod
    def lp(cls, p: float, symmetric: bool = False, cyclic: bool = False) -> "NormDescriptor":
        return cls(parse_p(p), symmetric, cyclic)

    def with_symmetric(self, symmetric: bool = True) -> "NormDescriptor":
        return NormDescriptor(self.p, symmetric, self.cyclic)

    def __call__(self, D) -> float:
        return norm_eval(self, D)

    def constant(self, n: int) -> float:
        return norm_constant(self, n)

    def __str__(self):
        p = "inf" if self.p == INF else f"{self.p:g}"
        tag = "c" if self.cyclic else ""
        tag += ".sym" if self.symmetric and self.cyclic else ("sym" if self.symmetric else "")
        return f"nu_{p}" + (f"^{tag}" if tag else "")


def parse_p(p) -> float:
    if isinstance(p, str):
        if p.strip().lower() in {"inf", "infinity", "oo"}:
            return INF
        p = float(p)
    return float(p)


def norm_eval(nu: NormDescriptor, D) -> float:
    """Evaluate ``nu`` on a distance matrix (assumed valid)."""
    D = np.asarray(D, dtype=np.float64)
    order = D.shape[0]
    if order <= 1:
        return 0.0
    idx = np.arange(order, dtype=np.int64)[None, :]
    if nu.symmetric and nu.p != INF:
        if order > SYMMETRIC_ORDER_CAP:
            raise CapExceededError(
                f"symmetric norm on a matrix of order {order} exceeds the cap {SYMMETRIC_ORDER_CAP}", order
            )
        w, _ = kernels.subset_weights(D, idx, nu.p, nu.cyclic)
        return float(w[0])
    return float(kernels.tuple_weights(D, idx, nu.p, nu.cyclic)[0])


def norm_constant(nu: NormDescriptor, n: int) -> float:
    """``C_n(nu) = nu(E_n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return norm_eval(nu, ones_matrix(n))


def ellipse_membership(nu: NormDescriptor, X: FiniteMetricSpace, x: int, y: int, a: int, L: LeftInterval) -> bool:
    """Whether ``a`` lies in the nu-ellipse with foci ``x``, ``y``: ``w_nu(x, a, y) in L``."""
    return norm_eval(nu, X.distance_matrix([x, a, y])) in L


def ellipse(nu: NormDescriptor, X: FiniteMetricSpace, x: int, y: int, L: LeftInterval) -> list[int]:
    return [a for a in range(X.size) if ellipse_membership(nu, X, x, y, a, L)]


def kolmogorov_quotient(X: FiniteMetricSpace) -> tuple[FiniteMetricSpace, np.ndarray]:
    """Identify points at distance zero.

    Returns the quotient metric space and ``proj`` with ``proj[i]`` the class
    index of point ``i``; each class is represented by its smallest member.
    """
    n = X.size
    proj = np.full(n, -1, dtype=np.int64)
    reps = []
    for i in range(n):
        if proj[i] >= 0:
            continue
        members = np.flatnonzero((X.dist[i] == 0) & (proj < 0))
        proj[members] = len(reps)
        proj[i] = len(reps)
        reps.append(i)
    Q = FiniteMetricSpace(tuple(X.labels[i] for i in reps), np.array(X.distance_matrix(reps)), False)
    return Q, proj


def from_points(coords, metric: str = "euclidean", labels=None, pseudo: bool = False) -> FiniteMetricSpace:
    """Distance matrix of a point cloud.

    ``metric`` is ``euclidean``, ``l1`` or ``circle`` (geodesic on R/Z with
    perimeter 1; coordinates are reduced mod 1, only the first column is used).
    """
    P = np.asarray(coords, dtype=np.float64)
    if P.ndim == 1:
        P = P[:, None]
    if metric == "euclidean":
        diff = P[:, None, :] - P[None, :, :]
        D = np.sqrt((diff ** 2).sum(-1))
    elif metric == "l1":
        D = np.abs(P[:, None, :] - P[None, :, :]).sum(-1)
    elif metric in {"circle", "circle-geodesic"}:
        theta = np.mod(P[:, 0], 1.0)
        D = circle_distances(theta)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return validate_metric(D, pseudo=pseudo, labels=labels)


def circle_distances(theta) -> np.ndarray:
    theta = np.mod(np.asarray(theta, dtype=np.float64), 1.0)
    fwd = np.mod(theta[None, :] - theta[:, None], 1.0)
    return np.minimum(fwd, np.mod(-fwd, 1.0))
