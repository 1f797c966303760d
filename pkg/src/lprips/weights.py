"""nu-weights of tuples and finite subsets.

``tuple_weight`` runs the longest-path recurrence over index pairs ``i < j``
(edge weight ``d^p``, one root at the end); ``tuple_weight_oracle`` enumerates
every increasing subsequence and is kept only to check it.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import CapExceededError
from .metric import INF, SYMMETRIC_ORDER_CAP, FiniteMetricSpace, NormDescriptor

ORACLE_LENGTH_CAP = 20


def _check_tuple(X: FiniteMetricSpace, t: Sequence[int]) -> list[int]:
    t = [int(v) for v in t]
    if not t:
        raise ValueError("tuple must be nonempty")
    bad = [v for v in t if not 0 <= v < X.size]
    if bad:
        raise IndexError(f"tuple entries {bad} out of range for {X.size} points")
    return t


def support(t: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(set(int(v) for v in t)))


def tuple_weight(nu: NormDescriptor, X: FiniteMetricSpace, t: Sequence[int]) -> float:
    """``w_nu(x_0, ..., x_n) = nu(D(x_0, ..., x_n))``.

    For a symmetric ``nu`` the weight only depends on the support, so it is the
    subset weight of the support and the order cap applies to the support.
    """
    t = _check_tuple(X, t)
    if nu.symmetric:
        return subset_weight(nu, X, support(t))
    w = kernels.tuple_weights(X.dist, np.asarray([t], dtype=np.int64), nu.p, nu.cyclic)
    return float(w[0])


def tuple_weights(nu: NormDescriptor, X: FiniteMetricSpace, tuples) -> np.ndarray:
    """Batch version of :func:`tuple_weight` over the rows of a 2-D array."""
    T = np.asarray(tuples, dtype=np.int64)
    if T.ndim != 2:
        raise ValueError("tuples must be a 2-D array")
    if T.shape[0] == 0:
        return np.empty(0, dtype=np.float64)
    if not nu.symmetric:
        return kernels.tuple_weights(X.dist, T, nu.p, nu.cyclic)
    supports = [support(row) for row in T.tolist()]
    cache = subset_weights(nu, X, sorted(set(supports)))
    return np.array([cache[s] for s in supports], dtype=np.float64)


def subset_weights(nu: NormDescriptor, X: FiniteMetricSpace, subsets) -> dict[tuple, float]:
    """Subset weights keyed by sorted vertex tuple; rows may have mixed sizes."""
    by_size: dict[int, list[tuple]] = {}
    for s in subsets:
        by_size.setdefault(len(s), []).append(tuple(s))
    out = {}
    for k, group in by_size.items():
        if k > SYMMETRIC_ORDER_CAP and nu.p != INF:
            raise CapExceededError(
                f"subset of size {k} exceeds the permutation-search cap {SYMMETRIC_ORDER_CAP}", group[0]
            )
        w, _ = kernels.subset_weights(X.dist, np.asarray(group, dtype=np.int64), nu.p, nu.cyclic)
        out.update(zip(group, w.tolist()))
    return out


def subset_weight(nu: NormDescriptor, X: FiniteMetricSpace, s: Sequence[int], return_order: bool = False):
    """``w(tau) = min over orderings pi of w_nu(x_pi(0), ..., x_pi(n))``.

    The minimising ordering (first in lexicographic order among ties) is
    returned as a tuple of points when ``return_order`` is set.
    """
    s = sorted(set(_check_tuple(X, s)))
    if len(s) > SYMMETRIC_ORDER_CAP and nu.p != INF:
        raise CapExceededError(f"subset of size {len(s)} exceeds the permutation-search cap {SYMMETRIC_ORDER_CAP}", tuple(s))
    w, orders = kernels.subset_weights(X.dist, np.asarray([s], dtype=np.int64), nu.p, nu.cyclic)
    if return_order:
        return float(w[0]), tuple(s[i] for i in orders[0])
    return float(w[0])


def _power_sum(values, p):
    acc = 0.0
    for v in values:
        acc = acc + (v if p == 1.0 else v ** p)
    return acc


def tuple_weight_oracle(nu: NormDescriptor, X: FiniteMetricSpace, t: Sequence[int]) -> float:
    """Exhaustive max over all increasing subsequences of length >= 2."""
    t = _check_tuple(X, t)
    if nu.symmetric:
        raise ValueError("the enumeration oracle is for non-symmetric norms")
    n = len(t)
    if n > ORACLE_LENGTH_CAP:
        raise CapExceededError(f"oracle tuple length {n} exceeds {ORACLE_LENGTH_CAP}", n)
    D = X.dist
    best = 0.0
    for m in range(2, n + 1):
        for sub in itertools.combinations(range(n), m):
            steps = [float(D[t[a], t[b]]) for a, b in zip(sub, sub[1:])]
            if nu.cyclic:
                steps.append(float(D[t[sub[-1]], t[sub[0]]]))
            if nu.p == INF:
                val = max(steps)
            else:
                val = _power_sum(steps, nu.p)
            best = max(best, val)
    if nu.p == INF:
        return best
    if nu.p == 1.0:
        return best * 0.5 if nu.cyclic else best
    if nu.cyclic:
        return (best * 0.5) ** (1.0 / nu.p)
    return best ** (1.0 / nu.p)


def subset_weight_oracle(nu: NormDescriptor, X: FiniteMetricSpace, s: Sequence[int]) -> float:
    """Plain loop over all permutations, no pruning."""
    s = sorted(set(_check_tuple(X, s)))
    base = NormDescriptor(nu.p, False, nu.cyclic)
    perms = list(itertools.permutations(s))
    w = kernels.tuple_weights(X.dist, np.asarray(perms, dtype=np.int64), base.p, base.cyclic)
    return float(w.min())


def lp_combine(values, p: float) -> float:
    """``||values||_p``, the iterated monoid product ``r_1 (x) ... (x) r_n``."""
    values = [float(v) for v in values]
    if not values:
        return 0.0
    if p == INF:
        return max(values)
    return _power_sum(values, p) ** (1.0 / p)


def _cho_powers(X: FiniteMetricSpace, t: list[int], p: float) -> list[float]:
    # least r_k^p = max_i (d(x_i, x_k)^p - sum_{i<j<k} r_j^p), clamped at 0
    D = X.dist
    powers: list[float] = []
    for k in range(1, len(t)):
        need = 0.0
        for i in range(k):
            d = float(D[t[i], t[k]])
            slack = (d if p == 1.0 else d ** p) - sum(powers[i:k - 1])
            if slack > need:
                need = slack
        powers.append(need)
    return powers


def cho_radii(X: FiniteMetricSpace, t: Sequence[int], p: float) -> list[float]:
    """Least ``r_1, ..., r_n`` with ``d(x_i, x_k) <= r_{i+1} (x) ... (x) r_k`` for ``i < k``."""
    t = _check_tuple(X, t)
    if p == INF:
        D = X.dist
        radii: list[float] = []
        for k in range(1, len(t)):
            r = 0.0
            for i in range(k):
                d = float(D[t[i], t[k]])
                if max(radii[i:k - 1], default=0.0) < d and d > r:
                    r = d
            radii.append(r)
        return radii
    powers = _cho_powers(X, t, p)
    return powers if p == 1.0 else [x ** (1.0 / p) for x in powers]


def cho_membership(X: FiniteMetricSpace, t: Sequence[int], r: float, p: float) -> bool:
    """Membership of ``t`` in Cho's closed l_p Vietoris-Rips simplicial set at scale ``r``."""
    t = _check_tuple(X, t)
    if len(t) == 1:
        return r >= 0
    if p == INF:
        return max(cho_radii(X, t, p)) <= r
    total = sum(_cho_powers(X, t, p))
    return (total if p == 1.0 else total ** (1.0 / p)) <= r


def diameter(X: FiniteMetricSpace, t: Sequence[int]) -> float:
    idx = list(set(int(v) for v in t))
    return float(X.distance_matrix(idx).max()) if len(idx) > 1 else 0.0


def is_nondegenerate(t: Sequence) -> bool:
    return all(a != b for a, b in zip(t, t[1:]))


__all__ = [
    "tuple_weight",
    "tuple_weights",
    "tuple_weight_oracle",
    "subset_weight",
    "subset_weights",
    "subset_weight_oracle",
    "cho_radii",
    "cho_membership",
    "lp_combine",
    "support",
    "diameter",
    "is_nondegenerate",
]
