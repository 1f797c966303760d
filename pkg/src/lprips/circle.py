"""Experiments on the perimeter-1 circle R/Z."""

from __future__ import annotations

import numpy as np

from ._backend import kernels
from .complexes import build_tuple_complex, build_vr_filtration
from .homology import Barcode, persistence
from .metric import INF, FiniteMetricSpace, LeftInterval, NormDescriptor, circle_distances, validate_metric
from .weights import lp_combine


def sample_circle(n: int, seed: int | None = None) -> FiniteMetricSpace:
    """``n`` equally spaced points, or ``n`` uniform random points when ``seed`` is given."""
    if n < 3:
        raise ValueError("need at least 3 circle points")
    if seed is None:
        theta = np.arange(n) / n
    else:
        theta = np.sort(np.random.default_rng(seed).random(n))
    return validate_metric(circle_distances(theta), labels=[float(t) for t in theta])


def threshold_formula(p: float) -> float:
    """``2^{1/p} / (2 + 2^{1/p})``; ``1/3`` at ``p = inf``."""
    if p == INF:
        return 1.0 / 3.0
    c = 2.0 ** (1.0 / p)
    return c / (2.0 + c)


def witness_triple(p: float) -> tuple[np.ndarray, float]:
    """Points ``-s, 0, s`` with ``s = 1/(2 + 2^{1/p})`` and the residual ``|d(x_0, x_2) - ||(s, s)||_p|``."""
    s = 1.0 / (2.0 + (1.0 if p == INF else 2.0 ** (1.0 / p)))
    theta = np.array([-s, 0.0, s])
    D = circle_distances(theta)
    return D, abs(float(D[0, 2]) - lp_combine([s, s], p))


def _triangle_stack(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # distance matrices of (0, a, a+b) on the circle, all gaps <= 1/2
    c = 1.0 - a - b
    far = np.minimum(a + b, c)
    M = np.zeros((len(a), 3, 3))
    M[:, 0, 1] = M[:, 1, 0] = a
    M[:, 1, 2] = M[:, 2, 1] = b
    M[:, 0, 2] = M[:, 2, 0] = far
    return M


def t_grid_search(nu: NormDescriptor, resolution: int = 1000, return_argmin: bool = False):
    """Minimum of ``w_nu(0, a, a+b)`` over grid gaps ``a, b, 1-a-b`` in ``[0, 1/2]``.

    Those are exactly the triples (in circular order) not inside an open semicircle.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100")
    N = int(resolution)
    i, j = np.meshgrid(np.arange(N + 1), np.arange(N + 1), indexing="ij")
    i, j = i.ravel(), j.ravel()
    k = N - i - j
    ok = (k >= 0) & (2 * i <= N) & (2 * j <= N) & (2 * k <= N)
    a, b = i[ok] / N, j[ok] / N
    w = kernels.stacked_weights(_triangle_stack(a, b), nu.p, nu.cyclic, nu.symmetric)
    best = int(np.argmin(w))
    if return_argmin:
        return float(w[best]), (float(a[best]), float(b[best]))
    return float(w[best])


def stability_tolerance(p: float, n: int) -> float:
    """``2 * 4^{1/p} * 1/(2n)``: twice ``C_4`` times the covering radius of the sample."""
    c4 = 1.0 if p == INF else 4.0 ** (1.0 / p)
    return 2.0 * c4 / (2.0 * n)


def circle_barcode(p: float, n: int, max_dim: int = 2, route: str = "complex", seed: int | None = None, field=2) -> Barcode:
    X = sample_circle(n, seed)
    if route == "complex":
        F = build_vr_filtration(X, NormDescriptor(p, symmetric=True), max_dim)
    elif route == "tuple":
        F = build_tuple_complex(X, NormDescriptor(p), LeftInterval.everything(), max_dim)
    else:
        raise ValueError(f"unknown route {route!r}")
    return persistence(F, field, max_dim=1)


def circle_experiment(p: float, n: int = 60, max_dim: int = 2, seed: int | None = None, route: str = "complex",
                      tolerance: float | None = None) -> dict:
    """Death of the dominant ``H_1`` bar of the ``n``-point sample against the threshold."""
    if max_dim < 2:
        raise ValueError("max_dim must be at least 2 to see H_1 die")
    bc = circle_barcode(p, n, max_dim, route, seed)
    dom = bc.dominant(1)
    target = threshold_formula(p)
    tol = stability_tolerance(p, n) if tolerance is None else float(tolerance)
    death = None if dom is None else dom[1]
    deviation = INF if death is None or death == INF else abs(death - target)
    below = None
    if dom is not None and death != INF:
        below = bc.betti_at(death, 1, strict=True)  # rank just below the death value
    return {
        "p": "inf" if p == INF else p,
        "n": n,
        "max_dim": max_dim,
        "route": route,
        "threshold": target,
        "dominant_bar": None if dom is None else [dom[0], "inf" if death == INF else death],
        "h1_bars": len(bc.in_dim(1)),
        "h1_rank_below_death": below,
        "deviation": deviation,
        "tolerance": tol,
        "pass": deviation <= tol,
    }


__all__ = [
    "sample_circle",
    "threshold_formula",
    "witness_triple",
    "t_grid_search",
    "stability_tolerance",
    "circle_barcode",
    "circle_experiment",
]
