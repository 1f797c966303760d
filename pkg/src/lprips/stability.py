"""Brute-force Gromov-Hausdorff distance, bottleneck distance, stability checks.

``gromov_hausdorff`` is half the least distortion of a correspondence of the
form ``graph(f) | graph(g)^T`` over all map pairs ``f: X -> Y``, ``g: Y -> X``.
Every correspondence contains one of these and distortion only grows with the
relation, so the minimum is the same as over all correspondences.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .complexes import build_tuple_complex, build_vr_filtration
from .errors import CapExceededError
from .homology import Barcode, persistence
from .metric import INF, FiniteMetricSpace, LeftInterval, NormDescriptor, from_points, norm_constant

GH_SIZE_CAP = 5
STABILITY_TOL = 1e-9


def _all_maps(m: int, n: int) -> np.ndarray:
    """Every map ``{0..m-1} -> {0..n-1}`` as rows, lexicographic."""
    return np.array(list(itertools.product(range(n), repeat=m)), dtype=np.int64).reshape(-1, m)


def gromov_hausdorff(X: FiniteMetricSpace, Y: FiniteMetricSpace, return_maps: bool = False):
    """Exact ``d_GH`` for spaces of at most five points."""
    m, n = X.size, Y.size
    if m > GH_SIZE_CAP or n > GH_SIZE_CAP:
        raise CapExceededError(f"brute-force Gromov-Hausdorff is capped at {GH_SIZE_CAP} points (got {m} and {n})", (m, n))
    dX, dY = X.dist, Y.dist
    F = _all_maps(m, n)
    G = _all_maps(n, m)
    # dis(g) = max |dX(g y, g y') - dY(y, y')|
    dis_g = np.abs(dX[G[:, :, None], G[:, None, :]] - dY[None]).reshape(len(G), -1).max(axis=1)
    dis_f = np.abs(dY[F[:, :, None], F[:, None, :]] - dX[None]).reshape(len(F), -1).max(axis=1)
    best, best_pair = INF, None
    rows = np.arange(n)
    for fi in np.argsort(dis_f, kind="stable"):
        if dis_f[fi] >= best:
            break
        f = F[fi]
        # H[y, x'] = max_x |dX(x, x') - dY(f x, y)|; codis(g) = max_y H[y, g y]
        H = np.abs(dX[None, :, :] - dY[f][:, :, None].transpose(1, 0, 2)).max(axis=1)
        codis = H[rows[None, :], G].max(axis=1)
        total = np.maximum(np.maximum(codis, dis_g), dis_f[fi])
        gi = int(np.argmin(total))
        if total[gi] < best:
            best, best_pair = float(total[gi]), (tuple(f.tolist()), tuple(G[gi].tolist()))
    value = 0.5 * best
    return (value, best_pair) if return_maps else value


def distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, f, g) -> float:
    """Distortion of the correspondence ``graph(f) | graph(g)^T``."""
    pairs = [(x, int(f[x])) for x in range(X.size)] + [(int(g[y]), y) for y in range(Y.size)]
    return max(abs(float(X.dist[a, c]) - float(Y.dist[b, d])) for (a, b) in pairs for (c, d) in pairs)


# --------------------------------------------------------------------------
# bottleneck


def _split(A, degree):
    if isinstance(A, Barcode):
        bars = A.in_dim(degree) if degree is not None else [(b, e) for _, b, e in A.bars]
    else:
        bars = [(float(b), float(e)) for b, e in A]
    finite = [(b, e) for b, e in bars if e != INF and e > b]
    essential = sorted(b for b, e in bars if e == INF)
    return finite, essential


def _perfect(A: np.ndarray, B: np.ndarray, t: float) -> bool:
    n, m = len(A), len(B)
    if n + m == 0:
        return True
    # left: A points then diagonal copies of B; right: B points then diagonal copies of A
    cost = np.maximum(np.abs(A[:, None, 0] - B[None, :, 0]), np.abs(A[:, None, 1] - B[None, :, 1]))
    adj = np.zeros((n + m, m + n), dtype=bool)
    adj[:n, :m] = cost <= t
    adj[np.arange(n), m + np.arange(n)] = (A[:, 1] - A[:, 0]) / 2 <= t
    adj[n + np.arange(m), np.arange(m)] = (B[:, 1] - B[:, 0]) / 2 <= t
    adj[n:, m:] = True
    match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(A, B, degree: int | None = None) -> float:
    """Bottleneck distance (L-inf ground cost, diagonal allowed); ``inf`` if essential counts differ."""
    fa, ea = _split(A, degree)
    fb, eb = _split(B, degree)
    if len(ea) != len(eb):
        return INF
    ess = max((abs(a - b) for a, b in zip(ea, eb)), default=0.0)
    PA = np.array(fa, dtype=np.float64).reshape(-1, 2)
    PB = np.array(fb, dtype=np.float64).reshape(-1, 2)
    cands = {0.0}
    cands.update(((PA[:, 1] - PA[:, 0]) / 2).tolist())
    cands.update(((PB[:, 1] - PB[:, 0]) / 2).tolist())
    if len(PA) and len(PB):
        c = np.maximum(np.abs(PA[:, None, 0] - PB[None, :, 0]), np.abs(PA[:, None, 1] - PB[None, :, 1]))
        cands.update(c.ravel().tolist())
    cands = np.array(sorted(cands))
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect(PA, PB, float(cands[mid])):
            hi = mid
        else:
            lo = mid + 1
    return max(ess, float(cands[lo]))


# --------------------------------------------------------------------------
# stability


@dataclass
class StabilityReport:
    d_gh: float
    norm: str
    route: str
    degrees: list[int]
    bottleneck: dict[int, float] = field(default_factory=dict)
    bound: dict[int, float] = field(default_factory=dict)
    passed: dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.ok
        for key in ("bottleneck", "bound"):
            d[key] = {str(k): ("inf" if v == INF else v) for k, v in d[key].items()}
        d["passed"] = {str(k): v for k, v in d["passed"].items()}
        return d


def barcode_of(X: FiniteMetricSpace, nu: NormDescriptor, max_dim: int, route: str = "complex", field=2) -> Barcode:
    """Persistence of ``r -> H_n(VR_{<r})`` via simplicial complexes (symmetric norm) or tuple complexes."""
    if route == "complex":
        F = build_vr_filtration(X, nu.with_symmetric(True), max_dim)
    elif route == "tuple":
        F = build_tuple_complex(X, nu, LeftInterval.everything(), max_dim)
    else:
        raise ValueError(f"unknown route {route!r} (complex | tuple)")
    return persistence(F, field, max_dim=max_dim - 1)


def stability_report(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    nu: NormDescriptor,
    degrees=(0, 1),
    max_dim: int | None = None,
    route: str = "complex",
    field=2,
    d_gh: float | None = None,
) -> StabilityReport:
    """Check ``bottleneck_n <= 2 C_{n+2}(nu) d_GH(X, Y)`` for each degree ``n``."""
    degrees = sorted(int(d) for d in degrees)
    top = max(degrees) + 1 if max_dim is None else max_dim
    if top < max(degrees) + 1:
        raise ValueError("max_dim must exceed every checked degree")
    d = gromov_hausdorff(X, Y) if d_gh is None else d_gh
    used = nu.with_symmetric(True) if route == "complex" else nu
    A, B = barcode_of(X, nu, top, route, field), barcode_of(Y, nu, top, route, field)
    rep = StabilityReport(d, str(used), route, degrees)
    for n in degrees:
        bn = bottleneck(A, B, n)
        bound = 2.0 * norm_constant(nu, n + 2) * d
        rep.bottleneck[n] = bn
        rep.bound[n] = bound
        rep.passed[n] = bn <= bound + STABILITY_TOL
    return rep


def random_pair(seed: int, max_points: int = GH_SIZE_CAP) -> tuple[FiniteMetricSpace, FiniteMetricSpace]:
    """A random planar space of 2..max_points points and a perturbed copy (sometimes one point dropped or added)."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, max_points + 1))
    P = rng.random((m, 2))
    scale = float(rng.uniform(0.0, 0.25))
    Q = P + rng.normal(0.0, scale, size=P.shape)
    move = rng.random()
    if move < 0.2 and m > 2:
        Q = np.delete(Q, int(rng.integers(m)), axis=0)
    elif move < 0.4 and m < max_points:
        Q = np.vstack([Q, rng.random((1, 2))])
    return from_points(P), from_points(Q)


def stability_campaign(trials: int = 100, seed: int = 0, ps=(1.0, 2.0, INF), degrees=(0, 1),
                       routes=("complex", "tuple"), field=2, threads: int = 1) -> dict:
    """Seeded stability trials; every trial checks every ``p`` and route.

    ``threads > 1`` runs trials concurrently; results are collected in trial
    order, so the report does not depend on it.
    """

    def trial(t: int) -> list[StabilityReport]:
        X, Y = random_pair(seed * 100003 + t)
        d = gromov_hausdorff(X, Y)
        return [
            stability_report(X, Y, NormDescriptor(p), degrees, route=route, field=field, d_gh=d)
            for p in ps
            for route in routes
        ]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_trial = list(pool.map(trial, range(trials)))
    else:
        per_trial = [trial(t) for t in range(trials)]
    results = [rep for reps in per_trial for rep in reps]
    failures = [
        {"trial": t, "p": rep.norm, "route": rep.route, "report": rep.to_dict()}
        for t, reps in enumerate(per_trial)
        for rep in reps
        if not rep.ok
    ]
    return {
        "trials": trials,
        "seed": seed,
        "checks": len(results),
        "failures": failures,
        "pass": not failures,
        "max_ratio": max(
            (rep.bottleneck[n] / rep.bound[n] for rep in results for n in rep.degrees if rep.bound[n] > 0),
            default=0.0,
        ),
    }


__all__ = [
    "gromov_hausdorff",
    "distortion",
    "bottleneck",
    "StabilityReport",
    "stability_report",
    "barcode_of",
    "random_pair",
    "stability_campaign",
]
