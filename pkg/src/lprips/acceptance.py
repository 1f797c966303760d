"""The acceptance campaign, shared by the test-suite and ``lprips selftest``.

Each ``check_*`` returns a :class:`CheckResult`.  ``scale`` shrinks trial
counts (never tolerances) for quick runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .circle import circle_experiment, t_grid_search, threshold_formula
from .complexes import SimplicialComplex, build_tuple_complex, sandwich_check, ss_of_complex
from .homology import (
    betti,
    chain_homotopy_check,
    les_magnitude_check,
    lipschitz_shift,
    magnitude_homology,
    realized_weights,
)
from .metric import (
    INF,
    FiniteMetricSpace,
    LeftInterval,
    NormDescriptor,
    face,
    degeneracy,
    from_points,
    kolmogorov_quotient,
    norm_constant,
    norm_eval,
    ones_matrix,
    validate_metric,
)
from .stability import stability_campaign
from .weights import cho_membership, tuple_weight, tuple_weight_oracle

CIRCLE_TOLERANCE = {1.0: 0.067, 2.0: 0.048, INF: 0.034}
GRID_TOLERANCE = 2e-3


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    data: dict = field(default_factory=dict)
    known_issue: str | None = None  # set when the only failures are a documented counterexample

    def line(self) -> str:
        tail = f" [known: {self.known_issue}]" if self.known_issue and not self.ok else ""
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail}{tail}"


def _count(n: int, scale: float) -> int:
    return max(1, int(round(n * scale)))


# --------------------------------------------------------------------------
# random inputs


def random_metric(rng: np.random.Generator, m: int, integer: bool = False) -> FiniteMetricSpace:
    """Shortest-path closure of random positive weights (small integers if ``integer``)."""
    if integer:
        W = rng.integers(1, 4, size=(m, m)).astype(np.float64)
    else:
        W = rng.uniform(0.1, 1.0, size=(m, m))
    W = np.minimum(W, W.T)
    np.fill_diagonal(W, 0.0)
    for k in range(m):
        W = np.minimum(W, W[:, [k]] + W[[k], :])
    return validate_metric(W)


def random_pseudometric(rng: np.random.Generator, m: int) -> FiniteMetricSpace:
    """A metric on ``k <= m`` classes, blown up so that at least one class has two points."""
    k = int(rng.integers(1, m))
    base = random_metric(rng, k, integer=bool(rng.integers(2)))
    cls = np.concatenate([np.arange(k), rng.integers(0, k, size=m - k)])
    rng.shuffle(cls)
    return validate_metric(base.dist[np.ix_(cls, cls)], pseudo=True)


def random_complex(rng: np.random.Generator, max_vertices: int = 6, max_size: int = 5) -> SimplicialComplex:
    m = int(rng.integers(1, max_vertices + 1))
    faces = []
    for _ in range(int(rng.integers(1, 7))):
        size = int(rng.integers(1, min(max_size, m) + 1))
        faces.append(tuple(rng.choice(m, size=size, replace=False).tolist()))
    faces += [(v,) for v in range(m)]
    return SimplicialComplex(faces)


def random_distance_matrix(rng: np.random.Generator, k: int) -> np.ndarray:
    if rng.random() < 0.5:
        return from_points(rng.random((k, 2))).dist.copy()
    return random_metric(rng, k, integer=bool(rng.integers(2))).dist.copy()


# --------------------------------------------------------------------------
# criteria


def check_circle(scale: float = 1.0, n: int = 60) -> CheckResult:
    rows, ok = [], True
    for p, tol in CIRCLE_TOLERANCE.items():
        start = time.perf_counter()
        rep = circle_experiment(p, n, 2, tolerance=tol)
        secs = time.perf_counter() - start
        good = rep["pass"] and secs < 60.0
        ok &= good
        rows.append(f"p={rep['p']} death={rep['dominant_bar'][1]!r} dev={rep['deviation']:.4g}<= {tol} ({secs:.1f}s)")
    return CheckResult("circle thresholds", ok, "; ".join(rows))


def check_grid(scale: float = 1.0, resolution: int = 1000) -> CheckResult:
    rows, ok = [], True
    for p in (1.0, 1.5, 2.0, 3.0, INF):
        t = t_grid_search(NormDescriptor(p), resolution)
        err = abs(t - threshold_formula(p))
        ok &= err <= GRID_TOLERANCE
        rows.append(f"p={p:g} err={err:.2e}")
    return CheckResult("grid oracle for t(nu)", ok, "; ".join(rows))


def check_stability(scale: float = 1.0, seed: int = 0) -> CheckResult:
    trials = _count(100, scale)
    start = time.perf_counter()
    rep = stability_campaign(trials, seed)
    secs = time.perf_counter() - start
    ok = rep["pass"] and secs < 120.0
    return CheckResult(
        "stability campaign",
        ok,
        f"{trials} trials, {rep['checks']} checks, {len(rep['failures'])} violations, "
        f"max bottleneck/bound {rep['max_ratio']:.4f} ({secs:.1f}s)",
        rep,
    )


def check_magnitude(scale: float = 1.0) -> CheckResult:
    two = validate_metric([[0, 1], [1, 0]])
    g11 = magnitude_homology(two, 1.0, "graded", 1)[0]
    ns = magnitude_homology(two, 1.0, "nonstrict", 1)[0]
    near = [magnitude_homology(validate_metric([[0, 1 + 1 / k], [1 + 1 / k, 0]]), 1.0, "graded", 1)[0] for k in range(1, 11)]
    ok = g11 == 2 and ns == 1 and all(v == 0 for v in near)
    return CheckResult("magnitude examples", ok, f"graded MH_1,1={g11} (2), MH_1,<=1={ns} (1), d=1+1/k graded ranks={near}")


def check_les(scale: float = 1.0, seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    spaces = _count(50, scale)
    checks, bad = 0, []
    for s in range(spaces):
        m = int(rng.integers(2, 6))
        X = from_points(rng.random((m, 2))) if s % 2 else random_metric(rng, m, integer=bool(rng.integers(2)))
        for n in (1, 2):
            for r in realized_weights(X, n + 1):
                rep = les_magnitude_check(X, r, n, 2)
                checks += 1
                if not rep["exact"]:
                    bad.append((s, n, r))
    return CheckResult("LES exactness", not bad, f"{spaces} spaces, {checks} (r, n) checks, {len(bad)} failures", {"bad": bad[:5]})


def check_oracles(scale: float = 1.0, seed: int = 6) -> CheckResult:
    rng = np.random.default_rng(seed)
    cases = _count(1000, scale)
    spaces = [random_metric(rng, 8) if k % 2 else from_points(rng.random((8, 2))) for k in range(10)]
    mismatch = 0
    for _ in range(cases):
        X = spaces[int(rng.integers(len(spaces)))]
        t = rng.integers(0, 8, size=int(rng.integers(1, 8))).tolist()
        p = [1.0, 2.0, 3.0, INF, float(rng.uniform(1, 4))][int(rng.integers(5))]
        nu = NormDescriptor(p, cyclic=bool(rng.integers(2)))
        if tuple_weight(nu, X, t) != tuple_weight_oracle(nu, X, t):
            mismatch += 1
    disagree = 0
    for _ in range(cases):
        X = spaces[int(rng.integers(len(spaces)))]
        t = rng.integers(0, 8, size=int(rng.integers(1, 8))).tolist()
        p = [1.0, 2.0, INF, float(rng.uniform(1, 4))][int(rng.integers(4))]
        w = tuple_weight(NormDescriptor(p), X, t)
        r = float(rng.uniform(0, 1.5 * max(w, 1e-3)))
        if cho_membership(X, t, r, p) != (w <= r):
            disagree += 1
    return CheckResult(
        "oracle equivalences", mismatch == 0 and disagree == 0,
        f"DP vs enumeration: {mismatch}/{cases} mismatches; Cho vs weight: {disagree}/{cases} disagreements",
    )


# Entries (d01, d02, d12).  nu_p^sym(D) = nu_p^sym(E) = 2 at p = 1 but nu_1^sym(D + E) = 5.
SUBADDITIVITY_COUNTEREXAMPLE = ((1.0, 2.0, 1.0), (1.0, 1.0, 2.0))
SYM_SUBADDITIVITY = {f"{NormDescriptor(p, True)}:subadditivity" for p in (1.0, 2.0, INF)}


def triangle_matrix(d01: float, d02: float, d12: float) -> np.ndarray:
    return np.array([[0.0, d01, d02], [d01, 0.0, d12], [d02, d12, 0.0]])


NORMS = [NormDescriptor(p, s, c) for p in (1.0, 2.0, INF) for s, c in ((False, False), (True, False), (False, True))]


def norm_axiom_failures(nu: NormDescriptor, D: np.ndarray, E: np.ndarray, alpha: float, i: int, perm) -> list[str]:
    """Which of the norm axioms fail on this sample (empty when all hold)."""
    fails = []
    v = norm_eval(nu, D)
    if abs(norm_eval(nu, alpha * D) - alpha * v) > 1e-9 * max(1.0, alpha * v):
        fails.append("homogeneity")
    if norm_eval(nu, D + E) > v + norm_eval(nu, E) + 1e-9:
        fails.append("subadditivity")
    if v > norm_eval(nu, D + E) + 1e-9:
        fails.append("monotonicity")
    if norm_eval(nu, ones_matrix(1)) != 1.0:
        fails.append("normalization")
    if len(D) > 1 and norm_eval(nu, face(D, i)) > v:
        fails.append("face")
    if norm_eval(nu, degeneracy(D, i)) != v:
        fails.append("degeneracy")
    if nu.symmetric and norm_eval(nu, D[np.ix_(perm, perm)]) != v:
        fails.append("permutation")
    return fails


def check_norm_axioms(scale: float = 1.0, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    cases = _count(1000, scale)
    failures: dict[str, int] = {}
    for nu in NORMS:
        for _ in range(cases):
            k = int(rng.integers(2, 7))
            D, E = random_distance_matrix(rng, k), random_distance_matrix(rng, k)
            alpha = float(rng.uniform(0, 3))
            for name in norm_axiom_failures(nu, D, E, alpha, int(rng.integers(k)), rng.permutation(k)):
                failures[f"{nu}:{name}"] = failures.get(f"{nu}:{name}", 0) + 1
    monotone_c = all(norm_constant(nu, n) <= norm_constant(nu, n + 1) for nu in NORMS for n in range(1, 6))
    ok = not failures and monotone_c
    other = {k: v for k, v in failures.items() if k not in SYM_SUBADDITIVITY}
    known = None
    if not ok and monotone_c and not other:
        known = "min-over-orderings norms are not subadditive, see SUBADDITIVITY_COUNTEREXAMPLE"
    return CheckResult(
        "norm axioms", ok, f"{cases} cases x {len(NORMS)} norms, failures={failures or 0}, C_n monotone={monotone_c}",
        {"failures": failures, "unexpected": other, "C_n monotone": monotone_c}, known,
    )


def check_sandwich(scale: float = 1.0, seed: int = 8) -> CheckResult:
    rng = np.random.default_rng(seed)
    spaces = _count(100, scale)
    bad = []
    for s in range(spaces):
        X = from_points(rng.random((6, 2)))
        for nu in (NormDescriptor(2.0), NormDescriptor(1.0)):
            for n in (1, 2):
                for r in (0.5, 1.0, 2.0):
                    rep = sandwich_check(X, nu, r, n)
                    if not rep["pass"]:
                        bad.append((s, str(nu), n, r, rep["failures"][0]))
    return CheckResult("sandwich inclusions", not bad, f"{spaces} spaces x 12 settings, {len(bad)} failures", {"bad": bad[:5]})


def check_ss_bridge(scale: float = 1.0, seed: int = 9) -> CheckResult:
    rng = np.random.default_rng(seed)
    count = _count(50, scale)
    bad = []
    for s in range(count):
        K = random_complex(rng)
        KC, SC = K.chain_complex(), ss_of_complex(K, 4)
        for n in range(4):
            a, b = betti(KC, n, 2), betti(SC, n, 2)
            if a != b:
                bad.append((s, n, a, b))
    return CheckResult("SS/SC bridge", not bad, f"{count} complexes, degrees 0-3, {len(bad)} mismatches", {"bad": bad[:5]})


def check_kolmogorov(scale: float = 1.0, seed: int = 10) -> CheckResult:
    rng = np.random.default_rng(seed)
    count = _count(50, scale)
    bad = []
    for s in range(count):
        X = random_pseudometric(rng, int(rng.integers(2, 6)))
        Q, _ = kolmogorov_quotient(X)
        nu = NormDescriptor([1.0, 2.0, INF][s % 3])
        r = float(rng.choice(np.unique(X.dist))) + [0.0, 0.5][int(rng.integers(2))]
        L = LeftInterval(r, bool(rng.integers(2)))
        CX, CQ = build_tuple_complex(X, nu, L, 3), build_tuple_complex(Q, nu, L, 3)
        for n in range(3):
            a, b = betti(CX, n, 2), betti(CQ, n, 2)
            if a != b:
                bad.append((s, n, a, b))
    return CheckResult("Kolmogorov quotient", not bad, f"{count} pseudometric spaces, degrees 0-2, {len(bad)} mismatches", {"bad": bad[:5]})


def random_short_pair(rng: np.random.Generator, max_points: int = 5):
    """Spaces ``X, Y``, maps ``f, g: X -> Y``, an interval ``L`` and the least shift ``b``."""
    m = int(rng.integers(2, max_points + 1))
    P = rng.random((m, 2))
    X = from_points(P)
    kind = int(rng.integers(3))
    if kind == 0:
        Y = from_points(P + rng.normal(0, 0.05, size=P.shape))
        f = list(range(m))
    elif kind == 1:
        Y = X
        f = list(range(m))
    else:
        Y = from_points(rng.random((int(rng.integers(2, max_points + 1)), 2)))
        f = rng.integers(0, Y.size, size=m).tolist()
    g = list(f)
    moved = int(rng.integers(m))
    g[moved] = int(rng.integers(Y.size))
    nu = NormDescriptor([1.0, 2.0, INF][int(rng.integers(3))])
    r = float(rng.uniform(0.2, 1.5))
    L = LeftInterval(r, bool(rng.integers(2)))
    b = lipschitz_shift(X, Y, f, g, L)
    return X, Y, f, g, nu, L, b


def check_prism(scale: float = 1.0, seed: int = 11, max_deg: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    count = _count(50, scale)
    bad, checked = [], 0
    for s in range(count):
        X, Y, f, g, nu, L, b = random_short_pair(rng)
        S = build_tuple_complex(X, nu, L, max_deg)
        T = build_tuple_complex(Y, nu, L.scaled(1.0, b * norm_constant(nu, max_deg + 1)), max_deg + 1)
        for p in (2, 3):
            rep = chain_homotopy_check(f, g, S, T, p)
            checked += rep["checked"]
            if not rep["holds"]:
                bad.append((s, p, rep["witness"]))
    return CheckResult("prism identity", not bad, f"{count} pairs over Z/2 and Z/3, {checked} tuples, {len(bad)} failures", {"bad": bad[:5]})


CHECKS = [
    check_circle,
    check_grid,
    check_stability,
    check_magnitude,
    check_les,
    check_oracles,
    check_norm_axioms,
    check_sandwich,
    check_ss_bridge,
    check_kolmogorov,
    check_prism,
]


def run_all(scale: float = 1.0, echo=print) -> list[CheckResult]:
    out = []
    for fn in CHECKS:
        res = fn(scale)
        if echo:
            echo(res.line())
        out.append(res)
    return out
