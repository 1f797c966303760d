import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lprips.errors import CapExceededError, MetricError
from lprips.metric import (
    INF,
    LeftInterval,
    NormDescriptor,
    degeneracy,
    ellipse,
    ellipse_membership,
    face,
    from_points,
    kolmogorov_quotient,
    norm_constant,
    norm_eval,
    ones_matrix,
    parse_p,
    restrict,
    validate_metric,
)

from conftest import line


def test_validate_accepts_two_points():
    X = validate_metric([[0, 1], [1, 0]])
    assert X.size == 2 and X.dist[0, 1] == 1.0


def test_validate_reports_triangle_witness():
    with pytest.raises(MetricError, match=r"triangle violation at \(0,1,2\)") as exc:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert exc.value.witness == (0, 1, 2)
    assert exc.value.exit_code == 2


@pytest.mark.parametrize(
    "M, message",
    [
        ([[0, 1], [2, 0]], "asymmetric"),
        ([[0, -1], [-1, 0]], "negative"),
        ([[1, 1], [1, 0]], "diagonal"),
        ([[0, 0], [0, 0]], "zero distance"),
        ([[0, 1, 2]], "square"),
    ],
)
def test_validate_rejects(M, message):
    with pytest.raises(MetricError, match=message):
        validate_metric(M)


def test_pseudometric_allowed_with_flag():
    X = validate_metric([[0, 0], [0, 0]], pseudo=True)
    assert X.pseudo


def test_restrict_examples():
    assert np.array_equal(restrict(ones_matrix(3), [0, 2]), ones_matrix(1))
    D = line(0, 1, 2).dist
    assert np.array_equal(restrict(D, [0, 2]), [[0, 2], [2, 0]])
    assert np.array_equal(restrict([[0, 1], [1, 0]], [0, 1, 1]), [[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    with pytest.raises(IndexError):
        restrict(D, [0, 5])


def test_face_and_degeneracy_are_restrictions():
    D = line(0, 1, 3).dist
    assert np.array_equal(face(D, 1), restrict(D, [0, 2]))
    assert np.array_equal(degeneracy(D, 1), restrict(D, [0, 1, 1, 2]))


def test_norm_eval_examples():
    D = line(0, 1, 2).dist
    assert norm_eval(NormDescriptor(1.0), D) == 2.0
    for p in (1.0, 1.5, 2.0, 3.0, INF):
        assert norm_eval(NormDescriptor(p), [[0, 1], [1, 0]]) == 1.0
    tri = ones_matrix(2)
    assert norm_eval(NormDescriptor(1.0, cyclic=True), tri) == 1.5


def test_cyclic_normalization_is_exact():
    for p in (1.0, 1.5, 2.0, 3.0, INF):
        assert norm_eval(NormDescriptor(p, cyclic=True), ones_matrix(1)) == 1.0


def test_norm_constants():
    assert norm_constant(NormDescriptor(2.0), 3) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert norm_constant(NormDescriptor(2.0, symmetric=True), 3) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert norm_constant(NormDescriptor(INF), 7) == 1.0
    assert norm_constant(NormDescriptor(1.0), 1) == 1.0
    for p in (1.0, 2.0, 3.0):
        c = [norm_constant(NormDescriptor(p), n) for n in range(1, 7)]
        assert c == sorted(c)
        assert c == pytest.approx([n ** (1 / p) for n in range(1, 7)], rel=1e-12)


def test_symmetric_order_cap():
    with pytest.raises(CapExceededError):
        norm_eval(NormDescriptor(2.0, symmetric=True), ones_matrix(8))
    # p = inf needs no search
    assert norm_eval(NormDescriptor(INF, symmetric=True), ones_matrix(8)) == 1.0


def test_descriptor_rejects_small_p():
    with pytest.raises(ValueError):
        NormDescriptor(0.5)
    assert parse_p("inf") == INF and parse_p("2") == 2.0


def test_left_interval():
    assert 1.0 in LeftInterval.le(1.0) and 1.0 not in LeftInterval.lt(1.0)
    assert 1e300 in LeftInterval.everything()
    assert LeftInterval.lt(1.0).scaled(2.0, 0.5) == LeftInterval.lt(2.5)


def test_ellipse_examples():
    X = line(0, 1, 2)
    assert ellipse_membership(NormDescriptor(1.0), X, 0, 2, 1, LeftInterval.lt(2.5))
    assert not ellipse_membership(NormDescriptor(1.0), X, 0, 2, 1, LeftInterval.lt(2.0))


def test_max_ellipse_follows_the_weight_definition():
    Y = line(0, 1.9, 2)
    # w_inf(x, a, y) is the diameter 2, which is outside (-inf, 2) ...
    assert not ellipse_membership(NormDescriptor(INF), Y, 0, 2, 1, LeftInterval.lt(2.0))
    # ... and inside (-inf, 2]
    assert ellipse_membership(NormDescriptor(INF), Y, 0, 2, 1, LeftInterval.le(2.0))


def test_max_ellipse_is_ball_intersection_when_foci_are_close(rng):
    nu = NormDescriptor(INF)
    for _ in range(20):
        X = from_points(rng.random((6, 2)))
        L = LeftInterval(float(rng.uniform(0.2, 1.2)), bool(rng.integers(2)))
        for x in range(6):
            for y in range(6):
                if X.dist[x, y] not in L:
                    continue
                balls = [a for a in range(6) if X.dist[x, a] in L and X.dist[a, y] in L]
                assert ellipse(nu, X, x, y, L) == balls


def test_kolmogorov_examples():
    Q, proj = kolmogorov_quotient(validate_metric([[0, 0], [0, 0]], pseudo=True))
    assert Q.size == 1
    X = line(0, 1, 3)
    Q, proj = kolmogorov_quotient(X)
    assert np.array_equal(Q.dist, X.dist) and list(proj) == [0, 1, 2]
    P = validate_metric([[0, 0, 1], [0, 0, 1], [1, 1, 0]], pseudo=True)
    Q, proj = kolmogorov_quotient(P)
    assert np.array_equal(Q.dist, [[0, 1], [1, 0]])
    assert proj[0] == proj[1] != proj[2]
    Q2, _ = kolmogorov_quotient(Q)
    assert np.array_equal(Q2.dist, Q.dist)


matrices = st.integers(2, 6).flatmap(
    lambda k: st.lists(st.floats(0.1, 10.0), min_size=k * (k - 1) // 2, max_size=k * (k - 1) // 2).map(
        lambda xs, k=k: _closure(k, xs)
    )
)


def _closure(k, xs):
    D = np.zeros((k, k))
    it = iter(xs)
    for i in range(k):
        for j in range(i + 1, k):
            D[i, j] = D[j, i] = next(it)
    for m in range(k):
        D = np.minimum(D, D[:, m][:, None] + D[m][None, :])
    return D


norms = st.sampled_from([NormDescriptor(p, s, c) for p in (1.0, 2.0, INF) for s, c in ((0, 0), (1, 0), (0, 1))])


@settings(max_examples=60, deadline=None)
@given(norms, matrices, st.floats(0.0, 5.0))
def test_homogeneity(nu, D, alpha):
    assert norm_eval(nu, alpha * D) == pytest.approx(alpha * norm_eval(nu, D), rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(norms, matrices, st.data())
def test_face_monotone_and_degeneracy_invariant(nu, D, data):
    i = data.draw(st.integers(0, len(D) - 1))
    v = norm_eval(nu, D)
    assert norm_eval(nu, face(D, i)) <= v
    assert norm_eval(nu, degeneracy(D, i)) == v


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([1.0, 2.0, INF]), st.data())
def test_symmetric_permutation_invariance(D, p, data):
    perm = data.draw(st.permutations(range(len(D))))
    nu = NormDescriptor(p, symmetric=True)
    assert norm_eval(nu, D[np.ix_(perm, perm)]) == norm_eval(nu, D)


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([1.0, 2.0, INF]), st.booleans())
def test_nonsymmetric_subadditive_and_monotone(D, p, cyclic):
    nu = NormDescriptor(p, cyclic=cyclic)
    E = D[::-1, ::-1].copy()
    assert norm_eval(nu, D + E) <= norm_eval(nu, D) + norm_eval(nu, E) + 1e-9
    assert norm_eval(nu, D) <= norm_eval(nu, D + E) + 1e-9
