import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lprips.circle import witness_triple
from lprips.errors import CapExceededError
from lprips.metric import INF, NormDescriptor, circle_distances, from_points, norm_constant, validate_metric
from lprips.weights import (
    cho_membership,
    cho_radii,
    diameter,
    subset_weight,
    subset_weight_oracle,
    tuple_weight,
    tuple_weight_oracle,
    tuple_weights,
)

from conftest import line, subsequence_weight


def test_tuple_weight_examples():
    X = line(0, 1, 2)
    assert tuple_weight(NormDescriptor(1.0), X, (0, 2, 1)) == 3.0
    Y = line(0, 1, 2, 3)
    assert tuple_weight(NormDescriptor(INF), Y, (0, 3, 1)) == 3.0


def test_circle_witness_tuple_weight():
    s = 1 / (2 + math.sqrt(2))
    X = validate_metric(circle_distances([-s, 0.0, s]))
    assert tuple_weight(NormDescriptor(2.0), X, (0, 1, 2)) == pytest.approx(math.sqrt(2) / (2 + math.sqrt(2)), abs=1e-12)


def test_oracle_examples():
    X = line(0, 0.7, 2.5)
    for p in (1.0, 2.0, INF):
        assert tuple_weight_oracle(NormDescriptor(p), X, (0, 2)) == X.dist[0, 2]
    assert tuple_weight_oracle(NormDescriptor(2.0), X, (1, 1, 1)) == 0.0


def test_oracle_length_cap():
    X = line(0, 1)
    with pytest.raises(CapExceededError):
        tuple_weight_oracle(NormDescriptor(1.0), X, (0, 1) * 11)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, INF])
@pytest.mark.parametrize("cyclic", [False, True])
def test_dp_matches_package_oracle_and_independent_enumeration(p, cyclic, rng):
    nu = NormDescriptor(p, cyclic=cyclic)
    X = from_points(rng.random((8, 2)))
    for _ in range(40):
        k = int(rng.integers(1, 8))
        t = tuple(int(v) for v in rng.integers(0, 8, size=k))
        w = tuple_weight(nu, X, t)
        assert w == tuple_weight_oracle(nu, X, t)
        D = X.dist[np.ix_(t, t)].tolist()
        assert w == pytest.approx(subsequence_weight(D, p, cyclic), rel=1e-12, abs=1e-15)


def test_subset_weight_examples():
    X = line(0, 1, 2)
    w, order = subset_weight(NormDescriptor(1.0, symmetric=True), X, (0, 1, 2), return_order=True)
    assert w == 2.0 and order == (0, 1, 2)
    Y = from_points(np.random.default_rng(0).random((6, 2)))
    s = (0, 2, 3, 5)
    assert subset_weight(NormDescriptor(INF, symmetric=True), Y, s) == diameter(Y, s)
    assert subset_weight(NormDescriptor(2.0, symmetric=True), Y, (4,)) == 0.0


def test_subset_weight_is_min_over_orderings(rng):
    X = from_points(rng.random((7, 2)))
    for p in (1.0, 2.0, 3.0):
        nu = NormDescriptor(p, symmetric=True)
        for _ in range(15):
            s = tuple(sorted(rng.choice(7, size=int(rng.integers(2, 6)), replace=False).tolist()))
            best = min(tuple_weight(NormDescriptor(p), X, perm) for perm in itertools.permutations(s))
            assert subset_weight(nu, X, s) == best
            assert subset_weight_oracle(nu, X, s) == best


def test_lexicographic_tie_break():
    # all orderings of an equilateral triangle tie; the first permutation wins
    X = validate_metric(np.ones((3, 3)) - np.eye(3))
    _, order = subset_weight(NormDescriptor(2.0, symmetric=True), X, (0, 1, 2), return_order=True)
    assert order == (0, 1, 2)


def test_symmetric_tuple_weight_uses_support(rng):
    X = from_points(rng.random((5, 2)))
    nu = NormDescriptor(2.0, symmetric=True)
    assert tuple_weight(nu, X, (3, 1, 3, 0)) == subset_weight(nu, X, (0, 1, 3))
    with pytest.raises(CapExceededError):
        subset_weight(nu, from_points(rng.random((9, 2))), range(9))


def test_cho_examples():
    X = line(0, 1, 2)
    assert cho_radii(X, (0, 1, 2), 1.0) == [1.0, 1.0]
    assert cho_membership(X, (0, 1, 2), 2.0, 1.0)
    assert not cho_membership(X, (0, 1, 2), 1.5, 1.0)
    assert cho_membership(X, (1,), 0.0, 2.0)


def test_witness_triple_residual():
    for p in (1.0, 1.5, 2.0, 3.0, INF):
        _, residual = witness_triple(p)
        assert residual <= 1e-12


spaces = st.integers(2, 7).flatmap(
    lambda m: st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=m, max_size=m, unique=True)
)


@settings(max_examples=50, deadline=None)
@given(spaces, st.sampled_from([1.0, 2.0, 3.0, INF]), st.data())
def test_weight_lemmas(pts, p, data):
    X = from_points(np.array(pts), pseudo=True)
    m = X.size
    t = tuple(data.draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=6)))
    nu = NormDescriptor(p)
    w = tuple_weight(nu, X, t)
    n = len(t) - 1
    # faces and degeneracies
    for i in range(len(t)):
        assert tuple_weight(nu, X, t[:i] + t[i + 1:]) <= w
        assert tuple_weight(nu, X, t[: i + 1] + t[i:]) == w
    # concatenation and path bounds
    for i in range(1, len(t) - 1):
        assert w <= tuple_weight(nu, X, t[: i + 1]) + tuple_weight(nu, X, t[i:]) + 1e-12
    assert w <= sum(X.dist[a, b] for a, b in zip(t, t[1:])) + 1e-12
    # diameter sandwich
    diam = diameter(X, t)
    assert diam <= w + 1e-12
    assert w <= norm_constant(nu, n) * diam + 1e-12


@settings(max_examples=50, deadline=None)
@given(spaces, st.sampled_from([1.0, 1.5, 2.0, 3.0, INF]), st.data())
def test_cho_agrees_with_weight(pts, p, data):
    X = from_points(np.array(pts), pseudo=True)
    t = tuple(data.draw(st.lists(st.integers(0, X.size - 1), min_size=1, max_size=6)))
    w = tuple_weight(NormDescriptor(p), X, t)
    for r in (w, w * 0.999, w * 1.001, data.draw(st.floats(0, 3))):
        assert cho_membership(X, t, r, p) == (w <= r)


@settings(max_examples=40, deadline=None)
@given(spaces, st.sampled_from([1.0, 2.0, INF]), st.floats(0.0, 0.2), st.data())
def test_lipschitz_perturbation(pts, p, b, data):
    # moving every distance by at most b moves the weight by at most b * C_n
    X = from_points(np.array(pts), pseudo=True)
    m = X.size
    noise = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=m * m, max_size=m * m))).reshape(m, m)
    noise = (noise + noise.T) / 2
    np.fill_diagonal(noise, 0.0)
    D = np.maximum(X.dist + b * noise, 0.0)
    Y = validate_metric(_metric_closure(D), pseudo=True)
    assume(np.all(np.abs(Y.dist - X.dist) <= b + 1e-12))
    t = tuple(data.draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=5)))
    nu = NormDescriptor(p)
    assert tuple_weight(nu, Y, t) <= tuple_weight(nu, X, t) + b * norm_constant(nu, len(t) - 1) + 1e-9


def _metric_closure(D):
    D = D.copy()
    for k in range(len(D)):
        D = np.minimum(D, D[:, k][:, None] + D[k][None, :])
    return D


def test_batch_weights_match_single(rng):
    X = from_points(rng.random((6, 2)))
    T = rng.integers(0, 6, size=(30, 4))
    for nu in (NormDescriptor(2.0), NormDescriptor(1.0, symmetric=True), NormDescriptor(3.0, cyclic=True)):
        w = tuple_weights(nu, X, T)
        assert w.tolist() == [tuple_weight(nu, X, row) for row in T.tolist()]
