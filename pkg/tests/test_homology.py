import math

import numpy as np
import pytest

from lprips.circle import sample_circle
from lprips.complexes import SimplicialComplex, build_tuple_complex, build_vr_filtration, slice_at
from lprips.errors import CoverError, FiltrationError, MapError
from lprips.homology import (
    Barcode,
    PrimeField,
    betti,
    chain_homotopy_check,
    homology,
    induced_map,
    les_magnitude_check,
    lipschitz_shift,
    magnitude_homology,
    matrix_rank,
    mayer_vietoris_check,
    nerve_report,
    persistence,
    realized_weights,
    reduced_betti,
)
from lprips.complexes import FilteredComplex
from lprips.metric import INF, LeftInterval, NormDescriptor, from_points, norm_constant, validate_metric

from conftest import betti_dense, line, rank_mod, two_point, unit_square


def test_prime_field():
    assert PrimeField(3).inv(2) == 2
    for bad in (0, 1, 4, 9):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_matrix_rank_matches_independent_elimination(rng):
    for p in (2, 3, 5):
        for _ in range(20):
            M = rng.integers(-3, 4, size=(int(rng.integers(1, 6)), int(rng.integers(1, 6))))
            assert matrix_rank(M, p) == rank_mod(M, p)


def test_betti_examples():
    C = build_tuple_complex(two_point(), NormDescriptor(1.0), LeftInterval.le(1.0), 2)
    H = homology(C, 1)
    assert H.rank == 1
    assert H.cells(C) == [[((0, 1), 1), ((1, 0), 1)]]
    P = build_tuple_complex(validate_metric([[0.0]]), NormDescriptor(1.0), LeftInterval.everything(), 4)
    assert [betti(P, n) for n in range(1, 4)] == [0, 0, 0]
    hollow = SimplicialComplex([(0, 1), (1, 2), (0, 2)]).chain_complex()
    assert betti(hollow, 1) == 1 and betti(hollow, 0) == 1 and reduced_betti(hollow, 0) == 0


def test_degree_out_of_range():
    C = build_tuple_complex(two_point(), NormDescriptor(1.0), LeftInterval.everything(), 1)
    with pytest.raises(ValueError, match="needs degree 2"):
        homology(C, 1)


def test_persistence_two_points():
    F = build_vr_filtration(two_point(), NormDescriptor(INF, symmetric=True), 1)
    bc = persistence(F)
    assert bc.in_dim(0) == [(0.0, 1.0), (0.0, INF)]
    assert bc.in_dim(1) == []


def test_persistence_unit_square():
    F = build_vr_filtration(unit_square(), NormDescriptor(INF, symmetric=True), 2)
    bc = persistence(F)
    assert bc.in_dim(1) == [(1.0, math.sqrt(2))]
    assert len(bc.in_dim(0)) == 4


def test_h0_bars_count_points(rng):
    for m in (3, 5, 7):
        X = from_points(rng.random((m, 2)))
        bc = persistence(build_vr_filtration(X, NormDescriptor(2.0, symmetric=True), 1))
        assert bc.betti_at(1e-12, 0, strict=True) == m


def test_persistence_rejects_non_monotone():
    F = FilteredComplex([np.array([[0], [1]]), np.array([[0, 1]])], [np.array([0.0, 2.0]), np.array([1.0])], check=False)
    with pytest.raises(FiltrationError):
        persistence(F)


@pytest.mark.parametrize("field", [2, 3])
@pytest.mark.parametrize("p", [1.0, 2.0, INF])
def test_bars_reproduce_slice_betti(p, field, rng):
    X = from_points(rng.random((6, 2)))
    F = build_vr_filtration(X, NormDescriptor(p, symmetric=True), 3)
    bc = persistence(F, field)
    values = sorted(set(F.values(1).tolist() + F.values(2).tolist()))
    probes = values + [(a + b) / 2 for a, b in zip(values, values[1:])]
    for r in probes[::3]:
        for strict in (False, True):
            L = LeftInterval.lt(r) if strict else LeftInterval.le(r)
            K = slice_at(F, L).chain_complex(3)
            for n in (0, 1, 2):
                assert bc.betti_at(r, n, strict=strict) == betti_dense(K, n, field)


def test_tuple_route_barcode_matches_slices(rng):
    X = from_points(rng.random((4, 2)))
    F = build_tuple_complex(X, NormDescriptor(2.0), LeftInterval.everything(), 3)
    bc = persistence(F, max_dim=2)
    for r in sorted(set(F.values(1).tolist()))[:4]:
        C = build_tuple_complex(X, NormDescriptor(2.0), LeftInterval.le(r), 3)
        for n in (0, 1, 2):
            assert bc.betti_at(r, n) == betti(C, n)


def test_betti_independent_of_basis_order(rng):
    X = from_points(rng.random((5, 2)))
    C = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.le(1.2), 3)
    perms = [rng.permutation(C.size(n)) for n in range(C.max_deg + 1)]
    S = C.reordered(perms)
    for n in range(3):
        for field in (2, 3):
            assert betti(S, n, field) == betti(C, n, field) == betti_dense(C, n, field)


def test_magnitude_examples():
    X = two_point()
    assert magnitude_homology(X, 1.0, "graded", 1)[0] == 2
    assert magnitude_homology(X, 1.0, "nonstrict", 1)[0] == 1
    for k in range(1, 6):
        Xk = two_point(1.0 + 1.0 / k)
        assert magnitude_homology(Xk, 1.0, "graded", 1)[0] == 0
    P = validate_metric([[0.0]])
    for variant in ("strict", "nonstrict", "graded"):
        for n in (1, 2):
            assert magnitude_homology(P, 1.0, variant, n)[0] == 0


def test_strict_equals_nonstrict_between_realized_values(rng):
    X = from_points(rng.random((4, 2)))
    vals = realized_weights(X, 3)
    for a, b in list(zip(vals, vals[1:]))[:6]:
        mid = (a + b) / 2
        for n in (1, 2):
            s = magnitude_homology(X, mid, "strict", n)[0]
            assert s == magnitude_homology(X, a, "nonstrict", n)[0]
            assert s == magnitude_homology(X, mid, "nonstrict", n)[0]
            assert magnitude_homology(X, mid, "graded", n)[0] == 0


def test_les_examples():
    rep = les_magnitude_check(two_point(), 1.0, 1)
    assert rep["dims"] == {"strict": 0, "nonstrict": 1, "graded": 2}
    assert rep["exact"] and rep["rank_quotient"] == 1
    rep = les_magnitude_check(two_point(), 0.7, 1)
    assert rep["dims"]["strict"] == rep["dims"]["nonstrict"] and rep["dims"]["graded"] == 0 and rep["exact"]
    P = validate_metric([[0.0]])
    rep = les_magnitude_check(P, 1.0, 1)
    assert rep["dims"] == {"strict": 0, "nonstrict": 0, "graded": 0} and rep["exact"]


@pytest.mark.parametrize("field", [2, 3])
def test_les_exact_on_random_spaces(field, rng):
    for _ in range(4):
        X = from_points(rng.random((4, 2)))
        for r in realized_weights(X, 3)[1:12]:
            for n in (1, 2):
                assert les_magnitude_check(X, r, n, field)["exact"]


def test_induced_inclusion_realizes_persistence(rng):
    X = from_points(rng.random((6, 2)))
    F = build_vr_filtration(X, NormDescriptor(2.0, symmetric=True), 2)
    bc = persistence(F)
    vals = sorted(set(F.values(1).tolist()))
    ident = list(range(6))
    for r, r2 in [(vals[3], vals[6]), (vals[5], vals[9]), (vals[2], vals[-1])]:
        A = slice_at(F, LeftInterval.lt(r)).chain_complex(2)
        B = slice_at(F, LeftInterval.lt(r2)).chain_complex(2)
        for n in (0, 1):
            M = induced_map(A, B, ident, n)
            expected = sum(1 for b, d in bc.in_dim(n) if b < r and r2 <= d)
            assert matrix_rank(M, 2) == expected


def test_collapse_is_zero_on_magnitude_chains():
    X = two_point()
    C = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.le(1.0), 2)
    M = induced_map(C, C, [0, 0], 1)
    assert not M.any()


def test_isometry_is_isomorphism(rng):
    X = from_points(rng.random((5, 2)))
    perm = rng.permutation(5)
    Y = validate_metric(X.dist[np.ix_(np.argsort(perm), np.argsort(perm))])
    # f(i) = perm[i] is an isometry X -> Y
    L = LeftInterval.le(0.9)
    A = build_tuple_complex(X, NormDescriptor(2.0), L, 3)
    B = build_tuple_complex(Y, NormDescriptor(2.0), L, 3)
    for n in (0, 1, 2):
        M = induced_map(A, B, perm.tolist(), n, 3)
        assert M.shape[0] == M.shape[1] == matrix_rank(M, 3)


def test_induced_map_reports_escaping_cell():
    X = line(0, 1, 2)
    A = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.le(1.0), 2)
    B = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.lt(1.0), 2)
    # the H_1 class (0,1)+(1,0) of weight-1 edges has no room below 1
    with pytest.raises(MapError) as exc:
        induced_map(A, B, [0, 1, 2], 1)
    assert exc.value.witness[0] in ([0, 1], [1, 0], [1, 2], [2, 1])


def test_prism_identity_examples():
    X = two_point()
    C = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.everything(), 4)
    assert chain_homotopy_check([0, 1], [0, 1], C, C, 2, max_deg=3)["holds"]
    for field in (2, 3):
        assert chain_homotopy_check([0, 1], [1, 0], C, C, field, max_deg=3)["holds"]


def test_prism_identity_perturbed_copy(rng):
    for _ in range(3):
        P = rng.random((5, 2))
        X, Y = from_points(P), from_points(P + rng.normal(0, 0.02, P.shape))
        L = LeftInterval.lt(0.6)
        ident = list(range(5))
        b = lipschitz_shift(X, Y, ident, ident, L)
        nu = NormDescriptor(2.0)
        src = build_tuple_complex(X, nu, L, 2)
        tgt = build_tuple_complex(Y, nu, L.scaled(1.0, b * norm_constant(nu, 3)), 3)
        for field in (2, 3):
            assert chain_homotopy_check(ident, ident, src, tgt, field)["holds"]


def test_prism_outside_target_is_reported():
    X = line(0, 1, 2)
    src = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.le(1.0), 1)
    tgt = build_tuple_complex(X, NormDescriptor(1.0), LeftInterval.le(1.0), 2)
    with pytest.raises(MapError):
        chain_homotopy_check([0, 1, 2], [2, 1, 0], src, tgt, 2)


def test_mayer_vietoris_circle_arcs():
    X = sample_circle(4)
    L = LeftInterval.le(0.3)
    for n in (0, 1):
        rep = mayer_vietoris_check(X, [0, 1, 2], [2, 3, 0], NormDescriptor(1.0), L, n)
        assert rep["exact"] and rep["composite_zero"] and rep["inclusion_exclusion"]


def test_mayer_vietoris_trivial_and_disjoint_covers():
    X = sample_circle(4)
    nu = NormDescriptor(1.0)
    for n in (0, 1):
        assert mayer_vietoris_check(X, range(4), range(4), nu, LeftInterval.le(0.6), n)["exact"]
    Y = line(0, 1, 10, 11)
    rep = mayer_vietoris_check(Y, [0, 1], [2, 3], nu, LeftInterval.le(2.0), 0)
    assert rep["dims"]["UV"] == 0 and rep["dims"]["U"] + rep["dims"]["V"] == rep["dims"]["X"] and rep["exact"]


def test_mayer_vietoris_hypothesis_failure():
    X = line(0, 1, 2)
    with pytest.raises(CoverError) as exc:
        mayer_vietoris_check(X, [0, 1], [1, 2], NormDescriptor(1.0), LeftInterval.le(2.0), 0)
    assert len(exc.value.witness) == 3


def test_nerve_report_flags_weaker_check():
    K = SimplicialComplex([(0, 1), (1, 2), (2, 3), (3, 0)])
    rep = nerve_report([[0, 1, 2], [2, 3, 0]], K, 1)
    assert rep["all_acyclic"] is False  # the intersection {0, 2} is disconnected
    assert "weaker" in rep["note"]
    rep = nerve_report([[0, 1], [1, 2], [2, 3], [3, 0]], K, 1)
    assert rep["all_acyclic"] and rep["betti_agree"]


def test_barcode_formats():
    bc = Barcode([(1, 1.0, math.sqrt(2)), (0, 0.0, INF), (0, 0.0, 1.0)])
    tsv = bc.to_tsv()
    assert tsv.splitlines() == ["0\t0.0\t1.0", "0\t0.0\tinf", "1\t1.0\t1.4142135623730951"]
    assert Barcode.from_tsv(tsv) == bc
    assert '"death": "inf"' in bc.to_json()
    svg = bc.to_svg()
    assert svg.startswith("<svg") and "[1.000000, 1.414214)" in svg
    assert bc.dominant(0) == (0.0, INF)
