import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specbounds.errors import ContourError, ParameterError
from specbounds.linalg import (SpectrumList, dist_to_hull, eigen_spectrum, num_range_hull,
                               projection_rank, riesz_projection, schatten_monotonicity_check,
                               schatten_norm, singular_values, weyl_check)

from conftest import complex_matrices
from oracles import char_poly_roots, rayleigh_samples, schatten_via_gram


def _matched(a, b, tol):
    a, b = list(np.sort_complex(a)), list(b)
    for v in a:
        k = int(np.argmin(np.abs(np.array(b) - v)))
        if abs(b[k] - v) > tol:
            return False
        b.pop(k)
    return not b


# ---------------------------------------------------------------- spectra

def test_two_by_two_example_eigenvalues():
    s = eigen_spectrum([[0, 1], [0.04, 0]])
    assert s.total == 2
    assert np.allclose(s.values, [-0.2, 0.2], atol=1e-15)


def test_identity_is_one_cluster():
    s = eigen_spectrum(np.eye(3))
    assert s.items == ((1 + 0j, 3),)


def test_jordan_block_is_merged():
    J = np.eye(4, k=1) + 2 * np.eye(4)
    s = eigen_spectrum(J, cluster_tol=1e-3)
    assert s.total == 4 and len(s) == 1
    assert abs(s.values[0] - 2) < 1e-12


@given(complex_matrices(1, 6))
def test_eigenvalues_match_characteristic_polynomial(A):
    roots = char_poly_roots(A)
    s = eigen_spectrum(A, cluster_tol=0.0)
    scale = max(1.0, np.linalg.norm(A, 2))
    # eigenvalue sensitivity grows near multiple roots; compare loosely
    assert _matched(s.expanded(), roots, 1e-5 * scale)


@given(complex_matrices(1, 6))
def test_spectrum_total_is_dimension(A):
    assert eigen_spectrum(A).total == A.shape[0]


def test_spectrum_list_records_round_trip():
    s = SpectrumList(((1j, 2), (-1.0, 1)))
    assert s.values[0] == -1.0
    assert SpectrumList.from_records(s.to_records()) == s


def test_spectrum_list_rejects_nonpositive_multiplicity():
    with pytest.raises(ParameterError):
        SpectrumList(((0j, 0),))


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                max_size=12))
def test_from_values_preserves_total(vals):
    s = SpectrumList.from_values(vals, cluster_tol=0.1)
    assert s.total == len(vals)
    v = s.values
    if v.size > 1:
        assert np.min(np.abs(v[:, None] - v[None, :]) + 10 * np.eye(v.size)) > 0.1 - 1e-12


def test_empty_and_nonsquare_rejected():
    with pytest.raises(ParameterError):
        eigen_spectrum(np.zeros((2, 3)))
    with pytest.raises(ParameterError):
        eigen_spectrum([[np.nan]])


# ---------------------------------------------------------------- Schatten

@given(complex_matrices(1, 6), st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]))
def test_schatten_matches_gram_oracle(A, p):
    assert schatten_norm(A, p) == pytest.approx(schatten_via_gram(A, p), rel=1e-7, abs=1e-10)


@given(complex_matrices(1, 6), st.sampled_from([(0.5, 1.0), (1.0, 2.0), (0.5, 2.0), (2.0, np.inf)]))
def test_schatten_monotone_in_p(A, pq):
    assert schatten_monotonicity_check(A, *pq).passed


@given(complex_matrices(1, 6), st.sampled_from([0.5, 1.0, 2.0]))
def test_weyl_inequality(A, p):
    assert weyl_check(A, p).passed


def test_schatten_special_values():
    A = np.diag([3.0, 4.0])
    assert schatten_norm(A, 2) == pytest.approx(5.0)
    assert schatten_norm(A, 1) == pytest.approx(7.0)
    assert schatten_norm(A, np.inf) == 4.0
    assert schatten_norm(np.zeros((3, 3)), 2) == 0.0
    with pytest.raises(ParameterError):
        schatten_norm(A, 0)


def test_large_p_does_not_overflow():
    A = np.diag([1e200, 1e199])
    assert schatten_norm(A, 10) == pytest.approx(1e200, rel=1e-9)


def test_singular_values_sorted():
    s = singular_values(np.diag([1.0, 3.0, 2.0]))
    assert list(s) == [3.0, 2.0, 1.0]


# ---------------------------------------------------------------- numerical range

def test_hull_of_nilpotent_is_disk():
    h = num_range_hull([[0, 1], [0, 0]], n_angles=256)
    r = np.abs(h.points)
    assert np.allclose(r, 0.5, atol=1e-12)
    assert dist_to_hull(0.2, h) == 0.0
    assert dist_to_hull(1.0, h) == pytest.approx(0.5, abs=h.gap + 1e-12)


def test_hull_of_hermitian_is_segment():
    h = num_range_hull(np.diag([-1.0, 0.5, 2.0]))
    assert dist_to_hull(3.0, h) == pytest.approx(1.0)
    assert dist_to_hull(1j, h) == pytest.approx(1.0)
    assert dist_to_hull(0.0, h) == pytest.approx(0.0, abs=1e-12)


def test_hull_of_normal_matrix_is_polygon_of_eigenvalues():
    ev = np.array([1, 1j, -1, -1j, 0.2])
    h = num_range_hull(np.diag(ev), n_angles=64)
    assert h.gap < 1e-12
    assert dist_to_hull(2.0, h) == pytest.approx(1.0, abs=1e-12)


@given(complex_matrices(2, 6))
def test_rayleigh_quotients_inside_hull_up_to_gap(A):
    rng = np.random.default_rng(0)
    h = num_range_hull(A, n_angles=64)
    pts = rayleigh_samples(A, 400, rng)
    assert np.max(dist_to_hull(pts, h)) <= h.gap + 1e-10 * h.scale


@given(complex_matrices(2, 5))
def test_hull_contains_spectrum_up_to_gap(A):
    h = num_range_hull(A, n_angles=128)
    ev = np.linalg.eigvals(A)
    # eigenvalues belong to Num(A); the polygon misses them by at most the gap
    assert np.max(dist_to_hull(ev, h)) <= h.gap + 1e-10 * h.scale


def test_refinement_reduces_gap():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    coarse = num_range_hull(A, 16)
    fine = num_range_hull(A, 16, tol=1e-7)
    assert fine.gap <= 1e-7 < coarse.gap
    # a nearly flat stretch of the boundary needs many directions; the cap wins
    capped = num_range_hull(A, 16, tol=1e-12, max_angles=4096)
    assert capped.n_angles >= 4096 and capped.gap > 1e-12


# ---------------------------------------------------------------- Riesz projections

def test_riesz_projection_counts_double_eigenvalue():
    P = riesz_projection(np.diag([0.0, 0.0, 5.0]), 0.0, 1.0)
    assert projection_rank(P) == 2
    assert np.allclose(P, np.diag([1, 1, 0]), atol=1e-9)


def test_riesz_projection_of_jordan_block_is_identity():
    P = riesz_projection([[0, 1], [0, 0]], 0.0, 1.0)
    assert np.allclose(P, np.eye(2), atol=1e-9)


@given(complex_matrices(2, 6))
def test_riesz_projection_is_idempotent_and_commutes(A):
    ev = np.linalg.eigvals(A)
    d = np.abs(ev[:, None] - ev[None, :]) + 1e9 * np.eye(ev.size)
    k = int(np.argmax(d.min(axis=1)))
    sep = d[k].min()
    if sep < 1e-2:
        return
    P = riesz_projection(A, ev[k], 0.45 * sep)
    scale = max(1.0, np.abs(P).max())
    assert np.allclose(P @ P, P, atol=1e-6 * scale)
    assert np.allclose(A @ P, P @ A, atol=1e-6 * scale * np.linalg.norm(A, 2))
    assert projection_rank(P) == 1


def test_contour_too_close_to_spectrum():
    with pytest.raises(ContourError):
        riesz_projection(np.diag([0.0, 1.0]), 0.0, 0.99)


def test_contour_without_eigenvalue():
    with pytest.raises(ParameterError):
        riesz_projection(np.diag([0.0, 1.0]), 5.0, 0.5)


def test_banded_projection_matches_eigenvector():
    n = 201
    A = np.eye(n, k=1) + np.eye(n, k=-1)
    A[100, 100] = 2.5
    P = riesz_projection(A, 3.2015621187, 0.5)
    ev, V = np.linalg.eigh(A)
    v = V[:, -1]
    assert projection_rank(P) == 1
    assert np.allclose(P, np.outer(v, v), atol=1e-9)
