import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specbounds.determinants import zero_order
from specbounds.errors import ParameterError
from specbounds.linalg import projection_rank, riesz_projection
from specbounds.operators import (JacobiSpec, build_truncation, factorization_check, factorize,
                                  free_truncation, green_J0, jacobi_determinant,
                                  jacobi_discrete_spectrum, perturbation_matrix,
                                  resolvent_check_green, schatten_equiv_check, symbol_norm_g,
                                  symbol_norm_k, truncation_spectrum, v_seq)

from oracles import free_resolvent_truncated, single_site_eigenvalues


def random_spec(seed, size, mag=1.0):
    rng = np.random.default_rng(seed)
    z = mag * (rng.standard_normal((3, size)) + 1j * rng.standard_normal((3, size))) / 2
    k0 = -(size // 2)
    return JacobiSpec(k0, k0 + size - 1, tuple(1 + z[0]), tuple(z[1]), tuple(1 + z[2]))


specs = st.builds(random_spec, st.integers(0, 10 ** 6), st.integers(1, 5),
                  st.sampled_from([0.1, 1.0, 3.0]))


# ---------------------------------------------------------------- structure

def test_spec_validation():
    with pytest.raises(ParameterError):
        JacobiSpec(0, 1, (1,), (0, 0), (1, 1))
    with pytest.raises(ParameterError):
        JacobiSpec(0, 0, (1,), (np.nan,), (1,))
    assert JacobiSpec.free().size == 0


def test_truncation_layout():
    spec = JacobiSpec(0, 0, (2.0,), (5.0,), (3.0,))
    J = build_truncation(spec, 2)
    # row k=0 sits at index 2: J[k,k-1] = a_{k-1} = 1, J[k,k] = 5, J[k,k+1] = c_0 = 3
    assert J[2, 1] == 1 and J[2, 2] == 5 and J[2, 3] == 3
    # row k=1: J[1,0] = a_0 = 2
    assert J[3, 2] == 2
    assert np.allclose(J - free_truncation(2), np.diag([0, 0, 5, 0, 0]) + np.diag([0, 0, 1, 0], -1)
                       + np.diag([0, 0, 2, 0], 1))
    with pytest.raises(ParameterError):
        build_truncation(JacobiSpec.single_site(1.0, k=5), 5)


def test_perturbation_matrix_and_v():
    spec = JacobiSpec(0, 0, (2.0,), (5.0,), (3.0,))
    D = perturbation_matrix(spec)
    assert np.allclose(D, [[5, 2], [1, 0]])
    v = v_seq(spec)
    assert v.k0 == 0 and np.allclose(v.values, [5, 2])
    assert v.norm(1) == 7


@given(specs)
def test_factorization_reconstructs(spec):
    res, nrm = factorization_check(spec)
    assert res.passed and nrm.passed


def test_factorization_zero_over_zero():
    # a site with v = 0 inside the window gets U entries 0/0 = 1 and no contribution
    spec = JacobiSpec(0, 2, (1, 1, 1), (1.0, 0, 1.0), (1, 1, 1))
    idx, vh, U = factorize(spec)
    assert vh[idx.tolist().index(1)] == 0
    assert factorization_check(spec)[0].passed


@given(specs, st.sampled_from([1.0, 2.0, 3.0]))
def test_schatten_equivalence(spec, p):
    assert all(r.passed for r in schatten_equiv_check(spec, p))


# ---------------------------------------------------------------- Green's function

@pytest.mark.parametrize("lam", [3.0, 2j, -2.5 + 0.1j, 0.3 + 0.5j])
def test_green_matches_truncated_inverse(lam):
    N = 120
    G = free_resolvent_truncated(lam, N)
    k = np.arange(-5, 6)
    ref = G[N + k, N]
    assert np.allclose(green_J0(k, 0, lam), ref, atol=1e-10)


@pytest.mark.parametrize("lam", [3.0, 2j, -2.5 + 0.1j])
def test_green_residual(lam):
    assert resolvent_check_green(lam) <= 1e-8


def test_green_symmetric_in_indices():
    assert green_J0(3, -1, 0.5j) == pytest.approx(green_J0(-1, 3, 0.5j))


# ---------------------------------------------------------------- spectrum

@pytest.mark.parametrize("b0", [2.5, -0.7, 3j, 1 + 1j])
def test_single_site_eigenvalue(b0):
    ref = single_site_eigenvalues(b0)
    z = jacobi_discrete_spectrum(JacobiSpec.single_site(b0))
    assert z.total == ref.size == 1
    assert abs(z.values[0] - ref[0]) < 1e-8


def test_rank_one_b25_value_and_multiplicity():
    spec = JacobiSpec.single_site(2.5)
    z = jacobi_discrete_spectrum(spec)
    lam = z.values[0]
    assert abs(lam - 3.2015621187) < 1e-8
    assert zero_order(jacobi_determinant(spec), lam, 0.1) == 1
    P = riesz_projection(build_truncation(spec, 500), lam, 0.1)
    assert projection_rank(P) == 1


def test_free_spec_has_no_eigenvalues():
    assert jacobi_discrete_spectrum(JacobiSpec.free()).total == 0
    assert jacobi_discrete_spectrum(JacobiSpec(0, 1, (1, 1), (0, 0), (1, 1))).total == 0


def test_weak_imaginary_site_has_no_eigenvalue():
    # b0 = i puts both roots of w^2 + i w - 1 on the unit circle
    assert single_site_eigenvalues(1j).size == 0
    z = jacobi_discrete_spectrum(JacobiSpec.single_site(1j))
    assert z.total == single_site_eigenvalues(1j).size


@given(specs)
def test_determinant_matches_truncation(spec):
    # cross_check raises InconsistencyError on any mismatch
    jacobi_discrete_spectrum(spec, cross_check=True)


@given(specs, st.sampled_from([1.0, 2.0]))
def test_factored_determinant_agrees(spec, p):
    d1 = jacobi_determinant(spec, p)
    d2 = jacobi_determinant(spec, p, factored=True)
    z = np.array([3 + 1j, -0.5 + 2j, -4 - 0.2j])
    assert np.allclose(d1(z), d2(z), rtol=1e-9, atol=1e-12)


def test_truncation_spectrum_drops_continuum():
    ev = truncation_spectrum(JacobiSpec.single_site(2.5), 100)
    assert ev.size == 1 and abs(ev[0] - math.sqrt(10.25)) < 1e-10


# ---------------------------------------------------------------- symbol norms

@pytest.mark.parametrize("lam", [2.5, 4.0, -3.0])
def test_symbol_g_closed_forms(lam):
    s = math.sqrt(lam * lam - 4)
    assert symbol_norm_g(lam, 1) == pytest.approx(2 * math.pi / s, rel=1e-10)
    assert symbol_norm_g(lam, 2) ** 2 == pytest.approx(2 * math.pi * abs(lam) / s ** 3, rel=1e-10)


def test_symbol_g_complex_matches_rectangle_rule():
    lam = 0.5 + 0.3j
    t = 2 * np.pi * np.arange(20000) / 20000
    ref = np.mean(np.abs(lam - 2 * np.cos(t)) ** -2) * 2 * np.pi
    assert symbol_norm_g(lam, 2) ** 2 == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("mu", [0.5, 2.0])
def test_symbol_k_closed_forms(mu):
    assert symbol_norm_k(-mu, 1, 1) == pytest.approx(math.pi / math.sqrt(mu), rel=1e-9)
    assert symbol_norm_k(-mu, 2, 3) ** 2 == pytest.approx(math.pi ** 2 / math.sqrt(mu), rel=1e-9)


def test_symbol_norm_guards():
    with pytest.raises(ParameterError):
        symbol_norm_g(1.0, 2)
    with pytest.raises(ParameterError):
        symbol_norm_k(-1.0, 1, 3)
    with pytest.raises(ParameterError):
        symbol_norm_k(4.0, 2, 1)
