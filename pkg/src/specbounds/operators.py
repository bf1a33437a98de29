"""Complex Jacobi operators, the free Green's function and resolvent symbol norms.

A Jacobi operator acts as ``(Ju)(k) = a_{k-1} u(k-1) + b_k u(k) + c_k u(k+1)``.
Specs are finitely supported: outside the window ``a = c = 1`` and ``b = 0``,
which is the free operator ``J0`` with spectrum ``[-2, 2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg

from .conformal import dist_halfline, dist_interval, phi1_inv
from .determinants import (Exclusion, FiniteRankPerturbation, find_zeros,
                           perturbation_determinant)
from .errors import InconsistencyError, ParameterError
from .linalg import SpectrumList, schatten_norm
from .reports import BoundReport

__all__ = [
    "JacobiSpec", "VSeq",
    "build_truncation", "free_truncation", "perturbation_matrix",
    "v_seq", "factorize", "green_J0", "jacobi_determinant",
    "truncation_spectrum", "jacobi_discrete_spectrum",
    "schatten_equiv_check", "symbol_norm_g", "symbol_norm_k", "factorization_check",
    "resolvent_check_green",
]

FREE_CUT = (-2.0, 2.0)


@dataclass(frozen=True)
class JacobiSpec:
    """Entries ``a_k, b_k, c_k`` for ``k_min <= k <= k_max``; free values elsewhere."""

    k_min: int
    k_max: int
    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self):
        n = self.k_max - self.k_min + 1
        if n < 0:
            raise ParameterError("empty window must have k_max = k_min - 1")
        for name in ("a", "b", "c"):
            arr = np.asarray(getattr(self, name), dtype=complex).ravel()
            if arr.size != n:
                raise ParameterError(f"sequence {name} has length {arr.size}, window needs {n}")
            if not np.all(np.isfinite(arr)):
                raise ParameterError(f"sequence {name} has non-finite entries")
            object.__setattr__(self, name, tuple(complex(x) for x in arr))

    @classmethod
    def free(cls) -> "JacobiSpec":
        return cls(0, -1, (), (), ())

    @classmethod
    def single_site(cls, b0: complex, k: int = 0) -> "JacobiSpec":
        return cls(k, k, (1.0,), (b0,), (1.0,))

    @property
    def size(self) -> int:
        return self.k_max - self.k_min + 1

    def conj(self) -> "JacobiSpec":
        return JacobiSpec(self.k_min, self.k_max, tuple(np.conj(self.a)),
                          tuple(np.conj(self.b)), tuple(np.conj(self.c)))

    def entries(self, k):
        """``(a_k, b_k, c_k)`` for integer array ``k``, free values off the window."""
        k = np.asarray(k)
        inside = (k >= self.k_min) & (k <= self.k_max)
        idx = np.clip(k - self.k_min, 0, max(self.size - 1, 0))
        if self.size == 0:
            one = np.ones(k.shape, dtype=complex)
            return one, np.zeros(k.shape, dtype=complex), one.copy()
        a = np.where(inside, np.asarray(self.a)[idx], 1.0)
        b = np.where(inside, np.asarray(self.b)[idx], 0.0)
        c = np.where(inside, np.asarray(self.c)[idx], 1.0)
        return a, b, c

    @property
    def support(self) -> np.ndarray:
        """Index set ``[k_min, k_max + 1]`` carrying ``J - J0``."""
        if self.size == 0:
            return np.zeros(0, dtype=int)
        return np.arange(self.k_min, self.k_max + 2)


@dataclass(frozen=True)
class VSeq:
    """Nonnegative sequence ``v_k`` starting at index ``k0``; zero elsewhere."""

    k0: int
    values: np.ndarray

    def norm(self, p: float) -> float:
        if self.values.size == 0:
            return 0.0
        return float(np.sum(self.values ** p) ** (1 / p))


def _tridiag(spec: JacobiSpec, idx: np.ndarray, free_only=False) -> np.ndarray:
    n = idx.size
    if free_only:
        a = np.ones(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        c = np.ones(n, dtype=complex)
    else:
        a, b, c = spec.entries(idx)
    # J[k, k-1] = a_{k-1}, J[k, k] = b_k, J[k, k+1] = c_k
    return np.diag(b) + np.diag(a[:-1], -1) + np.diag(c[:-1], 1)


def build_truncation(spec: JacobiSpec, N: int) -> np.ndarray:
    """Dirichlet truncation to indices ``-N..N``, a ``(2N+1)``-square matrix."""
    if spec.size and N < max(abs(spec.k_min), abs(spec.k_max)) + 1:
        raise ParameterError(f"window [{spec.k_min}, {spec.k_max}] does not fit in half-width {N}")
    return _tridiag(spec, np.arange(-N, N + 1))


def free_truncation(N: int) -> np.ndarray:
    return _tridiag(JacobiSpec.free(), np.arange(-N, N + 1), free_only=True)


def perturbation_matrix(spec: JacobiSpec) -> np.ndarray:
    """``J - J0`` restricted to the support ``[k_min, k_max + 1]``."""
    F = spec.support
    if F.size == 0:
        return np.zeros((0, 0), dtype=complex)
    a, b, c = spec.entries(F)
    D = np.diag(b).astype(complex)
    D += np.diag(a[:-1] - 1, -1) + np.diag(c[:-1] - 1, 1)
    return D


def v_seq(spec: JacobiSpec) -> VSeq:
    """``v_k = max(|a_{k-1}-1|, |a_k-1|, |b_k|, |c_{k-1}-1|, |c_k-1|)``."""
    F = spec.support
    if F.size == 0:
        return VSeq(0, np.zeros(0))
    a, b, c = spec.entries(F)
    am, _, cm = spec.entries(F - 1)
    v = np.max(np.abs(np.stack([am - 1, a - 1, b, cm - 1, c - 1])), axis=0)
    return VSeq(int(F[0]), v)


def _ratio(num, den):
    """``num/den`` with the convention ``0/0 = 1``."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=float)
    safe = np.where(den > 0, den, 1.0)
    return np.where(den > 0, num / safe, np.where(num == 0, 1.0, np.inf))


def factorize(spec: JacobiSpec):
    """``J - J0 = M_{v^1/2} U M_{v^1/2}`` on the window ``[k_min - 1, k_max + 2]``.

    Returns ``(idx, v_half, U)``: indices, square roots of ``v`` on those
    indices and the tridiagonal matrix ``U``.
    """
    if spec.size == 0:
        idx = np.arange(-1, 2)
    else:
        idx = np.arange(spec.k_min - 1, spec.k_max + 3)
    vs = v_seq(spec)
    v = np.zeros(idx.size)
    if vs.values.size:
        v[1:1 + vs.values.size] = vs.values
    a, b, c = spec.entries(idx)
    n = idx.size
    U = np.zeros((n, n), dtype=complex)
    U[np.arange(n), np.arange(n)] = _ratio(b, v)
    # U[k-1, k] = (c_{k-1} - 1)/sqrt(v_{k-1} v_k), U[k+1, k] = (a_k - 1)/sqrt(v_{k+1} v_k)
    U[np.arange(n - 1), np.arange(1, n)] = _ratio(c[:-1] - 1, np.sqrt(v[:-1] * v[1:]))
    U[np.arange(1, n), np.arange(n - 1)] = _ratio(a[:-1] - 1, np.sqrt(v[1:] * v[:-1]))
    return idx, np.sqrt(v), U


def green_J0(n, m, lam):
    """Resolvent kernel ``(l - J0)^{-1}(n, m) = w^{|n-m|} / (1/w - w)``, ``l = w + 1/w``."""
    w = np.asarray(phi1_inv(lam, FREE_CUT))
    k = np.abs(np.asarray(n) - np.asarray(m))
    out = w ** k / (1 / w - w)
    return complex(out) if np.ndim(out) == 0 else out


def jacobi_determinant(spec: JacobiSpec, p: float = 1.0, factored: bool = False):
    """Perturbation determinant of ``J`` relative to ``J0`` as an analytic handle."""
    F = spec.support
    if factored:
        idx, vh, U = factorize(spec)
        sl = slice(1, 1 + F.size)
        V = np.diag(vh[sl])
        pert = FiniteRankPerturbation(tuple(F.tolist()), m1=V, m2=U[sl, sl] @ V)
    else:
        pert = FiniteRankPerturbation(tuple(F.tolist()), block=perturbation_matrix(spec))
    return perturbation_determinant(pert, green_J0, p, "complement-of-interval", FREE_CUT)


def _localized_mask(J, mu, N, outer=0.1, mass_tol=1e-4):
    """Eigenvector mass test via one banded inverse-iteration step per eigenvalue."""
    n = J.shape[0]
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = np.diagonal(J, 1)
    ab[1] = np.diagonal(J)
    ab[2, :-1] = np.diagonal(J, -1)
    cut = int(math.ceil((1 - outer) * N))
    edge = np.abs(np.arange(-N, N + 1)) > cut
    rng = np.random.default_rng(0)
    start = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    keep = np.zeros(mu.size, dtype=bool)
    for i, m in enumerate(mu):
        shift = m + 1e-10 * (1 + abs(m))
        band = ab.copy()
        band[1] -= shift
        x = start
        for _ in range(3):
            x = scipy.linalg.solve_banded((1, 1), band, x)
            x = x / np.linalg.norm(x)
        keep[i] = np.sum(np.abs(x[edge]) ** 2) <= mass_tol
    return keep


def truncation_spectrum(spec: JacobiSpec, N: int, outer: float = 0.1,
                        mass_tol: float = 1e-4) -> np.ndarray:
    """Eigenvalues of the ``(2N+1)`` truncation whose eigenvectors are localized.

    Eigenvalues with more than ``mass_tol`` of eigenvector mass in the outer
    ``outer`` fraction of indices are artifacts of the truncation.
    """
    J = build_truncation(spec, N)
    mu = np.linalg.eigvals(J)
    # continuum-like eigenvalues hug the cut; only test the others
    cand = mu[dist_interval(mu, FREE_CUT) > 1e-8]
    if cand.size == 0:
        return cand
    return cand[_localized_mask(J, cand, N, outer, mass_tol)]


def _default_box(spec: JacobiSpec):
    r = 2.0 + float(np.linalg.norm(perturbation_matrix(spec), 2)) + 0.25
    return (-r * 1.0131, r * 0.9917, -r * 0.9893, r * 1.0077)


def jacobi_discrete_spectrum(spec: JacobiSpec, p: float = 1.0, search_box=None,
                             guard: float = 1e-6, cross_check: bool = True,
                             N: int | None = None, match_tol: float = 1e-5,
                             max_N: int = 1600) -> SpectrumList:
    """Discrete eigenvalues of ``J`` as zeros of its perturbation determinant.

    Zeros within ``guard`` of ``[-2, 2]`` are not searched. With
    ``cross_check`` the result is compared with localized eigenvalues of a
    Dirichlet truncation; the truncation is enlarged until every localized
    eigenvalue matches a zero to ``match_tol``, else ``InconsistencyError``.
    """
    if spec.size == 0 or not np.any(perturbation_matrix(spec)):
        return SpectrumList((), 0.0)
    d = jacobi_determinant(spec, p)
    box = _default_box(spec) if search_box is None else search_box
    zeros = find_zeros(d, box, Exclusion("interval", *FREE_CUT), guard=guard)
    if not cross_check:
        return zeros
    if N is None:
        N = max(100, 2 * max(abs(spec.k_min), abs(spec.k_max)) + 20)
    vals = zeros.values
    while True:
        tr = truncation_spectrum(spec, N)
        # only compare inside the searched region
        x0, x1, y0, y1 = box
        tr = tr[(tr.real > x0) & (tr.real < x1) & (tr.imag > y0) & (tr.imag < y1)]
        tr = tr[dist_interval(tr, FREE_CUT) > 10 * guard]
        miss = [t for t in tr if vals.size == 0 or np.min(np.abs(vals - t)) > match_tol]
        if not miss:
            break
        if 2 * N > max_N:
            raise InconsistencyError(
                f"truncation eigenvalues {miss} have no matching determinant zero", zeros, tr)
        N *= 2
    # zeros far from the cut decay fast and must show up in the truncation
    for z in vals:
        w = abs(phi1_inv(z, FREE_CUT))
        if w ** (0.8 * N) < 1e-8 and (tr.size == 0 or np.min(np.abs(tr - z)) > match_tol):
            raise InconsistencyError(f"determinant zero {z} missing from the truncation", zeros, tr)
    return zeros


def schatten_equiv_check(spec: JacobiSpec, p: float) -> list:
    """``6^{-1/p} ||v||_p <= ||J - J0||_{S_p} <= 3 ||v||_p`` as two reports."""
    if p < 1:
        raise ParameterError("schatten_equiv_check needs p >= 1")
    D = perturbation_matrix(spec)
    sp = schatten_norm(D, p) if D.size else 0.0
    vp = v_seq(spec).norm(p)
    info = {"p": p, "n": spec.size}
    return [
        BoundReport("schatten-upper", info, sp, vp, explicit_constant=3.0, rtol=1e-12),
        BoundReport("schatten-lower", info, vp, sp, explicit_constant=6 ** (1 / p), rtol=1e-12),
    ]


# ------------------------------------------------------------------ symbols

def symbol_norm_g(lam: complex, p: float) -> float:
    """``(int_0^{2pi} |l - 2 cos t|^{-p} dt)^{1/p}``, the L^p norm of the Jacobi symbol."""
    if p < 1:
        raise ParameterError("symbol_norm_g needs p >= 1")
    lam = complex(lam)
    if dist_interval(lam, FREE_CUT) < 1e-12:
        raise ParameterError("symbol_norm_g: l on [-2, 2]")

    def f(t):
        return abs(lam - 2 * math.cos(t)) ** -p

    points = None
    if abs(lam.real) < 2:
        points = [math.acos(lam.real / 2)]
    val, err = scipy.integrate.quad(f, 0.0, math.pi, points=points, epsabs=1e-12,
                                    epsrel=1e-12, limit=500)
    return (2 * val) ** (1 / p)


_SPHERE = {1: 2.0, 2: 2 * math.pi, 3: 4 * math.pi}


def symbol_norm_k(lam: complex, p: float, d: int) -> float:
    """``||(l - |x|^2)^{-1}||_{L^p(R^d)}`` by radial quadrature."""
    if d not in _SPHERE:
        raise ParameterError("symbol_norm_k supports d in {1, 2, 3}")
    if not (p > max(d / 2, 1) or (p == 1 and d == 1)):
        raise ParameterError(f"(p, d) = ({p}, {d}) gives a divergent norm")
    lam = complex(lam)
    if dist_halfline(lam) < 1e-12:
        raise ParameterError("symbol_norm_k: l on [0, inf)")

    def f(r):
        return r ** (d - 1) * abs(lam - r * r) ** -p

    r0 = math.sqrt(max(lam.real, 0.0))
    edge = r0 + 1.0 + math.sqrt(abs(lam))
    kw = dict(epsabs=1e-13, epsrel=1e-12, limit=500)
    if r0 > 0:
        head = scipy.integrate.quad(f, 0.0, r0, **kw)[0] + scipy.integrate.quad(f, r0, edge, **kw)[0]
    else:
        head = scipy.integrate.quad(f, 0.0, edge, **kw)[0]
    tail = scipy.integrate.quad(f, edge, np.inf, **kw)[0]
    return (_SPHERE[d] * (head + tail)) ** (1 / p)


def resolvent_check_green(lam: complex, N: int = 400) -> float:
    """Max residual of ``(l - J0^(N)) G - delta`` over interior rows for column 0."""
    J0 = free_truncation(N)
    k = np.arange(-N, N + 1)
    G = green_J0(k, 0, lam)
    res = (lam * G - J0 @ G)
    res[N] -= 1.0
    return float(np.max(np.abs(res[1:-1])))


def factorization_check(spec: JacobiSpec, rtol: float = 1e-12) -> list:
    """Reconstruction ``M_{v^1/2} U M_{v^1/2} = J - J0`` and ``||U|| <= 3``."""
    idx, vh, U = factorize(spec)
    diff = _tridiag(spec, idx) - _tridiag(spec, idx, free_only=True)
    rec = vh[:, None] * U * vh[None, :]
    scale = max(float(np.abs(diff).max()), 1.0)
    info = {"n": spec.size}
    return [
        BoundReport("factorization-residual", info, float(np.abs(rec - diff).max()),
                    rtol * scale, explicit_constant=1.0),
        BoundReport("factorization-norm", info, float(np.linalg.norm(U, 2)), 1.0,
                    explicit_constant=3.0, atol=1e-9),
    ]
