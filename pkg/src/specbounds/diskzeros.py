"""Zeros of holomorphic functions on the unit disk.

Jensen's identity, the weighted zero-sum identity, Blaschke-type and
BGK-type sums, zero counting, and the empirical growth constant ``K`` of the
class of functions with ``log|h(w)| <= K|w|^g / ((1-|w|)^a prod|w-x_j|^{b_j})``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .determinants import AnalyticHandle, _curve_phase, _newton, zero_order
from .errors import ContourError, DomainError, ParameterError, SubdivisionError
from .linalg import SpectrumList
from .reports import BoundReport

__all__ = [
    "ClassMParams", "Balance", "KEstimate",
    "planted_function", "random_planted",
    "count_zeros", "find_zeros_disk", "jensen_balance", "weighted_sum_balance",
    "blaschke_type_sum", "bgk_sum", "count_bound_check", "empirical_class_K",
    "circle_power_integral",
]


def _pos(x):
    return max(x, 0.0)


@dataclass(frozen=True)
class ClassMParams:
    """Growth parameters ``(alpha, beta, gamma, xi, K)`` and slacks ``tau, eps``."""

    alpha: float = 0.0
    beta: tuple = ()
    gamma: float = 0.0
    xi: tuple = ()
    K: float = 0.0
    tau: float = 0.1
    eps: float = 0.1

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        xi = tuple(complex(x) for x in self.xi)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "xi", xi)
        if len(beta) != len(xi):
            raise ParameterError("beta and xi must have the same length")
        if min((self.alpha, self.gamma, self.K) + beta, default=0.0) < 0:
            raise ParameterError("class parameters must be nonnegative")
        if any(abs(abs(x) - 1) > 1e-12 for x in xi):
            raise ParameterError("points xi must lie on the unit circle")
        for i in range(len(xi)):
            for j in range(i):
                if abs(xi[i] - xi[j]) < 1e-12:
                    raise ParameterError("points xi must be distinct")
        if not (self.tau > 0 and self.eps > 0):
            raise ParameterError("tau and eps must be positive")


class Balance(tuple):
    """``(lhs, rhs)`` pair with extra attributes ``tail`` and ``status``."""

    def __new__(cls, lhs, rhs, tail=0.0, status="ok"):
        obj = super().__new__(cls, (float(lhs), float(rhs)))
        obj.tail = float(tail)
        obj.status = status
        return obj

    @property
    def lhs(self):
        return self[0]

    @property
    def rhs(self):
        return self[1]


# ---------------------------------------------------------- test functions

def planted_function(zeros, multiplicities=None, poly=()) -> AnalyticHandle:
    """``h(z) = exp(sum_k c_k z^k) prod_j (1 - z/w_j)^{m_j}`` with ``h(0) = 1``.

    ``poly`` lists ``c_1, c_2, ...``; zeros and multiplicities are exact by
    construction.
    """
    w = np.asarray(zeros, dtype=complex).ravel()
    if np.any(w == 0):
        raise ParameterError("planted zeros must be nonzero so that h(0) = 1")
    m = np.ones(w.size) if multiplicities is None else np.asarray(multiplicities, dtype=float)
    c = np.asarray(poly, dtype=complex)
    k = np.arange(1, c.size + 1)

    def f(z):
        z = np.asarray(z, dtype=complex)
        out = np.exp(np.sum(c * z[..., None] ** k, axis=-1)) if c.size else np.ones(z.shape, complex)
        return out * np.prod((1 - z[..., None] / w) ** m, axis=-1)

    def df(z):
        z = np.asarray(z, dtype=complex)
        e = np.exp(np.sum(c * z[..., None] ** k, axis=-1)) if c.size else np.ones(z.shape, complex)
        g = np.sum(k * c * z[..., None] ** (k - 1), axis=-1) if c.size else 0.0
        base = 1 - z[..., None] / w
        fac = base ** m
        total = g * np.prod(fac, axis=-1)
        # product rule without dividing by a factor that may vanish
        for j in range(w.size):
            other = np.prod(np.delete(fac, j, axis=-1), axis=-1)
            total = total - m[j] / w[j] * base[..., j] ** (m[j] - 1) * other
        return e * total

    return AnalyticHandle(f, df, "unit-disk", (), None, 1.0, "planted")


def random_planted(rng: np.random.Generator, n_zeros: int, r_avoid=(), min_gap: float = 1e-3,
                   r_max: float = 0.999, poly_degree: int = 2):
    """Random planted function; zeros keep ``min_gap`` away from circles ``r_avoid``.

    Returns ``(handle, zeros)``.
    """
    zs = []
    while len(zs) < n_zeros:
        r = rng.uniform(0.05, r_max)
        if any(abs(r - ra) < min_gap for ra in r_avoid):
            continue
        zs.append(r * np.exp(2j * np.pi * rng.uniform()))
    poly = 0.5 * (rng.standard_normal(poly_degree) + 1j * rng.standard_normal(poly_degree))
    return planted_function(zs, poly=poly), np.array(zs)


# ---------------------------------------------------------------- counting

def count_zeros(h: AnalyticHandle, r: float) -> int:
    """Number of zeros of ``h`` in ``|z| < r`` (with multiplicity)."""
    if not 0 < r < 1:
        raise ParameterError("count_zeros needs 0 < r < 1")
    return zero_order(h, 0.0, r)


def _region_winding(h, reg) -> int:
    """Winding of ``h`` around the polar rectangle ``(r0, r1, t0, t1)``."""
    r0, r1, t0, t1 = reg
    full = t1 - t0 >= 2 * np.pi - 1e-12
    n = 33

    def arc(r, a, b):
        return lambda s: r * np.exp(1j * (a + s * (b - a)))

    def ray(t, a, b):
        return lambda s: (a + s * (b - a)) * np.exp(1j * t)

    s = np.linspace(0.0, 1.0, n)
    total = _curve_phase(h, arc(r1, t0, t1), s)
    if r0 > 0:
        total += _curve_phase(h, arc(r0, t1, t0), s)
    if not full:
        total += _curve_phase(h, ray(t1, r1, r0), s) + _curve_phase(h, ray(t0, r0, r1), s)
    w = total / (2 * np.pi)
    k = round(w)
    if abs(w - k) > 1e-6:
        raise SubdivisionError(f"non-integer winding {w} on region {reg}", reg)
    return int(k)


_FRACS = (0.5 + 0.0123, 0.5 - 0.0377, 0.5 + 0.0711)


def _split_region(reg, frac):
    r0, r1, t0, t1 = reg
    if r0 == 0:
        rs = frac * r1
        return [(0.0, rs, t0, t1), (rs, r1, t0, t1)]
    if t1 - t0 >= 2 * np.pi - 1e-12:
        ts = [t0 + (k + frac - 0.5) * np.pi / 2 for k in range(4)] + [t0 + 2 * np.pi + (frac - 0.5) * np.pi / 2]
        return [(r0, r1, ts[k], ts[k + 1]) for k in range(4)]
    rm = r0 + frac * (r1 - r0)
    tm = t0 + (1 - frac) * (t1 - t0)
    return [(r0, rm, t0, tm), (rm, r1, t0, tm), (r0, rm, tm, t1), (rm, r1, tm, t1)]


def find_zeros_disk(h: AnalyticHandle, r: float, newton_tol: float = 1e-12,
                    min_size: float = 1e-7, cluster_tol: float = 1e-8) -> SpectrumList:
    """Zeros of ``h`` in ``|z| < r`` by subdivision of polar rectangles."""
    found_z, found_m = [], []

    def inside(z, reg):
        r0, r1, t0, t1 = reg
        rho = abs(z)
        if not r0 <= rho <= r1:
            return False
        if t1 - t0 >= 2 * np.pi - 1e-12:
            return True
        return (np.angle(z) - t0) % (2 * np.pi) <= t1 - t0

    def box_of(reg):
        r0, r1, t0, t1 = reg
        if r0 == 0:
            return (-r1, r1, -r1, r1)
        pts = np.array([r0, r1])[:, None] * np.exp(1j * np.linspace(t0, t1, 9))[None]
        return (pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max())

    def solve(reg, n, depth):
        if n == 0:
            return
        r0, r1, t0, t1 = reg
        size = max(r1 - r0, r1 * min(t1 - t0, np.pi))
        centre = 0.0 if r0 == 0 else 0.5 * (r0 + r1) * np.exp(0.5j * (t0 + t1))
        if n == 1 or size < min_size:
            z = _newton(h, complex(centre), box_of(reg), newton_tol)
            if z is not None and inside(z, reg):
                found_z.append(z)
                found_m.append(n)
                return
            if size < min_size:
                found_z.append(complex(centre))
                found_m.append(n)
                return
        if depth > 200:
            raise SubdivisionError(f"subdivision depth exceeded on region {reg}", reg)
        for frac in _FRACS:
            kids = _split_region(reg, frac)
            try:
                counts = [_region_winding(h, k) for k in kids]
            except (ContourError, SubdivisionError, DomainError):
                continue
            if sum(counts) == n:
                for k, c in zip(kids, counts):
                    solve(k, c, depth + 1)
                return
        raise SubdivisionError(f"winding counts do not add up on region {reg}", reg)

    root = (0.0, float(r), 0.0, 2 * np.pi)
    solve(root, _region_winding(h, root), 0)
    return SpectrumList.from_values(found_z, cluster_tol, found_m)


# ------------------------------------------------------------- identities

def _circle_mean_log(h, r, angles=()):
    """``(1/2pi) int_0^{2pi} log|h(r e^{it})| dt`` by adaptive quadrature."""
    def f(t):
        return math.log(abs(complex(h(r * complex(math.cos(t), math.sin(t))))))

    pts = sorted({float(a % (2 * np.pi)) for a in angles} - {0.0})
    val, err = scipy.integrate.quad(f, 0.0, 2 * np.pi, points=pts or None,
                                    epsabs=1e-11, epsrel=1e-11, limit=1000)
    return val / (2 * np.pi)


def jensen_balance(h: AnalyticHandle, r: float, zeros: SpectrumList | None = None) -> Balance:
    """Both sides of Jensen's identity on the circle ``|z| = r``.

    ``lhs = sum_{|w| < r} log(r/|w|)`` over located zeros and ``rhs`` is the
    circle average of ``log|h|``.
    """
    h0 = complex(h(0.0))
    if abs(abs(h0) - 1) > 1e-10:
        raise ParameterError(f"jensen_balance needs |h(0)| = 1, got {abs(h0)}")
    if zeros is None:
        zeros = find_zeros_disk(h, r)
    w, m = zeros.values, zeros.multiplicities
    keep = np.abs(w) < r
    lhs = float(np.sum(m[keep] * np.log(r / np.abs(w[keep]))))
    rhs = _circle_mean_log(h, r, np.angle(w))
    return Balance(lhs, rhs)


def weighted_sum_balance(h: AnalyticHandle, q: float, r_max: float,
                         zeros: SpectrumList | None = None) -> Balance:
    """Both sides of the weighted identity with ``phi(r) = (1 - r)^q``.

    ``lhs = sum (1 - |w|)^q``; ``rhs = int_0^1 [r phi'(r)]' M(r) dr`` with
    ``M`` the circle average of ``log|h|``, integrated by nested quadrature on
    ``[0, r_max]``. On ``[r_max, 1)`` the function is zero free, so
    ``M(r) = M(r_max) + N log(r/r_max)``; that tail is integrated exactly and
    reported as ``tail``.
    """
    if zeros is None:
        zeros = find_zeros_disk(h, r_max)
    w, m = zeros.values, zeros.multiplicities
    lhs = float(np.sum(m * (1 - np.abs(w)) ** q))
    if q <= 1:
        return Balance(lhs, math.nan, math.nan, "inconclusive")
    angles = np.angle(w)

    def dphi(r):
        return q * (1 - r) ** (q - 2) * (r * q - 1)

    def outer(r):
        return dphi(r) * _circle_mean_log(h, r, angles)

    radii = sorted({float(x) for x in np.abs(w) if 0 < x < r_max})
    head, _ = scipy.integrate.quad(outer, 0.0, r_max, points=radii or None,
                                   epsabs=1e-10, epsrel=1e-10, limit=500)
    M0 = _circle_mean_log(h, r_max, angles)
    N = count_zeros(h, r_max)
    tail, _ = scipy.integrate.quad(lambda r: q * (r * q - 1) * (M0 + N * math.log(r / r_max)),
                                   r_max, 1.0, weight="alg", wvar=(0.0, q - 2),
                                   epsabs=1e-12, epsrel=1e-12, limit=200)
    return Balance(lhs, head + tail, tail, "ok")


# ------------------------------------------------------------------ sums

def blaschke_type_sum(zeros: SpectrumList, params: ClassMParams) -> float:
    """``sum (1 - |w|)^{1 + alpha + max_j (beta_j - 1)_+ + tau}``."""
    w, m = zeros.values, zeros.multiplicities
    if w.size == 0:
        return 0.0
    if np.any(np.abs(w) >= 1):
        raise DomainError("zeros must lie in the open unit disk")
    bmax = max((_pos(b - 1) for b in params.beta), default=0.0)
    expo = 1 + params.alpha + bmax + params.tau
    return float(np.sum(m * (1 - np.abs(w)) ** expo))


def bgk_sum(zeros: SpectrumList, params: ClassMParams) -> float:
    """``sum (1-|w|)^{alpha+1+tau} / |w|^{(gamma-eps)_+} prod_j |w - xi_j|^{(beta_j-1+tau)_+}``.

    For ``alpha = 0`` the first exponent is 1.
    """
    w, m = zeros.values, zeros.multiplicities
    if w.size == 0:
        return 0.0
    if np.any(np.abs(w) >= 1):
        raise DomainError("zeros must lie in the open unit disk")
    e0 = 1.0 if params.alpha == 0 else params.alpha + 1 + params.tau
    eg = _pos(params.gamma - params.eps)
    if eg > 0 and np.any(w == 0):
        raise DomainError("zero at the origin with positive (gamma - eps)_+")
    terms = (1 - np.abs(w)) ** e0
    if eg > 0:
        terms = terms / np.abs(w) ** eg
    for b, x in zip(params.beta, params.xi):
        terms = terms * np.abs(w - x) ** _pos(b - 1 + params.tau)
    return float(np.sum(m * terms))


def count_bound_check(h: AnalyticHandle, r: float) -> BoundReport:
    """Ratio ``N(h, r) / (K r^gamma)``; the constant in front is unspecified."""
    cp = h.class_params
    if cp is None:
        raise ParameterError("count_bound_check needs class parameters on the handle")
    if not 0 < r <= 0.5:
        raise ParameterError("count_bound_check needs 0 < r <= 1/2")
    n = count_zeros(h, r)
    return BoundReport("count-bound", {"r": r, "gamma": cp.gamma, "K": cp.K},
                       float(n), cp.K * r ** cp.gamma)


@dataclass(frozen=True)
class KEstimate:
    value: float
    n_points: int
    n_skipped: int

    @property
    def reliable(self) -> bool:
        return self.n_skipped <= 0.05 * self.n_points

    def __float__(self):
        return self.value


def empirical_class_K(h: AnalyticHandle, alpha: float, beta=(), gamma: float = 0.0, xi=(),
                      n_radial: int = 40, n_angular: int = 64, delta: float = 1e-3,
                      log_abs=None) -> KEstimate:
    """Smallest ``K`` consistent with the growth bound on a polar grid.

    The maximum over the grid of ``log|h(w)| (1-|w|)^alpha prod|w-xi_j|^{beta_j} / |w|^gamma``,
    floored at 0. Grid points where ``h`` overflows are skipped and counted.
    ``log_abs`` may supply ``log|h|`` directly on arrays.
    """
    r = (1 - delta) * np.arange(1, n_radial + 1) / n_radial
    t = 2 * np.pi * np.arange(n_angular) / n_angular
    w = (r[:, None] * np.exp(1j * t)[None]).ravel()
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if log_abs is not None:
            lg = np.asarray(log_abs(w), dtype=float)
        else:
            lg = np.log(np.abs(np.asarray(h(w))))
    bad = ~np.isfinite(lg) & ~(lg == -np.inf)
    weight = (1 - np.abs(w)) ** alpha / np.abs(w) ** gamma
    for b, x in zip(beta, xi):
        weight = weight * np.abs(w - x) ** b
    vals = np.where(bad | (lg == -np.inf), 0.0, lg) * weight
    est = KEstimate(float(max(np.max(vals), 0.0)), int(w.size), int(bad.sum()))
    if not est.reliable:
        warnings.warn(f"empirical K unreliable: {est.n_skipped} of {est.n_points} grid points overflowed")
    return est


def circle_power_integral(r: float, beta: float, xi: complex = 1.0) -> float:
    """``int_0^{2pi} |r e^{it} - xi|^{-beta} dt`` for unimodular ``xi``."""
    t0 = float(np.angle(xi))

    def f(t):
        return abs(r * complex(math.cos(t + t0), math.sin(t + t0)) - xi) ** -beta

    # integrand peaks at t = 0 with width about 1 - r
    w = 1 - r
    pts = [x for x in (w, 10 * w, 100 * w) if x < np.pi]
    val = 0.0
    edges = [0.0] + pts + [np.pi]
    for a, b in zip(edges[:-1], edges[1:]):
        val += scipy.integrate.quad(f, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
    return 2 * val
