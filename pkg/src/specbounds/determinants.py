"""Regularized and perturbation determinants, and argument-principle zero finding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (ConfigurationError, ContourError, ConvergenceError, DomainError,
                     InconsistencyError, ParameterError, SubdivisionError)
from .linalg import SpectrumList, as_matrix, schatten_norm
from .reports import BoundReport

__all__ = [
    "GammaTable",
    "DEFAULT_GAMMA",
    "AnalyticHandle",
    "Exclusion",
    "FiniteRankPerturbation",
    "regularized_det",
    "det_commutation_check",
    "det_growth_check",
    "perturbation_determinant",
    "zero_order",
    "winding_number",
    "find_zeros",
]

UNIT_DISK = "unit-disk"
INTERVAL = "complement-of-interval"
HALFLINE = "complement-of-halfline"


# ---------------------------------------------------------------- determinants

def _det_from_eigs(ev: np.ndarray, n: int):
    """det_n(I - K) from the eigenvalues of K along the last axis."""
    ev = np.asarray(ev, dtype=complex)
    out = np.prod(1.0 - ev, axis=-1)
    if n > 1:
        j = np.arange(1, n)
        out = out * np.exp(np.sum(ev[..., None] ** j / j, axis=(-2, -1)))
    return out


def regularized_det(K, n: int) -> complex:
    """The n-regularized determinant ``det_n(I - K)``.

    Computed as ``prod_k (1 - l_k) exp(sum_{j<n} l_k^j / j)`` over all
    eigenvalues of ``K``.
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"regularization order must be a positive integer, got {n}")
    K = as_matrix(K)
    return complex(_det_from_eigs(np.linalg.eigvals(K), int(n)))


def det_commutation_check(K1, K2, n: int):
    """Return ``(det_n(I - K1 K2), det_n(I - K2 K1))``; they must agree."""
    K1 = np.asarray(K1, dtype=complex)
    K2 = np.asarray(K2, dtype=complex)
    if K1.ndim != 2 or K2.ndim != 2 or K1.shape[1] != K2.shape[0] or K2.shape[1] != K1.shape[0]:
        raise ParameterError(f"incompatible shapes {K1.shape} and {K2.shape}")
    return regularized_det(K1 @ K2, n), regularized_det(K2 @ K1, n)


class GammaTable(dict):
    """Constants in ``|det_ceil(p)(I - K)| <= exp(Gamma_p ||K||_p^p)``.

    Only p = 1 and p = 2 have standard values; anything else must be
    supplied explicitly.
    """

    def __init__(self, extra=None):
        super().__init__({1.0: 1.0, 2.0: 0.5})
        for p, g in (extra or {}).items():
            if not g > 0:
                raise ParameterError(f"Gamma_{p} must be positive")
            self[float(p)] = float(g)

    def lookup(self, p: float) -> float:
        try:
            return self[float(p)]
        except KeyError:
            raise ConfigurationError(
                f"no Gamma_p configured for p={p}; pass GammaTable({{{p}: value}})") from None


DEFAULT_GAMMA = GammaTable()


def det_growth_check(K, p: float, gamma: GammaTable = DEFAULT_GAMMA) -> BoundReport:
    """Check ``|det_ceil(p)(I - K)| <= exp(Gamma_p ||K||_{S_p}^p)``."""
    g = gamma.lookup(p)
    n = math.ceil(p)
    lhs = abs(regularized_det(K, n))
    rhs = math.exp(g * schatten_norm(K, p) ** p)
    return BoundReport("det-growth", {"p": p, "n": as_matrix(K).shape[0], "gamma": g},
                       lhs, rhs, explicit_constant=1.0, rtol=1e-9)


# ------------------------------------------------------------- analytic handles

def _distance_to_cut(z, tag, params):
    if tag == INTERVAL:
        a, b = params
        x = np.clip(z.real, a, b)
        return np.abs(z - x)
    if tag == HALFLINE:
        (a,) = params
        x = np.maximum(z.real, a)
        return np.abs(z - x)
    return None


@dataclass(frozen=True)
class AnalyticHandle:
    """A holomorphic function on a declared domain.

    Parameters
    ----------
    evaluate : callable
        Vectorized map from complex arrays to complex arrays.
    derivative : callable, optional
        Vectorized derivative; centered differences are used when absent.
    domain_tag : str
        ``"unit-disk"``, ``"complement-of-interval"`` (params ``(a, b)``) or
        ``"complement-of-halfline"`` (params ``(a,)`` for ``[a, inf)``).
    class_params : optional
        Class parameters (alpha, beta, gamma, xi, K) for disk functions.
    scale : float
        Length scale used for finite differences and cut tolerances.
    """

    evaluate: Callable
    derivative: Callable | None = None
    domain_tag: str = UNIT_DISK
    domain_params: tuple = ()
    class_params: object = None
    scale: float = 1.0
    name: str = field(default="h", compare=False)

    def __post_init__(self):
        if self.domain_tag not in (UNIT_DISK, INTERVAL, HALFLINE):
            raise ParameterError(f"unknown domain tag {self.domain_tag!r}")
        if self.domain_tag == UNIT_DISK and self.class_params is not None:
            h0 = complex(self(0.0))
            if abs(h0 - 1) > 1e-10:
                raise ParameterError(f"class-M functions need h(0) = 1, got {h0}")

    def check_domain(self, z):
        z = np.asarray(z, dtype=complex)
        if self.domain_tag == UNIT_DISK:
            if np.any(np.abs(z) >= 1):
                raise DomainError("point outside the open unit disk")
        else:
            d = _distance_to_cut(z, self.domain_tag, self.domain_params)
            if np.any(d < 1e-12 * self.scale):
                raise DomainError("point on the excluded spectrum of the reference operator")
        return z

    def __call__(self, z):
        z = self.check_domain(z)
        out = np.asarray(self.evaluate(z), dtype=complex)
        return complex(out) if out.ndim == 0 else out

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        if self.derivative is not None:
            return np.asarray(self.derivative(self.check_domain(z)), dtype=complex)
        d = 1e-6 * self.scale
        return (np.asarray(self(z + d)) - np.asarray(self(z - d))) / (2 * d)

    @classmethod
    def from_scalar(cls, f, **kw):
        """Wrap a scalar-only function."""
        vf = np.vectorize(lambda z: complex(f(complex(z))), otypes=[complex])
        return cls(evaluate=vf, **kw)


@dataclass(frozen=True)
class FiniteRankPerturbation:
    """Perturbation supported on the index set ``support``.

    Either ``block`` (the perturbation restricted to ``support``) or the
    factors ``m1``, ``m2`` with perturbation ``m1 @ m2``, restricted to
    ``support``, must be given.
    """

    support: tuple
    block: np.ndarray | None = None
    m1: np.ndarray | None = None
    m2: np.ndarray | None = None

    def __post_init__(self):
        f = len(self.support)
        if self.block is None and (self.m1 is None or self.m2 is None):
            raise ParameterError("need a block or both factors")
        for M in (self.block, self.m1, self.m2):
            if M is not None and np.shape(M) != (f, f):
                raise ParameterError(f"factor shape {np.shape(M)} does not match support size {f}")

    @property
    def norm(self) -> float:
        B = self.block if self.block is not None else self.m1 @ self.m2
        return float(np.linalg.norm(B, 2)) if len(self.support) else 0.0


def perturbation_determinant(pert: FiniteRankPerturbation, kernel: Callable, p: float,
                             domain_tag: str = INTERVAL, domain_params: tuple = (-2.0, 2.0),
                             scale: float | None = None) -> AnalyticHandle:
    """Perturbation determinant ``d(l) = det_ceil(p)(I_F - (M R_0(l))|_F)``.

    ``kernel(i, j, l)`` returns resolvent matrix elements of the reference
    operator and must broadcast over integer arrays ``i, j`` and complex
    ``l``. The perturbation vanishes outside ``F`` so the determinant is an
    exact ``|F| x |F|`` determinant.
    """
    n = math.ceil(p)
    if n < 1:
        raise ParameterError("p must be positive")
    F = np.asarray(pert.support, dtype=int)
    f = F.size
    ii, jj = np.meshgrid(F, F, indexing="ij")
    if scale is None:
        width = (domain_params[1] - domain_params[0]) if domain_tag == INTERVAL else abs(domain_params[0]) if domain_params else 0.0
        scale = pert.norm + width
        scale = scale if scale > 0 else 1.0

    def evaluate(lam):
        lam = np.asarray(lam, dtype=complex)
        if f == 0:
            return np.ones(lam.shape, dtype=complex)
        G = kernel(ii, jj, lam.reshape(-1, 1, 1))
        if pert.block is not None:
            K = pert.block @ G
        else:
            K = pert.m2 @ G @ pert.m1
        if n == 1:
            vals = np.linalg.det(np.eye(f) - K)
        else:
            vals = _det_from_eigs(np.linalg.eigvals(K), n)
        return vals.reshape(lam.shape)

    h = AnalyticHandle(evaluate, None, domain_tag, tuple(domain_params), None, float(scale), "d")
    far = h(1e6j * scale)
    if abs(far - 1) > 1e-4:
        raise InconsistencyError(f"perturbation determinant does not tend to 1 at infinity: {far}")
    return h


# ---------------------------------------------------------- argument principle

def zero_order(h: AnalyticHandle, lam0: complex, radius: float,
               n_nodes: int = 64, max_nodes: int = 1 << 16) -> int:
    """Number of zeros of ``h`` inside ``|z - lam0| < radius`` (with multiplicity).

    Trapezoid rule for ``(1/2 pi i) \\oint h'/h``, doubling the node count
    until two successive values agree; the result must be within 0.1 of an
    integer.
    """
    if not radius > 0:
        raise ParameterError("radius must be positive")
    prev = None
    n = n_nodes
    while n <= max_nodes:
        z = lam0 + radius * np.exp(2j * np.pi * np.arange(n) / n)
        hv = np.asarray(h(z))
        if np.min(np.abs(hv)) <= 1e-12:
            raise ContourError(f"|h| <= 1e-12 on the circle |z - {lam0}| = {radius}")
        val = np.mean(h.deriv(z) / hv * (z - lam0))
        if prev is not None and abs(val - prev) < 1e-3:
            k = round(val.real)
            if abs(val - k) > 0.1:
                raise ConvergenceError(f"winding integral {val} is not near an integer",
                                       state={"value": val, "n_nodes": n})
            return int(k)
        prev, n = val, 2 * n
    raise ConvergenceError(f"winding integral not converged at {max_nodes} nodes",
                           state={"value": prev})


def _graded_params(z0, z1, singular):
    """Segment parameters clustered geometrically near points in ``singular``."""
    L = abs(z1 - z0)
    ts = []
    for s in singular:
        t_star = np.clip(np.real((s - z0) * np.conj(z1 - z0)) / L ** 2, 0.0, 1.0)
        d0 = abs(z0 + t_star * (z1 - z0) - s)
        if d0 > 0.25 * L:
            continue
        off = max(d0, 1e-14 * L) * 2.0 ** np.arange(0, 64)
        off = off[off < L] / L
        ts.append(np.concatenate([[t_star], t_star - off, t_star + off]))
    if not ts:
        return np.zeros(0)
    t = np.concatenate(ts)
    return t[(t > 0) & (t < 1)]


def _curve_phase(h, path, t, max_depth=48, thr=np.pi / 4):
    """Total change of arg h along ``path(t)``, ``t`` increasing from 0 to 1.

    The initial parameters ``t`` are refined wherever the phase or the
    modulus of ``h`` jumps between neighbours.
    """
    # with an analytic derivative, |dz| |h'/h| also bounds the step; this
    # catches a near-contour multiple zero whose phase wraps between samples
    exact = h.derivative is not None
    z = path(t)
    v = np.asarray(h(z))
    d = np.asarray(h.deriv(z)) if exact else None
    for _ in range(max_depth):
        if np.min(np.abs(v)) == 0:
            raise ContourError(f"h vanishes on the path near {z[np.argmin(np.abs(v))]}")
        q = v[1:] / v[:-1]
        flag = (np.abs(np.angle(q)) > thr) | (np.abs(np.log(np.abs(q))) > 1.0)
        if exact:
            ld = np.abs(d / v)
            flag |= np.abs(np.diff(z)) * np.maximum(ld[1:], ld[:-1]) > 2 * thr
        bad = np.nonzero(flag)[0]
        if bad.size == 0:
            return float(np.sum(np.angle(q)))
        tm = 0.5 * (t[bad] + t[bad + 1])
        zm = path(tm)
        t = np.insert(t, bad + 1, tm)
        z = np.insert(z, bad + 1, zm)
        v = np.insert(v, bad + 1, np.asarray(h(zm)))
        if exact:
            d = np.insert(d, bad + 1, np.asarray(h.deriv(zm)))
    raise ContourError(f"argument of h not resolved along the path from {z[0]} to {z[-1]}")


def _path_phase(h, z0, z1, singular=(), n0=16):
    """Change of arg h along the segment [z0, z1], graded toward ``singular``."""
    t = np.unique(np.concatenate([np.linspace(0.0, 1.0, n0 + 1), _graded_params(z0, z1, singular)]))
    return _curve_phase(h, lambda s: z0 + s * (z1 - z0), t)


def _singular_points(h):
    if h.domain_tag == INTERVAL:
        return tuple(complex(x) for x in h.domain_params)
    if h.domain_tag == HALFLINE:
        return (complex(h.domain_params[0]),)
    return ()


def winding_number(h, box, singular=None) -> int:
    """Winding number of ``h`` around the boundary of the rectangle ``box``."""
    if singular is None:
        singular = _singular_points(h)
    x0, x1, y0, y1 = box
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = 0.0
    for k in range(4):
        total += _path_phase(h, corners[k], corners[(k + 1) % 4], singular)
    w = total / (2 * np.pi)
    k = round(w)
    if abs(w - k) > 1e-6:
        raise SubdivisionError(f"non-integer winding {w} on box {box}", box)
    return int(k)


@dataclass(frozen=True)
class Exclusion:
    """Closed set excluded from zero search: ``[a, b]`` or ``[a, inf)`` on the real axis."""

    kind: str
    a: float
    b: float = math.inf

    @classmethod
    def from_handle(cls, h: AnalyticHandle):
        if h.domain_tag == INTERVAL:
            return cls("interval", *h.domain_params)
        if h.domain_tag == HALFLINE:
            return cls("halfline", h.domain_params[0])
        return None


def _remove_exclusion(box, excl: Exclusion | None, guard: float):
    """Split ``box`` into rectangles avoiding the guarded exclusion set."""
    if excl is None:
        return [box]
    x0, x1, y0, y1 = box
    a, b = excl.a - guard, excl.b + guard
    if x1 <= a or x0 >= b or y1 <= -guard or y0 >= guard:
        return [box]
    pieces = []
    if y1 > guard:
        pieces.append((x0, x1, max(y0, guard), y1))
    if y0 < -guard:
        pieces.append((x0, x1, y0, min(y1, -guard)))
    ym0, ym1 = max(y0, -guard), min(y1, guard)
    if ym1 > ym0:
        if x0 < a:
            pieces.append((x0, min(x1, a), ym0, ym1))
        if x1 > b:
            pieces.append((max(x0, b), x1, ym0, ym1))
    return [p for p in pieces if p[1] > p[0] and p[3] > p[2]]


_SPLIT_FRACTIONS = (0.5 + 0.0137, 0.5 - 0.0419, 0.5 + 0.0871)


def _split(box, frac):
    x0, x1, y0, y1 = box
    w, hgt = x1 - x0, y1 - y0
    xs = x0 + frac * w
    ys = y0 + (1 - frac) * hgt
    if w > 2 * hgt:
        return [(x0, xs, y0, y1), (xs, x1, y0, y1)]
    if hgt > 2 * w:
        return [(x0, x1, y0, ys), (x0, x1, ys, y1)]
    return [(x0, xs, y0, ys), (xs, x1, y0, ys), (x0, xs, ys, y1), (xs, x1, ys, y1)]


def _inside(z, box, slack=0.0):
    x0, x1, y0, y1 = box
    return x0 - slack <= z.real <= x1 + slack and y0 - slack <= z.imag <= y1 + slack


def _newton(h, z, box, tol, max_iter=60):
    """Newton iteration; returns the root or None if it leaves the box or stalls.

    Once the residual is below ``tol`` a few more steps are taken while the
    residual keeps decreasing.
    """
    x0, x1, y0, y1 = box
    slack = 0.25 * max(x1 - x0, y1 - y0)
    best, best_res = None, np.inf
    try:
        for _ in range(max_iter):
            if not _inside(z, box, slack):
                return best
            hz = complex(h(z))
            abs_hz = abs(hz)
            if best is not None:
                if abs_hz >= best_res:
                    return best
                best, best_res = z, abs_hz
            elif abs_hz < tol:
                best, best_res = z, abs_hz
            if abs_hz == 0:
                return z
            dz = complex(h.deriv(z))
            if dz == 0 or not np.isfinite(dz):
                return best
            step = hz / dz
            if best is not None and abs(step) < 1e-15 * max(abs(z), h.scale):
                return best
            z = z - step
    except DomainError:
        return best
    return best


def find_zeros(h: AnalyticHandle, box, exclusion: Exclusion | None | str = "auto",
               guard: float = 1e-6, newton_tol: float = 1e-10,
               min_size: float | None = None, cluster_tol: float | None = None) -> SpectrumList:
    """Zeros of ``h`` in the rectangle ``box = (x0, x1, y0, y1)``.

    Recursive subdivision driven by winding numbers. Boxes meeting the
    exclusion set (inflated by ``guard``) are cut along the guard lines and
    the excluded part dropped. A box with winding one is handed to Newton;
    boxes with larger winding are split until smaller than ``min_size``, and
    the zero is then reported with that multiplicity.
    """
    if exclusion == "auto":
        exclusion = Exclusion.from_handle(h)
    scale = h.scale
    if min_size is None:
        min_size = 1e-6 * scale
    if cluster_tol is None:
        cluster_tol = 1e-7 * scale
    found_z, found_m = [], []

    def solve(b, n, depth):
        if n == 0:
            return
        if n < 0:
            raise SubdivisionError(f"negative winding {n} on box {b}", b)
        size = max(b[1] - b[0], b[3] - b[2])
        centre = complex(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]))
        if n == 1 or size < min_size:
            z = _newton(h, centre, b, newton_tol)
            if z is not None and _inside(z, b):
                found_z.append(z)
                found_m.append(n)
                return
            if size < min_size:
                found_z.append(centre)
                found_m.append(n)
                return
        if depth > 200:
            raise SubdivisionError(f"subdivision depth exceeded at box {b}", b)
        for frac in _SPLIT_FRACTIONS:
            kids = _split(b, frac)
            try:
                counts = [winding_number(h, c) for c in kids]
            except (ContourError, SubdivisionError):
                continue
            if sum(counts) == n:
                for c, k in zip(kids, counts):
                    solve(c, k, depth + 1)
                return
        raise SubdivisionError(f"winding counts of children do not add up on box {b}", b)

    for piece in _remove_exclusion(tuple(map(float, box)), exclusion, guard):
        solve(piece, winding_number(h, piece), 0)
    return SpectrumList.from_values(found_z, cluster_tol, found_m)
