"""Dense complex linear algebra: spectra, Schatten norms, numerical range, Riesz projections."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.sparse.csgraph import connected_components

from .errors import ContourError, ConvergenceError, ParameterError
from .reports import BoundReport

__all__ = [
    "SpectrumList",
    "NumRangeHull",
    "as_matrix",
    "eigen_spectrum",
    "singular_values",
    "schatten_norm",
    "num_range_hull",
    "dist_to_hull",
    "riesz_projection",
    "projection_rank",
    "weyl_check",
    "schatten_monotonicity_check",
]


def as_matrix(A) -> np.ndarray:
    """Validate and return ``A`` as a finite square complex array."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ParameterError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ParameterError("matrix has non-finite entries")
    return A


@dataclass(frozen=True)
class SpectrumList:
    """Eigenvalues with multiplicities, sorted by real then imaginary part.

    Attributes
    ----------
    items : tuple of (complex, int)
        Representative value of each cluster and its multiplicity.
    cluster_tol : float
        Values closer than this were merged into one cluster.
    """

    items: tuple = ()
    cluster_tol: float = 0.0

    def __post_init__(self):
        items = tuple((complex(v), int(m)) for v, m in self.items)
        if any(m <= 0 for _, m in items):
            raise ParameterError("multiplicities must be positive")
        items = tuple(sorted(items, key=lambda t: (t[0].real, t[0].imag)))
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.items], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.items], dtype=int)

    @property
    def total(self) -> int:
        return int(sum(m for _, m in self.items))

    def expanded(self) -> np.ndarray:
        """Values repeated according to multiplicity."""
        return np.repeat(self.values, self.multiplicities)

    def filter(self, keep) -> "SpectrumList":
        """Sub-list of items whose value satisfies ``keep``."""
        return SpectrumList(tuple((v, m) for v, m in self.items if keep(v)), self.cluster_tol)

    def to_records(self) -> list:
        return [{"re": v.real, "im": v.imag, "multiplicity": m} for v, m in self.items]

    @classmethod
    def from_records(cls, records, cluster_tol=0.0) -> "SpectrumList":
        return cls(tuple((complex(r["re"], r["im"]), int(r["multiplicity"])) for r in records), cluster_tol)

    @classmethod
    def from_values(cls, values, cluster_tol=0.0, weights=None) -> "SpectrumList":
        """Cluster a flat list of values, each counted ``weights[i]`` times (default 1)."""
        values = np.asarray(values, dtype=complex).ravel()
        if weights is None:
            weights = np.ones(values.size, dtype=int)
        return cls(_cluster(values, np.asarray(weights, dtype=int).ravel(), cluster_tol), cluster_tol)


def _cluster(values: np.ndarray, weights: np.ndarray, tol: float) -> tuple:
    """Single-linkage clustering; clusters are represented by their weighted mean."""
    if values.size == 0:
        return ()
    reps = values.copy()
    while True:
        adj = np.abs(reps[:, None] - reps[None, :]) <= tol
        n, labels = connected_components(adj, directed=False)
        if n == reps.size:
            return tuple(zip(reps.tolist(), weights.tolist()))
        new_reps = np.zeros(n, dtype=complex)
        new_w = np.zeros(n, dtype=int)
        np.add.at(new_reps, labels, reps * weights)
        np.add.at(new_w, labels, weights)
        reps, weights = new_reps / new_w, new_w


def eigen_spectrum(A, cluster_tol: float | None = None) -> SpectrumList:
    """All eigenvalues of ``A`` with algebraic multiplicities.

    Eigenvalues come from LAPACK (Hessenberg reduction and shifted QR). Values
    within ``cluster_tol`` (default ``1e-7 * ||A||``) are merged, since QR
    returns perturbed simple eigenvalues for a Jordan block.
    """
    A = as_matrix(A)
    if cluster_tol is None:
        cluster_tol = 1e-7 * np.linalg.norm(A, 2)
    if cluster_tol < 0:
        raise ParameterError("cluster_tol must be nonnegative")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        H = scipy.linalg.hessenberg(A)
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}",
                               state={"hessenberg": H}) from exc
    return SpectrumList.from_values(ev, cluster_tol)


def singular_values(A) -> np.ndarray:
    """Singular values in nonincreasing order."""
    A = as_matrix(A)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc


def schatten_norm(A, p: float) -> float:
    """Schatten p-norm, the l^p norm of the singular values (p may be ``inf``)."""
    if not p > 0:
        raise ParameterError(f"Schatten exponent must be positive, got {p}")
    s = singular_values(A)
    if np.isinf(p):
        return float(s[0])
    smax = s[0]
    if smax == 0:
        return 0.0
    # scale first so large p does not overflow
    return float(smax * np.sum((s / smax) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class NumRangeHull:
    """Inner polygon of the numerical range.

    Vertices are Rayleigh quotients of support eigenvectors, listed
    counterclockwise. ``gap`` bounds how far the true numerical range can
    stick out of the polygon, so ``dist - gap <= dist(l, Num) <= dist``.
    """

    vertices: tuple
    n_angles: int
    gap: float = 0.0
    scale: float = field(default=1.0, compare=False)

    @property
    def points(self) -> np.ndarray:
        return np.array(self.vertices, dtype=complex)


def _support_points(A: np.ndarray, theta: np.ndarray):
    """Extreme Rayleigh quotients in the directions ``theta``."""
    rot = np.exp(-1j * theta)[:, None, None]
    H = 0.5 * (rot * A[None] + np.conj(rot) * A.conj().T[None])
    vals, vecs = np.linalg.eigh(H)
    v = vecs[:, :, -1]
    pts = np.einsum("ki,ij,kj->k", v.conj(), A, v)
    return pts, vals[:, -1]


def _edge_gaps(theta, pts, h):
    """Distance from each edge to the corner of its two support lines."""
    t1, t2 = theta, np.roll(theta, -1)
    dt = np.mod(t2 - t1, 2 * np.pi)
    dt[dt == 0] = 2 * np.pi
    p1, p2 = pts, np.roll(pts, -1)
    h1, h2 = h, np.roll(h, -1)
    gaps = np.full(theta.size, np.inf)
    ok = dt < np.pi - 1e-9
    # corner z solves Re(e^{-i t1} z) = h1, Re(e^{-i t2} z) = h2
    det = np.sin(dt[ok])
    corner = (h1[ok] * np.sin(t2[ok]) - h2[ok] * np.sin(t1[ok])) / det \
        + 1j * (h2[ok] * np.cos(t1[ok]) - h1[ok] * np.cos(t2[ok])) / det
    gaps[ok] = _segment_dist(corner, p1[ok], p2[ok])
    return gaps


def _segment_dist(z, p, q):
    d = q - p
    den = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(den > 0, np.real((z - p) * np.conj(d)) / np.where(den > 0, den, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z - (p + t * d))


def _convex_hull(points: np.ndarray, eps: float) -> list:
    """Andrew's monotone chain, counterclockwise, collinear points dropped."""
    pts = sorted({(round(z.real / eps) * eps, round(z.imag / eps) * eps) for z in points})
    if len(pts) <= 2:
        return [complex(x, y) for x, y in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= eps * eps:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= eps * eps:
            upper.pop()
        upper.append(pt)
    hull = lower[:-1] + upper[:-1]
    return [complex(x, y) for x, y in hull]


def num_range_hull(A, n_angles: int = 64, tol: float | None = None,
                   max_angles: int = 1 << 15) -> NumRangeHull:
    """Polygonal inner approximation of the numerical range of ``A``.

    For each direction the top eigenvector of the Hermitian part of the
    rotated matrix gives a boundary point of Num(A). When ``tol`` is given,
    directions are bisected until every edge is within ``tol`` of the
    true boundary.
    """
    A = as_matrix(A)
    if n_angles < 8:
        raise ParameterError("n_angles must be at least 8")
    scale = max(np.linalg.norm(A, 2), 1e-300)
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    pts, h = _support_points(A, theta)
    gaps = _edge_gaps(theta, pts, h)
    if tol is not None:
        while gaps.max() > tol and theta.size < max_angles:
            bad = np.nonzero(gaps > tol)[0]
            t1 = theta[bad]
            dt = np.mod(np.roll(theta, -1)[bad] - t1, 2 * np.pi)
            new = np.mod(t1 + 0.5 * dt, 2 * np.pi)
            npts, nh = _support_points(A, new)
            theta = np.concatenate([theta, new])
            pts = np.concatenate([pts, npts])
            h = np.concatenate([h, nh])
            order = np.argsort(theta)
            theta, pts, h = theta[order], pts[order], h[order]
            gaps = _edge_gaps(theta, pts, h)
    verts = _convex_hull(pts, 1e-14 * scale)
    return NumRangeHull(tuple(verts), int(theta.size), float(gaps.max()), float(scale))


def dist_to_hull(lam, hull: NumRangeHull):
    """Euclidean distance from ``lam`` (scalar or array) to the hull polygon."""
    z = np.asarray(lam, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ParameterError("dist_to_hull needs finite points")
    v = hull.points
    if v.size == 1:
        out = np.abs(z - v[0])
    elif v.size == 2:
        out = _segment_dist(z, v[0], v[1])
    else:
        p, q = v, np.roll(v, -1)
        zz = z[..., None]
        e = q - p
        cross = e.real * (zz - p).imag - e.imag * (zz - p).real
        inside = np.all(cross >= -1e-13 * hull.scale * np.abs(e), axis=-1)
        edge = _segment_dist(zz, p, q).min(axis=-1)
        out = np.where(inside, 0.0, edge)
    return float(out) if np.ndim(out) == 0 else out


def _bands(A: np.ndarray):
    nz = np.nonzero(A)
    if nz[0].size == 0:
        return 0, 0
    d = nz[0] - nz[1]
    return int(max(d.max(), 0)), int(max(-d.min(), 0))


def _resolvent_solver(A: np.ndarray):
    """Return ``solve(mu)`` computing ``(mu - A)^{-1}``, banded when cheap."""
    n = A.shape[0]
    l, u = _bands(A)
    eye = np.eye(n, dtype=complex)
    if l + u + 1 < n // 4:
        ab = np.zeros((l + u + 1, n), dtype=complex)
        for k in range(-l, u + 1):
            diag = np.diagonal(-A, k)
            if k >= 0:
                ab[u - k, k:] = diag
            else:
                ab[u - k, :n + k] = diag

        def solve(mu):
            m = ab.copy()
            m[u] += mu
            return scipy.linalg.solve_banded((l, u), m, eye)
    else:
        def solve(mu):
            return np.linalg.solve(mu * eye - A, eye)
    return solve


def riesz_projection(A, lam0: complex, radius: float, n_nodes: int = 64,
                     tol: float = 1e-9, max_nodes: int = 4096) -> np.ndarray:
    """Riesz projection onto the spectral subspace of ``A`` near ``lam0``.

    Trapezoid rule on the circle ``|mu - lam0| = radius``; the node count is
    doubled until the projection changes by less than ``tol``.
    """
    A = as_matrix(A)
    if not radius > 0 or n_nodes < 4:
        raise ParameterError("radius must be positive and n_nodes >= 4")
    ev = np.linalg.eigvals(A)
    gap = np.abs(np.abs(ev - lam0) - radius)
    # reject contours the node budget cannot resolve; convergence is checked below
    spacing = 2 * np.pi * radius / max(max_nodes, n_nodes)
    if gap.min() < 10 * spacing:
        raise ContourError(
            f"contour |mu - {lam0}| = {radius} passes within {gap.min():.3g} of the spectrum "
            f"(finest node spacing {spacing:.3g})")
    if not np.any(np.abs(ev - lam0) < radius):
        raise ParameterError(f"no eigenvalue inside |mu - {lam0}| < {radius}")
    solve = _resolvent_solver(A)

    def mean_over(theta):
        acc = np.zeros_like(A)
        for t in theta:
            e = radius * np.exp(1j * t)
            acc += e * solve(lam0 + e)
        return acc / theta.size

    n = n_nodes
    P = mean_over(2 * np.pi * np.arange(n) / n)
    while True:
        Q = mean_over(2 * np.pi * (np.arange(n) + 0.5) / n)
        P_new = 0.5 * (P + Q)
        change = np.abs(P_new - P).max()
        P, n = P_new, 2 * n
        if change < tol:
            return P
        if n >= max_nodes:
            raise ConvergenceError(
                f"Riesz quadrature not converged at {n} nodes (change {change:.3g})",
                state={"projection": P, "n_nodes": n})


def projection_rank(P, rtol: float = 1e-6) -> int:
    """Numerical rank with threshold ``rtol * s_max``."""
    s = np.linalg.svd(np.asarray(P, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def weyl_check(A, p: float, rtol: float = 1e-10):
    """Weyl's inequality ``sum |l_i|^p <= sum s_i^p`` (eigenvalues with multiplicity)."""
    A = as_matrix(A)
    ev = np.abs(np.linalg.eigvals(A))
    s = singular_values(A)
    return BoundReport("weyl", {"p": p, "n": A.shape[0]}, float(np.sum(ev ** p)),
                       float(np.sum(s ** p)), explicit_constant=1.0, rtol=rtol)


def schatten_monotonicity_check(A, p: float, q: float, rtol: float = 1e-12):
    """``||A||_q <= ||A||_p`` for ``p <= q``."""
    if not p <= q:
        raise ParameterError("need p <= q")
    return BoundReport("schatten-monotone", {"p": p, "q": q}, schatten_norm(A, q),
                       schatten_norm(A, p), explicit_constant=1.0, rtol=rtol)
