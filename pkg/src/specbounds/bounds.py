"""Eigenvalue moment sums and the inequalities they enter.

Each check returns a ``BoundReport``. Checks with a closed-form constant
pass or fail; the others only carry the ratio ``lhs / rhs_core``.

Half-line weights use ``dist(l, [0, inf))``. For a finite ``H0`` this is a
lower bound for ``dist(l, sigma(H0))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .conformal import dist_halfline, dist_interval, phi1, phi1_inv
from .diskzeros import ClassMParams, bgk_sum, empirical_class_K
from .errors import ContourError, DomainError, ParameterError, SingularTermError
from .linalg import (SpectrumList, as_matrix, dist_to_hull, eigen_spectrum, num_range_hull,
                     projection_rank, riesz_projection, schatten_norm)
from .operators import FREE_CUT, JacobiSpec, jacobi_determinant, perturbation_matrix, v_seq
from .reports import BoundReport

__all__ = [
    "FAMILIES", "MomentWeightSpec", "moment_sum",
    "kato_numrange_check", "schur_trace_check", "ouhabaz_check",
    "resolvent_transfer_check", "resolvent_scalar_ratio", "resolvent_grid_check",
    "jacobi_dist_report", "jacobi_endpoint_report", "jacobi_interval_report",
    "jacobi_hypothesis_K", "interval_hypothesis_report", "disk_bgk_report",
    "halfline_C0", "halfline_resolvent_report", "compare_weights",
]

HALFLINE_NOTE = "half-line weights use dist(l, [0, inf)), a lower bound for dist(l, sigma(H0))"

FAMILIES = {
    "interval": ("eta1", "eta2", "a", "b"),
    "halfline-general": ("eta1", "eta2", "eta3", "eta4", "a"),
    "halfline-omega": ("alpha", "beta", "tau", "omega", "s"),
    "halfline-num": ("p", "a"),
    "halfline-num-omega": ("p", "alpha", "beta", "omega", "s", "tau"),
    "lt-classical": ("p", "d"),
    "lt-sector": ("p", "d", "chi"),
    "lt-imag": ("p", "d"),
    "lt-goal": ("p", "d"),
}


def _pos(x):
    return max(float(x), 0.0)


@dataclass(frozen=True)
class MomentWeightSpec:
    """A weight family and its real parameters.

    Use the constructors below; they derive the exponents from the
    growth parameters ``alpha, beta, tau`` so the exponents stay consistent.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown weight family {self.family!r}")
        need = FAMILIES[self.family]
        missing = [k for k in need if k not in self.params]
        if missing:
            raise ParameterError(f"family {self.family} needs {missing}")
        P = {k: float(self.params[k]) for k in need}
        object.__setattr__(self, "params", P)
        f = self.family
        if f == "interval":
            if not P["a"] < P["b"]:
                raise ParameterError("interval family needs a < b")
            if P["eta1"] < 0 or P["eta2"] < 0:
                raise ParameterError("interval exponents must be nonnegative")
        elif f in ("halfline-general", "halfline-num") and not P["a"] < 0:
            raise ParameterError(f"{f} needs a < 0")
        elif f in ("halfline-omega", "halfline-num-omega"):
            if P["omega"] > 0:
                raise ParameterError("omega must be <= 0")
            if P["omega"] == 0 and not P["s"] > 0:
                raise ParameterError("omega = 0 needs s > 0")
            if not P["tau"] > 0:
                raise ParameterError("tau must be positive")
        elif f == "lt-sector" and not P["chi"] > 0:
            raise ParameterError("chi must be positive")

    # -------------------------------------------------------- constructors

    @classmethod
    def interval(cls, alpha, beta, tau, a=-2.0, b=2.0):
        """``eta1 = alpha + 1 + tau``, ``eta2 = (alpha - 2 beta - 1 + tau)_+``."""
        return cls("interval", {"eta1": alpha + 1 + tau,
                                "eta2": _pos(alpha - 2 * beta - 1 + tau), "a": a, "b": b})

    @classmethod
    def interval_eta(cls, eta1, eta2, a=-2.0, b=2.0):
        return cls("interval", {"eta1": eta1, "eta2": eta2, "a": a, "b": b})

    @classmethod
    def halfline_general(cls, alpha, beta, p, tau, eps, a):
        eta2 = _pos(_pos(alpha - 2 * beta) - 1 + tau)
        eta3 = _pos(_pos(2 * p - 3 * alpha + 2 * beta) - 1 + tau)
        return cls("halfline-general", {"eta1": alpha + 1 + tau, "eta2": eta2, "eta3": eta3,
                                        "eta4": _pos(p - eps), "a": a})

    @classmethod
    def halfline_omega(cls, alpha, beta, tau, omega, s=1.0):
        return cls("halfline-omega", {"alpha": alpha, "beta": beta, "tau": tau,
                                      "omega": omega, "s": s})

    @classmethod
    def halfline_num(cls, p, a):
        return cls("halfline-num", {"p": p, "a": a})

    @classmethod
    def halfline_num_omega(cls, p, alpha, beta, omega, tau, s=1.0):
        return cls("halfline-num-omega", {"p": p, "alpha": alpha, "beta": beta,
                                          "omega": omega, "s": s, "tau": tau})

    @classmethod
    def lt(cls, kind, p, d, chi=None):
        params = {"p": p, "d": d}
        if chi is not None:
            params["chi"] = chi
        return cls(f"lt-{kind}", params)

    # -------------------------------------------------------------- weights

    def weights(self, lam) -> np.ndarray:
        """Weight of each point of ``lam``; zero on the barrier set."""
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        P, f = self.params, self.family
        r = np.abs(lam)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if f == "interval":
                d = dist_interval(lam, (P["a"], P["b"]))
                e = (P["eta1"] - P["eta2"]) / 2
                den = (np.abs(P["b"] - lam) * np.abs(P["a"] - lam)) ** e
                return _safe(d, d ** P["eta1"] / den)
            if f == "halfline-general":
                d = dist_halfline(lam)
                e1, e2, e3, e4, a = P["eta1"], P["eta2"], P["eta3"], P["eta4"], P["a"]
                _singular(lam, a, e4 > 0, f)
                den = (r ** ((e1 - e2) / 2) * (r + abs(a)) ** (e1 - e4 + (e2 + e3) / 2)
                       * np.abs(lam - a) ** e4)
                return _safe(d, d ** e1 / den)
            if f == "halfline-omega":
                d = dist_halfline(lam)
                al, be, ta, om, s = P["alpha"], P["beta"], P["tau"], P["omega"], P["s"]
                e0 = -al + be + ta
                e1 = 1.0 if al == 0 else al + 1 + ta
                e2 = _pos(_pos(al - 2 * be) - 1 + ta)
                if om < 0:
                    den = r ** ((e1 - e2) / 2) * (r + abs(om)) ** (e0 + (e1 + e2) / 2)
                else:
                    den = np.where(r > s, r ** (be + 1 + 2 * ta), r ** (be + 1) * s ** (2 * ta))
                return _safe(d, d ** e1 / den)
            if f == "halfline-num":
                d = dist_halfline(lam)
                p, a = P["p"], P["a"]
                _singular(lam, a, True, f)
                den = (np.abs(lam - a) * (r + abs(a))) ** p
                return _safe(d, d ** p / den)
            if f == "halfline-num-omega":
                d = dist_halfline(lam)
                p, al, be, om, s, ta = (P[k] for k in ("p", "alpha", "beta", "omega", "s", "tau"))
                e = -al - be + 2 * p
                if om < 0:
                    den = (r + abs(om)) ** (e + ta)
                else:
                    den = np.where(r > s, r ** (e + ta), r ** (e - ta) * s ** (2 * ta))
                return _safe(d, d ** p / den)
            p, dim = P["p"], P["d"]
            e = p - dim / 2
            if f == "lt-classical":
                keep = (lam.real < 0) & (np.abs(lam.imag) <= 1e-12 * np.maximum(r, 1.0))
                return _power_on(r, keep, e, f)
            if f == "lt-sector":
                keep = np.abs(lam.imag) >= P["chi"] * lam.real
                return _power_on(r, keep, e, f)
            if f == "lt-imag":
                keep = lam.real >= 0
                val = (np.abs(lam.imag) / (np.abs(lam + 1) ** 2 + 1)) ** p
                return np.where(keep, val, 0.0)
            # lt-goal
            d = dist_halfline(lam)
            return _safe(d, d ** p / r ** (dim / 2))


def _safe(d, val):
    return np.where(d > 0, val, 0.0)


def _singular(lam, a, active, family):
    if active and np.any(lam == a):
        raise SingularTermError(f"{family}: eigenvalue sits on the weight singularity {a}")


def _power_on(r, keep, e, family):
    if e < 0 and np.any(keep & (r == 0)):
        raise SingularTermError(f"{family}: eigenvalue 0 with negative exponent")
    return np.where(keep, r ** e, 0.0)


def moment_sum(spectrum: SpectrumList, w: MomentWeightSpec) -> float:
    """``sum_l m(l) w(l)`` over the (value, multiplicity) pairs of ``spectrum``."""
    if len(spectrum) == 0:
        return 0.0
    return float(np.sum(spectrum.multiplicities * w.weights(spectrum.values)))


# --------------------------------------------------------- matrix inequalities

def kato_numrange_check(Z, Z0, p: float, variant: str = "numrange",
                        n_angles: int = 128, rtol: float = 1e-8) -> BoundReport:
    """``sum dist(l, S)^p <= ||Z - Z0||_p^p`` over the eigenvalues of ``Z``.

    ``variant="numrange"`` takes ``S = Num(Z0)``. The polygon lies inside
    ``Num(Z0)``, so distances are overestimated by at most the polygon gap;
    on apparent failure the polygon is refined before deciding.
    ``variant="spectrum"`` takes ``S = sigma(Z0)``, which is the right set
    for Hermitian ``Z0`` and fails in general.
    """
    if p < 1:
        raise ParameterError("kato_numrange_check needs p >= 1")
    Z, Z0 = as_matrix(Z), as_matrix(Z0)
    if Z.shape != Z0.shape:
        raise ParameterError("Z and Z0 must have the same shape")
    spec = eigen_spectrum(Z)
    rhs = schatten_norm(Z - Z0, p) ** p
    info = {"p": p, "n": Z.shape[0], "variant": variant}
    if variant == "spectrum":
        pts = np.linalg.eigvals(Z0)
        d = np.abs(spec.values[:, None] - pts[None]).min(axis=1)
        lhs = float(np.sum(spec.multiplicities * d ** p))
        return BoundReport("kato-spectrum", info, lhs, rhs, explicit_constant=1.0, rtol=rtol)
    if variant != "numrange":
        raise ParameterError(f"unknown variant {variant!r}")
    hull = num_range_hull(Z0, n_angles)

    def lhs_for(h):
        return float(np.sum(spec.multiplicities * dist_to_hull(spec.values, h) ** p))

    lhs = lhs_for(hull)
    if lhs > rhs * (1 + rtol):
        hull = num_range_hull(Z0, n_angles, tol=1e-12 * hull.scale)
        lhs = lhs_for(hull)
    return BoundReport("kato-numrange", info, lhs, rhs, explicit_constant=1.0, rtol=rtol,
                       notes=f"polygon gap {hull.gap:.3g} with {hull.n_angles} directions")


def schur_trace_check(Z, Z0, Lam, p: float, rtol: float = 1e-8) -> BoundReport:
    """Diagonal of ``Z - Z0`` in a Schur basis of the spectral subspace of ``Lam``.

    Builds the Riesz projection onto the eigenvalues ``Lam``, triangularizes
    ``Z`` on its range and checks ``sum |<(Z - Z0) e_i, e_i>|^p <= ||Z - Z0||_p^p``.
    The Schur diagonal must reproduce ``Lam`` with multiplicities.
    """
    if p < 1:
        raise ParameterError("schur_trace_check needs p >= 1")
    Z, Z0 = as_matrix(Z), as_matrix(Z0)
    spec = eigen_spectrum(Z)
    scale = max(np.linalg.norm(Z, 2), 1e-300)
    vals = spec.values
    targets = np.atleast_1d(np.asarray(Lam, dtype=complex))
    n = Z.shape[0]
    P = np.zeros((n, n), dtype=complex)
    want = []
    for lam in targets:
        k = int(np.argmin(np.abs(vals - lam)))
        if abs(vals[k] - lam) > 1e-6 * scale:
            raise ParameterError(f"{lam} is not an eigenvalue of Z")
        others = np.delete(vals, k)
        sep = np.min(np.abs(others - vals[k])) if others.size else scale
        P += riesz_projection(Z, vals[k], 0.45 * sep)
        want += [vals[k]] * int(spec.multiplicities[k])
    rank = projection_rank(P)
    if rank != len(want):
        raise ContourError(f"projection rank {rank} does not match total multiplicity {len(want)}")
    U, _, _ = np.linalg.svd(P)
    Q = U[:, :rank]
    T = Q.conj().T @ Z @ Q
    R, V = scipy.linalg.schur(T, output="complex")
    E = Q @ V
    diag = np.diag(R)
    got, ref = np.sort_complex(diag), np.sort_complex(np.array(want))
    if np.max(np.abs(got - ref)) > 1e-6 * scale:
        raise ContourError(f"Schur diagonal {got} does not reproduce {ref}")
    D = Z - Z0
    terms = np.abs(np.einsum("ij,ik,kj->j", E.conj(), D, E)) ** p
    rhs = schatten_norm(D, p) ** p
    return BoundReport("schur-trace", {"p": p, "n": n, "k": rank}, float(terms.sum()), rhs,
                       explicit_constant=1.0, rtol=rtol)


def ouhabaz_check(H, p: float, rtol: float = 1e-8) -> BoundReport:
    """``sum_{Re l < 0} |Re l|^p <= ||Re(H)_-||_p^p``."""
    if p < 1:
        raise ParameterError("ouhabaz_check needs p >= 1")
    H = as_matrix(H)
    spec = eigen_spectrum(H)
    re = spec.values.real
    lhs = float(np.sum(spec.multiplicities * np.where(re < 0, -re, 0.0) ** p))
    mu = np.linalg.eigvalsh((H + H.conj().T) / 2)
    rhs = float(np.sum(np.where(mu < 0, -mu, 0.0) ** p))
    return BoundReport("ouhabaz", {"p": p, "n": H.shape[0]}, lhs, rhs,
                       explicit_constant=1.0, rtol=rtol, atol=1e-14)


def _resolvent(H, a):
    n = H.shape[0]
    return np.linalg.solve(a * np.eye(n) - H, np.eye(n))


def resolvent_transfer_check(H, H0, a: float, p: float, rtol: float = 1e-8) -> BoundReport:
    """``sum dist(l,[0,inf))^p / (|l-a|^p (|l|+|a|)^p) <= 8^p ||R_H(a) - R_H0(a)||_p^p``.

    ``R_X(a) = (a - X)^{-1}``, ``H0`` Hermitian positive semidefinite, ``a < 0``.
    """
    H, H0 = as_matrix(H), as_matrix(H0)
    if not a < 0:
        raise ParameterError("a must be negative")
    if p < 1:
        raise ParameterError("resolvent_transfer_check needs p >= 1")
    if np.linalg.eigvalsh((H0 + H0.conj().T) / 2).min() < -1e-12 * max(np.linalg.norm(H0, 2), 1):
        raise ParameterError("H0 must be positive semidefinite")
    spec = eigen_spectrum(H)
    if np.min(np.abs(spec.values - a)) < 1e-10:
        raise DomainError(f"a = {a} is within 1e-10 of the spectrum of H")
    lhs = moment_sum(spec, MomentWeightSpec.halfline_num(p, a))
    rhs = schatten_norm(_resolvent(H, a) - _resolvent(H0, a), p) ** p
    return BoundReport("resolvent-transfer", {"p": p, "n": H.shape[0], "a": a}, lhs, rhs,
                       explicit_constant=8.0 ** p, rtol=rtol, notes=HALFLINE_NOTE)


def resolvent_scalar_ratio(lam, a: float, literal_sign: bool = False):
    """``[dist(l,[0,inf)) / (|l-a| (|l|+|a|))] / dist((a-l)^{-1}, [1/a, 0])``.

    The scalar step behind the resolvent transfer: the ratio is at most 8.
    ``literal_sign=True`` uses ``|l+a|`` instead of ``|l-a|``, a variant
    that does not satisfy the bound. Points on ``[0, inf)`` give 0.
    """
    lam = np.asarray(lam, dtype=complex)
    num = dist_halfline(lam)
    fac = np.abs(lam + a) if literal_sign else np.abs(lam - a)
    with np.errstate(divide="ignore", invalid="ignore"):
        top = num / (fac * (np.abs(lam) + abs(a)))
        bottom = dist_interval(1 / (a - lam), (1 / a, 0.0))
        out = np.where(num > 0, top / bottom, 0.0)
    return out


def resolvent_grid_check(a: float, n: int = 100, literal_sign: bool = False) -> BoundReport:
    """Scalar resolvent step on an ``n x n`` grid around ``a``; constant 8."""
    if not a < 0:
        raise ParameterError("a must be negative")
    s = abs(a)
    # offsets keep grid points off a, -a and the real axis
    x = np.linspace(-4 * s, 4 * s, n) + 0.0137 * s
    y = np.linspace(-2 * s, 2 * s, n) + 0.0071 * s
    lam = (x[None, :] + 1j * y[:, None]).ravel()
    ratio = resolvent_scalar_ratio(lam, a, literal_sign)
    worst = float(np.max(ratio))
    bad = int(np.sum(ratio > 8 * (1 + 1e-12)))
    tid = "resolvent-scalar-literal" if literal_sign else "resolvent-scalar"
    return BoundReport(tid, {"a": a, "n": lam.size, "violations": bad}, worst, 1.0,
                       explicit_constant=8.0, rtol=1e-12)


# ------------------------------------------------------------ Jacobi theorems

def _vnorm_p(spec: JacobiSpec, p):
    return v_seq(spec).norm(p) ** p


def jacobi_dist_report(spec: JacobiSpec, eigs: SpectrumList, p: float,
                       rtol: float = 1e-8) -> BoundReport:
    """``sum dist(l, [-2, 2])^p <= ||v||_p^p`` with constant 1."""
    lhs = moment_sum(eigs, MomentWeightSpec.interval_eta(p, p, *FREE_CUT))
    return BoundReport("jacobi-dist", {"p": p, "n": spec.size}, lhs, _vnorm_p(spec, p),
                       explicit_constant=1.0, rtol=rtol)


def jacobi_endpoint_report(spec: JacobiSpec, eigs: SpectrumList, p: float, tau: float) -> BoundReport:
    """``sum dist^{p+tau} / |l^2-4|^{1/2}`` (``p > 1``) or
    ``sum dist^{1+tau} / |l^2-4|^{1/2+tau/4}`` (``p = 1``) against ``||v||_p^p``."""
    if p < 1 or not tau > 0:
        raise ParameterError("need p >= 1 and tau > 0")
    if p > 1:
        w = MomentWeightSpec.interval_eta(p + tau, p - 1 + tau, *FREE_CUT)
    else:
        w = MomentWeightSpec.interval_eta(1 + tau, tau / 2, *FREE_CUT)
    return BoundReport("jacobi-endpoint", {"p": p, "tau": tau, "n": spec.size},
                       moment_sum(eigs, w), _vnorm_p(spec, p))


def jacobi_interval_report(spec: JacobiSpec, eigs: SpectrumList, p: float, tau: float) -> BoundReport:
    """``sum dist^{p+1+tau} / |l^2 - 4|`` against ``||v||_p^p``."""
    w = MomentWeightSpec.interval_eta(p + 1 + tau, p - 1 + tau, *FREE_CUT)
    return BoundReport("jacobi-interval", {"p": p, "tau": tau, "n": spec.size},
                       moment_sum(eigs, w), _vnorm_p(spec, p))


def _disk_grid(n_radial, n_angular, delta):
    r = (1 - delta) * np.arange(1, n_radial + 1) / n_radial
    t = 2 * np.pi * np.arange(n_angular) / n_angular
    return (r[:, None] * np.exp(1j * t)[None]).ravel()


def _free_rrstar(F, w):
    """``(R0 R0^*)`` restricted to ``F x F`` at the points ``phi1(w)``, shape ``(len(w), f, f)``."""
    w = w[:, None, None]
    q = np.abs(w) ** 2
    wb = np.conj(w)
    n = F[:, None]
    m = F[None, :]
    d = np.abs(m - n)[None]
    dmax = int(d.max()) if d.size else 0
    mid = np.zeros(np.broadcast_shapes(w.shape, d.shape), dtype=complex)
    for i in range(1, dmax):
        mid = mid + np.where(d > i, w ** i * wb ** np.maximum(d - i, 0), 0.0)
    S = np.where(d == 0, (1 + q) / (1 - q), (wb ** d + w ** d) / (1 - q) + mid)
    S = S / np.abs(1 / w - w) ** 2
    # entries below the diagonal are the conjugates of those above
    upper = (m >= n)[None]
    return np.where(upper, S, np.conj(np.swapaxes(S, 1, 2)))


def jacobi_hypothesis_K(spec: JacobiSpec, p: float, n_radial: int = 40, n_angular: int = 64,
                        delta: float = 1e-3) -> float:
    """``max ||D R0(l)||_p^p dist(l, [-2, 2])^p`` over a polar grid mapped by ``phi1``."""
    F = spec.support
    if F.size == 0:
        return 0.0
    D = perturbation_matrix(spec)
    w = _disk_grid(n_radial, n_angular, delta)
    S = _free_rrstar(F.astype(float), w)
    A = D[None] @ S @ D.conj().T[None]
    ev = np.clip(np.linalg.eigvalsh((A + np.conj(np.swapaxes(A, 1, 2))) / 2), 0.0, None)
    norms = np.sum(ev ** (p / 2), axis=-1)
    dist = dist_interval(phi1(w, FREE_CUT), FREE_CUT)
    return float(np.max(norms * dist ** p))


def interval_hypothesis_report(spec: JacobiSpec, eigs: SpectrumList, p: float, tau: float,
                               K: float | None = None) -> BoundReport:
    """Interval moment sum with ``alpha = p``, ``beta = 0`` against ``(b-a)^{eta2-alpha} K``."""
    if K is None:
        K = jacobi_hypothesis_K(spec, p)
    w = MomentWeightSpec.interval(p, 0.0, tau, *FREE_CUT)
    eta2 = w.params["eta2"]
    rhs = (FREE_CUT[1] - FREE_CUT[0]) ** (eta2 - p) * K
    return BoundReport("interval-hypothesis", {"p": p, "tau": tau, "n": spec.size, "K": K},
                       moment_sum(eigs, w), rhs)


def disk_bgk_report(spec: JacobiSpec, eigs: SpectrumList, p: float, tau: float,
                    eps: float = 0.1, K: float | None = None) -> BoundReport:
    """BGK sum of the zeros of ``h = d o phi1`` against the empirical class constant.

    ``h`` has ``alpha = gamma = p`` and exponents ``p`` at ``xi = +1, -1``.
    """
    if K is None:
        d = jacobi_determinant(spec, p)

        def log_abs(w):
            return np.log(np.abs(d.evaluate(phi1(w, FREE_CUT))))

        K = float(empirical_class_K(None, p, (p, p), p, (1.0, -1.0), log_abs=log_abs))
    params = ClassMParams(alpha=p, beta=(p, p), gamma=p, xi=(1.0, -1.0), K=K, tau=tau, eps=eps)
    if len(eigs):
        zw = SpectrumList(tuple((complex(phi1_inv(v, FREE_CUT)), m) for v, m in eigs))
    else:
        zw = eigs
    return BoundReport("disk-bgk", {"p": p, "tau": tau, "eps": eps, "n": spec.size, "K": K},
                       bgk_sum(zw, params), K)


# ------------------------------------------------------ half-line, matrix form

def halfline_C0(H, H0, p: float, alpha: float, beta: float, omega: float,
                n_grid: int = 60) -> float:
    """``max_a ||R_H(a) - R_H0(a)||_p^p |a|^alpha (|a| - |omega|)^beta`` for ``a < omega``."""
    H, H0 = as_matrix(H), as_matrix(H0)
    unit = max(abs(omega), 1.0)
    best = 0.0
    for t in np.logspace(-2, 3, n_grid):
        a = omega - unit * t
        diff = schatten_norm(_resolvent(H, a) - _resolvent(H0, a), p) ** p
        best = max(best, diff * abs(a) ** alpha * (abs(a) - abs(omega)) ** beta)
    return best


def halfline_resolvent_report(H, H0, eigs: SpectrumList, p: float, tau: float,
                              omega: float | None = None) -> BoundReport:
    """Half-line sum with ``alpha = beta = p``, ``omega < 0``, against ``C0 |omega|^{-tau}``.

    ``omega`` defaults to ``min(lowest eigenvalue of Re H, 0) - 0.05``, which
    keeps ``(-inf, omega]`` in the resolvent set.
    """
    H = as_matrix(H)
    if omega is None:
        low = float(np.linalg.eigvalsh((H + H.conj().T) / 2).min())
        omega = min(low, 0.0) - 0.05
    if not omega < 0:
        raise ParameterError("omega must be negative")
    C0 = halfline_C0(H, H0, p, p, p, omega)
    w = MomentWeightSpec.halfline_num_omega(p, p, p, omega, tau)
    return BoundReport("halfline-resolvent", {"p": p, "tau": tau, "n": H.shape[0],
                                              "omega": omega, "C0": C0},
                       moment_sum(eigs, w), C0 * abs(omega) ** (-tau), notes=HALFLINE_NOTE)


# ------------------------------------------------------------- comparison

def compare_weights(eigs: SpectrumList, p: float, tau: float, norm: float = 1.0) -> dict:
    """Three Jacobi moment sums divided by a common ``norm``.

    ``interval``: ``dist^{p+1+tau}/|l^2-4|``; ``numrange``: ``dist^p``;
    ``endpoint``: ``dist^{p+tau}/|l^2-4|^{1/2}``. The largest one is the
    most restrictive statement for this spectrum.
    """
    sums = {
        "interval": moment_sum(eigs, MomentWeightSpec.interval_eta(p + 1 + tau, _pos(p - 1 + tau))),
        "numrange": moment_sum(eigs, MomentWeightSpec.interval_eta(p, p)),
        "endpoint": moment_sum(eigs, MomentWeightSpec.interval_eta(p + tau, _pos(p - 1 + tau))),
    }
    if norm > 0:
        sums = {k: v / norm for k, v in sums.items()}
    return sums
