"""Conformal maps of the unit disk onto slit planes and their distortion bounds.

``phi1`` maps the disk onto the complement of ``[a, b]`` (with ``0 -> inf``),
``psi1`` maps it onto the complement of ``[0, inf)`` (with ``0 -> a < 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, DomainError, InfinitySignal, ParameterError
from .reports import BoundReport

__all__ = [
    "IntervalSpec",
    "phi1", "phi1_inv", "phi1_prime",
    "psi1", "psi1_inv", "psi1_prime",
    "dist_interval", "dist_halfline",
    "distortion_check_phi1", "koebe_check", "halfline_identities_check",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class IntervalSpec:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ParameterError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a


def _iv(iv) -> IntervalSpec:
    return iv if isinstance(iv, IntervalSpec) else IntervalSpec(*iv)


def _ret(x):
    return complex(x) if np.ndim(x) == 0 else x


def phi1(w, iv):
    """``(b-a)/4 (w + 1/w + 2) + a`` for ``0 < |w| < 1``."""
    iv = _iv(iv)
    w = np.asarray(w, dtype=complex)
    r = np.abs(w)
    if np.any(r >= 1):
        raise DomainError("phi1 needs |w| < 1")
    if np.any(r < 1e-8):
        raise InfinitySignal("phi1(w) is infinite at w = 0")
    return _ret(iv.width / 4 * (w + 1 / w + 2) + iv.a)


def phi1_prime(w, iv):
    iv = _iv(iv)
    w = np.asarray(w, dtype=complex)
    return _ret(iv.width / 4 * (1 - w ** -2))


def phi1_inv(lam, iv):
    """The root ``w`` of ``w + 1/w = s`` with ``|w| < 1``, ``s = 4(l-a)/(b-a) - 2``."""
    iv = _iv(iv)
    lam = np.asarray(lam, dtype=complex)
    if np.any(dist_interval(lam, iv) < 1e-12 * iv.width):
        raise BranchCutError("phi1_inv: point on the cut [a, b]")
    s = 4 * (lam - iv.a) / iv.width - 2
    root = np.sqrt(s * s - 4)
    # larger-magnitude root of w^2 - s w + 1 without cancellation; w = 1/R
    R = np.where(np.abs(s + root) >= np.abs(s - root), s + root, s - root) / 2
    w = 1 / R
    if np.any(np.abs(w) >= 1):
        raise BranchCutError("phi1_inv: no root strictly inside the disk")
    return _ret(w)


def psi1(w, a):
    """``a ((1+w)/(1-w))^2`` for ``|w| < 1``, ``a < 0``."""
    if not a < 0:
        raise ParameterError("psi1 needs a < 0")
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w - 1) < 1e-15):
        raise InfinitySignal("psi1(w) is infinite at w = 1")
    if np.any(np.abs(w) > 1):
        raise DomainError("psi1 needs |w| <= 1")
    return _ret(a * ((1 + w) / (1 - w)) ** 2)


def psi1_prime(w, a):
    w = np.asarray(w, dtype=complex)
    return _ret(4 * a * (1 + w) / (1 - w) ** 3)


def psi1_inv(lam, a):
    """``(sqrt(-l) - c)/(sqrt(-l) + c)`` with ``c = sqrt(-a)`` and the principal root."""
    if not a < 0:
        raise ParameterError("psi1_inv needs a < 0")
    lam = np.asarray(lam, dtype=complex)
    if np.any(dist_halfline(lam) < 1e-12 * abs(a)):
        raise BranchCutError("psi1_inv: point on the cut [0, inf)")
    root = np.sqrt(-lam)
    if np.any(root.real <= 0):
        raise BranchCutError("psi1_inv: principal root without positive real part")
    c = math.sqrt(-a)
    return _ret((root - c) / (root + c))


def dist_interval(lam, iv):
    """Distance from ``lam`` to the real segment ``[a, b]``."""
    iv = _iv(iv)
    lam = np.asarray(lam, dtype=complex)
    out = np.abs(lam - np.clip(lam.real, iv.a, iv.b))
    return float(out) if out.ndim == 0 else out


def dist_halfline(lam, a: float = 0.0):
    """Distance from ``lam`` to ``[a, inf)``."""
    lam = np.asarray(lam, dtype=complex)
    out = np.abs(lam - np.maximum(lam.real, a))
    return float(out) if out.ndim == 0 else out


def distortion_check_phi1(w, iv, rtol: float = 1e-12) -> BoundReport:
    """Two-sided bound ``c1 g(w) <= dist(phi1(w), [a,b]) <= c2 g(w)``.

    Here ``g(w) = |w^2 - 1|(1 - |w|)/|w|``, ``c1 = (b-a)/8`` and
    ``c2 = (b-a)(1+sqrt 2)/8``.
    """
    iv = _iv(iv)
    w = complex(w)
    g = abs(w * w - 1) * (1 - abs(w)) / abs(w)
    d = dist_interval(phi1(w, iv), iv)
    return BoundReport("distortion-phi1", {"w": w, "a": iv.a, "b": iv.b}, d,
                       g, explicit_constant=iv.width * (1 + SQRT2) / 8, rtol=rtol,
                       lower=iv.width / 8 * g)


def koebe_check(map_tag: str, w, params, rtol: float = 1e-12) -> BoundReport:
    """Koebe distortion ``|f'|(1-|w|)/4 <= dist(f(w), boundary) <= 2 |f'|(1-|w|)``.

    ``map_tag`` is ``"phi1"`` (params: interval) or ``"psi1"`` (params: ``a``).
    Koebe's theorem is about holomorphic univalent maps; ``phi1`` has a pole
    at the origin, so for it the check is only meaningful as an experiment.
    """
    w = complex(w)
    if map_tag == "phi1":
        iv = _iv(params)
        if abs(w) < 0.05:
            raise DomainError("koebe_check(phi1) excludes |w| < 0.05 (pole at 0)")
        d = dist_interval(phi1(w, iv), iv)
        fp = abs(phi1_prime(w, iv))
        info = {"w": w, "a": iv.a, "b": iv.b}
    elif map_tag == "psi1":
        a = float(params)
        d = dist_halfline(psi1(w, a))
        fp = abs(psi1_prime(w, a))
        info = {"w": w, "a": a}
    else:
        raise ParameterError(f"unknown map {map_tag!r}")
    g = fp * (1 - abs(w))
    return BoundReport(f"koebe-{map_tag}", info, d, g, explicit_constant=2.0,
                       rtol=rtol, lower=0.25 * g)


def halfline_identities_check(w, iv=(-2.0, 2.0), a_half: float = -1.0, rtol: float = 1e-10) -> list:
    """Identities and inequalities used with the two conformal maps.

    For ``l = phi1(w)``:
    ``|a - l| = (b-a)/4 |w+1|^2/|w|``, ``|b - l| = (b-a)/4 |w-1|^2/|w|`` and
    ``1 - |w| >= 2/(1+sqrt 2) dist(l,[a,b]) / sqrt(|l-a||l-b|)``.
    For ``m = psi1(w)`` with ``a_half < 0``:
    ``m - a_half = 4 a_half w/(1-w)^2`` and
    ``|sqrt(-m) - c| = |m - a_half| / |sqrt(-m) + c|``, ``c = sqrt(-a_half)``.

    Identities are returned as reports with ``lhs`` the absolute error and
    ``rhs_core`` the allowed error.
    """
    iv = _iv(iv)
    w = complex(w)
    lam = phi1(w, iv)
    out = []

    def ident(name, x, y, info):
        scale = max(abs(x), abs(y), 1e-300)
        out.append(BoundReport(name, info, abs(x - y), rtol * scale, explicit_constant=1.0))

    info = {"w": w, "a": iv.a, "b": iv.b}
    ident("id-dist-a", abs(iv.a - lam), iv.width / 4 * abs(w + 1) ** 2 / abs(w), info)
    ident("id-dist-b", abs(iv.b - lam), iv.width / 4 * abs(w - 1) ** 2 / abs(w), info)
    bound = 2 / (1 + SQRT2) * dist_interval(lam, iv) / math.sqrt(abs(lam - iv.a) * abs(lam - iv.b))
    out.append(BoundReport("ineq-one-minus-w", info, bound, 1 - abs(w),
                           explicit_constant=1.0, rtol=rtol))

    if abs(w - 1) > 1e-8:
        m = psi1(w, a_half)
        info2 = {"w": w, "a": a_half}
        ident("id-psi1-shift", m - a_half, 4 * a_half * w / (1 - w) ** 2, info2)
        if dist_halfline(m) > 1e-12 * abs(a_half):
            c = math.sqrt(-a_half)
            root = np.sqrt(-complex(m))
            ident("id-sqrt", abs(root - c), abs(m - a_half) / abs(root + c), info2)
    return out
