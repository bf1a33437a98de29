"""Exact-identity suite: Jensen, conformal distortion, Koebe, Green's function, factorization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import IntervalSpec, distortion_check_phi1, halfline_identities_check, koebe_check
from .diskzeros import jensen_balance, random_planted
from .ensemble import instance_rng
from .operators import JacobiSpec, factorization_check, resolvent_check_green

__all__ = ["SuiteResult", "SUITES", "DEFAULT_TOL", "run_suite", "run_all"]

DEFAULT_TOL = {
    "jensen": 1e-7,
    "conformal": 1e-12,
    "koebe": 1e-12,
    "green": 1e-8,
    "factorization": 1e-12,
}


@dataclass(frozen=True)
class SuiteResult:
    """``worst`` is the largest error (or bound side) relative to what is allowed; pass means <= 1."""

    name: str
    checks: int
    failures: int
    worst: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: {self.checks - self.failures}/{self.checks} "
                f"(worst ratio {self.worst:.3g}, tol {self.tol:.1g})")


def _disk_points(rng, n, r_min=0.05, r_max=0.999):
    r = rng.uniform(r_min, r_max, n)
    return r * np.exp(2j * np.pi * rng.random(n))


def _jensen(tol, seed):
    errs = []
    for i in range(10):
        h, _ = random_planted(instance_rng(seed, i), 4, r_avoid=(0.5, 0.8, 0.95))
        for r in (0.5, 0.8, 0.95):
            lhs, rhs = jensen_balance(h, r)
            errs.append(abs(lhs - rhs))
    errs = np.array(errs)
    return len(errs), int(np.sum(errs > tol)), float(errs.max() / tol)


def _conformal(tol, seed):
    rng = instance_rng(seed, 1000)
    iv = IntervalSpec(-2.0, 2.0)
    reps = [distortion_check_phi1(w, iv, rtol=tol) for w in _disk_points(rng, 1000)]
    for w in _disk_points(rng, 200, 0.05, 0.99):
        reps += halfline_identities_check(w, iv, -1.0, rtol=tol)
    worst = max(r.ratio for r in reps)
    return len(reps), sum(1 for r in reps if not r.passed), worst


def _koebe(tol, seed):
    rng = instance_rng(seed, 2000)
    reps = [koebe_check("psi1", w, -1.0, rtol=tol) for w in _disk_points(rng, 1000, 0.0, 0.999)]
    worst = max(r.ratio for r in reps)
    return len(reps), sum(1 for r in reps if not r.passed), worst


def _green(tol, seed):
    res = [resolvent_check_green(lam) for lam in (3.0, 2j, -2.5 + 0.1j)]
    return len(res), sum(1 for x in res if x > tol), max(res) / tol


def _factorization(tol, seed):
    reps = []
    for i in range(20):
        rng = instance_rng(seed, 3000 + i)
        s = int(rng.integers(1, 6))
        z = rng.standard_normal((3, s)) + 1j * rng.standard_normal((3, s))
        spec = JacobiSpec(0, s - 1, tuple(1 + z[0]), tuple(z[1]), tuple(1 + z[2]))
        reps += factorization_check(spec, rtol=tol)
    worst = max(r.ratio for r in reps)
    return len(reps), sum(1 for r in reps if not r.passed), worst


SUITES = {
    "jensen": _jensen,
    "conformal": _conformal,
    "koebe": _koebe,
    "green": _green,
    "factorization": _factorization,
}


def run_suite(name: str, tol: float | None = None, seed: int = 0) -> SuiteResult:
    tol = DEFAULT_TOL[name] if tol is None else tol
    checks, fails, worst = SUITES[name](tol, seed)
    return SuiteResult(name, checks, fails, worst, tol)


def run_all(only=None, tol: float | None = None, seed: int = 0) -> list:
    names = list(SUITES) if not only else list(only)
    return [run_suite(n, tol, seed) for n in names]
