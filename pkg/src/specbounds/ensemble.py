"""Seeded random ensembles and ratio sweeps over them.

Instance ``i`` of an ensemble with seed ``s`` draws from a Philox generator
keyed by ``SeedSequence([s, i])``, so instances are independent of the
ensemble size and of the order in which they run.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds
from .conformal import dist_interval
from .errors import ParameterError
from .linalg import SpectrumList, eigen_spectrum
from .operators import FREE_CUT, JacobiSpec, jacobi_discrete_spectrum, v_seq
from .reports import BoundReport

__all__ = [
    "EnsembleSpec", "instance_rng", "jacobi_instance", "matrix_instance",
    "JACOBI_THEOREMS", "MATRIX_THEOREMS", "TAU_FREE",
    "empirical_inequality_sweep", "summarize", "ratio_stability",
    "COMPARISON_COLUMNS", "comparison_report",
]

JACOBI_THEOREMS = ("jacobi-dist", "jacobi-endpoint", "jacobi-interval",
                   "interval-hypothesis", "disk-bgk")
MATRIX_THEOREMS = ("kato-numrange", "resolvent-transfer", "halfline-resolvent", "ouhabaz")
# theorems without a tau parameter get one row per instance
TAU_FREE = ("jacobi-dist", "kato-numrange", "resolvent-transfer", "ouhabaz")


@dataclass(frozen=True)
class EnsembleSpec:
    """Ensemble description.

    ``kind="jacobi"``: ``support`` sites with entries ``1 + m u``, ``m u``,
    ``1 + m u`` (``u`` uniform in the unit disk, ``m = magnitude``).
    ``kind="matrix"``: dimension ``n`` (0 means uniform in 4..16), perturbation
    of rank ``support`` (0 means full rank) and size ``magnitude``.
    """

    kind: str = "jacobi"
    n: int = 0
    support: int = 3
    p: float = 2.0
    magnitude: float = 1.0
    count: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("jacobi", "matrix"):
            raise ParameterError(f"unknown ensemble kind {self.kind!r}")
        if self.count < 0 or self.support < 0 or self.n < 0:
            raise ParameterError("count, support and n must be nonnegative")
        if self.kind == "jacobi" and self.support < 1:
            raise ParameterError("a Jacobi ensemble needs support >= 1")
        if not self.magnitude > 0 or not self.p >= 1:
            raise ParameterError("need magnitude > 0 and p >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)

    def with_count(self, count: int) -> "EnsembleSpec":
        return EnsembleSpec(**{**asdict(self), "count": count})


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _disk(rng, size):
    r = np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def jacobi_instance(ens: EnsembleSpec, index: int) -> JacobiSpec:
    rng = instance_rng(ens.seed, index)
    s, m = ens.support, ens.magnitude
    k0 = -(s // 2)
    u = _disk(rng, (3, s))
    return JacobiSpec(k0, k0 + s - 1, tuple(1 + m * u[0]), tuple(m * u[1]), tuple(1 + m * u[2]))


def _cgauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def matrix_instance(ens: EnsembleSpec, index: int) -> dict:
    """``Z0`` arbitrary, ``H0`` Hermitian PSD and a perturbation ``M``."""
    rng = instance_rng(ens.seed, index)
    n = ens.n if ens.n else int(rng.integers(4, 17))
    Z0 = _cgauss(rng, (n, n)) / np.sqrt(n)
    G = _cgauss(rng, (n, n))
    H0 = G @ G.conj().T / n
    r = ens.support if 0 < ens.support < n else n
    M = ens.magnitude * (_cgauss(rng, (n, r)) @ _cgauss(rng, (r, n))) / n
    return {"n": n, "Z0": Z0, "H0": H0, "M": M}


# ------------------------------------------------------------------ sweeps

def _jacobi_rows(ens, index, theorem_ids, taus, eps, cross_check):
    spec = jacobi_instance(ens, index)
    p = ens.p
    eigs = jacobi_discrete_spectrum(spec, p=1.0, cross_check=cross_check)
    out = []
    K42 = bounds.jacobi_hypothesis_K(spec, p) if "interval-hypothesis" in theorem_ids else None
    K34 = None
    for tid in theorem_ids:
        for tau in ([None] if tid in TAU_FREE else taus):
            if tid == "jacobi-dist":
                rep = bounds.jacobi_dist_report(spec, eigs, p)
            elif tid == "jacobi-endpoint":
                rep = bounds.jacobi_endpoint_report(spec, eigs, p, tau)
            elif tid == "jacobi-interval":
                rep = bounds.jacobi_interval_report(spec, eigs, p, tau)
            elif tid == "interval-hypothesis":
                rep = bounds.interval_hypothesis_report(spec, eigs, p, tau, K=K42)
            else:
                rep = bounds.disk_bgk_report(spec, eigs, p, tau, eps, K=K34)
                K34 = rep.params["K"]
            out.append(rep)
    return out


def _matrix_rows(ens, index, theorem_ids, taus, eps, cross_check):
    inst = matrix_instance(ens, index)
    p = ens.p
    Z0, H0, M = inst["Z0"], inst["H0"], inst["M"]
    H = H0 + M
    eigs = eigen_spectrum(H)
    out = []
    for tid in theorem_ids:
        for tau in ([None] if tid in TAU_FREE else taus):
            if tid == "kato-numrange":
                rep = bounds.kato_numrange_check(Z0 + M, Z0, p)
            elif tid == "resolvent-transfer":
                rep = bounds.resolvent_transfer_check(H, H0, -1.0, p)
            elif tid == "halfline-resolvent":
                rep = bounds.halfline_resolvent_report(H, H0, eigs, p, tau)
            else:
                rep = bounds.ouhabaz_check(Z0 + M, p)
            out.append(rep)
    return out


def _instance(job):
    ens, index, theorem_ids, taus, eps, cross_check = job
    run = _jacobi_rows if ens.kind == "jacobi" else _matrix_rows
    reps = run(ens, index, theorem_ids, taus, eps, cross_check)
    tag = f"{ens.seed}:{index}"
    return [BoundReport(r.theorem_id, {**r.params, "seed": tag, "index": index,
                                       "tau": r.params.get("tau", "") or ""},
                        r.lhs, r.rhs_core, r.explicit_constant, r.rtol, r.atol, r.lower, r.notes)
            for r in reps]


def empirical_inequality_sweep(theorem_ids, ensemble: EnsembleSpec, taus=(0.1, 0.5),
                               eps: float = 0.1, jobs: int = 1,
                               cross_check: bool = False) -> list:
    """Reports for every instance, theorem and ``tau``, ordered by instance.

    Rows of instance ``i`` do not depend on ``count``, so doubling the
    ensemble appends rows and leaves the earlier ones unchanged.
    """
    allowed = JACOBI_THEOREMS if ensemble.kind == "jacobi" else MATRIX_THEOREMS
    theorem_ids = tuple(theorem_ids)
    bad = [t for t in theorem_ids if t not in allowed]
    if bad:
        raise ParameterError(f"theorems {bad} do not apply to {ensemble.kind} ensembles")
    jobs_list = [(ensemble, i, theorem_ids, tuple(taus), eps, cross_check)
                 for i in range(ensemble.count)]
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_instance, jobs_list, chunksize=4))
    else:
        chunks = [_instance(j) for j in jobs_list]
    return [r for chunk in chunks for r in chunk]


def summarize(reports) -> list:
    """Max and median ratio per ``(theorem_id, tau)``; violations of explicit constants."""
    groups = {}
    for r in reports:
        groups.setdefault((r.theorem_id, r.params.get("tau", "")), []).append(r)
    out = []
    for (tid, tau), reps in sorted(groups.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        ratios = np.array([r.ratio for r in reps])
        out.append({"theorem_id": tid, "tau": tau, "count": len(reps),
                    "max_ratio": float(ratios.max()), "median_ratio": float(np.median(ratios)),
                    "violations": sum(1 for r in reps if r.passed is False)})
    return out


def ratio_stability(reports, theorem_id: str, tau, half: int) -> dict:
    """Max ratio over instances ``< half`` against the max over all instances."""
    reps = [r for r in reports if r.theorem_id == theorem_id and r.params.get("tau", "") == tau]
    first = [r.ratio for r in reps if r.params["index"] < half]
    both = [r.ratio for r in reps]
    m1, m2 = max(first, default=0.0), max(both, default=0.0)
    growth = (m2 - m1) / m1 if m1 > 0 else (0.0 if m2 == 0 else np.inf)
    return {"theorem_id": theorem_id, "tau": tau, "max_first": m1, "max_all": m2,
            "growth": float(growth), "stable": bool(growth < 0.2)}


# -------------------------------------------------------------- comparison

COMPARISON_COLUMNS = ("seed", "index", "n_eigs", "regime", "interval", "numrange",
                      "endpoint", "dominant")


def _regime(eigs: SpectrumList, width: float = 0.25) -> str:
    """``endpoint`` if the eigenvalue closest to the cut projects near +-2."""
    if len(eigs) == 0:
        return "none"
    v = eigs.values
    k = int(np.argmin(dist_interval(v, FREE_CUT)))
    x = float(np.clip(v[k].real, *FREE_CUT))
    return "endpoint" if min(x - FREE_CUT[0], FREE_CUT[1] - x) < width else "interior"


def comparison_report(ensemble: EnsembleSpec, tau: float = 0.5, cross_check: bool = False) -> list:
    """Per Jacobi instance: the three moment sums divided by ``||v||_p^p``."""
    if ensemble.kind != "jacobi":
        raise ParameterError("comparison_report needs a Jacobi ensemble")
    rows = []
    for i in range(ensemble.count):
        spec = jacobi_instance(ensemble, i)
        eigs = jacobi_discrete_spectrum(spec, p=1.0, cross_check=cross_check)
        norm = v_seq(spec).norm(ensemble.p) ** ensemble.p
        sums = bounds.compare_weights(eigs, ensemble.p, tau, norm)
        dominant = max(sums, key=sums.get) if any(sums.values()) else "none"
        rows.append({"seed": ensemble.seed, "index": i, "n_eigs": eigs.total,
                     "regime": _regime(eigs), **{k: repr(float(v)) for k, v in sums.items()},
                     "dominant": dominant})
    return rows
