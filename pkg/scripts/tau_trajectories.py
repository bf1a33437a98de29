"""Ratio trajectories as tau -> 0 for the two endpoint questions.

Jacobi: ``sum dist^{p+tau} / |l^2-4|^{1/2}`` over ``||v||_p^p``, with the
tau = 0 sum (the conjectured endpoint form) evaluated directly. Two
deterministic families (real single site ``b0 = s``, eigenvalue tending to
the edge 2, and ``b0 = i t``, eigenvalue ``i sqrt(t^2 - 4)``) plus the
worst case over a seeded ensemble.

Half-line: max over a seeded matrix ensemble of the half-line resolvent
ratio, whose right-hand side carries ``|omega|^{-tau}``.

Nothing here asserts the tau = 0 statements; the tables only show how the
ratios behave.
"""

import argparse
from pathlib import Path

import numpy as np

from specbounds.bounds import (MomentWeightSpec, halfline_resolvent_report,
                               jacobi_endpoint_report, moment_sum)
from specbounds.ensemble import EnsembleSpec, jacobi_instance, matrix_instance
from specbounds.io import write_csv
from specbounds.linalg import eigen_spectrum
from specbounds.operators import JacobiSpec, jacobi_discrete_spectrum, v_seq

TAUS = (0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.0)


def endpoint_ratio(spec, eigs, p, tau):
    norm = v_seq(spec).norm(p) ** p
    if tau > 0:
        return jacobi_endpoint_report(spec, eigs, p, tau).lhs / norm
    w = MomentWeightSpec.interval_eta(p, p - 1)
    return moment_sum(eigs, w) / norm


def jacobi_rows(p, count, seed):
    out = []
    families = [("real-site", s, JacobiSpec.single_site(s)) for s in (1.0, 0.3, 0.1, 0.03, 0.01)]
    families += [("imag-site", t, JacobiSpec.single_site(1j * t)) for t in (2.05, 2.5, 4.0, 10.0)]
    for name, par, spec in families:
        eigs = jacobi_discrete_spectrum(spec)
        for tau in TAUS:
            out.append({"family": name, "param": par, "p": p, "tau": tau,
                        "ratio": endpoint_ratio(spec, eigs, p, tau)})
    ens = EnsembleSpec(kind="jacobi", support=3, p=p, count=count, seed=seed)
    per_tau = {tau: 0.0 for tau in TAUS}
    for i in range(count):
        spec = jacobi_instance(ens, i)
        eigs = jacobi_discrete_spectrum(spec, cross_check=False)
        for tau in TAUS:
            per_tau[tau] = max(per_tau[tau], endpoint_ratio(spec, eigs, p, tau))
    out += [{"family": "ensemble-max", "param": count, "p": p, "tau": tau, "ratio": r}
            for tau, r in per_tau.items()]
    return out


def halfline_rows(p, count, seed):
    ens = EnsembleSpec(kind="matrix", n=8, support=0, p=p, count=count, seed=seed)
    taus = [t for t in TAUS if t > 0] + [1e-3]
    best = {tau: 0.0 for tau in taus}
    for i in range(count):
        inst = matrix_instance(ens, i)
        H = inst["H0"] + inst["M"]
        eigs = eigen_spectrum(H)
        for tau in taus:
            best[tau] = max(best[tau], halfline_resolvent_report(H, inst["H0"], eigs, p, tau).ratio)
    return [{"family": "halfline-ensemble-max", "param": count, "p": p, "tau": tau, "ratio": r}
            for tau, r in best.items()]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=Path, default=Path("results/tau"))
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args(argv)

    rows = jacobi_rows(args.p, args.count, args.seed) + halfline_rows(args.p, args.count, args.seed)
    cols = ("family", "param", "p", "tau", "ratio")
    path = write_csv(args.out / "tau_trajectories.csv", cols, rows, force=args.force)
    last = None
    for r in rows:
        key = (r["family"], r["param"])
        if key != last:
            print(f"\n{r['family']} {r['param']}")
            last = key
        print(f"  tau {r['tau']:<6} ratio {r['ratio']:.6g}")
    print(f"\nwrote {path}")


if __name__ == "__main__":
    main()
