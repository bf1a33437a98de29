"""Command-line front end: ``spectrum``, ``bounds``, ``ensemble`` and ``verify``.

Exit codes: 0 success, 2 malformed input or usage, 3 inconsistency or a
violated explicit-constant bound.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds, io
from .determinants import det_growth_check
from .ensemble import (EnsembleSpec, comparison_report, COMPARISON_COLUMNS,
                       empirical_inequality_sweep, jacobi_instance, summarize)
from .errors import SpecBoundsError
from .linalg import SpectrumList, eigen_spectrum, projection_rank, riesz_projection
from .conformal import phi1_inv
from .operators import FREE_CUT, JacobiSpec, jacobi_discrete_spectrum, truncation_spectrum
from .reports import CSV_COLUMNS
from .verify import SUITES, run_all

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 2, 3

MATRIX_BOUNDS = ("kato-numrange", "kato-spectrum", "schur-trace", "ouhabaz",
                 "resolvent-transfer", "halfline-resolvent", "det-growth")
JACOBI_BOUNDS = ("jacobi-dist", "jacobi-endpoint", "jacobi-interval",
                 "interval-hypothesis", "disk-bgk")
SUMMARY_COLUMNS = ("theorem_id", "tau", "count", "max_ratio", "median_ratio", "violations")


class InputError(Exception):
    """Malformed input or usage; exit code 2."""


@dataclass
class RunConfig:
    command: str
    out: Path = Path(".")
    seed: int | None = None
    force: bool = False
    jobs: int = 1
    options: dict = field(default_factory=dict)


# ---------------------------------------------------------------- helpers

def _match(a: SpectrumList, b: SpectrumList, tol: float) -> bool:
    """Same total multiplicity and a one-to-one pairing within ``tol``."""
    if a.total != b.total:
        return False
    x, y = a.expanded(), b.expanded()
    used = np.zeros(y.size, dtype=bool)
    for v in x:
        d = np.where(used, np.inf, np.abs(y - v))
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        used[k] = True
    return True


def _consistent(det: SpectrumList, tr: SpectrumList, N: int, tol: float) -> bool:
    """Every localized truncation eigenvalue is a determinant zero, and every
    zero whose eigenvector decays fast enough to be resolved at half-width
    ``N`` shows up in the truncation."""
    dv, tv = det.values, tr.values
    for t in tv:
        if dv.size == 0 or np.min(np.abs(dv - t)) > tol:
            return False
    for z in dv:
        w = abs(complex(phi1_inv(z, FREE_CUT)))
        if w ** (0.8 * N) < 1e-8 and (tv.size == 0 or np.min(np.abs(tv - z)) > tol):
            return False
    return True


def _load_instance(path):
    obj = io.read_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    return obj


def _claim(cfg: RunConfig, *names):
    """Refuse up front if any output exists, so a run never leaves a partial set."""
    taken = [str(cfg.out / n) for n in names if (cfg.out / n).exists()]
    if taken and not cfg.force:
        raise FileExistsError(f"{', '.join(taken)} exists; use --force to overwrite")


def _random_spec(sites: int, seed: int) -> JacobiSpec:
    return jacobi_instance(EnsembleSpec(kind="jacobi", support=sites, seed=seed, count=1), 0)


# ---------------------------------------------------------------- commands

def cmd_spectrum(cfg: RunConfig) -> int:
    opt = cfg.options
    if opt.get("random"):
        if cfg.seed is None:
            raise InputError("--random needs --seed")
        obj = io.jacobi_to_json(_random_spec(int(opt["random"]), cfg.seed))
    elif opt.get("input"):
        obj = _load_instance(opt["input"])
    else:
        raise InputError("spectrum needs an input file or --random SITES")
    _claim(cfg, "spectrum.json")
    kind = obj.get("type")
    out = {"input": obj}
    if kind == "jacobi":
        spec = io.jacobi_from_json(obj)
        det = jacobi_discrete_spectrum(spec, p=1.0, cross_check=False)
        N = max(200, 2 * max(abs(spec.k_min), abs(spec.k_max)) + 40) if spec.size else 200
        tr = SpectrumList.from_values(truncation_spectrum(spec, N), 1e-7)
        tol = float(opt.get("match_tol") or 1e-6)
        consistent = _consistent(det, tr, N, tol)
        out.update({"determinant": io.spectrum_to_json(det), "truncation": io.spectrum_to_json(tr),
                    "truncation_N": N})
    elif kind == "matrix":
        A = io.matrix_from_json(obj)
        eig = eigen_spectrum(A)
        vals = eig.values
        ranks = []
        for k, v in enumerate(vals):
            others = np.delete(vals, k)
            sep = float(np.min(np.abs(others - v))) if others.size else 1.0
            P = riesz_projection(A, v, 0.45 * sep)
            ranks.append({"re": v.real, "im": v.imag, "multiplicity": projection_rank(P)})
        rs = SpectrumList.from_records(ranks)
        consistent = _match(eig, rs, 1e-12) and rs.total == A.shape[0]
        out.update({"eigenvalues": io.spectrum_to_json(eig), "riesz": io.spectrum_to_json(rs)})
    else:
        raise InputError("input 'type' must be 'jacobi' or 'matrix'")
    out["consistent"] = bool(consistent)
    io.write_json(cfg.out / "spectrum.json", out, cfg.force)
    print(f"spectrum: {'consistent' if consistent else 'INCONSISTENT'} -> {cfg.out / 'spectrum.json'}")
    return EXIT_OK if consistent else EXIT_FAIL


def _bounds_report(tid: str, obj: dict, opt: dict):
    p = float(opt.get("p") or obj.get("p", 1.0))
    tau = float(opt.get("tau") or obj.get("tau", 0.5))
    if tid in JACOBI_BOUNDS:
        if obj.get("type") != "jacobi":
            raise InputError(f"{tid} needs a Jacobi spec")
        spec = io.jacobi_from_json(obj)
        eigs = jacobi_discrete_spectrum(spec, p=1.0)
        if tid == "jacobi-dist":
            return bounds.jacobi_dist_report(spec, eigs, p)
        fn = {"jacobi-endpoint": bounds.jacobi_endpoint_report,
              "jacobi-interval": bounds.jacobi_interval_report,
              "interval-hypothesis": bounds.interval_hypothesis_report,
              "disk-bgk": bounds.disk_bgk_report}[tid]
        return fn(spec, eigs, p, tau)

    def mat(key):
        if key not in obj:
            raise InputError(f"{tid} needs a matrix field {key!r}")
        return io.matrix_from_json(obj[key])

    if tid in ("kato-numrange", "kato-spectrum"):
        variant = "spectrum" if tid == "kato-spectrum" else "numrange"
        return bounds.kato_numrange_check(mat("Z"), mat("Z0"), p, variant=variant)
    if tid == "schur-trace":
        lam = [complex(*x) if isinstance(x, list) else complex(x) for x in obj.get("Lambda", [])]
        if not lam:
            raise InputError("schur-trace needs a 'Lambda' list")
        return bounds.schur_trace_check(mat("Z"), mat("Z0"), lam, p)
    if tid == "ouhabaz":
        return bounds.ouhabaz_check(mat("H"), p)
    if tid == "resolvent-transfer":
        return bounds.resolvent_transfer_check(mat("H"), mat("H0"), float(obj.get("a", -1.0)), p)
    if tid == "halfline-resolvent":
        H = mat("H")
        return bounds.halfline_resolvent_report(H, mat("H0"), eigen_spectrum(H), p, tau)
    if tid == "det-growth":
        return det_growth_check(mat("K"), p)
    raise InputError(f"unknown theorem id {tid!r}")


def cmd_bounds(cfg: RunConfig) -> int:
    opt = cfg.options
    obj = _load_instance(opt["instance"])
    _claim(cfg, "report.json")
    rep = _bounds_report(opt["theorem"], obj, opt)
    io.write_json(cfg.out / "report.json", rep.to_dict(), cfg.force)
    print(f"{rep.theorem_id}: lhs={rep.lhs:.6g} rhs_core={rep.rhs_core:.6g} "
          f"ratio={rep.ratio:.6g} pass={rep.passed}")
    return EXIT_FAIL if rep.passed is False else EXIT_OK


def cmd_ensemble(cfg: RunConfig) -> int:
    opt = cfg.options
    raw = _load_instance(opt["spec"]) if opt.get("spec") else {}
    for key in ("kind", "n", "support", "p", "magnitude", "count"):
        if opt.get(key) is not None:
            raw[key] = opt[key]
    if cfg.seed is not None:
        raw["seed"] = cfg.seed
    if "seed" not in raw:
        raise InputError("ensemble needs a seed (in the spec or via --seed)")
    unknown = set(raw) - {"kind", "n", "support", "p", "magnitude", "count", "seed"}
    if unknown:
        raise InputError(f"unknown ensemble fields {sorted(unknown)}")
    try:
        ens = EnsembleSpec(**raw)
    except TypeError as exc:
        raise InputError(str(exc)) from exc
    theorems = opt.get("theorems") or (
        ["jacobi-dist", "jacobi-endpoint", "interval-hypothesis", "disk-bgk"]
        if ens.kind == "jacobi" else ["kato-numrange", "resolvent-transfer", "halfline-resolvent"])
    taus = [float(t) for t in (opt.get("taus") or [0.1, 0.5])]
    _claim(cfg, "sweep.csv", "summary.csv", *(["comparison.csv"] if ens.kind == "jacobi" else []))
    reps = empirical_inequality_sweep(theorems, ens, taus, jobs=cfg.jobs)
    io.write_csv(cfg.out / "sweep.csv", CSV_COLUMNS, [r.to_row() for r in reps], cfg.force)
    summ = summarize(reps)
    io.write_csv(cfg.out / "summary.csv", SUMMARY_COLUMNS,
                 [{k: repr(v) if isinstance(v, float) else v for k, v in s.items()} for s in summ],
                 cfg.force)
    if ens.kind == "jacobi":
        rows = comparison_report(ens, tau=max(taus))
        io.write_csv(cfg.out / "comparison.csv", COMPARISON_COLUMNS, rows, cfg.force)
    for s in summ:
        print(f"{s['theorem_id']} tau={s['tau']}: n={s['count']} max={s['max_ratio']:.4g} "
              f"median={s['median_ratio']:.4g} violations={s['violations']}")
    return EXIT_FAIL if any(s["violations"] for s in summ) else EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    opt = cfg.options
    only = opt.get("only")
    if only:
        bad = [n for n in only if n not in SUITES]
        if bad:
            raise InputError(f"unknown suites {bad}; choose from {list(SUITES)}")
    results = run_all(only, opt.get("tolerance"), cfg.seed or 0)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"verify: {len(results) - len(failed)}/{len(results)} suites passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "bounds": cmd_bounds,
            "ensemble": cmd_ensemble, "verify": cmd_verify}


# ---------------------------------------------------------------- parsing

def _u64(s):
    v = int(s)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _global_flags(default):
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--config", type=Path, default=default, help="TOML file; flags override it")
    g.add_argument("--seed", type=_u64, default=default)
    g.add_argument("--out", type=Path, default=default)
    g.add_argument("--force", action="store_true", default=default)
    g.add_argument("--jobs", type=int, default=default)
    return g


def build_parser() -> argparse.ArgumentParser:
    # flags may come before or after the command; the copy on the
    # subcommands must not reset values given before it
    glob = _global_flags(argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="specbounds", parents=[_global_flags(None)],
                                 description="Eigenvalue bounds for non-selfadjoint perturbations.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[glob], help="discrete spectrum of a Jacobi spec or matrix")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--random", type=int, metavar="SITES", help="seeded random Jacobi spec")
    sp.add_argument("--match-tol", type=float, dest="match_tol")

    bp = sub.add_parser("bounds", parents=[glob], help="evaluate one inequality")
    bp.add_argument("theorem", choices=MATRIX_BOUNDS + JACOBI_BOUNDS)
    bp.add_argument("instance")
    bp.add_argument("--p", type=float)
    bp.add_argument("--tau", type=float)

    ep = sub.add_parser("ensemble", parents=[glob], help="ratio sweep over a seeded ensemble")
    ep.add_argument("spec", nargs="?")
    ep.add_argument("--kind", choices=("jacobi", "matrix"))
    ep.add_argument("--n", type=int)
    ep.add_argument("--support", type=int)
    ep.add_argument("--p", type=float)
    ep.add_argument("--magnitude", type=float)
    ep.add_argument("--count", type=int)
    ep.add_argument("--theorems", nargs="+")
    ep.add_argument("--taus", nargs="+", type=float)

    vp = sub.add_parser("verify", parents=[glob], help="exact-identity suite")
    vp.add_argument("--tolerance", type=float)
    vp.add_argument("--only", nargs="+")
    return ap


GLOBAL_KEYS = ("seed", "out", "force", "jobs")


def _config_values(path: Path, command: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such config file: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: malformed TOML ({exc})") from exc
    vals = {k: v for k, v in data.items() if not isinstance(v, dict)}
    vals.update(data.get(command, {}))
    return {k.replace("-", "_"): v for k, v in vals.items()}


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    ns = vars(args)
    merged = {}
    if args.config is not None:
        merged.update(_config_values(args.config, args.command))
    merged.update({k: v for k, v in ns.items() if v is not None})
    for key in ("out", "config"):
        if key in merged:
            merged[key] = Path(merged[key])
    if "seed" in merged:
        merged["seed"] = _u64(merged["seed"])
    return RunConfig(command=args.command,
                     out=merged.pop("out", Path(".")),
                     seed=merged.pop("seed", None),
                     force=bool(merged.pop("force", False)),
                     jobs=int(merged.pop("jobs", 1)),
                     options={k: v for k, v in merged.items() if k not in ("command", "config")})


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    except (InputError, FileExistsError, argparse.ArgumentTypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpecBoundsError as exc:
        code = EXIT_INPUT if isinstance(exc, ValueError) else EXIT_FAIL
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
