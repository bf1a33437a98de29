import csv
import json
from pathlib import Path

import numpy as np
import pytest

from specbounds.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main, parse_config

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


def run(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(Path(path).read_text())


def values(records):
    return np.array([complex(r["re"], r["im"]) for r in records])


def assert_report_matches(got, want):
    assert got["theorem_id"] == want["theorem_id"] and got["pass"] == want["pass"]
    for key in ("lhs", "rhs_core", "ratio", "explicit_constant"):
        assert got[key] == pytest.approx(want[key], rel=1e-9, abs=1e-15)


# ---------------------------------------------------------------- spectrum

def test_spectrum_rank_one(tmp_path):
    assert run("spectrum", DATA / "rank_one.json", "--out", tmp_path) == EXIT_OK
    out = load(tmp_path / "spectrum.json")
    assert out["consistent"]
    (z,) = values(out["determinant"])
    assert abs(z - 3.2015621187) < 1e-8
    assert out["determinant"][0]["multiplicity"] == 1


def test_spectrum_free_is_empty(tmp_path):
    assert run("spectrum", DATA / "free.json", "--out", tmp_path) == EXIT_OK
    out = load(tmp_path / "spectrum.json")
    assert out["determinant"] == [] and out["truncation"] == []


def test_spectrum_seeded_random_matches_golden(tmp_path):
    assert run("spectrum", "--random", 5, "--seed", 42, "--out", tmp_path) == EXIT_OK
    got, want = load(tmp_path / "spectrum.json"), load(GOLDEN / "spectrum_random5_seed42.json")
    assert got["input"] == want["input"]
    for key in ("determinant", "truncation"):
        assert np.allclose(values(got[key]), values(want[key]), atol=1e-10)


def test_spectrum_matrix_multiplicities(tmp_path):
    path = tmp_path / "jordan.json"
    path.write_text(json.dumps({"type": "matrix", "re": [[0, 1, 0], [0, 0, 0], [0, 0, 2]]}))
    assert run("spectrum", path, "--out", tmp_path / "o") == EXIT_OK
    out = load(tmp_path / "o" / "spectrum.json")
    assert sorted(r["multiplicity"] for r in out["riesz"]) == [1, 2]


def test_spectrum_is_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run("--seed", 7, "spectrum", "--random", 3, "--out", tmp_path / d) == EXIT_OK
    assert (tmp_path / "a" / "spectrum.json").read_bytes() == \
        (tmp_path / "b" / "spectrum.json").read_bytes()


def test_spectrum_input_errors(tmp_path, capsys):
    assert run("spectrum", DATA / "broken.json", "--out", tmp_path) == EXIT_INPUT
    assert "malformed JSON" in capsys.readouterr().err
    assert run("spectrum", tmp_path / "missing.json", "--out", tmp_path) == EXIT_INPUT
    assert run("spectrum", "--random", 3, "--out", tmp_path) == EXIT_INPUT
    assert run("spectrum", "--out", tmp_path) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"type": "banana"}))
    assert run("spectrum", bad, "--out", tmp_path) == EXIT_INPUT
    assert not (tmp_path / "spectrum.json").exists()


def test_outputs_are_not_overwritten_without_force(tmp_path):
    assert run("spectrum", DATA / "rank_one.json", "--out", tmp_path) == EXIT_OK
    before = (tmp_path / "spectrum.json").read_bytes()
    assert run("spectrum", DATA / "free.json", "--out", tmp_path) == EXIT_INPUT
    assert (tmp_path / "spectrum.json").read_bytes() == before
    assert run("spectrum", DATA / "free.json", "--out", tmp_path, "--force") == EXIT_OK
    assert load(tmp_path / "spectrum.json")["determinant"] == []


# ---------------------------------------------------------------- bounds

@pytest.mark.parametrize("theorem, instance, extra, golden", [
    ("kato-numrange", "kato_2x2.json", (), "kato_numrange_2x2.json"),
    ("det-growth", "det_growth.json", ("--p", 1), "det_growth_p1.json"),
    ("jacobi-dist", "seeded5.json", ("--p", 2), "jacobi_dist_seeded5.json"),
])
def test_bounds_golden(tmp_path, theorem, instance, extra, golden):
    assert run("bounds", theorem, DATA / instance, *extra, "--out", tmp_path) == EXIT_OK
    assert_report_matches(load(tmp_path / "report.json"), load(GOLDEN / golden))


def test_bounds_violation_exit_code(tmp_path):
    assert run("bounds", "kato-spectrum", DATA / "kato_2x2.json", "--out", tmp_path) == EXIT_FAIL
    rep = load(tmp_path / "report.json")
    assert rep["pass"] is False and rep["ratio"] == pytest.approx(200)


def test_bounds_ratio_only_exits_zero(tmp_path):
    code = run("bounds", "jacobi-endpoint", DATA / "rank_one.json", "--tau", 0.5, "--out", tmp_path)
    assert code == EXIT_OK and load(tmp_path / "report.json")["pass"] == "ratio-only"


def test_bounds_input_errors(tmp_path):
    assert run("bounds", "nonsense", DATA / "kato_2x2.json", "--out", tmp_path) == EXIT_INPUT
    assert run("bounds", "jacobi-dist", DATA / "kato_2x2.json", "--out", tmp_path) == EXIT_INPUT
    assert run("bounds", "ouhabaz", DATA / "kato_2x2.json", "--out", tmp_path) == EXIT_INPUT


# ---------------------------------------------------------------- ensemble

def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_ensemble_count_zero_is_header_only(tmp_path):
    assert run("ensemble", "--count", 0, "--seed", 1, "--out", tmp_path) == EXIT_OK
    assert (tmp_path / "sweep.csv").read_text() == \
        "theorem_id,seed,n,p,tau,lhs,rhs_core,explicit_constant,ratio,pass\n"


def test_ensemble_bit_identical_and_extends(tmp_path):
    args = ("ensemble", "--support", 2, "--count", 4, "--seed", 11,
            "--theorems", "jacobi-dist", "jacobi-endpoint")
    assert run(*args, "--out", tmp_path / "a") == EXIT_OK
    assert run(*args, "--out", tmp_path / "b", "--jobs", 2) == EXIT_OK
    for name in ("sweep.csv", "summary.csv", "comparison.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    big = list(args)
    big[big.index("--count") + 1] = 8
    assert run(*big, "--out", tmp_path / "c") == EXIT_OK
    small_rows, big_rows = read_csv(tmp_path / "a" / "sweep.csv"), read_csv(tmp_path / "c" / "sweep.csv")
    assert big_rows[:len(small_rows)] == small_rows and len(big_rows) == 2 * len(small_rows)


def test_ensemble_spec_file_and_config(tmp_path):
    spec = tmp_path / "ens.json"
    spec.write_text(json.dumps({"kind": "matrix", "n": 5, "support": 1, "p": 2,
                                "magnitude": 1, "count": 3, "seed": 4}))
    cfg = tmp_path / "run.toml"
    cfg.write_text(f'out = "{tmp_path / "o"}"\n[ensemble]\ncount = 2\n'
                   f'theorems = ["kato-numrange", "ouhabaz"]\n')
    assert run("--config", cfg, "ensemble", spec) == EXIT_OK
    rows = read_csv(tmp_path / "o" / "sweep.csv")
    assert len(rows) == 4 and {r["theorem_id"] for r in rows} == {"kato-numrange", "ouhabaz"}
    assert all(r["seed"].startswith("4:") for r in rows)
    assert not (tmp_path / "o" / "comparison.csv").exists()
    # flags override the config file
    assert run("--config", cfg, "ensemble", spec, "--count", 1, "--out", tmp_path / "p") == EXIT_OK
    assert len(read_csv(tmp_path / "p" / "sweep.csv")) == 2


def test_ensemble_input_errors(tmp_path):
    assert run("ensemble", "--count", 1, "--out", tmp_path) == EXIT_INPUT
    spec = tmp_path / "ens.json"
    spec.write_text(json.dumps({"kind": "jacobi", "colour": "red", "seed": 1}))
    assert run("ensemble", spec, "--out", tmp_path) == EXIT_INPUT
    assert run("ensemble", "--count", 1, "--seed", 1, "--theorems", "ouhabaz",
               "--out", tmp_path) == EXIT_INPUT
    cfg = tmp_path / "bad.toml"
    cfg.write_text("count = [")
    assert run("--config", cfg, "ensemble", "--seed", 1, "--out", tmp_path) == EXIT_INPUT
    assert run("ensemble", "--seed", -1, "--out", tmp_path) == EXIT_INPUT


def test_ensemble_refuses_partial_overwrite(tmp_path):
    (tmp_path / "summary.csv").write_text("keep\n")
    assert run("ensemble", "--count", 1, "--seed", 1, "--out", tmp_path) == EXIT_INPUT
    assert not (tmp_path / "sweep.csv").exists()
    assert (tmp_path / "summary.csv").read_text() == "keep\n"


# ---------------------------------------------------------------- verify

def test_verify_subset_passes(capsys):
    assert run("verify", "--only", "conformal", "green") == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS conformal" in out and "PASS green" in out and "2/2 suites passed" in out


def test_verify_tight_tolerance_fails(capsys):
    assert run("verify", "--only", "conformal", "--tolerance", 1e-14) == EXIT_FAIL
    assert "FAIL conformal" in capsys.readouterr().out


def test_verify_unknown_suite():
    assert run("verify", "--only", "nope") == EXIT_INPUT


# ---------------------------------------------------------------- parsing

def test_global_flags_before_or_after_command(tmp_path):
    a = parse_config(["--seed", "3", "--force", "verify", "--out", str(tmp_path)])
    b = parse_config(["verify", "--seed", "3", "--force", "--out", str(tmp_path)])
    assert (a.seed, a.force, a.out) == (b.seed, b.force, b.out) == (3, True, tmp_path)
    assert parse_config(["verify"]).seed is None and parse_config(["verify"]).jobs == 1
