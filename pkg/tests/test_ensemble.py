import numpy as np
import pytest

from specbounds.errors import ParameterError
from specbounds.ensemble import (EnsembleSpec, comparison_report, empirical_inequality_sweep,
                                 instance_rng, jacobi_instance, matrix_instance, ratio_stability,
                                 summarize)
from specbounds.reports import BoundReport


def test_spec_validation():
    with pytest.raises(ParameterError):
        EnsembleSpec(kind="other")
    with pytest.raises(ParameterError):
        EnsembleSpec(count=-1)
    with pytest.raises(ParameterError):
        EnsembleSpec(support=0)
    with pytest.raises(ParameterError):
        EnsembleSpec(p=0.5)
    with pytest.raises(ParameterError):
        EnsembleSpec(seed=2 ** 64)
    assert EnsembleSpec(kind="matrix", support=0).support == 0


def test_spec_dict_round_trip():
    e = EnsembleSpec(kind="matrix", n=6, support=2, p=1.0, magnitude=0.5, count=7, seed=3)
    assert EnsembleSpec(**e.to_dict()) == e
    assert e.with_count(9).count == 9 and e.with_count(9).seed == 3


def test_instance_streams_are_independent_of_order():
    a = instance_rng(5, 2).random(4)
    instance_rng(5, 1).random(100)
    assert np.array_equal(instance_rng(5, 2).random(4), a)
    assert not np.array_equal(instance_rng(5, 3).random(4), a)
    assert not np.array_equal(instance_rng(6, 2).random(4), a)


def test_jacobi_instance_shape():
    e = EnsembleSpec(support=4, magnitude=0.3, seed=1)
    s = jacobi_instance(e, 0)
    assert (s.k_min, s.k_max) == (-2, 1)
    assert max(abs(x - 1) for x in s.a + s.c) <= 0.3 and max(abs(x) for x in s.b) <= 0.3
    assert jacobi_instance(e, 0) == s


def test_matrix_instance_properties():
    e = EnsembleSpec(kind="matrix", n=0, support=2, seed=4)
    sizes = set()
    for i in range(20):
        inst = matrix_instance(e, i)
        n = inst["n"]
        sizes.add(n)
        assert 4 <= n <= 16
        assert np.linalg.matrix_rank(inst["M"]) == 2
        H0 = inst["H0"]
        assert np.allclose(H0, H0.conj().T) and np.linalg.eigvalsh(H0).min() > -1e-12
    assert len(sizes) > 1


def test_sweep_rows_do_not_depend_on_count():
    e = EnsembleSpec(support=2, count=3, seed=9)
    small = empirical_inequality_sweep(["jacobi-dist", "jacobi-endpoint"], e)
    big = empirical_inequality_sweep(["jacobi-dist", "jacobi-endpoint"], e.with_count(6))
    rows_small = [r.to_row() for r in small]
    rows_big = [r.to_row() for r in big]
    assert rows_big[:len(rows_small)] == rows_small
    # one tau-free row plus two tau rows per instance
    assert len(rows_small) == 3 * 3
    assert rows_small[0]["seed"] == "9:0"


def test_sweep_parallel_matches_serial():
    e = EnsembleSpec(kind="matrix", n=5, support=1, count=6, seed=2)
    ids = ["kato-numrange", "ouhabaz", "resolvent-transfer"]
    serial = [r.to_row() for r in empirical_inequality_sweep(ids, e)]
    parallel = [r.to_row() for r in empirical_inequality_sweep(ids, e, jobs=2)]
    assert serial == parallel


def test_sweep_rejects_theorems_for_wrong_kind():
    with pytest.raises(ParameterError):
        empirical_inequality_sweep(["kato-numrange"], EnsembleSpec(count=1))


def test_sweep_empty_ensemble():
    assert empirical_inequality_sweep(["jacobi-dist"], EnsembleSpec(count=0)) == []


def test_explicit_constant_sweeps_have_no_violations():
    reps = empirical_inequality_sweep(["jacobi-dist"], EnsembleSpec(support=3, count=10, seed=1))
    reps += empirical_inequality_sweep(["kato-numrange", "resolvent-transfer", "ouhabaz"],
                                       EnsembleSpec(kind="matrix", count=10, seed=1))
    assert all(s["violations"] == 0 for s in summarize(reps))


def _rep(tid, tau, index, ratio):
    return BoundReport(tid, {"tau": tau, "index": index}, ratio, 1.0)


def test_summarize_and_stability():
    reps = [_rep("x", 0.1, i, r) for i, r in enumerate([1.0, 2.0, 2.2, 0.5])]
    reps.append(BoundReport("y", {"tau": "", "index": 0}, 3.0, 1.0, explicit_constant=2.0))
    summ = summarize(reps)
    assert summ[0] == {"theorem_id": "x", "tau": 0.1, "count": 4, "max_ratio": 2.2,
                       "median_ratio": 1.5, "violations": 0}
    assert summ[1]["violations"] == 1
    st = ratio_stability(reps, "x", 0.1, 2)
    assert st["max_first"] == 2.0 and st["max_all"] == 2.2
    assert st["growth"] == pytest.approx(0.1) and st["stable"]
    assert not ratio_stability(reps, "x", 0.1, 1)["stable"]


def test_comparison_report_rows():
    e = EnsembleSpec(support=2, count=4, seed=5)
    rows = comparison_report(e)
    assert [r["index"] for r in rows] == [0, 1, 2, 3]
    for r in rows:
        assert r["regime"] in ("none", "interior", "endpoint")
        assert r["dominant"] in ("none", "interval", "numrange", "endpoint")
        if r["n_eigs"] == 0:
            assert r["dominant"] == "none"
    with pytest.raises(ParameterError):
        comparison_report(EnsembleSpec(kind="matrix", count=1))
