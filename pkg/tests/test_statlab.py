import numpy as np
import pytest
from scipy import stats

from pitman_a11.statlab import (
    CATALOG,
    binomial_ci,
    experiment_names,
    ks_statistic,
    run_experiment,
)
from pitman_a11.stochastic import RngStream


def test_ks_self_is_zero():
    x = RngStream(1, 0).normal(500)
    d, p = ks_statistic(x, x)
    assert d == 0 and p == pytest.approx(1)


def test_ks_empty():
    with pytest.raises(ValueError):
        ks_statistic([], stats.expon.cdf)
    with pytest.raises(ValueError):
        ks_statistic([1.0], [])


def test_ks_p_values_are_calibrated():
    rej = 0
    for r in range(200):
        e = RngStream(2, r).exponential(10_000)
        rej += ks_statistic(e, stats.expon.cdf)[1] < 0.05
    lo, hi = binomial_ci(rej, 200, 0.999)
    assert lo <= 0.05 <= hi


def test_ks_detects_shift():
    e = RngStream(3, 0).exponential(5000) + 0.1
    assert ks_statistic(e, stats.expon.cdf)[1] < 1e-6


def test_wilson_edges_and_errors():
    lo, hi = binomial_ci(0, 20)
    assert lo == 0 and hi > 0
    lo, hi = binomial_ci(20, 20)
    assert hi == 1 and lo < 1
    with pytest.raises(ValueError):
        binomial_ci(5, 4)
    with pytest.raises(ValueError):
        binomial_ci(0, 0)


def test_wilson_coverage():
    rng = np.random.default_rng(0)
    p, n = 0.07, 300
    cover = 0
    for s in rng.binomial(n, p, size=2000):
        lo, hi = binomial_ci(int(s), n, 0.95)
        cover += lo <= p <= hi
    assert 0.93 < cover / 2000 < 0.97


def test_catalog_covers_criteria():
    names = experiment_names()
    assert len(names) == 12
    assert sorted(CATALOG[n].criterion for n in names) == sorted(f"A{i}" for i in range(1, 13))


def test_unknown_name_and_param():
    with pytest.raises(KeyError):
        run_experiment("no_such_experiment", {})
    with pytest.raises(ValueError):
        run_experiment("denominator_identity", {"bogus": 1})


def test_denominator_identity_passes():
    rep = run_experiment("denominator_identity", {"m": 2}, seed=5)
    assert rep.passed
    assert rep.summary_lines()[0].startswith("denominator_identity,")


@pytest.mark.parametrize("name,params", [
    ("round_trip", {"N": 5}),
    ("conditioned_strings", {"n": 2000, "p": 4}),
    ("cone_stay", {"n": 500, "H": 40}),
])
def test_reports_are_deterministic(tmp_path, name, params):
    a = run_experiment(name, params, seed=3, out_dir=str(tmp_path / "a"))
    b = run_experiment(name, params, seed=3, out_dir=str(tmp_path / "b"))
    fa = (tmp_path / "a" / f"{name}.csv").read_bytes()
    fb = (tmp_path / "b" / f"{name}.csv").read_bytes()
    assert fa == fb and len(fa) > 0
    assert a.summary_lines() == b.summary_lines()


def test_round_trip_experiment_passes():
    assert run_experiment("round_trip", {"N": 6}).passed
