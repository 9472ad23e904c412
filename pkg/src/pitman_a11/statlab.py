"""KS tests, binomial intervals and the catalog of named experiments.

Each catalog entry reproduces one acceptance check end to end from
(name, params, seed) and reports a list of statistics, each with its own
pass flag.  Thresholds: 4 standard errors for frequencies and means, the
stated KS levels for distributional checks.
"""

from __future__ import annotations

import math
from collections import Counter
import os
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from .cartan import LAMBDA0, ChamberPoint, Weight
from .characters import (
    EvalPoint,
    demazure_character,
    denominator_product,
    denominator_sum,
    normalized_character,
    verma_character,
    verma_demazure_character,
    weyl_kac_evaluation,
)
from .crystals import enumerate_b_lambda
from .paths import canonical_dominant, pi0, reconstruct_from_strings, trim
from .stochastic.brownian import (
    eps_from_xi,
    harmonic_phi,
    phi_half,
    reconstruct_process,
    sample_exp_strings,
    simulate_brownian_grid,
)
from .stochastic.io import rows_to_csv
from .stochastic.kernel import closed_form_kernel, plus_kernel_oracle, simulate_conditioned_A
from .stochastic.rng import RngStream
from .stochastic.walks import simulate_walks

__all__ = [
    "Stat",
    "ExperimentReport",
    "ks_statistic",
    "binomial_ci",
    "run_experiment",
    "CATALOG",
    "experiment_names",
]


def ks_statistic(sample, cdf) -> tuple:
    """(statistic, asymptotic p-value); cdf is a callable or a second sample."""
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        raise ValueError("empty sample")
    if callable(cdf):
        r = stats.kstest(sample, cdf, method="asymp")
    else:
        other = np.asarray(cdf, dtype=float)
        if other.size == 0:
            raise ValueError("empty sample")
        r = stats.ks_2samp(sample, other, method="asymp")
    return float(r.statistic), float(r.pvalue)


def binomial_ci(successes: int, trials: int, level: float = 0.95) -> tuple:
    """Wilson score interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    z = stats.norm.ppf(0.5 + level / 2)
    ph = successes / trials
    den = 1 + z * z / trials
    centre = (ph + z * z / (2 * trials)) / den
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / den
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class Stat:
    label: str
    value: float
    err: float
    passed: bool


@dataclass
class ExperimentReport:
    name: str
    params: dict
    seed: int
    statistics: list = field(default_factory=list)
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.statistics)

    def add(self, label: str, value, err, passed) -> None:
        self.statistics.append(Stat(label, float(value), float(err), bool(passed)))

    def csv(self) -> str:
        return rows_to_csv(self.header, self.rows)

    def summary_lines(self) -> list:
        return [f"{self.name},{s.label},{s.value!r},{s.err!r},{int(s.passed)}" for s in self.statistics]


def _se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 1e-300) / n)


# ----------------------------------------------------------------- A1 - A3


def _denominator_identity(rep, m_list):
    rep.header = ["m", "product", "alternating_sum", "rel_diff", "certified_error"]
    for m in m_list:
        h = EvalPoint.rho_over(m)
        a = denominator_product(h)
        b = denominator_sum(h)
        rel = abs(a.value - b.value) / abs(a.value)
        cert = (a.error + b.error) / abs(a.value)
        rep.rows.append([m, a.value, b.value, rel, cert])
        rep.add(f"rel_diff_m{m}", rel, cert, rel < 1e-10 and cert < 1e-10)


def _character_duality(rep, N):
    rep.header = ["lambda", "theta_ratio", "string_sum", "rel_diff"]
    h = EvalPoint.rho_over(2)
    for name, lam in [("L0", LAMBDA0), ("2L0+a1", Weight(2, 1, 0))]:
        ev = weyl_kac_evaluation(lam, h)
        # e^{<lam - omega(a), h>} depends on a only through its even and odd partial sums
        cnt = Counter((sum(a[0::2]), sum(a[1::2])) for a in enumerate_b_lambda(lam, N))
        ss = sum(c * math.exp(h.pair(lam - Weight(0, o - e, e))) for (e, o), c in sorted(cnt.items()))
        rel = abs(ev.value - ss) / ev.value
        rep.rows.append([name, ev.value, ss, rel])
        rep.add(f"rel_diff_{name}", rel, ev.error / ev.value, rel < 1e-8)


def _verma_tri_oracle(rep, m, N):
    h = EvalPoint.rho_over(m)
    vals = {
        "product": verma_character(h, "product"),
        "string_sum": verma_character(h, "string_sum", N=N),
        "inverse_denominator": verma_character(h, "inverse_denominator"),
    }
    rep.header = ["mode", "value"]
    rep.rows = [[k, v] for k, v in vals.items()]
    keys = list(vals)
    for i in range(3):
        for j in range(i + 1, 3):
            rel = abs(vals[keys[i]] - vals[keys[j]]) / abs(vals[keys[i]])
            rep.add(f"{keys[i]}~{keys[j]}", rel, 0.0, rel < 1e-8)


# ------------------------------------------------------------ walks: A4-A6

_WALK_CACHE: dict = {}


def _walks(m, H, n, seed, rec=(20,)):
    key = (m, H, n, seed, tuple(rec))
    if key not in _WALK_CACHE:
        _WALK_CACHE.clear()
        _WALK_CACHE[key] = simulate_walks(m, H, n, RngStream(seed, 1), rec=list(rec))
    return _WALK_CACHE[key]


def _cone_stay(rep, m, H, n, seed):
    b = _walks(m, H, n, seed)
    target = 1 / verma_character(EvalPoint.rho_over(m))
    times = list(b.rec)
    ih, iH = times.index(H // 2), times.index(H)
    f_half = float((b.xi[:, ih, :] == 0).all(axis=1).mean())
    f_full = float(b.stay.mean())
    se = _se(f_full, n)
    rep.header = ["horizon", "frequency", "target", "stderr"]
    rep.rows = [[H // 2, f_half, target, _se(f_half, n)], [H, f_full, target, se]]
    rep.add("stay_frequency", f_full, se, abs(f_full - target) <= 4 * se)
    rep.add("bias_nonnegative", f_full - target, se, f_full - target >= -4 * se)
    rep.add("bias_shrinks", (f_full - target) - (f_half - target), se, f_full <= f_half)
    consistent = float(np.mean(b.stay == (b.xi[:, iH, :] == 0).all(axis=1)))
    rep.add("stay_equals_zero_strings", consistent, 0.0, consistent == 1.0)
    rep.add("stabilized_fraction", float(b.stabilized.mean()), 0.0, True)


def _top_patterns(k):
    """The k most probable string patterns of B(infinity), ordered by (sum, entries)."""
    from .crystals import member_b_infinity

    out = []
    s = 0
    while len(out) < k:
        level = []
        for a in _compositions(s):
            if member_b_infinity(a) and trim(a) == a:
                level.append(a)
        out.extend(sorted(level))
        s += 1
    return out[:k]


def _compositions(s):
    """Sequences of nonnegative entries with positive last entry summing to s.

    Members of B(infinity) have a_k >= 1 for k = 1..P when a_P >= 1, so
    lengths up to s + 1 are enough.
    """
    if s == 0:
        yield ()
        return

    def rec(left, prefix):
        if left == 0:
            if prefix and prefix[-1] > 0:
                yield tuple(prefix)
            return
        if len(prefix) > s:
            return
        for v in range(0, left + 1):
            yield from rec(left - v, prefix + [v])

    yield from rec(s, [])


def _string_law(rep, m, H, n, seed):
    b = _walks(m, H, n, seed)
    h = EvalPoint.rho_over(m)
    vc = verma_character(h)
    q = math.exp(-1 / m)
    strings = b.strings(-1)
    counts = {}
    for a in strings:
        counts[a] = counts.get(a, 0) + 1
    rep.header = ["pattern", "frequency", "target", "stderr"]
    for a in _top_patterns(5):
        target = q ** sum(a) / vc
        f = counts.get(a, 0) / n
        se = _se(target, n)
        rep.rows.append([" ".join(map(str, a)) or "0", f, target, se])
        rep.add(f"pattern[{' '.join(map(str, a))}]", f, se, abs(f - target) <= 4 * se)
    times = list(b.rec)
    imid, iH = times.index(H // 2), times.index(H)
    xmid = b.plus[:, imid, 0]
    f = (xmid >= np.median(xmid)).astype(float)
    x0 = b.xi[:, iH, 0].astype(float)
    corr = float(np.corrcoef(x0, f)[0, 1])
    rep.add("corr_xi0_vs_plus_mid", corr, 1 / math.sqrt(n), abs(corr) < 0.05)


def _verma_demazure(rep, m, H, n, seed, t_mid):
    b = _walks(m, H, n, seed)
    h = EvalPoint.rho_over(m)
    vc = verma_character(h)
    times = list(b.rec)
    iH = times.index(H)
    rep.header = ["check", "p", "empirical", "target", "stderr"]
    for p in (0, 1, 2):
        target = verma_demazure_character(p, h) / vc
        f = float((b.xi[:, iH, p + 1] == 0).mean())
        se = _se(target, n)
        rep.rows.append(["vd_ratio", p, f, target, se])
        rep.add(f"P(xi_{p + 1}(inf)=0)", f, se, abs(f - target) <= 4 * se)
    # E[ch^{w_p} / ch at Pi_+(n)] against the frequency of xi_{p+1}(n) = 0, same walks
    k = int(math.floor(m * t_mid))
    ik = times.index(k)
    labels = np.rint(b.plus[:, ik, 0]).astype(int)
    for p in (0, 1, 2):
        cache = {}
        ratio = np.empty(n)
        for i, l in enumerate(labels):
            if l not in cache:
                lam = Weight(k, Fraction(int(l), 2), 0)
                dem = demazure_character(lam, p, h, N=_demazure_cut(m), normalized=True)
                cache[l] = dem / normalized_character(k, int(l), h).value
            ratio[i] = cache[l]
        ind = (b.xi[:, ik, p + 1] == 0).astype(float)
        d = ratio - ind
        se = float(d.std(ddof=1) / math.sqrt(n))
        rep.rows.append(["character_ratio", p, float(ind.mean()), float(ratio.mean()), se])
        rep.add(f"E[ch^w{p}/ch]-P(xi_{p + 1}(n)=0)", float(d.mean()), se, abs(d.mean()) <= 4 * se)


def _demazure_cut(m):
    # e^{-N/m} times the (polynomial) number of depth-limited strings stays negligible
    return int(40 * m) + 20


# --------------------------------------------------------------- A7 - A12


def _brownian_strings(rep, T, dt, n, seed):
    eps = np.empty((n, 5))
    for r in range(n):
        g = simulate_brownian_grid(T, dt, RngStream(seed, 10_000 + r), max_passes=6, keep=False)
        eps[r] = eps_from_xi(g.xi_end)[:5]
    rep.header = ["replica"] + [f"eps{k}" for k in range(5)]
    rep.rows = [[r] + list(eps[r]) for r in range(n)]
    for k in range(5):
        d, pv = ks_statistic(eps[:, k], stats.expon.cdf)
        rep.add(f"KS_eps{k}", d, pv, pv >= 0.005)
    c = np.corrcoef(eps.T)
    for i in range(5):
        for j in range(i + 1, 5):
            rep.add(f"corr_eps{i}_eps{j}", c[i, j], 1 / math.sqrt(n), abs(c[i, j]) < 0.05)


def _phi_properties(rep):
    ts = np.linspace(0.2, 6.0, 30)
    b0 = float(np.max(np.abs(phi_half(ts, np.zeros_like(ts)))))
    b1 = float(np.max(np.abs(phi_half(ts, ts))))
    rep.add("boundary_x=0", b0, 0.0, b0 < 1e-12)
    rep.add("boundary_x=t", b1, 0.0, b1 < 1e-12)
    T, X = np.meshgrid(np.linspace(0.3, 6.0, 40), np.linspace(0.0, 1.0, 41)[1:-1])
    X = X * T
    v = phi_half(T, X)
    rep.add("interior_min", float(v.min()), 0.0, bool((v > 0).all()))
    # fourth-order central differences
    hs = 2e-3
    f = phi_half
    dt_ = (-f(T + 2 * hs, X) + 8 * f(T + hs, X) - 8 * f(T - hs, X) + f(T - 2 * hs, X)) / (12 * hs)
    dx = (-f(T, X + 2 * hs) + 8 * f(T, X + hs) - 8 * f(T, X - hs) + f(T, X - 2 * hs)) / (12 * hs)
    dxx = (-f(T, X + 2 * hs) + 16 * f(T, X + hs) - 30 * v + 16 * f(T, X - hs) - f(T, X - 2 * hs)) / (12 * hs**2)
    res = np.abs(dt_ + 0.5 * dx + 0.5 * dxx)
    scale = np.abs(dt_) + 0.5 * np.abs(dx) + 0.5 * np.abs(dxx) + np.abs(v)
    rel = float(np.max(res / scale))
    rep.add("harmonicity_residual", rel, 0.0, rel < 1e-5)
    rep.header = ["t", "x", "phi", "residual"]
    rep.rows = [[float(a), float(b), float(c), float(d)] for a, b, c, d in
                zip(T.ravel()[::37], X.ravel()[::37], v.ravel()[::37], res.ravel()[::37])]


def _reconstruction(rep, m, T_max, t_obs, n, ps, seed):
    grid, X = simulate_conditioned_A(m, T_max, RngStream(seed, 2), n=n)
    rep.header = ["p", "ks_statistic", "p_value", "mean", "var", "certified_fraction"]
    prev = math.inf
    mono = True
    last = None
    for p in ps:
        s = sample_exp_strings(RngStream(seed, 100 + p), K=p, ps=[p], n=n)
        out = np.empty(n)
        cert = 0
        for r in range(n):
            _, xx, ok = reconstruct_process(grid, X[r], s.xi_p[p][r], t_obs, strict=False)
            out[r] = xx[-1]
            cert += ok
        d, pv = ks_statistic(out, stats.norm(t_obs / 2, math.sqrt(t_obs)).cdf)
        rep.rows.append([p, d, pv, float(out.mean()), float(out.var()), cert / n])
        rep.add(f"KS_p{p}", d, pv, True)
        mono &= d <= prev
        prev = d
        last = (p, d, pv)
    rep.add("KS_nonincreasing_in_p", float(mono), 0.0, mono)
    rep.add(f"KS_pass_p{last[0]}", last[1], last[2], last[2] >= 0.01)


def _kernel_oracle(rep, m, N):
    lam = Weight(3, 1, 0)
    o = plus_kernel_oracle(m, lam, N)
    mass = o.pop("mass")
    c = closed_form_kernel(m, lam, N=max(80, 2 * N))
    keys = sorted(set(o) | set(c), key=lambda w: (w.cD * -1, w.cA))
    tv = 0.5 * sum(abs((o[k][0] if k in o else 0.0) - c.get(k, 0.0)) for k in keys)
    shared = [k for k in o if k in c]
    worst = max(abs(o[k][0] - c[k]) / c[k] for k in shared)
    rep.header = ["nu_alpha1", "nu_delta", "enumeration", "closed_form", "n_steps"]
    rep.rows = [[str(k.cA), str(k.cD), o[k][0] if k in o else 0.0, c.get(k, 0.0), len(o[k][1]) if k in o else 0]
                for k in keys]
    rep.add("enumeration_mass", mass, 0.0, 1 - 1e-8 <= mass <= 1 + 1e-12)
    rep.add("per_endpoint_rel_diff", worst, 0.0, worst < 1e-10)
    rep.add("total_variation", tv, 0.0, tv < 1e-8)


def _round_trip(rep, N):
    bad = 0
    rep.header = ["strings", "ok"]
    for a in enumerate_b_lambda(LAMBDA0, N):
        a = trim(a)
        p = reconstruct_from_strings(pi0, a)
        dom, back = canonical_dominant(p)
        ok = trim(back) == a and dom.same_as(pi0)
        bad += not ok
        rep.rows.append([" ".join(map(str, a)), int(ok)])
    rep.add("failures", bad, 0.0, bad == 0)
    rep.add("checked", len(rep.rows), 0.0, True)


def _conditioned_strings(rep, n, p_order, seed):
    s = sample_exp_strings(RngStream(seed, 3), K=p_order, ps=[1, p_order], n=n)
    x = s.xi_p[1]
    for k in range(2):
        d, pv = ks_statistic(x[:, k], stats.expon.cdf)
        rep.add(f"KS_xi{k}_1", d, pv, pv >= 0.01)
    corr = float(np.corrcoef(x[:, 0], x[:, 1])[0, 1])
    rep.add("corr_xi0_xi1", corr, 1 / math.sqrt(n), abs(corr) < 0.03)
    X = s.xi_p[p_order]
    k = np.arange(1, p_order + 1)
    r = X[:, 1:] / k
    ordered = bool((r[:, :-1] >= r[:, 1:]).all())
    if not ordered:
        raise AssertionError("xi_{k,p} / k is not nonincreasing in k")
    rep.add(f"ordering_p{p_order}", 1.0, 0.0, ordered)
    rep.header = ["k", "mean_xi_kp", "expected"]
    rep.rows = [[j, float(X[:, j].mean()), 1.0 if j == 0 else 2 - 2 * j / (p_order + 1)] for j in range(p_order + 1)]


# ---------------------------------------------------------------- catalog


@dataclass(frozen=True)
class Entry:
    name: str
    criterion: str
    description: str
    defaults: dict
    fn: Callable


def _entry(name, criterion, description, defaults, fn):
    return Entry(name, criterion, description, defaults, fn)


CATALOG = {
    e.name: e
    for e in [
        _entry("denominator_identity", "A1", "product vs alternating sum of the Weyl denominator at rho/m",
               {"m": [1, 2, 5, 10]}, lambda r, P, s: _denominator_identity(r, _as_list(P["m"]))),
        _entry("character_duality", "A2", "theta ratio vs B(lambda) string sum at rho/2",
               {"N": 60}, lambda r, P, s: _character_duality(r, int(P["N"]))),
        _entry("verma_tri_oracle", "A3", "three evaluations of the Verma character",
               {"m": 2, "N": 120}, lambda r, P, s: _verma_tri_oracle(r, float(P["m"]), int(P["N"]))),
        _entry("cone_stay", "A4", "probability that the walk never leaves the cone",
               {"m": 2, "H": 400, "n": 100_000},
               lambda r, P, s: _cone_stay(r, int(P["m"]), int(P["H"]), int(P["n"]), s)),
        _entry("string_law", "A5", "law of xi(infinity) and independence from the dominant part",
               {"m": 2, "H": 400, "n": 100_000},
               lambda r, P, s: _string_law(r, int(P["m"]), int(P["H"]), int(P["n"]), s)),
        _entry("verma_demazure", "A6", "P(xi_{p+1} = 0) vs Verma-Demazure ratios, character-ratio expectation",
               {"m": 2, "H": 400, "n": 100_000, "t": 10},
               lambda r, P, s: _verma_demazure(r, int(P["m"]), int(P["H"]), int(P["n"]), s, float(P["t"]))),
        _entry("brownian_strings", "A7", "exponential string increments of grid Brownian motion",
               {"T": 300.0, "dt": 1e-3, "n": 2000},
               lambda r, P, s: _brownian_strings(r, float(P["T"]), float(P["dt"]), int(P["n"]), s)),
        _entry("phi_properties", "A8", "boundary values, positivity and harmonicity of phi_{1/2}",
               {}, lambda r, P, s: _phi_properties(r)),
        _entry("reconstruction", "A9", "B recovered from A and conditioned strings",
               {"m": 20, "T": 60.0, "t": 4.0, "n": 5000, "p": [0, 2, 4, 8]},
               lambda r, P, s: _reconstruction(r, int(P["m"]), float(P["T"]), float(P["t"]), int(P["n"]),
                                               [int(v) for v in _as_list(P["p"])], s)),
        _entry("kernel_oracle", "A10", "one-step kernel of Pi_+: enumeration vs closed form",
               {"m": 2, "N": 40}, lambda r, P, s: _kernel_oracle(r, float(P["m"]), int(P["N"]))),
        _entry("round_trip", "A11", "string coordinates -> path -> string coordinates on B(Lambda_0)",
               {"N": 8}, lambda r, P, s: _round_trip(r, int(P["N"]))),
        _entry("conditioned_strings", "A12", "law of xi_{.,1}(infinity) and ordering of xi_{.,p}",
               {"n": 100_000, "p": 8},
               lambda r, P, s: _conditioned_strings(r, int(P["n"]), int(P["p"]), s)),
    ]
}


def experiment_names() -> list:
    return list(CATALOG)


def _as_list(v):
    if isinstance(v, (list, tuple)):
        return list(v)
    if isinstance(v, str):
        return [float(x) if "." in x or "e" in x else int(x) for x in v.split(",") if x]
    return [v]


def run_experiment(name: str, params: dict | None = None, seed: int = 1, out_dir: str | None = None) -> ExperimentReport:
    if name not in CATALOG:
        raise KeyError(f"unknown experiment {name!r}; known: {', '.join(CATALOG)}")
    e = CATALOG[name]
    P = dict(e.defaults)
    for k, v in (params or {}).items():
        if k not in e.defaults:
            raise ValueError(f"experiment {name!r} has no parameter {k!r}")
        P[k] = v
    rep = ExperimentReport(name, P, seed)
    e.fn(rep, P, seed)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{name}.csv"), "w", newline="") as fh:
            fh.write(rep.csv())
    return rep
