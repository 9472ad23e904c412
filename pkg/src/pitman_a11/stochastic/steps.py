"""The one-step law mu^m on B(Lambda_0): P(a) = q^{sum a} / ch_{Lambda_0}(rho^vee / m)."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..cartan import LAMBDA0
from ..characters import EvalPoint, weyl_kac_character
from ..crystals import enumerate_stratum
from ..errors import TruncationError
from ..paths import PLPath, pi0, reconstruct_from_strings, trim
from .rng import RngStream

RESIDUAL_TOL = 1e-12


def stratum_counts(N: int) -> list[int]:
    """c_n = #{a in B(Lambda_0): sum(a) = n} for n <= N.

    Read off the product prod_k (1 + x^k), which equals the string sum of
    B(Lambda_0) in the variable x = e^{-<alpha_i, h>} at h proportional to
    rho^vee; the test-suite checks these counts against the enumeration.
    """
    c = [0] * (N + 1)
    c[0] = 1
    for k in range(1, N + 1):
        for n in range(N, k - 1, -1):
            c[n] += c[n - k]
    return c


class StepLaw:
    """Stratified inverse-CDF sampler for mu^m.

    The stratum sum(a) = n has mass c_n q^n / ch; strata are kept up to the
    first N whose residual mass is below ``tol``, and a stratum is enumerated
    only when a draw lands in it.
    """

    def __init__(self, m: float, tol: float = RESIDUAL_TOL, n_cap: int | None = None):
        if not m >= 1:
            raise ValueError("m must be >= 1")
        if n_cap is None:
            # c_n grows like e^{pi sqrt(n/3)}, q^n = e^{-n/m}
            n_cap = int(100 + 80 * m)
        self.m = m
        self.q = math.exp(-1.0 / m)
        self.ch = weyl_kac_character(LAMBDA0, EvalPoint.rho_over(m))
        counts = stratum_counts(n_cap)
        mass = 0.0
        for n, c in enumerate(counts):
            mass += c * self.q**n / self.ch
            if 1.0 - mass < tol:
                break
        else:
            raise TruncationError(
                f"residual step mass {1.0 - mass:.3g} still above {tol:g} at sum(a) <= {n_cap}"
            )
        self.N = n
        self.counts = counts[: n + 1]
        probs = np.array([c * self.q**k for k, c in enumerate(self.counts)]) / self.ch
        self.residual = max(0.0, 1.0 - float(probs.sum()))
        self.cum = np.cumsum(probs)
        self.cum /= self.cum[-1]

    def prob(self, a) -> float:
        return self.q ** sum(a) / self.ch

    def element(self, n: int, idx: int) -> tuple:
        stratum = enumerate_stratum(LAMBDA0, n)
        if len(stratum) != self.counts[n]:
            raise TruncationError(f"stratum {n} has {len(stratum)} elements, expected {self.counts[n]}")
        return stratum[idx]

    def sample_keys(self, rng: RngStream, size: int) -> np.ndarray:
        """(stratum, index) pairs, shape (size, 2)."""
        u = rng.uniform(size)
        n = np.searchsorted(self.cum, u, side="right")
        n = np.minimum(n, self.N)
        counts = np.asarray(self.counts, dtype=np.int64)[n]
        idx = np.floor(rng.uniform(size) * counts).astype(np.int64)
        idx = np.minimum(idx, counts - 1)
        return np.stack([n, idx], axis=1)


@lru_cache(maxsize=16)
def step_law(m: float) -> StepLaw:
    return StepLaw(m)


@lru_cache(maxsize=None)
def step_path(a: tuple) -> PLPath:
    """The path of B pi_0 with string coordinates a (exact)."""
    return reconstruct_from_strings(pi0, a, check=False)


@lru_cache(maxsize=None)
def step_arrays(a: tuple) -> tuple:
    """Float arrays (t, x, d) of step_path(a): time, <., alpha_1^vee>, delta coefficient."""
    p = step_path(a)
    t = np.array([float(s) for s in p.times])
    x = np.array([float(2 * v.cA) for v in p.values])
    d = np.array([float(v.cD) for v in p.values])
    return t, x, d


def sample_mu_step(m: float, rng: RngStream) -> tuple:
    """One draw a ~ mu^m and its path on [0, 1]."""
    law = step_law(m)
    n, idx = law.sample_keys(rng, 1)[0]
    a = trim(law.element(int(n), int(idx)))
    return a, step_path(a)
