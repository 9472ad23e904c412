"""Transition kernel of Pi^m_+ at integer times.

Two independent routes:

* ``plus_kernel_oracle`` enumerates the steps eta of B pi_0 (through B(Lambda_0)),
  keeps those with lambda + eta inside the cone and weights them by
  mu^m(eta) ch_{lambda+eta(1)} / ch_lambda e^{-<eta(1), rho^vee/m>}.
* ``closed_form_kernel`` uses the tensor product multiplicities of
  V(lambda) x V(Lambda_0), read off the coset (Virasoro minimal model)
  branching functions, so that P(lambda -> mu - n delta) is
  [x^n] b_{lambda, mu}(x) e^{-n b} ch_mu / (ch_lambda ch_{Lambda_0}).

The second route needs no enumeration, which is what makes the chain usable
at large m.
"""

from __future__ import annotations

import math
from collections import defaultdict
from functools import lru_cache

import numpy as np

from ..cartan import LAMBDA0, Weight, is_dominant, is_integral, pair_index
from ..characters import EvalPoint, ch_with_delta, log_normalized_character_rho, weyl_kac_character
from ..crystals import enumerate_b_lambda
from ..errors import TruncationError
from ..paths import trim
from .rng import RngStream
from .steps import step_path


def _in_cone(lam: Weight, p) -> bool:
    # affine pieces: checking the breakpoints is enough
    for v in p.values:
        w = lam + v
        if pair_index(w, 0) < 0 or pair_index(w, 1) < 0:
            return False
    return True


def plus_kernel_oracle(m: float, lam: Weight, N: int) -> dict:
    """{endpoint weight nu: (probability, [string coordinates of the steps])} for one step from lam.

    The returned dict also carries the total mass under the key ``"mass"``.
    """
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not dominant integral")
    h = EvalPoint.rho_over(m)
    ch_lam = ch_with_delta(lam, h)
    ch0 = weyl_kac_character(LAMBDA0, h)
    out = defaultdict(lambda: [0.0, []])
    for a in enumerate_b_lambda(LAMBDA0, N):
        a = trim(a)
        p = step_path(a)
        if not _in_cone(lam, p):
            continue
        nu = p.end
        # mu^m(eta) e^{-<eta(1), h>} = 1 / ch_{Lambda_0}
        w = ch_with_delta(lam + nu, h) / (ch_lam * ch0)
        out[nu][0] += w
        out[nu][1].append(a)
    res = {nu: (v[0], v[1]) for nu, v in out.items()}
    res["mass"] = sum(v[0] for v in out.values())
    return res


# ------------------------------------------------------------ closed form


def _h_wzw(k: int, l):
    return l * (l + 2) / (4 * (k + 2))


def _rc_exponents(p: int, pp: int, r: int, s: int, nmax: int):
    """Exponents (A_n, B_n) of the Rocha-Caridi numerator sum_n q^{A_n} - q^{B_n}, |n| <= nmax."""
    ns = np.arange(-nmax, nmax + 1)
    A = ((2 * p * pp * ns + pp * r - p * s) ** 2 - (pp - p) ** 2) / (4 * p * pp)
    B = ((2 * p * pp * ns + pp * r + p * s) ** 2 - (pp - p) ** 2) / (4 * p * pp)
    return A, B


@lru_cache(maxsize=4096)
def branching_coefficients(k: int, l: int, lp: int, N: int) -> tuple:
    """Integer coefficients c_0..c_N of b(x) = sum_n c_n x^n.

    ch_lam ch_{Lambda_0} = sum_{l'} b_{l,l'}(e^{-delta}) ch_{mu_{l'}} with lam of
    level k and alpha_1^vee label l, mu_{l'} of level k + 1 and label l',
    both with zero delta part.
    """
    if (l - lp) % 2 or not (0 <= l <= k and 0 <= lp <= k + 1):
        return (0,) * (N + 1)
    p, pp = k + 2, k + 3
    r, s = l + 1, lp + 1
    shift = _h_wzw(k + 1, lp) - _h_wzw(k, l)
    nmax = 2 + int(math.isqrt(N + 1))
    A, B = _rc_exponents(p, pp, r, s, nmax)
    num = [0] * (N + 1)
    for e, sign in [(v, 1) for v in A] + [(v, -1) for v in B]:
        tot = e + shift
        ti = round(tot)
        if abs(tot - ti) > 1e-9:
            raise ArithmeticError(f"non-integral branching exponent {tot}")
        if 0 <= ti <= N:
            num[ti] += sign
        elif ti < 0:
            raise ArithmeticError("negative branching exponent")
    parts = _partitions(N)
    sparse = [(j, c) for j, c in enumerate(num) if c]
    out = [sum(c * parts[n - j] for j, c in sparse if j <= n) for n in range(N + 1)]
    return tuple(out)


def _log_branching_series(k: int, l: int, lp: int, x: float) -> float:
    """log b_{l,l'}(x) from the (nonnegative) integer coefficients; no cancellation."""
    lx = math.log(x)
    N = int(math.ceil(80 / -lx + (math.pi**2 / 6) / lx**2)) + 10
    c = branching_coefficients(k, l, lp, N)
    nz = [(n, v) for n, v in enumerate(c) if v]
    if not nz:
        return -math.inf
    logs = np.array([math.log(v) + n * lx for n, v in nz])
    top = logs.max()
    return float(top + math.log(np.exp(logs - top).sum()))


@lru_cache(maxsize=16)
def _partitions(N: int) -> tuple:
    p = [0] * (N + 1)
    p[0] = 1
    for k in range(1, N + 1):
        for n in range(k, N + 1):
            p[n] += p[n - k]
    return tuple(p)


def closed_form_kernel(m: float, lam: Weight, N: int = 60) -> dict:
    """{nu: probability} for one step from lam, delta shifts up to N (nu = mu - lam)."""
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not dominant integral")
    k, l = int(lam.cL), int(pair_index(lam, 1))
    h = EvalPoint.rho_over(m)
    ch_lam = ch_with_delta(lam, h)
    ch0 = weyl_kac_character(LAMBDA0, h)
    out = {}
    for lp in range(l % 2, k + 2, 2):
        coeffs = branching_coefficients(k, l, lp, N)
        mu = Weight(k + 1, lp / 2 if lp % 2 else lp // 2, lam.cD)
        base = ch_with_delta(mu, h) / (ch_lam * ch0)
        for n, c in enumerate(coeffs):
            if c:
                nu = mu - Weight(0, 0, n) - lam
                out[nu] = c * base * math.exp(-n * h.b)
    return out


# ------------------------------------------------------- chain mod delta


def log_normalized_characters(k: int, ls, m: float) -> np.ndarray:
    """log(ch_lam e^{-<lam, rho^vee/m>}) for lam of level k and labels ls."""
    return log_normalized_character_rho(k, ls, m)


def _log_branching(k: int, l: np.ndarray, lp: np.ndarray, x: float) -> np.ndarray:
    """log b_{l,l'}(x) for arrays of labels (entries with wrong parity or range get -inf)."""
    p, pp = k + 2, k + 3
    ok = ((l - lp) % 2 == 0) & (lp >= 0) & (lp <= k + 1)
    r = l + 1.0
    s = np.clip(lp, 0, k + 1) + 1.0
    lx = math.log(x)
    # prod_{n>=1} (1 - x^n)
    nn = np.arange(1, int(60 / -lx) + 2)
    log_phi = np.log1p(-np.exp(lx * nn)).sum()
    terms = []
    nmax = 2 + int(math.ceil(math.sqrt(80.0 / (-lx * p * pp))))
    for n in range(-nmax, nmax + 1):
        A = ((2 * p * pp * n + pp * r - p * s) ** 2 - (pp - p) ** 2) / (4 * p * pp)
        diff = s * (2 * p * n + r)  # B_n - A_n
        terms.append((A, diff))
    Emin = np.min([np.minimum(A, A + d) for A, d in terms], axis=0)
    tot = np.zeros_like(r)
    for A, diff in terms:
        # x^A - x^B written so that no factor overflows
        lo = np.minimum(A, A + diff)
        mag = np.exp(lx * (lo - Emin)) * (-np.expm1(lx * np.abs(diff)))
        tot += np.where(diff >= 0, mag, -mag)
    shift = _h_wzw(k + 1, lp) - _h_wzw(k, l)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = lx * (Emin + shift) + np.log(tot) - log_phi
    val = np.where(ok, val, -np.inf)
    if p * pp * -lx < 80:
        # the alternating numerator cancels against 1/phi here; use the integer series
        for idx in zip(*np.nonzero(ok)):
            val[idx] = _log_branching_series(k, int(l[idx]), int(lp[idx]), x)
    return val


@lru_cache(maxsize=None)
def level_rows(k: int, m: float, J: int) -> tuple:
    """Transition rows from every label l at level k to l + 2j, |j| <= J.

    Returns (probabilities of shape (k+1, 2J+1), worst row-sum defect).
    """
    a = 1 / (2 * m)
    l = np.arange(k + 1)[:, None]
    j = np.arange(-J, J + 1)[None, :]
    lp = l + 2 * j
    logb = _log_branching(k, np.broadcast_to(l, lp.shape).astype(float), lp.astype(float), math.exp(-2 / m))
    lc_from = log_normalized_characters(k, np.arange(k + 1), m)
    lc_to = log_normalized_characters(k + 1, np.arange(k + 2), m)
    lc0 = log_normalized_characters(1, [0], m)[0]
    lpc = np.clip(lp, 0, k + 1)
    logp = logb + lc_to[lpc] - lc_from[l] - lc0 + a * (lp - l)
    P = np.exp(logp)
    P[~np.isfinite(logp)] = 0.0
    defect = float(np.max(np.abs(P.sum(axis=1) - 1)))
    return P, defect


def default_jump(m: float) -> int:
    # P(j) decays like q^{2 j^2}; e^{-2 j^2 / m} < 1e-30 well before this
    return int(math.ceil(math.sqrt(35 * m))) + 2


def simulate_plus_chain(m: float, n_steps: int, n: int, rng: RngStream, J: int | None = None,
                        tol: float = 1e-10) -> np.ndarray:
    """Labels <Pi^m_+(k), alpha_1^vee> for k = 0..n_steps, shape (n, n_steps + 1)."""
    J = default_jump(m) if J is None else J
    L = np.zeros((n, n_steps + 1), dtype=np.int64)
    for k in range(n_steps):
        P, defect = level_rows(k, m, J)
        if defect > tol:
            raise TruncationError(f"level {k}: transition rows off by {defect:.3g}")
        cum = np.cumsum(P[L[:, k]], axis=1)
        u = rng.uniform(n) * cum[:, -1]
        idx = (cum < u[:, None]).sum(axis=1)
        L[:, k + 1] = L[:, k] + 2 * (idx - J)
    return L


def simulate_conditioned_A(m: float, T: float, rng: RngStream, n: int = 1, times=None) -> tuple:
    """Desk-scale A: (t, x) = (k / m, <Pi^m_+(k), alpha_1^vee> / m) on the grid k = 0..floor(mT).

    Returns (grid times, x array of shape (n, len(grid))); with ``times`` only
    the columns floor(m t) for those t are returned.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    K = int(math.floor(m * T))
    L = simulate_plus_chain(m, K, n, rng)
    grid = np.arange(K + 1) / m
    X = L / m
    if times is not None:
        cols = [int(math.floor(m * t)) for t in times]
        return grid[cols], X[:, cols]
    return grid, X
