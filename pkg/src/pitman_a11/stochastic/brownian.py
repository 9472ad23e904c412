"""Continuous side: exponential string coordinates, the harmonic functions phi,
space-time Brownian motion on a grid and the reconstruction of B from A."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..cartan import ChamberPoint
from ..errors import InconclusiveHorizonError
from .rng import RngStream


# ------------------------------------------------------- exponential strings


def _signs(n: int) -> np.ndarray:
    # <alpha_k, alpha_1^vee>: -2 for even k (alpha_0), +2 for odd k
    return np.where(np.arange(n) % 2 == 1, 2.0, -2.0)


def xi_from_eps(eps: np.ndarray, p: int) -> np.ndarray:
    """xi_{0,p} = eps_0 and xi_{k,p} / k = sum_{n=k}^p 2 eps_n / (n (n+1)); works on the last axis."""
    eps = np.asarray(eps, dtype=float)
    out = np.zeros(eps.shape[:-1] + (p + 1,))
    out[..., 0] = eps[..., 0]
    if p >= 1:
        n = np.arange(1, p + 1)
        w = 2 * eps[..., 1 : p + 1] / (n * (n + 1))
        tail = np.cumsum(w[..., ::-1], axis=-1)[..., ::-1]
        out[..., 1:] = n * tail
    return out


def eps_from_xi(xi: np.ndarray) -> np.ndarray:
    """eps_0 = xi_0, eps_k = ((k+1) xi_k - k xi_{k+1}) / 2; one entry fewer than xi for k >= 1."""
    xi = np.asarray(xi, dtype=float)
    K = xi.shape[-1]
    out = np.empty(xi.shape[:-1] + (K - 1,))
    out[..., 0] = xi[..., 0]
    k = np.arange(1, K - 1)
    out[..., 1:] = ((k + 1) * xi[..., 1:-1] - k * xi[..., 2:]) / 2
    return out


@dataclass
class ExpStringSample:
    """Draws eps_0..eps_K (shape (n, K+1)) and what is built from them.

    xi_inf: xi(infinity) truncated at K; each xi_k / k misses the tail
    sum_{n>K} 2 eps_n / (n(n+1)) whose mean is 2 / (K+1) (``tail_bound``).
    xi_p, L_p: {p: array} for the requested p; L: <L, alpha_1^vee> truncated at K.
    """

    eps: np.ndarray
    xi_inf: np.ndarray
    tail_bound: float
    xi_p: dict = field(default_factory=dict)
    L_p: dict = field(default_factory=dict)
    L: np.ndarray | None = None


def pair_L(xi: np.ndarray) -> np.ndarray:
    """<sum_k xi_k alpha_k, alpha_1^vee> on the last axis."""
    return (xi * _signs(xi.shape[-1])).sum(axis=-1)


def sample_exp_strings(rng: RngStream, K: int = 200, ps=(), n: int = 1) -> ExpStringSample:
    ps = sorted(set(ps))
    if ps and K < ps[-1]:
        raise ValueError("K must be at least the largest requested p")
    eps = rng.exponential((n, K + 1))
    xi_inf = xi_from_eps(eps, K)
    s = ExpStringSample(eps, xi_inf, 2.0 / (K + 1))
    for p in ps:
        x = xi_from_eps(eps, p)
        s.xi_p[p] = x
        s.L_p[p] = pair_L(x)
    k = np.arange(K + 1)
    s.L = (eps * _signs(K + 1) / (2 * (k // 2) + 1)).sum(axis=-1)
    return s


def gamma_mask(X: np.ndarray, lam: ChamberPoint, tol: float = 1e-9) -> np.ndarray:
    """Rows x (zero past the stored range) lying in Gamma(lam)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, P = X.shape
    ok = (X >= -tol).all(axis=1)
    if P > 2:
        k = np.arange(1, P - 1)
        ok &= (X[:, 1:-1] / k >= X[:, 2:] / (k + 1) - tol).all(axis=1)
    s = np.where(np.arange(P) % 2 == 1, 1.0, -1.0)
    omega = (X * s).sum(axis=1)  # alpha_1 coefficient of omega(x) mod delta
    coef = -omega[:, None] + np.cumsum(X * s, axis=1)
    even = np.arange(P) % 2 == 0
    pair = np.where(even, lam.t - lam.x - 2 * coef, lam.x + 2 * coef)
    ok &= (X <= pair + tol).all(axis=1)
    # past the range the entries vanish and both pairings must stay nonnegative
    last = coef[:, -1] if P else -omega
    ok &= (lam.t - lam.x - 2 * last >= -tol) & (lam.x + 2 * last >= -tol)
    return ok


# ---------------------------------------------------------- harmonic phi


def _phi_terms(mu, t, x, tol):
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(t <= 0):
        raise ValueError("phi needs t > 0")
    tmin = float(np.min(t))
    xmax = float(np.max(np.abs(x)))
    # |term_k| <= exp(|mu|(|k| t + |x|) + 2|k||x| - 2 k^2 t); stop once this is below tol
    amu = abs(mu)
    K = 1
    while True:
        bound = amu * (K * float(np.max(t)) + xmax) + 2 * K * xmax - 2 * K * K * tmin
        if K > 2 and bound < math.log(tol) - 5:
            break
        K += 1
    total = 0
    for k in [0] + [s * j for j in range(1, K + 1) for s in (1, -1)]:
        # sinh(A) e^B written as two exponentials so that neither factor overflows
        A = mu * (2 * k * t + x)
        B = -2 * (k * x + k * k * t)
        total = total + 0.5 * (np.exp(A + B) - np.exp(B - A))
    return total, K


def harmonic_phi(mu, t, x, tol: float = 1e-16, prefactor: str = "cosh_u"):
    """phi_mu(t, x) for mu = 1/2 (real) or mu = iu + 1/2 (complex).

    The complex mode carries the prefactor 1/cosh(u) (``prefactor="cosh_u"``);
    ``prefactor="cosh_pi_u"`` uses 1/cosh(pi u) instead, which is the value
    of E[e^{-iu <L, alpha_1^vee>}] and makes phi_{iu+1/2} / phi_{1/2} tend to
    that characteristic function far from the walls.
    """
    total, _ = _phi_terms(mu, t, x, tol)
    if isinstance(mu, complex):
        u = mu.imag
        if prefactor == "cosh_u":
            c = math.cosh(u)
        elif prefactor == "cosh_pi_u":
            c = math.cosh(math.pi * u)
        else:
            raise ValueError(f"unknown prefactor {prefactor!r}")
        return np.exp(-mu * np.asarray(x, dtype=float)) / c * total
    return np.exp(-mu * np.asarray(x, dtype=float)) * total


def phi_half(t, x, tol: float = 1e-16):
    return harmonic_phi(0.5, t, x, tol)


# ------------------------------------------------------ Brownian motion


@dataclass
class BrownianGrid:
    """x(t) = b_t + drift t on t = 0, dt, ..., T and xi[k] = xi_k(t) on the same grid."""

    t: np.ndarray
    x: np.ndarray
    xi: np.ndarray
    complete: bool

    @property
    def xi_end(self) -> np.ndarray:
        return self.xi[:, -1]


def grid_passes(t: np.ndarray, x: np.ndarray, max_passes: int = 64, keep: bool = True):
    """Alternating discrete Pitman passes 0, 1, 0, ...; returns (final x, xi rows, complete flag).

    Stops when two consecutive passes do nothing (then ``complete``) or
    after ``max_passes`` passes.  With keep=False only the final values of
    each xi_k are stored.
    """
    rows = []
    zeros = 0
    complete = False
    for k in range(max_passes):
        g = x if k % 2 == 1 else t - x
        M = np.minimum.accumulate(np.minimum(g, 0.0))
        x = x - 2 * M if k % 2 == 1 else x + 2 * M
        rows.append(-M if keep else -M[-1:])
        if M[-1] == 0.0:
            zeros += 1
            if zeros == 2:
                complete = True
                break
        else:
            zeros = 0
    return x, np.array(rows), complete


def simulate_brownian_grid(T: float, dt: float, rng: RngStream, drift: float = 0.5,
                           max_passes: int = 64, keep: bool = True) -> BrownianGrid:
    if not dt > 0:
        raise ValueError("dt must be positive")
    n = int(round(T / dt))
    t = np.arange(n + 1) * dt
    inc = rng.normal(n) * math.sqrt(dt) + drift * dt
    x = np.concatenate(([0.0], np.cumsum(inc)))
    _, xi, complete = grid_passes(t, x, max_passes, keep)
    return BrownianGrid(t, x, xi, complete)


# --------------------------------------------------------- reconstruction


def grid_inverse_pitman(i: int, xval: float, t: np.ndarray, x: np.ndarray, margin: float | None = None,
                        certify: bool = True):
    """I_{alpha_i}^{xval} on a grid path, with the future infimum taken over the stored range.

    Certification (infinite-horizon mode): the infimum of the pairing over the
    last quarter of the range must clear the largest cap used on the first
    three quarters by ``margin`` (default 2 xval).  Returns (new x, certified).
    """
    if xval < 0:
        raise ValueError("string coordinate must be nonnegative")
    g = x if i == 1 else t - x
    fut = np.minimum.accumulate(g[::-1])[::-1]
    if fut[0] < -1e-12:
        raise ValueError(f"path dips below the alpha_{i} wall; I^x is undefined at t = 0")
    cap = np.minimum(xval, fut)
    q = np.searchsorted(t, 0.75 * t[-1])
    used = cap[: q + 1].max()
    m0 = 2 * xval if margin is None else margin
    ok = bool(g[q:].min() >= used + m0) if certify else True
    new = x - 2 * cap if i == 1 else x + 2 * cap
    return new, ok


def reconstruct_process(t: np.ndarray, x: np.ndarray, xi_p, T_obs: float, margin: float | None = None,
                        strict: bool = True):
    """Apply I_p^{xi_{p,p}} first, ..., I_0^{xi_{0,p}} last to the grid path (t, x).

    Returns (t, x) restricted to [0, T_obs], plus a certification flag when
    strict is False (strict raises InconclusiveHorizonError instead).
    """
    xi_p = np.asarray(xi_p, dtype=float)
    if T_obs > t[-1]:
        raise ValueError("T_obs beyond the stored range")
    cur = np.asarray(x, dtype=float)
    certified = True
    for k in range(len(xi_p) - 1, -1, -1):
        cur, ok = grid_inverse_pitman(k % 2, float(xi_p[k]), t, cur, margin)
        certified &= ok
    if strict and not certified:
        raise InconclusiveHorizonError("tail infimum not certified on the stored range")
    j = np.searchsorted(t, T_obs, side="right")
    if strict:
        return t[:j], cur[:j]
    return t[:j], cur[:j], certified


# ------------------------------------------------------------------ psi_p


def psi_p(u: float, lam: ChamberPoint, p: int, n_mc: int, rng: RngStream, floor: float = 1e-300):
    """Monte Carlo psi_p(u, lam) with its standard error.

    psi_p = e^{iu x_lam} / (2 phi_{1/2}(lam)) E[e^{-iu <L_p, alpha_1^vee>} 1{xi_{.,p} in Gamma(lam)}].
    """
    if not 0 < lam.x < lam.t:
        raise ValueError("lam must lie in the open chamber")
    ph = float(phi_half(lam.t, lam.x))
    if ph < floor:
        raise ValueError("phi_{1/2}(lam) below the numerical floor; lam is too close to the boundary")
    pref = np.exp(1j * u * lam.x) / (2 * ph)
    s1 = 0j
    s2 = 0.0
    hits = 0
    chunk = max(1, min(n_mc, 2_000_000 // (p + 1)))
    done = 0
    while done < n_mc:
        size = min(chunk, n_mc - done)
        s = sample_exp_strings(rng, K=p, ps=[p], n=size)
        ind = gamma_mask(s.xi_p[p], lam)
        z = np.exp(-1j * u * s.L_p[p]) * ind
        s1 += z.sum()
        s2 += float((np.abs(z) ** 2).sum())
        hits += int(ind.sum())
        done += size
    mean = s1 / n_mc
    var = max(s2 / n_mc - abs(mean) ** 2, 0.0)
    return complex(pref * mean), abs(pref) * math.sqrt(var / n_mc), hits / n_mc
