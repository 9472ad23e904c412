"""Characters of affine A1 modules evaluated at h = a alpha_1^vee + b d.

Weyl-Kac characters are theta-series ratios; Verma characters have a
product form, a string-coordinate sum over B(infinity) and the inverse of the
Weyl denominator sum.  Demazure characters are crystal sums with a depth
constraint.  Every truncated series reports a certified truncation error.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from .cartan import RHO, Weight, is_dominant, is_integral, pair_index, reflect, translate
from .crystals import enumerate_b_lambda, omega_weight

__all__ = [
    "EvalPoint",
    "Evaluation",
    "weyl_kac_character",
    "weyl_kac_evaluation",
    "ch_with_delta",
    "normalized_character",
    "log_normalized_character_rho",
    "verma_character",
    "denominator_product",
    "denominator_sum",
    "demazure_character",
    "verma_demazure_character",
    "b_infinity_string_sum",
]


@dataclass(frozen=True)
class EvalPoint:
    """h = a alpha_1^vee + b d; a may be complex for Fourier evaluations."""

    a: complex | float
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("characters only converge for <delta, h> = b > 0")

    @classmethod
    def rho_over(cls, m: float) -> "EvalPoint":
        """rho^vee / m = (alpha_1^vee / 2 + 2 d) / m."""
        return cls(1 / (2 * m), 2 / m)

    def shifted(self, da) -> "EvalPoint":
        return EvalPoint(self.a + da, self.b)

    def pair(self, w: Weight):
        """<w, h>."""
        return 2 * w.cA * self.a + w.cD * self.b

    @property
    def q(self) -> float:
        # e^{-<alpha_1, h>} = e^{-<alpha_0, h>} when h is a multiple of rho^vee
        return math.exp(-2 * self.a.real) if isinstance(self.a, complex) else math.exp(-2 * self.a)


class Evaluation(NamedTuple):
    value: complex | float
    error: float


def _exp(z):
    return cmath.exp(z) if isinstance(z, complex) else math.exp(z)


def _theta_sum(n: int, mp: int, a, b: float, tol: float, shift) -> Evaluation:
    """sum_k sinh(a(mp+1) + 2ak(n+2)) e^{-b(k(mp+1) + k^2(n+2)) - shift}.

    Terms are added for k = 0, 1, -1, 2, -2, ... until three consecutive
    terms fall below tol times the partial sum; the error bound is the sum of
    the discarded magnitudes doubled (terms decay like e^{-b (n+2) k^2}).
    """
    total = 0
    small = 0
    discarded = 0.0
    k = 0
    seq = 0
    while True:
        for kk in ((0,) if k == 0 else (k, -k)):
            arg = a * (mp + 1) + 2 * a * kk * (n + 2)
            e = -b * (kk * (mp + 1) + kk * kk * (n + 2)) - shift
            term = 0.5 * (_exp(arg + e) - _exp(-arg + e))
            total += term
            seq += 1
            if abs(term) <= tol * abs(total):
                small += 1
                discarded += abs(term)
            else:
                small = 0
                discarded = 0.0
        if small >= 3 and k >= 1:
            return Evaluation(total, 2 * discarded + 1e-300)
        k += 1
        if k > 100_000:
            raise ArithmeticError("theta series failed to converge")


def _check_lambda(lam: Weight):
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not dominant integral")
    n = lam.cL
    mp = pair_index(lam, 1)
    return int(n), int(mp)


def _log_triple_product(K, L, b: float, tol: float = 1e-18):
    """log prod_{i>=1} (1 - x^{Ki/2}) (1 - x^{L/2 + K(i-1)/2}) (1 - x^{Ki/2 - L/2}), x = e^{-b}.

    At h = rho^vee / m the Weyl-Kac numerator of a weight with level K and
    alpha_1^vee label L (0 < L < K) is this product: the two translation
    families interleave into one alternating theta series in x^{1/2}, and the
    Jacobi triple product applies.  Every factor lies in (0, 1), so nothing
    cancels.  Vectorized in L.
    """
    L = np.asarray(L, dtype=float)
    imax = int(math.ceil(2 * (-math.log(tol)) / (b * K))) + 2
    i = np.arange(1, imax + 1)[:, None]
    e1 = b * K * i / 2
    e2 = b * (L / 2 + K * (i - 1) / 2)
    e3 = b * (K * i / 2 - L / 2)
    return (np.log1p(-np.exp(-e1)) + np.log1p(-np.exp(-e2)) + np.log1p(-np.exp(-e3))).sum(axis=0)


def log_normalized_character_rho(n: int, ls, m: float):
    """log(ch_lambda(rho^vee/m) e^{-<lambda, rho^vee/m>}) for level n and labels ls (vectorized)."""
    b = 2.0 / m
    return _log_triple_product(n + 2, np.asarray(ls, dtype=float) + 1, b) - _log_triple_product(2, 1.0, b)


def _is_rho_direction(h: "EvalPoint") -> bool:
    return not isinstance(h.a, complex) and abs(4 * h.a - h.b) <= 1e-14 * h.b


def _theta_sum_mp(n: int, mp: int, a, b: float, shift, dps: int):
    with mpmath.workdps(dps):
        A = mpmath.mpf(a)
        B = mpmath.mpf(b)
        total = mpmath.mpf(0)
        k = 0
        while True:
            part = mpmath.mpf(0)
            for kk in ((0,) if k == 0 else (k, -k)):
                arg = A * (mp + 1) + 2 * A * kk * (n + 2)
                part += mpmath.sinh(arg) * mpmath.exp(-B * (kk * (mp + 1) + kk * kk * (n + 2)) - shift)
            total += part
            if k > 2 and abs(part) < abs(total) * mpmath.mpf(10) ** (-dps):
                return total
            k += 1


def normalized_character(n: int, mp: int, h: EvalPoint, tol: float = 1e-15) -> Evaluation:
    """ch_lambda(h) e^{-<lambda, h>} for lambda = n Lambda_0 + mp alpha_1 / 2 (delta part 0).

    Along the rho^vee direction the triple-product form is used.  Otherwise
    the theta ratio is summed in floats; when the sums cancel too much for
    the requested accuracy (small b), they are redone in mpmath.
    """
    if not 0 <= mp <= n:
        raise ValueError(f"(n, m) = ({n}, {mp}) is not dominant")
    a, b = h.a, h.b
    if _is_rho_direction(h):
        val = math.exp(float(np.ravel(log_normalized_character_rho(n, mp, 2.0 / b))[0]))
        return Evaluation(val, val * 1e-15)
    num = _theta_sum(n, mp, a, b, tol, shift=a * mp)
    den = _theta_sum(0, 0, a, b, tol, shift=0)
    val = num.value / den.value
    # size of the largest term relative to the sums measures the cancellation
    worst = max(_theta_scale(n, mp, a, b, a * mp) / abs(num.value), _theta_scale(0, 0, a, b, 0) / abs(den.value))
    if worst * 1e-16 > tol and not isinstance(a, complex):
        scale = max(_theta_scale(n, mp, a, b, a * mp), _theta_scale(0, 0, a, b, 0))
        dps = 30
        while True:
            with mpmath.workdps(dps):
                nm = _theta_sum_mp(n, mp, a, b, a * mp, dps)
                dn = _theta_sum_mp(0, 0, a, b, 0, dps)
                need = 20 + int(mpmath.log10(scale / min(abs(nm), abs(dn))))
                v = nm / dn
            if need <= dps:
                break
            dps = need + 10
        val = float(v)
        return Evaluation(val, abs(val) * tol)
    err = abs(val) * (num.error / abs(num.value) + den.error / abs(den.value) + worst * 1e-16)
    return Evaluation(val, err)


def _theta_scale(n, mp, a, b, shift) -> float:
    """Largest |term| in the theta series (for the cancellation estimate)."""
    a = a.real if isinstance(a, complex) else a
    best = 0.0
    for kk in range(-200, 201):
        arg = abs(a * (mp + 1) + 2 * a * kk * (n + 2))
        e = -b * (kk * (mp + 1) + kk * kk * (n + 2)) - (shift.real if isinstance(shift, complex) else shift)
        best = max(best, math.exp(min(arg + e, 700)))
    return best


def weyl_kac_evaluation(lam: Weight, h: EvalPoint, tol: float = 1e-15) -> Evaluation:
    """ch_lambda(h) with its certified truncation error (delta part handled multiplicatively)."""
    n, mp = _check_lambda(lam)
    ev = normalized_character(n, mp, h, tol)
    scale = _exp(h.a * mp + lam.cD * h.b)
    return Evaluation(ev.value * scale, ev.error * abs(scale))


def weyl_kac_character(lam: Weight, h: EvalPoint, tol: float = 1e-15):
    n, mp = _check_lambda(lam)
    if lam.cD != 0:
        raise ValueError("use ch_with_delta for weights with a delta component")
    return weyl_kac_evaluation(lam, h, tol).value


def ch_with_delta(lam: Weight, h: EvalPoint, tol: float = 1e-15):
    """ch_{lam + k delta} = e^{k <delta, h>} ch_lam."""
    return weyl_kac_evaluation(lam, h, tol).value


# ----------------------------------------------------------------- Verma module


def denominator_product(h: EvalPoint, tol: float = 1e-16) -> Evaluation:
    """prod over R_+ = {alpha_0 + n delta, alpha_1 + n delta, (n+1) delta} of (1 - e^{-alpha})."""
    a, b = h.a, h.b
    x0 = b - 2 * a  # <alpha_0, h>
    x1 = 2 * a  # <alpha_1, h>
    prod = 1
    n = 0
    while True:
        f = [1 - _exp(-(x0 + n * b)), 1 - _exp(-(x1 + n * b)), 1 - _exp(-(n + 1) * b)]
        dev = max(abs(1 - v) for v in f)
        for v in f:
            prod *= v
        if dev < tol and n > 0:
            # remaining log-product is bounded by a geometric series in e^{-b}
            rest = 3 * dev / (1 - math.exp(-b))
            return Evaluation(prod, abs(prod) * rest)
        n += 1


def denominator_sum(h: EvalPoint, tol: float = 1e-16, dps: int = 50) -> Evaluation:
    """sum_{w in W} det(w) e^{<w(rho) - rho, h>} via W = T x {1, s_1}.

    The terms are O(1) while the sum is tiny for small h, so the alternating
    sum is carried out in mpmath at ``dps`` digits.
    """
    s1rho = reflect(1, RHO)
    cplx = isinstance(h.a, complex)
    with mpmath.workdps(dps):
        a = mpmath.mpc(h.a) if cplx else mpmath.mpf(h.a)
        b = mpmath.mpf(h.b)

        def pair(w):
            return 2 * mpmath.mpf(float(w.cA)) * a + mpmath.mpf(float(w.cD)) * b

        total = mpmath.mpf(0)
        small = 0
        discarded = mpmath.mpf(0)
        k = 0
        while True:
            for kk in ((0,) if k == 0 else (k, -k)):
                term = mpmath.exp(pair(translate(kk, RHO) - RHO)) - mpmath.exp(pair(translate(kk, s1rho) - RHO))
                total += term
                if abs(term) <= tol * abs(total) * 1e-4:
                    small += 1
                    discarded += abs(term)
                else:
                    small = 0
                    discarded = mpmath.mpf(0)
            if small >= 3 and k >= 1:
                val = complex(total) if cplx else float(total)
                return Evaluation(val, float(2 * discarded))
            k += 1


def b_infinity_string_sum(h: EvalPoint, N: int, depth: int | None = None) -> float:
    """sum of e^{-<omega(a), h>} over a in B(infinity) with sum(a) <= N (and a_k = 0 for k > depth).

    Counted by a transfer recursion over (index, current entry, running sum)
    rather than by listing the sequences.
    """
    z = [_exp(-(h.b - 2 * h.a)), _exp(-2 * h.a)]  # weights of alpha_{even}, alpha_{odd}
    dtype = complex if isinstance(h.a, complex) else float
    top = N if depth is None else min(N, depth)
    # tail[s]: weight of (a_1, a_2, ...) with sum s
    tail = np.zeros(N + 1, dtype=dtype)
    tail[0] = 1.0  # a_1 = 0 forces everything past a_0 to vanish
    if top >= 1:
        # state[v, s]: prefixes a_1..a_k with a_k = v >= 1 and sum s
        state = np.zeros((N + 1, N + 1), dtype=dtype)
        for v in range(1, N + 1):
            state[v, v] = z[1] ** v
        k = 1
        while True:
            tail += state.sum(axis=0)
            if k >= top or not state.any():
                break
            par = (k + 1) % 2
            suffix = np.cumsum(state[::-1], axis=0)[::-1]  # suffix[v] = sum_{v' >= v} state[v']
            new = np.zeros_like(state)
            for w in range(1, N + 1):
                vmin = -(-k * w // (k + 1))  # need floor((k+1) v / k) >= w
                if vmin > N:
                    break
                src = suffix[vmin, : N + 1 - w]
                new[w, w:] = src * z[par] ** w
            state = new
            k += 1
    geo = np.array([z[0] ** j for j in range(N + 1)], dtype=dtype)
    total = np.convolve(tail, geo)[: N + 1].sum()
    return total


def verma_character(h: EvalPoint, mode: str = "product", tol: float = 1e-16, N: int = 120):
    """ch_{M(0)}(h) by ``product``, ``string_sum`` (truncated at N) or ``inverse_denominator``."""
    if mode == "product":
        return 1 / denominator_product(h, tol).value
    if mode == "string_sum":
        return b_infinity_string_sum(h, N)
    if mode == "inverse_denominator":
        return 1 / denominator_sum(h, tol).value
    raise ValueError(f"unknown mode {mode!r}")


def verma_demazure_character(p: int, h: EvalPoint, N: int | None = None, tol: float = 1e-15):
    """sum over a in B(infinity) with a_{p+1} = 0 of e^{-<omega(a), h>}.

    With ``N`` None the truncation is raised until the increment of the last
    doubling is below tol (relative).
    """
    if p < 0:
        raise ValueError("p must be nonnegative")
    if N is not None:
        return b_infinity_string_sum(h, N, depth=p)
    n = 32
    prev = b_infinity_string_sum(h, n, depth=p)
    while True:
        n *= 2
        cur = b_infinity_string_sum(h, n, depth=p)
        if abs(cur - prev) <= tol * abs(cur) or n > 4096:
            return cur
        prev = cur


def demazure_character(lam: Weight, p: int, h: EvalPoint, N: int, normalized: bool = False):
    """sum over a in B(lam) with a_{p+1} = 0 and sum(a) <= N of e^{<lam - omega(a), h>}.

    ``normalized`` drops the e^{<lam, h>} factor.
    """
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not dominant integral")
    if p < 0:
        raise ValueError("p must be nonnegative")
    total = 0
    for a in enumerate_b_lambda(lam, N, max_depth=p):
        total += _exp(-h.pair(omega_weight(a)))
    if normalized:
        return total
    return total * _exp(h.pair(lam))
