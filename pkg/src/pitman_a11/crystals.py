"""String-coordinate descriptions of B(infinity), B(lambda) and their continuous analogs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .cartan import ChamberPoint, Weight, is_dominant, is_integral, pair_index, project_mod_delta
from .errors import DivergenceError

__all__ = [
    "RealStringSeq",
    "member_b_infinity",
    "member_b_lambda",
    "enumerate_b_lambda",
    "enumerate_stratum",
    "omega_weight",
    "omega_limit_mod_delta",
    "member_gamma",
    "format_strings",
]


def _sign(k: int) -> int:
    # alpha_k modulo delta is sign(k) * alpha_1 (alpha_0 = delta - alpha_1)
    return 1 if k % 2 else -1


def member_b_infinity(a: Sequence[int]) -> bool:
    if any(v < 0 for v in a):
        return False
    return all(a[k] * (k + 1) >= a[k + 1] * k for k in range(1, len(a) - 1))


def _tail_bounds(a: Sequence[int], lam: Weight) -> Iterator[tuple[int, int]]:
    """Yield (p, bound_p) with bound_p = <lam - sum_{k>p} a_k alpha_k, alpha_p^vee>."""
    l0, l1 = pair_index(lam, 0), pair_index(lam, 1)
    tail = [0, 0]  # sums of a_k over k > p, split by parity of k
    for p in range(len(a) - 1, -1, -1):
        par = p % 2
        base = l0 if par == 0 else l1
        yield p, base - 2 * (tail[par] - tail[1 - par])
        tail[par] += a[p]


def member_b_lambda(a: Sequence[int], lam: Weight) -> bool:
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not a dominant integral weight")
    if not member_b_infinity(a):
        return False
    return all(a[p] <= bound for p, bound in _tail_bounds(a, lam))


def _dfs(l0: int, l1: int, budget: int, exact: bool, max_depth: int | None = None) -> list[tuple]:
    base = (l0, l1)
    out = []

    def fill(p: int, a: list, tail: list, left: int):
        # a holds entries p+1..P in reverse order; choose a_p
        par = p % 2
        bound = base[par] - 2 * (tail[par] - tail[1 - par])
        if p == 0:
            hi = min(bound, left)
            if exact:
                if 0 <= left <= hi:
                    out.append((left,) + tuple(reversed(a)))
            else:
                rest = tuple(reversed(a))
                out.extend((v,) + rest for v in range(0, hi + 1))
            return
        nxt = a[-1]
        lo = -(-p * nxt // (p + 1))  # ceil(p * a_{p+1} / (p + 1))
        hi = min(bound, left)
        for v in range(lo, hi + 1):
            # a_k >= k a_p / p for 1 <= k < p, so the rest costs at least (p - 1) a_p / 2
            if v + (p - 1) * v / 2 > left:
                break
            a.append(v)
            tail[par] += v
            fill(p - 1, a, tail, left - v)
            tail[par] -= v
            a.pop()

    # depth P = index of the last nonzero entry
    if base[0] >= 0:
        for v in range(0, min(base[0], budget) + 1):
            if exact and v != budget:
                continue
            out.append(() if v == 0 else (v,))
    top = budget if max_depth is None else min(budget, max_depth)
    for P in range(1, top + 1):
        par = P % 2
        hi = min(base[par], budget)
        for v in range(1, hi + 1):
            if v + (P - 1) * v / 2 > budget:
                break
            tail = [0, 0]
            tail[par] = v
            fill(P - 1, [v], tail, budget - v)
    return out


def enumerate_b_lambda(lam: Weight, N: int, max_depth: int | None = None) -> list[tuple]:
    """All a in B(lam) with sum(a) <= N, ordered by (sum, entries).

    ``max_depth = p`` keeps only sequences with a_k = 0 for k > p.
    """
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not a dominant integral weight")
    buckets = [[] for _ in range(N + 1)]
    for a in _dfs(int(pair_index(lam, 0)), int(pair_index(lam, 1)), N, False, max_depth):
        buckets[sum(a)].append(a)
    out = []
    for b in buckets:
        b.sort()
        out.extend(b)
    return out


@lru_cache(maxsize=None)
def _stratum_cached(l0: int, l1: int, n: int) -> tuple:
    return tuple(sorted(_dfs(l0, l1, n, exact=True)))


def enumerate_stratum(lam: Weight, n: int) -> tuple:
    """All a in B(lam) with sum(a) == n (cached per dominant class of lam)."""
    if not (is_dominant(lam) and is_integral(lam)):
        raise ValueError(f"{lam} is not a dominant integral weight")
    return _stratum_cached(int(pair_index(lam, 0)), int(pair_index(lam, 1)), n)


def omega_weight(a: Sequence) -> Weight:
    """sum_k a_k alpha_k with alpha_{2k} = alpha_0 = delta - alpha_1, alpha_{2k+1} = alpha_1."""
    even = sum(a[0::2])
    odd = sum(a[1::2])
    return Weight(0, odd - even, even)


def format_strings(a: Sequence) -> str:
    return " ".join(str(v) for v in a)


@dataclass(frozen=True)
class RealStringSeq:
    """x_0, ..., x_K with a tail rule for k > K.

    tail_mode: "zero" (x_k = 0 past K), "constant" (x_k = x_K past K) or
    "none" (nothing is known past K; limits are judged on the stored range).
    """

    entries: tuple
    tail_mode: str = "zero"

    def __post_init__(self):
        if self.tail_mode not in ("zero", "constant", "none"):
            raise ValueError(f"unknown tail mode {self.tail_mode!r}")

    @classmethod
    def of(cls, xs, tail_mode: str = "zero") -> "RealStringSeq":
        return cls(tuple(float(v) for v in xs), tail_mode)

    def __len__(self) -> int:
        return len(self.entries)


def _partial_omega(xs: np.ndarray) -> np.ndarray:
    """c_n = sum_{k<n} x_k s_k + x_n s_n / 2 for n = 0..K (coefficient of alpha_1 mod delta)."""
    s = np.where(np.arange(len(xs)) % 2 == 1, 1.0, -1.0)
    terms = xs * s
    csum = np.concatenate(([0.0], np.cumsum(terms)[:-1]))
    return csum + 0.5 * terms


def omega_limit_mod_delta(x: RealStringSeq, tol: float = 1e-9, window: int = 3) -> Weight:
    """omega(x) modulo delta, returned as c * alpha_1."""
    xs = np.asarray(x.entries, dtype=float)
    if len(xs) == 0:
        return Weight(0, 0.0, 0)
    if x.tail_mode == "zero":
        s = np.where(np.arange(len(xs)) % 2 == 1, 1.0, -1.0)
        return Weight(0, float(np.sum(xs * s)), 0)
    c = _partial_omega(xs)
    if x.tail_mode == "constant":
        # with a constant tail the partial values are frozen from n = K on
        return Weight(0, float(c[-1]), 0)
    w = min(window, len(c) - 1)
    if w < 1:
        raise DivergenceError("stored range too short to judge convergence")
    jumps = np.abs(np.diff(c[-(w + 1):]))
    if np.max(jumps) >= tol:
        raise DivergenceError(
            f"partial omega values still move by {np.max(jumps):.3g} at the end of the stored range"
        )
    return Weight(0, float(c[-1]), 0)


def member_gamma(x: RealStringSeq, lam=None, tol: float = 1e-9) -> bool:
    """Membership in Gamma(infinity) (lam None) or Gamma(lam), lam a ChamberPoint or Weight.

    Boundary cases (equalities) count as members.
    """
    xs = list(x.entries)
    if any(v < -tol for v in xs):
        return False
    for k in range(1, len(xs) - 1):
        if xs[k] / k < xs[k + 1] / (k + 1) - tol:
            return False
    omega = omega_limit_mod_delta(x, tol=max(tol, 1e-12))
    if lam is None:
        return True
    if isinstance(lam, Weight):
        lam = project_mod_delta(lam)
    lam = ChamberPoint(float(lam.t), float(lam.x))
    ext = list(xs)
    if x.tail_mode == "constant" and xs:
        ext += [xs[-1], xs[-1]]
    coef = -omega.cA  # running coefficient of alpha_1 in -omega + sum_{i<=k} x_i alpha_i
    for k, v in enumerate(ext):
        coef += v * _sign(k)
        pair = (lam.t - lam.x - 2 * coef) if k % 2 == 0 else (lam.x + 2 * coef)
        if v > pair + tol:
            return False
    return True
