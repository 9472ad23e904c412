"""Exact piecewise-linear paths in the weight space and the Pitman calculus on them.

All operations are exact when breakpoint times and weight coefficients are
``Fraction`` or ``int``; with floats they are exact up to rounding.  Running
minima (and future infima) of the piecewise-affine pairings are computed
segment by segment, inserting a breakpoint wherever the extremum detaches
from the path, so no sampling is ever involved.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cartan import LAMBDA0, ZERO, Weight, pair_index, root_of_index, simple_root
from .errors import DivergenceError, InconclusiveHorizonError, NotInCrystalError

__all__ = [
    "PLPath",
    "StringCoords",
    "pi0",
    "evaluate",
    "concatenate",
    "concatenate_all",
    "pitman_transform",
    "canonical_dominant",
    "inverse_pitman",
    "reconstruct_from_strings",
    "string_coordinates",
    "dumps",
    "loads",
]

StringCoords = tuple  # tuple of nonnegative ints, trailing zeros trimmed


def trim(a: Iterable) -> tuple:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


@dataclass(frozen=True)
class PLPath:
    times: tuple
    values: tuple  # Weight at each breakpoint

    def __post_init__(self):
        if len(self.times) != len(self.values) or len(self.times) < 2:
            raise ValueError("a path needs at least two breakpoints and one value per breakpoint")
        if self.times[0] != 0:
            raise ValueError("paths start at time 0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if self.values[0] != ZERO:
            raise ValueError("paths start at the zero weight")

    @classmethod
    def line(cls, direction: Weight, horizon=1) -> "PLPath":
        """The straight path t -> t * direction on [0, horizon]."""
        return cls((0, horizon), (ZERO, direction * horizon))

    @classmethod
    def from_points(cls, times: Sequence, values: Sequence[Weight]) -> "PLPath":
        return cls(tuple(times), tuple(values))

    @property
    def horizon(self):
        return self.times[-1]

    @property
    def end(self) -> Weight:
        return self.values[-1]

    def __len__(self) -> int:
        return len(self.times)

    def __call__(self, t) -> Weight:
        return evaluate(self, t)

    def pairings(self, i: int) -> list:
        return [pair_index(v, i) for v in self.values]

    def normalized(self, tol: float = 0) -> "PLPath":
        """Drop interior breakpoints where the path does not change slope."""
        ts, vs = [self.times[0]], [self.values[0]]
        n = len(self.times)
        for j in range(1, n - 1):
            t0, v0 = ts[-1], vs[-1]
            t1, v1 = self.times[j], self.values[j]
            t2, v2 = self.times[j + 1], self.values[j + 1]
            collinear = all(
                abs((c1 - c0) * (t2 - t1) - (c2 - c1) * (t1 - t0)) <= tol
                for c0, c1, c2 in zip(v0.coords(), v1.coords(), v2.coords())
            )
            if not collinear:
                ts.append(t1)
                vs.append(v1)
        ts.append(self.times[-1])
        vs.append(self.values[-1])
        return PLPath(tuple(ts), tuple(vs))

    def same_as(self, other: "PLPath", tol: float = 0) -> bool:
        """Equality as functions of time (ignores redundant breakpoints)."""
        a, b = self.normalized(tol), other.normalized(tol)
        if len(a) != len(b):
            return False
        for ta, tb, va, vb in zip(a.times, b.times, a.values, b.values):
            if abs(ta - tb) > tol:
                return False
            if any(abs(x - y) > tol for x, y in zip(va.coords(), vb.coords())):
                return False
        return True

    def restrict(self, horizon) -> "PLPath":
        """The path on [0, horizon]."""
        if not 0 < horizon <= self.horizon:
            raise ValueError("restriction horizon outside the path's range")
        j = bisect.bisect_left(self.times, horizon)
        ts = list(self.times[:j])
        vs = list(self.values[:j])
        ts.append(horizon)
        vs.append(evaluate(self, horizon))
        return PLPath(tuple(ts), tuple(vs))


pi0 = PLPath.line(LAMBDA0, 1)


def _div(a, b):
    # int / int stays exact
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / b
    return a / b


def _lerp(v0: Weight, v1: Weight, s):
    return v0 + (v1 - v0) * s


def evaluate(p: PLPath, t) -> Weight:
    if t < 0 or t > p.horizon:
        raise ValueError(f"time {t} outside [0, {p.horizon}]")
    j = bisect.bisect_left(p.times, t)
    if p.times[j] == t:
        return p.values[j]
    t0, t1 = p.times[j - 1], p.times[j]
    return _lerp(p.values[j - 1], p.values[j], _div(t - t0, t1 - t0))


def concatenate(p: PLPath, q: PLPath) -> PLPath:
    shift_t, shift_v = p.horizon, p.end
    times = p.times + tuple(shift_t + t for t in q.times[1:])
    values = p.values + tuple(shift_v + v for v in q.values[1:])
    return PLPath(times, values)


def concatenate_all(paths: Sequence[PLPath]) -> PLPath:
    times, values = list(paths[0].times), list(paths[0].values)
    for q in paths[1:]:
        st, sv = times[-1], values[-1]
        times.extend(st + t for t in q.times[1:])
        values.extend(sv + v for v in q.values[1:])
    return PLPath(tuple(times), tuple(values))


def _crossing(t0, t1, g0, g1, level):
    return t0 + (t1 - t0) * _div(g0 - level, g0 - g1)


def _pitman_with_shift(i: int, p: PLPath):
    alpha = simple_root(i)
    g = p.pairings(i)
    run_min = 0
    times, values = [p.times[0]], [p.values[0]]
    for j in range(1, len(p.times)):
        t0, t1 = p.times[j - 1], p.times[j]
        g0, g1 = g[j - 1], g[j]
        if g1 < run_min:
            if g0 > run_min:
                s = _crossing(t0, t1, g0, g1, run_min)
                v = _lerp(p.values[j - 1], p.values[j], _div(s - t0, t1 - t0))
                times.append(s)
                values.append(v - alpha * run_min)
            run_min = g1
        times.append(t1)
        values.append(p.values[j] - alpha * run_min)
    return PLPath(tuple(times), tuple(values)), -run_min


def pitman_transform(i: int, p: PLPath) -> PLPath:
    """t -> p(t) - inf_{s<=t} <p(s), alpha_i^vee> alpha_i."""
    return _pitman_with_shift(i, p)[0]


def canonical_dominant(p: PLPath, max_passes: int = 10_000, tol: float = 0):
    """Apply P_{alpha_0}, P_{alpha_1}, P_{alpha_0}, ... until two consecutive passes are no-ops.

    Returns the dominant path and the string coordinates (shifts of the
    endpoint along alpha_0, alpha_1, alpha_0, ...).  ``tol`` treats shifts
    below it as zero, which is only useful for float paths.
    """
    shifts = []
    idle = 0
    k = 0
    while idle < 2:
        if k >= max_passes:
            raise DivergenceError(f"no stabilization after {max_passes} Pitman passes")
        q, a = _pitman_with_shift(root_of_index(k), p)
        if a <= tol:
            shifts.append(0)
            idle += 1
        else:
            if isinstance(a, Fraction) and a.denominator == 1:
                a = int(a)
            shifts.append(a)
            p = q
            idle = 0
        k += 1
    return p, trim(shifts)


def string_coordinates(p: PLPath, **kw) -> tuple:
    return canonical_dominant(p, **kw)[1]


def _future_inf(times, g):
    """Breakpoints of F(t) = inf_{s in [t, T]} g(s) for piecewise-affine g.

    Returns (times, F) including inserted crossing times, in increasing order.
    """
    out_t, out_f = [times[-1]], [g[-1]]
    fr = g[-1]
    for j in range(len(times) - 1, 0, -1):
        t0, t1 = times[j - 1], times[j]
        g0, g1 = g[j - 1], g[j]
        if g0 < fr:
            if g1 > fr:
                s = _crossing(t1, t0, g1, g0, fr)
                out_t.append(s)
                out_f.append(fr)
            fr = g0
        out_t.append(t0)
        out_f.append(fr)
    out_t.reverse()
    out_f.reverse()
    return out_t, out_f


def _cap(times, f, x):
    """Breakpoints of min(x, f) for piecewise-affine f."""
    out_t, out_f = [times[0]], [min(x, f[0])]
    for j in range(1, len(times)):
        t0, t1 = times[j - 1], times[j]
        f0, f1 = f[j - 1], f[j]
        if (f0 - x) * (f1 - x) < 0:
            out_t.append(_crossing(t0, t1, f0, f1, x))
            out_f.append(x)
        out_t.append(t1)
        out_f.append(min(x, f1))
    return out_t, out_f


def _merge_times(a: Sequence, b: Sequence) -> list:
    merged = sorted(set(a) | set(b))
    return merged


def _eval_scalar(times, vals, t):
    j = bisect.bisect_left(times, t)
    if times[j] == t:
        return vals[j]
    t0, t1 = times[j - 1], times[j]
    return vals[j - 1] + (vals[j] - vals[j - 1]) * _div(t - t0, t1 - t0)


def inverse_pitman(
    i: int,
    x,
    p: PLPath,
    horizon=None,
    *,
    window=None,
    margin=None,
) -> PLPath:
    """I_{alpha_i}^{x,T} p(t) = p(t) - min(x, inf_{T >= s >= t} <p(s), alpha_i^vee>) alpha_i.

    ``horizon`` is a finite T no larger than the path's horizon (default: the
    path's horizon), or ``math.inf``.  In the infinite mode the tail infimum
    is computed on the stored range and certified: the infimum of the
    pairing over the last quarter of the range must exceed the largest
    truncation level used on ``window`` (default: the first three quarters)
    by ``margin`` (default 2 x).  Failing that raises
    ``InconclusiveHorizonError``.  The returned path always covers the whole
    stored range.
    """
    if x < 0:
        raise ValueError("string coordinate must be nonnegative")
    infinite = horizon is not None and horizon == math.inf
    if horizon is not None and not infinite and horizon != p.horizon:
        p = p.restrict(horizon)
    alpha = simple_root(i)
    g = p.pairings(i)
    ft, ff = _future_inf(list(p.times), g)
    if ff[0] < 0:
        raise ValueError(f"path dips below the alpha_{i} wall; I^x is undefined at t = 0")
    ct, cf = _cap(ft, ff, x)
    if infinite:
        big_t = p.horizon
        win = _div(big_t * 3, 4) if window is None else window
        m0 = 2 * x if margin is None else margin
        q_start = _div(big_t * 3, 4)
        tail_inf = min(
            [g[j] for j, t in enumerate(p.times) if t >= q_start] + [_eval_scalar(p.times, g, q_start)]
        )
        used = max(
            [v for t, v in zip(ct, cf) if t <= win] + [_eval_scalar(ct, cf, win)]
        )
        if not tail_inf >= used + m0:
            raise InconclusiveHorizonError(
                f"tail infimum {tail_inf} does not clear level {used} by margin {m0}"
            )
    times = _merge_times(p.times, ct)
    values = tuple(evaluate(p, t) - alpha * _eval_scalar(ct, cf, t) for t in times)
    return PLPath(tuple(times), values)


def reconstruct_from_strings(dominant: PLPath, a: Sequence, check: bool = True) -> PLPath:
    """The unique path in the Littelmann module of ``dominant`` with string coordinates a."""
    a = trim(a)
    if check:
        from .crystals import member_b_lambda

        if not member_b_lambda(a, dominant.end):
            raise NotInCrystalError(f"{a} is not in B({dominant.end})")
    p = dominant
    for k in range(len(a) - 1, -1, -1):
        if a[k]:
            p = inverse_pitman(root_of_index(k), a[k], p)
    return p


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def _parse(tok: str):
    if "/" in tok:
        return Fraction(tok)
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def dumps(p: PLPath) -> str:
    """Line format: header ``T n`` then ``t cL cA cD`` per breakpoint."""
    lines = [f"{_fmt(p.horizon)} {len(p)}"]
    for t, v in zip(p.times, p.values):
        lines.append(" ".join(_fmt(c) for c in (t, v.cL, v.cA, v.cD)))
    return "\n".join(lines) + "\n"


def loads(text: str) -> PLPath:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    horizon, n = _parse(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} breakpoints, found {len(body)}")
    times = tuple(_parse(r[0]) for r in body)
    values = tuple(Weight(*(_parse(c) for c in r[1:4])) for r in body)
    p = PLPath(times, values)
    if p.horizon != horizon:
        raise ValueError("header horizon does not match the last breakpoint")
    return p
