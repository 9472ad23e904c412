"""The random walk Pi^m built from iid mu^m steps, its dominant part Pi^m_+ and the strings xi^m(t)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..cartan import Weight
from ..paths import PLPath, canonical_dominant, concatenate_all, trim
from . import _kernels
from .rng import RngStream
from .steps import step_arrays, step_law, step_path


@dataclass(frozen=True)
class WalkSample:
    path: PLPath
    plus_path: PLPath
    strings_at: dict
    m: float
    H: int
    stabilized: bool

    @property
    def strings_inf(self) -> tuple:
        return self.strings_at[self.H]


class StepTable:
    """Flat float arrays of the step paths met in a batch, indexed by local ids."""

    def __init__(self, law, keys: np.ndarray):
        uniq, inv = np.unique(keys.reshape(-1, 2), axis=0, return_inverse=True)
        self.strings = [trim(law.element(int(n), int(i))) for n, i in uniq]
        arrs = [step_arrays(a) for a in self.strings]
        self.ln = np.array([len(a[0]) for a in arrs], dtype=np.int64)
        self.off = np.concatenate(([0], np.cumsum(self.ln)[:-1])).astype(np.int64)
        self.T = np.concatenate([a[0] for a in arrs])
        self.X = np.concatenate([a[1] for a in arrs])
        self.D = np.concatenate([a[2] for a in arrs])
        self.ids = inv.reshape(keys.shape[:-1]).astype(np.int64)


def _dominant_times(t, x, d, tint, H):
    """PLPath with float weights from kernel arrays (crossings landing on an existing breakpoint are merged)."""
    ts, vals = [0.0], [Weight(0, 0, 0)]
    for tt, xx, dd in zip(t[1:], x[1:], d[1:]):
        if tt <= ts[-1]:
            continue
        ts.append(float(tt))
        vals.append(Weight(float(tt), float(xx) / 2, float(dd)))
    return PLPath(tuple(ts), tuple(vals))


def simulate_walk_pair(m: float, H: int, rng: RngStream, kmax: int = 64, exact: bool = False,
                       margin: float = 5.0) -> WalkSample:
    """One walk of H steps with its dominant path and strings at every integer time.

    ``exact`` recomputes the dominant path in rational arithmetic (slow for
    large H); otherwise the float kernel is used and the strings are rounded
    to integers.
    """
    if H < 1:
        raise ValueError("H must be >= 1")
    law = step_law(m)
    keys = law.sample_keys(rng, H)
    steps = [trim(law.element(int(n), int(i))) for n, i in keys]
    path = concatenate_all([step_path(a) for a in steps])
    table = StepTable(law, keys[None, :, :])
    t, x, d, tint = _kernels.build_path(table.ids[0], table.off, table.ln, table.T, table.X, table.D)
    t2, x2, d2, _, xi, used = _kernels.all_passes(t, x, d, tint, H, kmax)
    if used < 0:
        raise RuntimeError("pass cap reached; raise kmax")
    xi = np.round(xi).astype(np.int64)
    strings_at = {n: trim(tuple(int(v) for v in xi[:, n])) for n in range(H + 1)}
    if exact:
        plus, a = canonical_dominant(path)
        if trim(a) != strings_at[H]:
            raise AssertionError("float kernel disagrees with exact strings")
    else:
        plus = _dominant_times(t2, x2, d2, None, H)
    end = plus.end
    stab = strings_at[H] == strings_at[H // 2] and min(2 * end.cA, end.cL - 2 * end.cA) >= margin
    return WalkSample(path, plus, strings_at, m, H, bool(stab))


@dataclass
class WalkBatch:
    """Summary arrays for n walks: stay[n], xi[n, R, K], plus[n, R, 2] (x, delta coefficient) at times rec."""

    m: float
    H: int
    rec: np.ndarray
    stay: np.ndarray
    xi: np.ndarray
    plus: np.ndarray
    used: np.ndarray
    stabilized: np.ndarray
    worst_rounding: float

    def strings(self, r: int = -1) -> list:
        return [trim(tuple(int(v) for v in row)) for row in self.xi[:, r, :]]


def simulate_walks(m: float, H: int, n: int, rng: RngStream, rec=None, kmax: int = 48,
                   chunk: int = 2000, margin: float = 5.0) -> WalkBatch:
    """n independent walks (same stream, drawn chunk by chunk); strings recorded at times rec (H/2 and H always)."""
    law = step_law(m)
    times = sorted(set(list(rec or []) + [H // 2, H]))
    rec_arr = np.array(times, dtype=np.int64)
    out = []
    worst = 0.0
    for start in range(0, n, chunk):
        size = min(chunk, n - start)
        keys = law.sample_keys(rng, size * H).reshape(size, H, 2)
        table = StepTable(law, keys)
        res = _kernels.walk_batch(table.ids, table.off, table.ln, table.T, table.X, table.D, rec_arr, kmax)
        out.append(res)
        worst = max(worst, res[4])
    stay = np.concatenate([o[0] for o in out])
    xi = np.concatenate([o[1] for o in out])
    plus = np.concatenate([o[2] for o in out])
    used = np.concatenate([o[3] for o in out])
    if (used < 0).any():
        raise RuntimeError("pass cap reached; raise kmax")
    ih, iH = times.index(H // 2), times.index(H)
    same = (xi[:, ih, :] == xi[:, iH, :]).all(axis=1)
    xH = plus[:, iH, 0]
    stab = same & (xH >= margin) & (H - xH >= margin)
    return WalkBatch(m, H, rec_arr, stay, xi, plus, used, stab, worst)
