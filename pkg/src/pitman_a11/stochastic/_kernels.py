"""numba kernels for the alternating Pitman passes on concatenated step paths.

A path is stored as float arrays over its breakpoints: t (level, equal to
time), x = <., alpha_1^vee> and d (delta coefficient).  ``tint`` holds the
integer time of a breakpoint or -1 for breakpoints created by the passes.
"""

import numpy as np
from numba import njit

EPS = 1e-9


@njit(cache=True)
def build_path(steps, off, ln, T, X, D):
    n = 1
    for s in steps:
        n += ln[s] - 1
    t = np.empty(n)
    x = np.empty(n)
    d = np.empty(n)
    tint = np.full(n, -1, np.int64)
    t[0] = 0.0
    x[0] = 0.0
    d[0] = 0.0
    tint[0] = 0
    pos = 1
    for j in range(steps.shape[0]):
        s = steps[j]
        x0 = x[pos - 1]
        d0 = d[pos - 1]
        for u in range(1, ln[s]):
            t[pos] = j + T[off[s] + u]
            x[pos] = x0 + X[off[s] + u]
            d[pos] = d0 + D[off[s] + u]
            pos += 1
        tint[pos - 1] = j + 1
        t[pos - 1] = j + 1.0
    return t, x, d, tint


@njit(cache=True)
def pitman_pass(i, t, x, d, tint, shifts):
    """One transform P_{alpha_i}; shifts[n] receives -min(0, inf_{s<=n} g) at integer times n."""
    n = t.shape[0]
    nt = np.empty(2 * n)
    nx = np.empty(2 * n)
    nd = np.empty(2 * n)
    ni = np.empty(2 * n, np.int64)
    M = 0.0
    pos = 0
    for j in range(n):
        g = x[j] if i == 1 else t[j] - x[j]
        if j > 0:
            gp = x[j - 1] if i == 1 else t[j - 1] - x[j - 1]
            if g < M and gp > M + EPS:
                s = (M - gp) / (g - gp)
                nt[pos] = t[j - 1] + s * (t[j] - t[j - 1])
                xx = x[j - 1] + s * (x[j] - x[j - 1])
                dd = d[j - 1] + s * (d[j] - d[j - 1])
                if i == 1:
                    nx[pos] = xx - 2 * M
                    nd[pos] = dd
                else:
                    nx[pos] = xx + 2 * M
                    nd[pos] = dd - M
                ni[pos] = -1
                pos += 1
        if g < M:
            M = g
        nt[pos] = t[j]
        if i == 1:
            nx[pos] = x[j] - 2 * M
            nd[pos] = d[j]
        else:
            nx[pos] = x[j] + 2 * M
            nd[pos] = d[j] - M
        ni[pos] = tint[j]
        if tint[j] >= 0:
            shifts[tint[j]] = -M
        pos += 1
    return nt[:pos].copy(), nx[:pos].copy(), nd[:pos].copy(), ni[:pos].copy(), -M


@njit(cache=True)
def all_passes(t, x, d, tint, H, kmax):
    """Alternating passes 0, 1, 0, ... until two consecutive ones do nothing.

    Returns (t, x, d, tint) of the dominant path, xi[k, n] (string coordinate
    k at integer time n) and the number of passes used (-1 if kmax was hit).
    """
    xi = np.zeros((kmax, H + 1))
    zeros = 0
    used = -1
    for k in range(kmax):
        t, x, d, tint, last = pitman_pass(k % 2, t, x, d, tint, xi[k])
        if last <= EPS:
            zeros += 1
            if zeros == 2:
                used = k + 1
                break
        else:
            zeros = 0
    return t, x, d, tint, xi, used


@njit(cache=True)
def walk_batch(S, off, ln, T, X, D, rec, kmax):
    """Run every row of S (step ids) through the passes.

    Outputs per walk: stay (original path in the closed cone), xi at each time
    of ``rec`` (shape (n, R, kmax)), dominant path (x, d) at those times,
    passes used, and the worst distance of a recorded string value to an
    integer.
    """
    nw, H = S.shape
    R = rec.shape[0]
    stay = np.zeros(nw, np.bool_)
    xi_rec = np.zeros((nw, R, kmax), np.int64)
    plus_rec = np.zeros((nw, R, 2))
    used = np.zeros(nw, np.int64)
    worst = 0.0
    for w in range(nw):
        t, x, d, tint = build_path(S[w], off, ln, T, X, D)
        ok = True
        for j in range(t.shape[0]):
            if x[j] < -EPS or t[j] - x[j] < -EPS:
                ok = False
                break
        stay[w] = ok
        t2, x2, d2, ti2, xi, u = all_passes(t, x, d, tint, H, kmax)
        used[w] = u
        for r in range(R):
            for k in range(kmax):
                v = xi[k, rec[r]]
                iv = np.round(v)
                if abs(v - iv) > worst:
                    worst = abs(v - iv)
                xi_rec[w, r, k] = np.int64(iv)
        for j in range(t2.shape[0]):
            if ti2[j] >= 0:
                for r in range(R):
                    if rec[r] == ti2[j]:
                        plus_rec[w, r, 0] = x2[j]
                        plus_rec[w, r, 1] = d2[j]
    return stay, xi_rec, plus_rec, used, worst
