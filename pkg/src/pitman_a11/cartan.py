"""Weights, coweights and the Weyl group action for affine A1.

Weights are stored in the basis (Lambda_0, alpha_1, delta) and coweights in
the basis (c, alpha_1^vee, d).  Coefficients can be any numbers supporting
field arithmetic: ``fractions.Fraction`` keeps everything exact, floats are
used by the Monte Carlo code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "Weight",
    "Coweight",
    "ChamberPoint",
    "ZERO",
    "LAMBDA0",
    "ALPHA1",
    "DELTA",
    "ALPHA0",
    "RHO",
    "C",
    "ALPHA1V",
    "ALPHA0V",
    "D",
    "RHOV",
    "simple_root",
    "simple_coroot",
    "root_of_index",
    "pairing",
    "pair_index",
    "reflect",
    "translate",
    "invariant_form",
    "project_mod_delta",
    "is_dominant",
    "is_integral",
    "in_caff",
    "in_caff_closure",
]


@dataclass(frozen=True)
class Weight:
    """cL * Lambda_0 + cA * alpha_1 + cD * delta."""

    cL: object = 0
    cA: object = 0
    cD: object = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.cL + other.cL, self.cA + other.cA, self.cD + other.cD)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.cL - other.cL, self.cA - other.cA, self.cD - other.cD)

    def __neg__(self) -> "Weight":
        return Weight(-self.cL, -self.cA, -self.cD)

    def __mul__(self, k) -> "Weight":
        return Weight(k * self.cL, k * self.cA, k * self.cD)

    __rmul__ = __mul__

    @property
    def level(self):
        return self.cL

    @property
    def delta_part(self):
        return self.cD

    def coords(self) -> tuple:
        return (self.cL, self.cA, self.cD)


@dataclass(frozen=True)
class Coweight:
    """cC * c + cAv * alpha_1^vee + cDv * d."""

    cC: object = 0
    cAv: object = 0
    cDv: object = 0

    def __add__(self, other: "Coweight") -> "Coweight":
        return Coweight(self.cC + other.cC, self.cAv + other.cAv, self.cDv + other.cDv)

    def __sub__(self, other: "Coweight") -> "Coweight":
        return Coweight(self.cC - other.cC, self.cAv - other.cAv, self.cDv - other.cDv)

    def __mul__(self, k) -> "Coweight":
        return Coweight(k * self.cC, k * self.cAv, k * self.cDv)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Coweight":
        return Coweight(self.cC / k, self.cAv / k, self.cDv / k)


class ChamberPoint(NamedTuple):
    """A weight modulo delta, read through its pairings with c and alpha_1^vee."""

    t: float
    x: float


ZERO = Weight(0, 0, 0)
LAMBDA0 = Weight(1, 0, 0)
ALPHA1 = Weight(0, 1, 0)
DELTA = Weight(0, 0, 1)
ALPHA0 = Weight(0, -1, 1)
RHO = Weight(2, Fraction(1, 2), 0)

C = Coweight(1, 0, 0)
ALPHA1V = Coweight(0, 1, 0)
ALPHA0V = Coweight(1, -1, 0)
D = Coweight(0, 0, 1)
RHOV = Coweight(0, Fraction(1, 2), 2)


def pairing(w: Weight, h: Coweight):
    # <Lambda_0, c> = 1, <alpha_1, alpha_1^vee> = 2, <delta, d> = 1
    return w.cL * h.cC + 2 * w.cA * h.cAv + w.cD * h.cDv


def _check_index(i: int) -> None:
    if i not in (0, 1):
        raise ValueError(f"simple root index must be 0 or 1, got {i!r}")


def simple_root(i: int) -> Weight:
    _check_index(i)
    return ALPHA0 if i == 0 else ALPHA1


def simple_coroot(i: int) -> Coweight:
    _check_index(i)
    return ALPHA0V if i == 0 else ALPHA1V


def root_of_index(k: int) -> int:
    """Simple root index used at position k of the alternating word 0, 1, 0, 1, ..."""
    return k % 2


def pair_index(w: Weight, i: int):
    """<w, alpha_i^vee> without building a Coweight."""
    if i == 0:
        return w.cL - 2 * w.cA
    if i == 1:
        return 2 * w.cA
    _check_index(i)


def reflect(i: int, w: Weight) -> Weight:
    _check_index(i)
    return w - pair_index(w, i) * simple_root(i)


def invariant_form(u: Weight, v: Weight):
    """Normalized invariant form: (L0, L0)=0, (L0, delta)=1, (a1, a1)=2, (delta, delta)=0."""
    return u.cL * v.cD + u.cD * v.cL + 2 * u.cA * v.cA


def translate(k: int, w: Weight) -> Weight:
    """t_k(w) = w + k (w, delta) alpha_1 - (k (w, alpha_1) + k^2 (w, delta)) delta."""
    wd = w.cL
    wa = 2 * w.cA
    return Weight(w.cL, w.cA + k * wd, w.cD - (k * wa + k * k * wd))


def project_mod_delta(w: Weight) -> ChamberPoint:
    return ChamberPoint(w.cL, 2 * w.cA)


def is_dominant(w: Weight, tol: float = 0) -> bool:
    return pair_index(w, 0) >= -tol and pair_index(w, 1) >= -tol


def is_integral(w: Weight) -> bool:
    return all(float(pair_index(w, i)).is_integer() for i in (0, 1))


def in_caff(p: ChamberPoint, tol: float = 0) -> bool:
    """Strict membership 0 < x < t, with tol shrinking the region."""
    return tol < p.x < p.t - tol


def in_caff_closure(p: ChamberPoint, tol: float = 0) -> bool:
    return -tol <= p.x <= p.t + tol
