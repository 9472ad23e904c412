"""Pitman transforms, Littelmann paths and conditioned space-time Brownian motion for affine A1."""

from .cartan import (
    ALPHA0,
    ALPHA1,
    DELTA,
    LAMBDA0,
    RHO,
    RHOV,
    ZERO,
    ChamberPoint,
    Coweight,
    Weight,
    pair_index,
    pairing,
    reflect,
    translate,
)
from .characters import (
    EvalPoint,
    demazure_character,
    verma_character,
    verma_demazure_character,
    weyl_kac_character,
)
from .crystals import RealStringSeq, enumerate_b_lambda, member_b_infinity, member_b_lambda, member_gamma
from .errors import (
    DivergenceError,
    InconclusiveHorizonError,
    NotInCrystalError,
    PitmanA11Error,
    TruncationError,
)
from .paths import (
    PLPath,
    canonical_dominant,
    concatenate,
    inverse_pitman,
    pi0,
    pitman_transform,
    reconstruct_from_strings,
    string_coordinates,
)

__version__ = "0.1.0"
