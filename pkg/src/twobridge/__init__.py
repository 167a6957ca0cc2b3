"""Hyperbolic volumes of two-bridge knots K(p, q) without triangulating.

The volume is read off a pre-Bloch element built from the orbit of infinity
under the parabolic (Riley) representation of the knot group, evaluated at
every root of the Riley polynomial.
"""

from twobridge.knotparams import (
    BridgeParams,
    CFExpansion,
    NotCoprime,
    NotOdd,
    OutOfRange,
    ParamError,
    SignSequence,
    cf_positive,
    epsilon,
    epsilon_sequence,
    equivalent_params,
    lackenby_bounds,
    make_params,
)
from twobridge.volume import VolumeResult, volume

__version__ = "0.1.0"

__all__ = [
    "BridgeParams",
    "CFExpansion",
    "NotCoprime",
    "NotOdd",
    "OutOfRange",
    "ParamError",
    "SignSequence",
    "VolumeResult",
    "cf_positive",
    "epsilon",
    "epsilon_sequence",
    "equivalent_params",
    "lackenby_bounds",
    "make_params",
    "volume",
]
