"""Matroid models of network protocols: exact analytics, flats, channels and codecs."""

__version__ = "0.1.0"

from .errors import DecodeFailure, FlatcodeError, RankDeficient
from .gf import ext_field_create, field_create
from .matroid import Flat, MatroidSpec, closure, matroid
from .protocol import RANC, RLNC, SAF, Protocol

__all__ = [
    "__version__",
    "DecodeFailure",
    "FlatcodeError",
    "RankDeficient",
    "field_create",
    "ext_field_create",
    "Flat",
    "MatroidSpec",
    "closure",
    "matroid",
    "Protocol",
    "SAF",
    "RLNC",
    "RANC",
]
