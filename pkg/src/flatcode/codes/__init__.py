"""Rank-metric codes, liftings and the lifted-Gabidulin codecs."""

from .codec import (
    FlatCodec,
    make_codec,
    ranc_codec,
    ranc_codec_decode,
    ranc_codec_encode,
    rlnc_codec,
    rlnc_codec_decode,
    rlnc_codec_encode,
)
from .gabidulin import (
    GabidulinCode,
    berlekamp_massey,
    gabidulin_code,
    gabidulin_decode,
    gabidulin_encode,
    rank_distance,
)
from .lifting import (
    LiftedCodeword,
    affine_lift,
    affine_to_linear,
    extend_received,
    homogenizing_matrix,
    lift,
    linear_lift,
    subset_lift,
)
