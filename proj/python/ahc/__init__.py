"""Adaptive 2-D Haar wavelet image codec."""

from ._ahc import (
    AhcError,
    adaptive_block_forward,
    angle_tables,
    block_forward,
    block_inverse,
    builtin_tables,
    corollary_pattern,
    decode,
    encode,
    family1_tables,
    inspect,
    is_invertible,
    is_unitary,
    load_pnm,
    metrics,
    printed_tables,
    save_pnm,
    subband_forward,
    transform_roundtrip,
    validate,
)

BASIS_CHOICES = ("set1", "set2", "set3", "set4", "adaptive-block", "adaptive-global")

__all__ = [
    "AhcError",
    "BASIS_CHOICES",
    "adaptive_block_forward",
    "angle_tables",
    "block_forward",
    "block_inverse",
    "builtin_tables",
    "corollary_pattern",
    "decode",
    "encode",
    "family1_tables",
    "inspect",
    "is_invertible",
    "is_unitary",
    "load_pnm",
    "metrics",
    "printed_tables",
    "save_pnm",
    "subband_forward",
    "transform_roundtrip",
    "validate",
]
