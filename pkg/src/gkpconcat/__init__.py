"""Concatenated GKP codes: encoders, two-layer decoders and logical error rates."""

__version__ = "0.1.0"

from .codes import CodeInstance, CodeSpec, build, build_from_id, report
from .decoder import (
    DecodeResult,
    decode,
    decode_scheme1,
    decode_scheme2,
    decode_scheme3,
    decode_unbiased,
    kernel_projection,
    least_norm_solve,
)
from .estimator import GkpDecoder
from .lattice import GkpLattice, logical_error_flags, remainder
from .montecarlo import ErrorRateEstimate, estimate, sweep
from .noise import NoiseModel

__all__ = [
    "CodeInstance",
    "CodeSpec",
    "DecodeResult",
    "ErrorRateEstimate",
    "GkpDecoder",
    "GkpLattice",
    "NoiseModel",
    "build",
    "build_from_id",
    "decode",
    "decode_scheme1",
    "decode_scheme2",
    "decode_scheme3",
    "decode_unbiased",
    "estimate",
    "kernel_projection",
    "least_norm_solve",
    "logical_error_flags",
    "remainder",
    "report",
    "sweep",
]
