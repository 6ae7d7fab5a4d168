"""Gaussian continuous-variable simulator of an optical Fourier layer."""
from __future__ import annotations

from .const import VERSION
from .encoder import EncodedState, EncodingConfig, encode, read_encoded
from .gaussian import GaussianState, RegisterLayout, check_physicality, vacuum
from .qft import apply_inverse_qft2d, apply_qft2d, build_ct_qft_1d, read_spectrum

__version__ = VERSION

__all__ = [
    "EncodedState",
    "EncodingConfig",
    "GaussianState",
    "RegisterLayout",
    "apply_inverse_qft2d",
    "apply_qft2d",
    "build_ct_qft_1d",
    "check_physicality",
    "encode",
    "read_encoded",
    "read_spectrum",
    "vacuum",
]
