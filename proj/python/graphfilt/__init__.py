"""Edge-preserving graph filters: bilateral, guided, and Krylov polynomial filters."""

from ._core import (
    DENSE_CAP,
    CapacityError,
    DegenerateBasisError,
    IoError,
    ParseError,
    SingularError,
    add_noise,
    bf_spectrum,
    denoise,
    piecewise_linear,
    psnr,
    rmse,
    test_image,
)

__all__ = [
    "DENSE_CAP",
    "CapacityError",
    "DegenerateBasisError",
    "IoError",
    "ParseError",
    "SingularError",
    "add_noise",
    "bf_spectrum",
    "denoise",
    "piecewise_linear",
    "psnr",
    "rmse",
    "test_image",
]
