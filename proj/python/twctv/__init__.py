"""Low-rank tensor completion and robust PCA under invertible trailing-mode transforms."""

from ._twctv import (
    IoError,
    NumericError,
    ParamError,
    ShapeError,
    __version__,
    bernoulli_mask,
    default_lambda,
    ergas,
    foreground_mask,
    gen_synthetic,
    grad,
    grad_adjoint,
    gtsvt,
    m_product,
    m_svd,
    precision_recall_f,
    psnr,
    read_tensor,
    relative_error,
    salt_pepper,
    solve,
    write_tensor,
)

__all__ = [
    "IoError",
    "NumericError",
    "ParamError",
    "ShapeError",
    "__version__",
    "bernoulli_mask",
    "default_lambda",
    "ergas",
    "foreground_mask",
    "gen_synthetic",
    "grad",
    "grad_adjoint",
    "gtsvt",
    "m_product",
    "m_svd",
    "precision_recall_f",
    "psnr",
    "read_tensor",
    "relative_error",
    "salt_pepper",
    "solve",
    "write_tensor",
]
