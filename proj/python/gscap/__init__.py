"""Certified localized patterns in the 2D Gray-Scott system."""

from ._core import (  # noqa: F401
    approx_reduced,
    conv,
    eval_point,
    interval_add,
    interval_cosh,
    interval_mul,
    kappa_values,
    load_certificate,
    orbit,
    orbit_size,
    prove,
    seq_norm_l2,
)

__all__ = [
    "approx_reduced",
    "conv",
    "eval_point",
    "interval_add",
    "interval_cosh",
    "interval_mul",
    "kappa_values",
    "load_certificate",
    "orbit",
    "orbit_size",
    "prove",
    "seq_norm_l2",
]
