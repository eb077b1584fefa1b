"""Numerical tolerances and size limits shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MAX_DIM = 2**12
MAX_DIM_ENV = "RIGIDITY_MAX_DIM"


@dataclass(frozen=True)
class Tolerances:
    """Cutoffs used wherever an exact algebraic statement is tested in floating point.

    tol_rank
        Singular values below ``tol_rank * s_max`` count as zero.
    tol_herm
        Allowed relative anti-Hermitian part before an eigensolve is refused.
    tol_ybe
        Relative Yang-Baxter defect accepted as zero.
    tol_spec
        Energy mismatch accepted when matching Bethe and ED spectra.
    tol_comm
        Relative transfer-matrix commutator accepted as zero.
    """

    tol_rank: float = 1e-9
    tol_herm: float = 1e-9
    tol_ybe: float = 1e-10
    tol_spec: float = 1e-6
    tol_comm: float = 1e-8

    def __post_init__(self):
        for name in ("tol_rank", "tol_herm", "tol_ybe", "tol_spec", "tol_comm"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOLERANCES = Tolerances()


def max_dim() -> int:
    """Ambient dimension ceiling; ``RIGIDITY_MAX_DIM`` overrides the default 4096."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{MAX_DIM_ENV} must be positive, got {value}")
    return value


class DimensionError(ValueError):
    """An operation would exceed the configured ambient dimension ceiling."""


def check_dim(dim: int) -> int:
    limit = max_dim()
    if dim > limit:
        raise DimensionError(f"dimension {dim} exceeds ceiling {limit} (set {MAX_DIM_ENV} to raise it)")
    return dim
