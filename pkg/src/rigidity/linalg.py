"""Dense complex matrix substrate.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; :func:`as_matrix`
is the single gate that enforces squareness, finiteness and the dimension
ceiling. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, check_dim


class NonHermitianError(ValueError):
    def __init__(self, asymmetry: float, limit: float):
        self.asymmetry = asymmetry
        self.limit = limit
        super().__init__(f"matrix is not Hermitian: relative asymmetry {asymmetry:.3e} > {limit:.3e}")


def as_matrix(a, *, copy: bool = False) -> np.ndarray:
    """Validate ``a`` as a finite square complex matrix and return it as complex128."""
    m = np.array(a, dtype=np.complex128, copy=copy) if copy else np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    check_dim(m.shape[0])
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(check_dim(dim), dtype=np.complex128)


def kron(a, b) -> np.ndarray:
    """Kronecker product, refusing results beyond the dimension ceiling."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    check_dim(a.shape[0] * b.shape[0])
    return np.kron(a, b)


def kron_all(factors: Iterable) -> np.ndarray:
    out = None
    for f in factors:
        out = np.asarray(f, dtype=np.complex128) if out is None else kron(out, f)
    if out is None:
        raise ValueError("kron_all needs at least one factor")
    return out


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a), "fro"))


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def _flatten_stack(mats: Sequence) -> np.ndarray:
    dims = {np.shape(m) for m in mats}
    if len(dims) != 1:
        raise ValueError(f"matrices of different shapes: {sorted(dims)}")
    return np.stack([np.asarray(m, dtype=np.complex128).ravel() for m in mats])


def span_rank(mats: Sequence, tol_rank: float = DEFAULT_TOLERANCES.tol_rank) -> int:
    """Numerical rank of the span of ``mats`` viewed as vectors in C^(dim^2).

    Counts singular values of the stacked, flattened inputs that exceed
    ``tol_rank`` times the largest one.
    """
    if len(mats) == 0:
        return 0
    s = np.linalg.svd(_flatten_stack(mats), compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol_rank * s[0]))


@dataclass(frozen=True)
class OperatorSpan:
    """A linearly independent family of operators on a common space."""

    ambient_dim: int
    basis: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)


def hermitian_eigenvalues(a, tol_herm: float = DEFAULT_TOLERANCES.tol_herm) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix.

    Raises :class:`NonHermitianError` carrying the measured relative asymmetry
    ``||a - a^H||_F / ||a||_F`` when it exceeds ``tol_herm``.
    """
    a = as_matrix(a)
    scale = frobenius_norm(a)
    asym = frobenius_norm(a - a.conj().T)
    rel = asym / scale if scale > 0 else asym
    if rel > tol_herm:
        raise NonHermitianError(rel, tol_herm)
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))


# -- matrix file format: {"dim": n, "entries": [[re, im], ...]} row-major ----

def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    flat = a.ravel()
    return {"dim": int(a.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_dict(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if dim < 1 or len(entries) != dim * dim:
        raise ValueError(f"matrix of dim {dim} needs {dim * dim} entries, got {len(entries)}")
    arr = np.empty(dim * dim, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if len(pair) != 2:
            raise ValueError(f"entry {k} is not a [re, im] pair")
        arr[k] = complex(float(pair[0]), float(pair[1]))
    return as_matrix(arr.reshape(dim, dim))


def dump_matrix(a, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(a), fh)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_dict(json.load(fh))
