"""Yang-Baxter defects and the three-body word algebra of an R-matrix.

On V(x)V(x)V the two triple assemblies are ``T_L = R12 R13 R23`` and
``T_R = R23 R13 R12``; their difference is the defect. Spectral families use
the difference form ``R12(u-v) R13(u) R23(v) - R23(v) R13(u) R12(u-v)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES
from .legs import SitePair, embed_pair
from .linalg import OperatorSpan, as_matrix, frobenius_norm

DEFAULT_GRID = (-1.0, -0.5, 0.5, 1.0)


class SingularRMatrixError(ValueError):
    pass


def _is_invertible(m: np.ndarray, tol_rank: float) -> bool:
    s = np.linalg.svd(m, compute_uv=False)
    return s[0] > 0 and s[-1] > tol_rank * s[0]


@dataclass(frozen=True)
class RMatrixSpec:
    """A two-site operator, either a fixed matrix or a spectral family ``u -> R(u)``.

    Constant matrices must be invertible. A spectral family only has to be
    invertible at a generic point of ``sample_params``; rational families such
    as ``u*I + P`` are singular at isolated parameters (``u = +-1``) that the
    default grid contains, and the defect is a polynomial identity there.
    """

    kind: str
    local_dim: int = 2
    matrix: np.ndarray | None = field(default=None, repr=False)
    family: Callable[[complex], np.ndarray] | None = field(default=None, repr=False)
    sample_params: tuple = DEFAULT_GRID
    name: str = ""

    def __post_init__(self):
        d2 = self.local_dim**2
        if self.kind == "constant":
            if self.matrix is None:
                raise ValueError("constant RMatrixSpec needs a matrix")
            m = as_matrix(self.matrix)
            if m.shape != (d2, d2):
                raise ValueError(f"R-matrix must be {d2}x{d2}, got {m.shape}")
            if not _is_invertible(m, DEFAULT_TOLERANCES.tol_rank):
                raise SingularRMatrixError("R-matrix is singular")
            m = m.copy()
            m.flags.writeable = False
            object.__setattr__(self, "matrix", m)
        elif self.kind == "spectral":
            if self.family is None:
                raise ValueError("spectral RMatrixSpec needs a family")
            params = tuple(complex(p) for p in self.sample_params)
            if not params:
                raise ValueError("spectral RMatrixSpec needs sample_params")
            object.__setattr__(self, "sample_params", params)
            mats = [self.at(p) for p in params]
            if not any(_is_invertible(m, DEFAULT_TOLERANCES.tol_rank) for m in mats):
                raise SingularRMatrixError("family is singular at every sample parameter")
        else:
            raise ValueError(f"kind must be 'constant' or 'spectral', got {self.kind!r}")

    @classmethod
    def constant(cls, matrix, local_dim: int = 2, name: str = "") -> "RMatrixSpec":
        return cls("constant", local_dim, matrix=matrix, name=name)

    @classmethod
    def spectral(cls, family, local_dim: int = 2, sample_params=DEFAULT_GRID, name: str = "") -> "RMatrixSpec":
        return cls("spectral", local_dim, family=family, sample_params=tuple(sample_params), name=name)

    def at(self, u: complex = 0.0) -> np.ndarray:
        """The operator at parameter ``u`` (constant specs ignore ``u``)."""
        if self.kind == "constant":
            return self.matrix
        m = as_matrix(self.family(complex(u)))
        d2 = self.local_dim**2
        if m.shape != (d2, d2):
            raise ValueError(f"family returned shape {m.shape} at u={u}, expected {(d2, d2)}")
        return m

    def singular_params(self, tol_rank: float = DEFAULT_TOLERANCES.tol_rank) -> list:
        if self.kind == "constant":
            return []
        return [p for p in self.sample_params if not _is_invertible(self.at(p), tol_rank)]


def three_site_legs(r12_source, r13_source, r23_source, d: int):
    """Embed three (possibly different) two-site matrices as R12, R13, R23 on V^(x)3."""
    return (
        embed_pair(r12_source, SitePair(1, 2, 3, d)),
        embed_pair(r13_source, SitePair(1, 3, 3, d)),
        embed_pair(r23_source, SitePair(2, 3, 3, d)),
    )


def triple_assemblies(r: RMatrixSpec, u: complex | None = None, v: complex | None = None):
    """Return ``(T_L, T_R)``; spectral specs need both ``u`` and ``v``."""
    d = r.local_dim
    if r.kind == "constant":
        a = b = c = r.matrix
    else:
        if u is None or v is None:
            raise ValueError("spectral defect needs parameters u and v")
        a, b, c = r.at(u - v), r.at(u), r.at(v)
    r12, r13, r23 = three_site_legs(a, b, c, d)
    return r12 @ r13 @ r23, r23 @ r13 @ r12


def yb_defect_constant(r: RMatrixSpec) -> np.ndarray:
    if r.kind != "constant":
        raise ValueError("yb_defect_constant needs a constant RMatrixSpec")
    t_l, t_r = triple_assemblies(r)
    return t_l - t_r


def yb_defect_spectral(r: RMatrixSpec, u: complex, v: complex) -> np.ndarray:
    if r.kind != "spectral":
        raise ValueError("yb_defect_spectral needs a spectral RMatrixSpec")
    t_l, t_r = triple_assemblies(r, complex(u), complex(v))
    return t_l - t_r


@dataclass(frozen=True)
class DefectSample:
    u: complex | None
    v: complex | None
    defect_fro: float
    relative: float


@dataclass(frozen=True)
class YbeReport:
    """Defect measurements for one R-matrix.

    ``max_defect`` is the largest *relative* defect ``||T_L - T_R||_F / ||T_L||_F``;
    absolute norms are kept per sample. ``pairwise_generated`` is the
    caller's assertion and only enters :attr:`boundary_free`.
    """

    kind: str
    samples: tuple
    max_defect: float
    tolerance: float
    passes: bool
    pairwise_generated: bool | None = None
    singular_params: tuple = ()

    @property
    def defect_norms(self) -> list:
        return [((s.u, s.v), s.relative) for s in self.samples]

    @property
    def checked_samples(self) -> int:
        return len(self.samples)

    @property
    def boundary_free(self) -> bool | None:
        if self.pairwise_generated is None:
            return None
        return self.passes and self.pairwise_generated

    def to_dict(self) -> dict:
        def pair(z):
            return None if z is None else [z.real, z.imag]

        return {
            "kind": self.kind,
            "samples": [
                {"u": pair(s.u), "v": pair(s.v), "defect_fro": s.defect_fro, "relative_defect": s.relative}
                for s in self.samples
            ],
            "max_defect": self.max_defect,
            "tolerance": self.tolerance,
            "passes": self.passes,
            "pairwise_generated": self.pairwise_generated,
            "boundary_free": self.boundary_free,
        }


def _sample(r: RMatrixSpec, u, v) -> DefectSample:
    t_l, t_r = triple_assemblies(r, u, v)
    absolute = frobenius_norm(t_l - t_r)
    scale = frobenius_norm(t_l)
    rel = absolute / scale if scale > 0 else absolute
    return DefectSample(u, v, absolute, rel)


def default_pairs(params: Sequence[complex]) -> list:
    return list(itertools.product(params, repeat=2))


def check_boundary_free(
    r: RMatrixSpec,
    tolerance: float = DEFAULT_TOLERANCES.tol_ybe,
    pairwise_generated: bool | None = None,
    pairs: Sequence | None = None,
) -> YbeReport:
    """Evaluate the defect at the constant matrix or at every ordered (u, v) pair.

    The three-body stage is declared boundary-free only when the defect test
    passes *and* the caller asserts pairwise generation at depth 2.
    """
    if r.kind == "constant":
        samples = [_sample(r, None, None)]
    else:
        grid = default_pairs(r.sample_params) if pairs is None else [(complex(u), complex(v)) for u, v in pairs]
        samples = [_sample(r, u, v) for u, v in grid]
    worst = max(s.relative for s in samples)
    return YbeReport(
        kind=r.kind,
        samples=tuple(samples),
        max_defect=worst,
        tolerance=tolerance,
        passes=bool(worst <= tolerance),
        pairwise_generated=pairwise_generated,
        singular_params=tuple(r.singular_params()),
    )


def pairwise_generation_rank(
    r: RMatrixSpec,
    max_word_len: int,
    tol_rank: float = DEFAULT_TOLERANCES.tol_rank,
    u: complex = 0.0,
) -> OperatorSpan:
    """Span of all words of length <= ``max_word_len`` in R12, R13, R23, identity included."""
    from .filtration import grow_word_span

    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    m = r.at(u)
    gens = list(three_site_legs(m, m, m, r.local_dim))
    basis, _ = grow_word_span(gens, max_word_len, include_identity=True, tol_rank=tol_rank)
    return OperatorSpan(ambient_dim=r.local_dim**3, basis=tuple(basis))

