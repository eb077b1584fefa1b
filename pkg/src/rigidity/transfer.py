"""Monodromy and transfer matrices of a spectral R-matrix on a chain.

The auxiliary space is the first tensor factor; chain site k sits at factor
k+1. The monodromy is ``R_{a,n}(u) ... R_{a,1}(u)`` and the transfer matrix its
partial trace over the auxiliary factor.
"""

from __future__ import annotations

import numpy as np

from .config import check_dim
from .legs import SitePair, embed_pair
from .linalg import frobenius_norm, identity
from .yang_baxter import RMatrixSpec


def monodromy(r: RMatrixSpec, u: complex, n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one chain site")
    d = r.local_dim
    check_dim(d ** (n + 1))
    m = r.at(u)
    out = identity(d ** (n + 1))
    for k in range(1, n + 1):
        out = embed_pair(m, SitePair(1, k + 1, n + 1, d)) @ out
    return out


def partial_trace_first(a: np.ndarray, d: int) -> np.ndarray:
    rest = a.shape[0] // d
    return np.einsum("iaib->ab", a.reshape(d, rest, d, rest))


def transfer_matrix(r: RMatrixSpec, u: complex, n: int) -> np.ndarray:
    return partial_trace_first(monodromy(r, u, n), r.local_dim)


def transfer_commutator_norm(r: RMatrixSpec, u: complex, v: complex, n: int, relative: bool = False) -> float:
    """``||t(u) t(v) - t(v) t(u)||_F``, optionally divided by ``||t(u)|| ||t(v)||``."""
    tu = transfer_matrix(r, u, n)
    tv = transfer_matrix(r, v, n)
    value = frobenius_norm(tu @ tv - tv @ tu)
    if relative:
        scale = frobenius_norm(tu) * frobenius_norm(tv)
        return value / scale if scale > 0 else value
    return value


def max_transfer_commutator(r: RMatrixSpec, n: int, pairs=None) -> float:
    """Largest relative transfer commutator over ``pairs`` (default: all ordered sample pairs)."""
    if pairs is None:
        pairs = [(u, v) for u in r.sample_params for v in r.sample_params]
    cache = {}

    def t(x):
        if x not in cache:
            cache[x] = transfer_matrix(r, x, n)
        return cache[x]

    worst = 0.0
    for u, v in pairs:
        tu, tv = t(complex(u)), t(complex(v))
        scale = frobenius_norm(tu) * frobenius_norm(tv)
        value = frobenius_norm(tu @ tv - tv @ tu)
        worst = max(worst, value / scale if scale > 0 else value)
    return worst
