"""Leg embeddings of two-site operators into n-site tensor products.

Sites are 1-based and site 1 is the most significant tensor factor, so
``embed_adjacent(r, 1, n, d) == kron(r, I_{d^(n-2)})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import check_dim
from .linalg import identity, kron_all


@dataclass(frozen=True)
class SitePair:
    i: int
    j: int
    n: int
    local_dim: int = 2

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least two sites, got n={self.n}")
        if not 1 <= self.i < self.j <= self.n:
            raise ValueError(f"need 1 <= i < j <= n, got i={self.i}, j={self.j}, n={self.n}")
        if self.local_dim < 1:
            raise ValueError("local_dim must be positive")


def _check_two_site(r: np.ndarray, d: int) -> np.ndarray:
    r = np.asarray(r, dtype=np.complex128)
    if r.shape != (d * d, d * d):
        raise ValueError(f"two-site operator must be {d * d}x{d * d} for local_dim={d}, got {r.shape}")
    return r


def embed_adjacent(r, i: int, n: int, d: int = 2) -> np.ndarray:
    """``id^(i-1) (x) r (x) id^(n-i-1)`` acting on sites (i, i+1)."""
    r = _check_two_site(r, d)
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError(f"adjacent pair ({i}, {i + 1}) out of range for n={n}")
    check_dim(d**n)
    return kron_all([identity(d ** (i - 1)), r, identity(d ** (n - i - 1))])


@lru_cache(maxsize=256)
def _swap_targets(i: int, j: int, n: int, d: int) -> np.ndarray:
    labels = np.arange(d**n).reshape((d,) * n)
    return np.swapaxes(labels, i - 1, j - 1).ravel()


def swap_operator(i: int, j: int, n: int, d: int = 2) -> np.ndarray:
    """Permutation matrix exchanging tensor factors i and j."""
    SitePair(i, j, n, d)
    dim = check_dim(d**n)
    out = np.zeros((dim, dim), dtype=np.complex128)
    out[_swap_targets(i, j, n, d), np.arange(dim)] = 1.0
    return out


def _relocation(i: int, j: int, n: int, d: int) -> np.ndarray:
    # P_{j-1,j} ... P_{i+1,i+2}: carries the factor at site i+1 to site j
    s = identity(d**n)
    for k in range(i + 1, j):
        s = swap_operator(k, k + 1, n, d) @ s
    return s


def embed_pair(r, pair: SitePair) -> np.ndarray:
    """Embed ``r`` on sites (pair.i, pair.j).

    Adjacent pairs are embedded directly. Otherwise the adjacent copy on
    (i, i+1) is conjugated by the chain of adjacent transpositions that moves
    factor i+1 to j; for (1, 3) on three sites this is ``P23 R12 P23``.
    """
    d = pair.local_dim
    adjacent = embed_adjacent(r, pair.i, pair.n, d)
    if pair.j == pair.i + 1:
        return adjacent
    s = _relocation(pair.i, pair.j, pair.n, d)
    return s @ adjacent @ s.T


def cyclic_shift(n: int, d: int = 2) -> np.ndarray:
    """Translation operator moving the factor at site k to site k+1 (mod n)."""
    dim = check_dim(d**n)
    labels = np.arange(dim).reshape((d,) * n)
    targets = np.moveaxis(labels, n - 1, 0).ravel()
    out = np.zeros((dim, dim), dtype=np.complex128)
    out[np.arange(dim), targets] = 1.0
    return out
