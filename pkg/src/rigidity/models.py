"""Catalog of two-site R-matrices and chain Hamiltonians.

Conventions (local basis |0>, |1>; two-site index ``2*a + b``):

* ``swap``            P with P(e_a (x) e_b) = e_b (x) e_a
* ``xxx_rational``    R(u) = u*I + P, so R(0) = P
* ``xxz_trig``        six-vertex R(u) with a = sinh(u + eta), b = sinh(u),
                      c = sinh(eta), anisotropy Delta = cosh(eta); R(0) = c*P
* ``perturbed_swap``  P + eps * E11 (x) E22 (the diagonal entry at index 1)
* ``perturbed_xxx``   u*I + P + eps * E11 (x) E22, the spectral companion
* ``random_gate``     Haar-distributed 4x4 unitary from a seeded generator

Bond Hamiltonians: XXX uses h = P - I; XXZ uses
h = (sx sx + sy sy + Delta (sz sz - I)) / 2, which reduces to P - I at Delta = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .legs import SitePair, embed_pair
from .linalg import identity, kron
from .yang_baxter import DEFAULT_GRID, RMatrixSpec

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

NAMES = ("identity", "swap", "xxx_rational", "xxz_trig", "perturbed_swap", "perturbed_xxx", "random_gate")
ALIASES = {"xxx": "xxx_rational", "xxz": "xxz_trig"}
DEFAULT_ANISOTROPY = 0.5


class UnknownModelError(ValueError):
    pass


def swap_matrix(d: int = 2) -> np.ndarray:
    p = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            p[b * d + a, a * d + b] = 1.0
    return p


def perturbation(d: int = 2) -> np.ndarray:
    """E11 (x) E22 in 1-based matrix-unit notation: projector on |0>|1>."""
    e = np.zeros((d * d, d * d), dtype=np.complex128)
    e[1, 1] = 1.0
    return e


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def xxz_r(u: complex, delta: float) -> np.ndarray:
    eta = np.arccosh(complex(delta))
    a, b, c = np.sinh(u + eta), np.sinh(u), np.sinh(eta)
    return np.array([[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]], dtype=np.complex128)


@dataclass(frozen=True)
class ModelId:
    name: str
    param: float | int | None = None
    local_dim: int = 2

    def __post_init__(self):
        name = ALIASES.get(self.name, self.name)
        if name not in NAMES:
            raise UnknownModelError(f"unknown model {self.name!r}; choose from {', '.join(NAMES)}")
        object.__setattr__(self, "name", name)
        if name in ("perturbed_swap", "perturbed_xxx"):
            if self.param is None or float(self.param) == 0.0:
                raise ValueError(f"{name} needs a nonzero epsilon")
        if name == "random_gate":
            if self.param is None:
                raise ValueError("random_gate needs a recorded seed")
            object.__setattr__(self, "param", int(self.param))
        if name == "xxz_trig" and self.param is None:
            object.__setattr__(self, "param", DEFAULT_ANISOTROPY)
        if self.local_dim != 2:
            raise ValueError("all catalog models have local_dim 2")

    @classmethod
    def parse(cls, text: str) -> "ModelId":
        """Parse ``name`` or ``name:param``, e.g. ``perturbed_swap:0.1``, ``random_gate:42``."""
        name, sep, raw = text.strip().partition(":")
        if not name:
            raise UnknownModelError(f"empty model token in {text!r}")
        if not sep:
            return cls(name)
        canonical = ALIASES.get(name, name)
        try:
            param = int(raw) if canonical == "random_gate" else float(raw)
        except ValueError:
            raise UnknownModelError(f"bad parameter {raw!r} for model {name!r}") from None
        return cls(name, param)

    def __str__(self) -> str:
        return self.name if self.param is None else f"{self.name}:{self.param}"

    @property
    def is_spectral(self) -> bool:
        return self.name in ("xxx_rational", "xxz_trig", "perturbed_xxx")


def build_r(model: ModelId, sample_params=DEFAULT_GRID) -> RMatrixSpec:
    p = swap_matrix()
    label = str(model)
    if model.name == "identity":
        return RMatrixSpec.constant(identity(4), name=label)
    if model.name == "swap":
        return RMatrixSpec.constant(p, name=label)
    if model.name == "perturbed_swap":
        return RMatrixSpec.constant(p + float(model.param) * perturbation(), name=label)
    if model.name == "random_gate":
        return RMatrixSpec.constant(haar_unitary(4, model.param), name=label)
    if model.name == "xxx_rational":
        return RMatrixSpec.spectral(lambda u: u * identity(4) + p, sample_params=sample_params, name=label)
    if model.name == "perturbed_xxx":
        eps = float(model.param)
        return RMatrixSpec.spectral(lambda u: u * identity(4) + p + eps * perturbation(),
                                    sample_params=sample_params, name=label)
    delta = float(model.param)
    return RMatrixSpec.spectral(lambda u: xxz_r(u, delta), sample_params=sample_params, name=label)


def spectral_lift(r: RMatrixSpec, sample_params=DEFAULT_GRID) -> RMatrixSpec:
    """Spectral family ``u -> u*I + R`` for a constant R; spectral specs pass through.

    For R = P this is the rational XXX family, so a constant model can be put
    through the transfer-matrix commutation test on the same footing.
    """
    if r.kind == "spectral":
        return r
    m = r.matrix
    eye = identity(m.shape[0])
    return RMatrixSpec.spectral(lambda u: u * eye + m, r.local_dim, sample_params, name=r.name)


def bond_hamiltonian(model: ModelId) -> np.ndarray:
    if model.name == "xxx_rational":
        return swap_matrix() - identity(4)
    if model.name == "xxz_trig":
        delta = float(model.param)
        return 0.5 * (kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y)
                      + delta * (kron(SIGMA_Z, SIGMA_Z) - identity(4)))
    raise ValueError(f"no Hamiltonian for model {model.name!r}; use xxx_rational or xxz_trig")


def build_hamiltonian(model: ModelId, n: int, periodic: bool = True) -> np.ndarray:
    """Sum of bond terms over (1,2), ..., (n-1,n), plus (n,1) when periodic.

    At n = 2 the periodic closure repeats the single bond, giving ``2 h``.
    """
    h = bond_hamiltonian(model)
    if n < 2:
        raise ValueError("need at least two sites")
    bonds = [SitePair(i, i + 1, n) for i in range(1, n)]
    if periodic:
        # h is swap-symmetric, so the bond (n, 1) is the (1, n) embedding
        bonds.append(SitePair(1, n, n))
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for pair in bonds:
        out += embed_pair(h, pair)
    return out


def total_sz(n: int) -> np.ndarray:
    """Sum of sigma^z over all sites."""
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for i in range(n):
        out += kron(kron(identity(2**i), SIGMA_Z), identity(2 ** (n - i - 1)))
    return out


CATALOG = ("identity", "swap", "xxx", "xxz:0.5", "perturbed_swap:0.1", "perturbed_xxx:0.1", "random_gate:42")
