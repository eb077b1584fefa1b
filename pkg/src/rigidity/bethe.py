"""Bethe equations of the periodic XXX chain and their check against exact diagonalization.

Conventions, fixed once:

* rapidities enter through ``z(l) = (l + i/2) / (l - i/2)`` and the two-body
  factor ``S(x) = (x + i) / (x - i)``; the equations read
  ``z(l_j)^N = prod_{k != j} S(l_j - l_k)``;
* bond Hamiltonian h = P - I, for which one magnon of rapidity l carries
  energy ``-1 / (l^2 + 1/4)`` (equal to ``-2 (1 - cos k)`` with ``z = e^{ik}``);
* solutions are highest-weight states; states lower in an SU(2) multiplet
  correspond to extra roots at infinity and are obtained from solutions with
  fewer magnons.

The singular pair ``{+i/2, -i/2}`` is a pole of the equations; for even N it is
kept as a regularized solution with energy -2 and momentum phase -1.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .config import DEFAULT_TOLERANCES
from .linalg import hermitian_eigenvalues
from .models import ModelId, build_hamiltonian

log = logging.getLogger(__name__)

HALF_I = 0.5j
POLE_TOL = 1e-6
TOL_SEP = 1e-6
INFINITY_CUTOFF = 1e6
COMPLEX_DELTAS = (0.1, 0.3)


class SectorError(RuntimeError):
    pass


def _check_roots(roots: np.ndarray) -> None:
    if np.any(np.abs(roots - HALF_I) < 1e-12) or np.any(np.abs(roots + HALF_I) < 1e-12):
        raise ValueError("root at +-i/2 is a pole of the Bethe equations")
    if len(roots) > 1:
        gaps = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots))
        if gaps.min() <= 1e-12:
            raise ValueError("Bethe roots must be pairwise distinct")


def bethe_residual(roots, n_sites: int) -> list:
    """``z(l_j)^N - prod_{k != j} S(l_j - l_k)`` for every root."""
    lam = np.asarray(roots, dtype=np.complex128).ravel()
    if n_sites < 2:
        raise ValueError("need N >= 2")
    if lam.size == 0:
        return []
    _check_roots(lam)
    out = []
    for j, lj in enumerate(lam):
        lhs = ((lj + HALF_I) / (lj - HALF_I)) ** n_sites
        rhs = np.prod([(lj - lk + 1j) / (lj - lk - 1j) for k, lk in enumerate(lam) if k != j])
        out.append(complex(lhs - rhs))
    return out


def magnon_energy(roots) -> complex:
    lam = np.asarray(roots, dtype=np.complex128)
    return complex(-np.sum(1.0 / (lam**2 + 0.25)))


def momentum_phase(roots) -> complex:
    lam = np.asarray(roots, dtype=np.complex128)
    return complex(np.prod((lam + HALF_I) / (lam - HALF_I)))


@dataclass(frozen=True)
class BetheSolution:
    """One highest-weight solution.

    ``residual`` is the relative form ``max_j |z_j^N / prod S_jk - 1|``, which
    stays meaningful for string roots where both sides are large.
    """

    n_sites: int
    n_magnons: int
    roots: tuple
    residual: float
    energy: float
    momentum_phase: complex
    singular: bool = False
    seed: str = ""

    def to_dict(self) -> dict:
        return {
            "roots": [[z.real, z.imag] for z in self.roots],
            "energy": self.energy,
            "residual": self.residual,
            "magnons": self.n_magnons,
            "momentum_phase": [self.momentum_phase.real, self.momentum_phase.imag],
            "singular": self.singular,
        }


@dataclass(frozen=True)
class BetheResult:
    n_sites: int
    n_magnons: int
    solutions: tuple
    expected: int
    seeds_tried: int = 0

    @property
    def coverage(self) -> str:
        return f"{len(self.solutions)}/{self.expected}"

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __getitem__(self, k):
        return self.solutions[k]

    def to_dict(self) -> dict:
        return {
            "N": self.n_sites,
            "M": self.n_magnons,
            "solutions": [s.to_dict() for s in self.solutions],
            "coverage": self.coverage,
            "seeds_tried": self.seeds_tried,
        }


# -- log-form equations --------------------------------------------------------

def _log_form(lam: np.ndarray, n: int):
    """Log-form equations and their Jacobian (principal branches)."""
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, 1.0)  # placeholder, masked below
    mask = ~np.eye(len(lam), dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        two_body = np.where(mask, np.log(diff + 1j) - np.log(diff - 1j), 0.0)
        f = n * (np.log(lam + HALF_I) - np.log(lam - HALF_I)) - two_body.sum(axis=1)
        d_two = np.where(mask, 1.0 / (diff + 1j) - 1.0 / (diff - 1j), 0.0)
        jac = d_two.copy()
        np.fill_diagonal(jac, n * (1.0 / (lam + HALF_I) - 1.0 / (lam - HALF_I)) - d_two.sum(axis=1))
    return f, jac


def _wrap(f: np.ndarray) -> np.ndarray:
    return f - 2j * np.pi * np.round(f.imag / (2 * np.pi))


def _real_form(lam: np.ndarray, n: int, quantum: np.ndarray):
    diff = lam[:, None] - lam[None, :]
    phi = 2 * n * np.arctan(2 * lam) - 2 * np.arctan(diff).sum(axis=1) - 2 * np.pi * quantum
    kern = 2.0 / (1.0 + diff**2)
    np.fill_diagonal(kern, 0.0)
    jac = kern.copy()
    np.fill_diagonal(jac, 4 * n / (1 + 4 * lam**2) - kern.sum(axis=1))
    return phi, jac


def _newton(func, x0: np.ndarray, max_iter: int = 200, tol: float = 1e-13):
    x = x0.copy()
    fx, jac = func(x)
    err = np.linalg.norm(fx)
    for _ in range(max_iter):
        if not np.isfinite(err):
            return None
        if err < tol:
            return x
        try:
            step = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        while t > 1e-6:
            trial = x + t * step
            f_trial, j_trial = func(trial)
            e_trial = np.linalg.norm(f_trial)
            if np.isfinite(e_trial) and e_trial < err:
                break
            t *= 0.5
        else:
            return x if err < 1e-10 else None
        x, fx, jac, err = trial, f_trial, j_trial, e_trial
    return x if err < 1e-10 else None


# -- seeds -----------------------------------------------------------------------

def quantum_number_sets(n: int, m: int):
    """Admissible sets of distinct Bethe quantum numbers for real solutions."""
    top = (n - m - 1) / 2
    if top < 0:
        return []
    values = np.arange(-top, top + 0.5, 1.0)
    return [np.array(c) for c in itertools.combinations(values, m)]


def cot_grid(n: int) -> np.ndarray:
    """Single-magnon rapidities ``cot(pi m / N) / 2``, m = 1 .. N-1."""
    return np.array([0.5 / np.tan(np.pi * k / n) for k in range(1, n)])


def _complex_seeds(n: int, m: int, limit: int = 400):
    grid = np.round(cot_grid(n), 14)
    centers = np.unique(np.concatenate([grid, [0.0]]))
    rest_pool = np.unique(grid)
    seeds = []
    for x in centers:
        for delta in COMPLEX_DELTAS:
            pair = [x + HALF_I * (1 + delta), x - HALF_I * (1 + delta)]
            for rest in itertools.combinations(rest_pool, m - 2):
                if any(abs(r - x) < 1e-9 for r in rest):
                    continue
                seeds.append((np.array(pair + list(rest), dtype=np.complex128), f"pair x={x:.6g} delta={delta}"))
                if len(seeds) >= limit:
                    return seeds
    return seeds


# -- acceptance ------------------------------------------------------------------

def _canonical(lam: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.round(lam.imag, 8), np.round(lam.real, 8)))
    return lam[order]


def _accept(lam, n: int, seed: str) -> BetheSolution | None:
    if lam is None or not np.all(np.isfinite(lam)):
        return None
    lam = np.where(np.abs(lam.imag) < 1e-12, lam.real + 0j, lam)
    if np.any(np.abs(lam) > INFINITY_CUTOFF):
        return None
    if np.any(np.abs(lam - HALF_I) < POLE_TOL) or np.any(np.abs(lam + HALF_I) < POLE_TOL):
        return None
    if len(lam) > 1:
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(len(lam))
        if gaps.min() <= TOL_SEP:
            return None
        # S(l_j - l_k) has a pole when two roots differ by exactly i
        if np.any(np.abs(lam[:, None] - lam[None, :] - 1j) < POLE_TOL):
            return None
    f, _ = _log_form(lam, n)
    residual = float(np.max(np.abs(np.exp(_wrap(f)) - 1.0)))
    energy = magnon_energy(lam)
    if abs(energy.imag) > 1e-8 * max(1.0, abs(energy.real)):
        return None
    lam = _canonical(lam)
    return BetheSolution(n, len(lam), tuple(complex(z) for z in lam), residual,
                         float(energy.real), momentum_phase(lam), seed=seed)


def _same(a: BetheSolution, b: BetheSolution, tol: float = 1e-7) -> bool:
    if len(a.roots) != len(b.roots):
        return False
    ra, rb = np.array(a.roots), np.array(b.roots)
    # permutation-invariant comparison via greedy nearest matching
    used = set()
    for z in ra:
        dists = [(abs(z - w), k) for k, w in enumerate(rb) if k not in used]
        dist, k = min(dists)
        if dist > tol:
            return False
        used.add(k)
    return True


def singular_pair_solution(n: int) -> BetheSolution:
    """Regularized ``{i/2, -i/2}``: energy -1 - 1 = -2 from the finite parts, momentum pi."""
    return BetheSolution(n, 2, (complex(0, -0.5), complex(0, 0.5)), 0.0, -2.0, complex(-1.0, 0.0),
                         singular=True, seed="singular pair")


def expected_count(n: int, m: int) -> int:
    """Number of highest-weight states with m magnons on n sites."""
    return comb(n, m) - (comb(n, m - 1) if m > 0 else 0)


def bethe_solve(n_sites: int, n_magnons: int, tol_residual: float = 1e-10,
                include_singular: bool = True) -> BetheResult:
    """Find highest-weight Bethe solutions from deterministic seeds.

    Real solutions come from every admissible set of quantum numbers, seeded
    on the cotangent grid; complex-pair seeds ``x +- i(1 + delta)/2`` search
    for strings with the branch-adaptive log form. Seeds that do not converge
    are dropped; fewer solutions than ``expected`` is not an error.
    """
    n, m = n_sites, n_magnons
    if n < 2 or n > 12:
        raise ValueError("N must lie in 2..12")
    if not 0 <= m <= n // 2:
        raise ValueError(f"need 0 <= M <= N/2, got M={m}, N={n}")
    expected = expected_count(n, m)
    if m == 0:
        vac = BetheSolution(n, 0, (), 0.0, 0.0, complex(1.0, 0.0), seed="vacuum")
        return BetheResult(n, 0, (vac,), expected, 1)

    found: list = []
    tried = 0

    def keep(sol):
        if sol is None or sol.residual > tol_residual:
            return
        if not any(_same(sol, s) for s in found):
            found.append(sol)

    for quantum in quantum_number_sets(n, m):
        tried += 1
        seed = 0.5 * np.tan(np.pi * quantum / n)
        x = _newton(lambda lam: _real_form(lam, n, quantum), seed)
        keep(_accept(None if x is None else x.astype(np.complex128), n, f"J={quantum.tolist()}"))

    if m >= 2:
        for seed, label in _complex_seeds(n, m):
            tried += 1

            def func(lam):
                f, jac = _log_form(lam, n)
                return _wrap(f), jac

            keep(_accept(_newton(func, seed), n, label))
        if include_singular and n % 2 == 0 and m == 2:
            found.append(singular_pair_solution(n))

    found.sort(key=lambda s: (s.energy, s.roots and np.angle(s.momentum_phase)))
    log.debug("N=%d M=%d: %d/%d solutions from %d seeds", n, m, len(found), expected, tried)
    return BetheResult(n, m, tuple(found), expected, tried)


# -- exact diagonalization cross-check -------------------------------------------

def sector_indices(n: int, m: int) -> np.ndarray:
    counts = np.array([bin(k).count("1") for k in range(2**n)])
    return np.flatnonzero(counts == m)


def sector_eigenvalues(n: int, m: int, tol: float = 1e-12) -> np.ndarray:
    """ED of the periodic XXX chain restricted to m flipped spins."""
    h = build_hamiltonian(ModelId("xxx_rational"), n, periodic=True)
    idx = sector_indices(n, m)
    others = np.setdiff1d(np.arange(2**n), idx)
    leak = np.linalg.norm(h[np.ix_(idx, others)]) if others.size else 0.0
    if leak > tol * max(1.0, np.linalg.norm(h)):
        raise SectorError(f"magnetization sector M={m} is not invariant (leak {leak:.3e})")
    return hermitian_eigenvalues(h[np.ix_(idx, idx)])


def distinct_levels(values, tol: float) -> list:
    levels: list = []
    for v in sorted(values):
        if levels and v - levels[-1][-1] <= tol:
            levels[-1].append(v)
        else:
            levels.append([v])
    return levels


@dataclass(frozen=True)
class SpectrumComparison:
    n_sites: int
    n_magnons: int
    ed_eigenvalues: tuple
    bethe: tuple = field(repr=False)
    matches: tuple = ()
    max_mismatch: float = 0.0
    collisions: tuple = ()
    levels_hit: int = 0
    levels_total: int = 0
    tolerance: float = DEFAULT_TOLERANCES.tol_spec

    @property
    def bethe_energies(self) -> list:
        return [s.energy for s in self.bethe]

    @property
    def coverage(self) -> str:
        return f"{self.levels_hit}/{self.levels_total}"

    @property
    def coverage_fraction(self) -> float:
        return self.levels_hit / self.levels_total if self.levels_total else 1.0

    @property
    def passes(self) -> bool:
        return self.max_mismatch <= self.tolerance and not self.collisions

    def to_dict(self) -> dict:
        return {
            "N": self.n_sites,
            "M": self.n_magnons,
            "ed": list(self.ed_eigenvalues),
            "bethe": [s.to_dict() for s in self.bethe],
            "matches": [list(mt) for mt in self.matches],
            "max_mismatch": self.max_mismatch,
            "coverage": self.coverage,
            "collisions": list(self.collisions),
            "passes": self.passes,
        }


def compare_spectrum(n_sites: int, n_magnons: int, periodic: bool = True,
                     tol_spec: float = DEFAULT_TOLERANCES.tol_spec,
                     include_descendants: bool = True) -> SpectrumComparison:
    """Match Bethe energies to the ED spectrum of the M-magnon sector.

    With ``include_descendants`` the Bethe side also carries the highest-weight
    solutions with fewer magnons, each standing for one descendant state in
    this sector. Matching is greedy nearest over distinct ED indices, in
    ascending Bethe energy; a Bethe energy whose nearest ED level has no free
    index left within tolerance is recorded as a collision.
    """
    if not periodic:
        raise ValueError("only the periodic chain is supported")
    if n_sites > 10:
        raise ValueError("full-sector ED is limited to N <= 10")
    ed = sector_eigenvalues(n_sites, n_magnons)
    lowest = 0 if include_descendants else n_magnons
    sols = []
    for mm in range(lowest, n_magnons + 1):
        sols.extend(bethe_solve(n_sites, mm).solutions)
    sols.sort(key=lambda s: (s.energy, s.n_magnons))

    free = np.ones(len(ed), dtype=bool)
    matches, collisions = [], []
    worst = 0.0
    for b, sol in enumerate(sols):
        gaps = np.abs(ed - sol.energy)
        if not free.any():
            collisions.append(b)
            continue
        j = int(np.argmin(np.where(free, gaps, np.inf)))
        if gaps.min() <= tol_spec and gaps[j] > tol_spec:
            collisions.append(b)
        free[j] = False
        matches.append((b, j, float(gaps[j])))
        worst = max(worst, float(gaps[j]))

    levels = distinct_levels(ed, tol_spec)
    hit_values = [ed[j] for _, j, delta in matches if delta <= tol_spec]
    hit = sum(1 for lev in levels if any(lev[0] - tol_spec <= v <= lev[-1] + tol_spec for v in hit_values))
    return SpectrumComparison(n_sites, n_magnons, tuple(float(x) for x in ed), tuple(sols), tuple(matches),
                              worst, tuple(collisions), hit, len(levels), tol_spec)
