"""Finite-dimensional checks of R-matrix rigidity: Yang-Baxter defects,
interaction-depth filtrations, commuting transfer matrices and Bethe roots."""

from .bethe import BetheSolution, SpectrumComparison, bethe_residual, bethe_solve, compare_spectrum
from .config import DEFAULT_TOLERANCES, Tolerances
from .filtration import FiltrationReport, GeneratorSet, boundary_scan, filtration_dims, finite_presentation_proxy
from .legs import SitePair, embed_adjacent, embed_pair, swap_operator
from .linalg import OperatorSpan, frobenius_norm, hermitian_eigenvalues, kron, span_rank
from .models import ModelId, build_hamiltonian, build_r
from .transfer import monodromy, transfer_commutator_norm, transfer_matrix
from .yang_baxter import (
    RMatrixSpec,
    YbeReport,
    check_boundary_free,
    pairwise_generation_rank,
    yb_defect_constant,
    yb_defect_spectral,
)

__version__ = "0.1.0"
