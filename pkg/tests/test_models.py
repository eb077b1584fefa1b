import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import swap4, xxx_hamiltonian
from rigidity.legs import cyclic_shift
from rigidity.linalg import hermitian_eigenvalues
from rigidity.models import (
    CATALOG,
    ModelId,
    UnknownModelError,
    bond_hamiltonian,
    build_hamiltonian,
    build_r,
    haar_unitary,
    spectral_lift,
    total_sz,
)
from rigidity.yang_baxter import check_boundary_free

MODELS = [ModelId("xxx"), ModelId("xxz", 0.5), ModelId("xxz", 1.7)]


def test_parse_and_format():
    assert ModelId.parse("xxx").name == "xxx_rational"
    assert str(ModelId.parse("perturbed_swap:0.1")) == "perturbed_swap:0.1"
    assert ModelId.parse("random_gate:42").param == 42
    assert ModelId.parse("xxz").param == 0.5
    for token in CATALOG:
        assert str(ModelId.parse(str(ModelId.parse(token)))) == str(ModelId.parse(token))


@pytest.mark.parametrize("token", ["nope", "", "random_gate:abc", "perturbed_swap:x"])
def test_parse_rejects_unknown(token):
    with pytest.raises(UnknownModelError):
        ModelId.parse(token)


@pytest.mark.parametrize("token", ["random_gate", "perturbed_swap", "perturbed_swap:0"])
def test_parse_rejects_missing_parameters(token):
    with pytest.raises(ValueError):
        ModelId.parse(token)


def test_swap_equals_xxx_at_zero():
    assert np.array_equal(build_r(ModelId("swap")).at(), build_r(ModelId("xxx")).at(0))
    assert np.array_equal(build_r(ModelId("swap")).at(), swap4())


def test_perturbed_swap_entries():
    m = build_r(ModelId("perturbed_swap", 0.1)).at()
    diff = m - swap4()
    assert diff[1, 1] == 0.1 and np.count_nonzero(diff) == 1


def test_haar_unitary_reproducible_and_unitary():
    u = haar_unitary(4, 42)
    assert np.array_equal(u, haar_unitary(4, 42))
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-13)
    assert not np.allclose(u, haar_unitary(4, 43))


def test_xxz_reduces_to_swap_times_c_at_zero():
    r = build_r(ModelId("xxz", 0.5))
    m = r.at(0)
    assert np.allclose(m / m[1, 2], swap4(), atol=1e-14)


@pytest.mark.parametrize("token,passes", [
    ("identity", True), ("swap", True), ("xxx", True), ("xxz:0.5", True), ("xxz:2.0", True),
    ("perturbed_swap:0.1", False), ("perturbed_xxx:0.1", False), ("random_gate:42", False),
])
def test_catalog_ybe_verdicts(token, passes):
    assert check_boundary_free(build_r(ModelId.parse(token))).passes is passes


def test_spectral_lift_of_swap_is_xxx():
    lifted = spectral_lift(build_r(ModelId("swap")))
    assert np.array_equal(lifted.at(0.5), build_r(ModelId("xxx")).at(0.5))


def test_xxx_hamiltonian_matches_oracle():
    for n in (2, 3, 4, 5):
        for periodic in (True, False):
            h = build_hamiltonian(ModelId("xxx"), n, periodic)
            assert np.allclose(h, xxx_hamiltonian(n, periodic), atol=1e-14)


def test_small_spectra():
    assert np.allclose(hermitian_eigenvalues(build_hamiltonian(ModelId("xxx"), 2)), [-4, 0, 0, 0])
    ev = hermitian_eigenvalues(build_hamiltonian(ModelId("xxx"), 3))
    assert np.allclose(ev, [-3] * 4 + [0] * 4, atol=1e-13)


def test_xxz_at_isotropic_point_is_xxx():
    h = build_hamiltonian(ModelId("xxz", 1.0), 4)
    assert np.allclose(h, build_hamiltonian(ModelId("xxx"), 4), atol=1e-14)


def test_no_hamiltonian_for_constant_models():
    with pytest.raises(ValueError):
        bond_hamiltonian(ModelId("swap"))


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(MODELS), st.integers(2, 7), st.booleans())
def test_hamiltonian_hermitian(model, n, periodic):
    h = build_hamiltonian(model, n, periodic)
    assert np.linalg.norm(h - h.conj().T) <= 1e-12


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(MODELS), st.integers(2, 7))
def test_hamiltonian_translation_invariant(model, n):
    h = build_hamiltonian(model, n, periodic=True)
    t = cyclic_shift(n)
    assert np.linalg.norm(t @ h @ t.T - h) <= 1e-12


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(MODELS), st.integers(2, 7), st.booleans())
def test_hamiltonian_conserves_magnetization(model, n, periodic):
    h = build_hamiltonian(model, n, periodic)
    sz = total_sz(n)
    assert np.linalg.norm(h @ sz - sz @ h) <= 1e-12
