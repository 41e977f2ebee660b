import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from majorana_lab.clifford import (
    METRIC,
    PAULI,
    STANDARD,
    DiracRep,
    anticommutator,
    apply_matrix,
    bilinear_scalar,
    clifford_residual,
    cross_density,
    gamma0_rotation,
    majorana_identity_residual,
    rotate_gamma0,
    scalar_density,
    standard_rep,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
spinor_values = arrays(np.float64, (2, 4), elements=finite).map(lambda a: a[0] + 1j * a[1])


def test_gamma0_is_diagonal():
    assert np.array_equal(STANDARD.gamma[0], np.diag([1, 1, -1, -1]))


def test_gamma2_on_first_basis_vector():
    e1 = np.array([1, 0, 0, 0], dtype=complex)
    assert np.array_equal(STANDARD.gamma[2] @ e1, [0, 0, 0, -1j])


def test_gamma_j_block_structure():
    for j in range(3):
        g = STANDARD.gamma[j + 1]
        assert np.array_equal(g[:2, 2:], PAULI[j])
        assert np.array_equal(g[2:, :2], -PAULI[j])
        assert not g[:2, :2].any() and not g[2:, 2:].any()


@pytest.mark.parametrize("mu,nu,expected", [(0, 0, 2), (1, 1, -2), (2, 2, -2), (3, 3, -2)])
def test_diagonal_anticommutators(mu, nu, expected):
    assert np.array_equal(anticommutator(STANDARD, mu, nu), expected * np.eye(4))


def test_off_diagonal_anticommutators_vanish():
    for mu in range(4):
        for nu in range(4):
            if mu != nu:
                assert not np.any(anticommutator(STANDARD, mu, nu))


def test_anticommutator_index_errors():
    with pytest.raises(IndexError):
        anticommutator(STANDARD, 0, 4)
    with pytest.raises(IndexError):
        majorana_identity_residual(STANDARD, -1)


def test_all_clifford_residuals_at_machine_zero():
    assert max(clifford_residual(STANDARD, m, n) for m in range(4) for n in range(4)) <= 1e-14


def test_majorana_identity_entrywise():
    # independent check with explicit complex conjugation of every entry
    g2 = STANDARD.gamma[2]
    for mu in range(4):
        g = STANDARD.gamma[mu]
        conj = np.array([[complex(v).conjugate() for v in row] for row in g])
        assert np.max(np.abs(g @ g2 + g2 @ conj)) <= 1e-14
        assert majorana_identity_residual(STANDARD, mu) <= 1e-14


def test_gamma2_properties():
    g2 = STANDARD.gamma[2]
    assert not g2.real.any()
    assert np.allclose(g2 @ g2, -np.eye(4), atol=1e-15)
    assert np.allclose(g2 @ np.conj(g2), np.eye(4), atol=1e-15)


def test_hermiticity():
    g = STANDARD.gamma
    assert np.array_equal(g[0], g[0].conj().T)
    for j in (1, 2, 3):
        assert np.array_equal(g[j], -g[j].conj().T)


def test_alpha_beta():
    rep = standard_rep()
    for j in range(3):
        block = rep.alpha[j]
        assert np.array_equal(block[:2, 2:], PAULI[j]) and np.array_equal(block[2:, :2], PAULI[j])
    assert np.array_equal(rep.beta, rep.gamma[0])
    assert np.array_equal(rep.metric, METRIC)


def test_rep_shape_validated():
    with pytest.raises(ValueError):
        DiracRep(np.zeros((3, 4, 4)))


@pytest.mark.parametrize(
    "psi,expected",
    [((1, 0, 0, 1), 0.0), ((1, 0, 0, 0), 1.0), ((0, 0, 1, 0), -1.0)],
)
def test_bilinear_examples(psi, expected):
    v = np.array(psi, dtype=complex)
    assert bilinear_scalar(v, v) == expected


@given(spinor_values)
def test_bilinear_self_is_real(psi):
    val = bilinear_scalar(psi, psi)
    assert abs(val.imag) <= 1e-12 * max(1.0, np.vdot(psi, psi).real)


@given(spinor_values, spinor_values)
def test_cross_density_is_polarisation(phi, chi):
    psi = phi + chi
    lhs = scalar_density(psi)
    rhs = scalar_density(phi) + scalar_density(chi) + cross_density(phi, chi)
    scale = max(1.0, np.vdot(psi, psi).real, np.vdot(phi, phi).real + np.vdot(chi, chi).real)
    assert abs(lhs - rhs) <= 1e-12 * scale


@given(spinor_values)
def test_scalar_density_matches_bilinear(psi):
    assert abs(scalar_density(psi) - bilinear_scalar(psi, psi).real) <= 1e-12 * max(1.0, np.vdot(psi, psi).real)


@given(st.floats(-50, 50, allow_nan=False))
def test_gamma0_rotation_unitary_and_explicit(theta):
    U = gamma0_rotation(theta)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-14)
    expected = np.diag([np.exp(1j * theta)] * 2 + [np.exp(-1j * theta)] * 2)
    assert np.allclose(U, expected, atol=1e-15)


def test_gamma0_rotation_rejects_nonfinite():
    with pytest.raises(ValueError):
        gamma0_rotation(float("nan"))


def test_rotate_gamma0_pointwise_matches_matrix(rng):
    psi = rng.standard_normal((4, 3, 3, 3)) + 1j * rng.standard_normal((4, 3, 3, 3))
    theta = rng.standard_normal((3, 3, 3))
    out = rotate_gamma0(theta, psi)
    for idx in np.ndindex(3, 3, 3):
        ref = gamma0_rotation(theta[idx]) @ psi[(slice(None),) + idx]
        assert np.allclose(out[(slice(None),) + idx], ref, atol=1e-14)
    # rotation leaves the scalar density untouched
    assert np.allclose(scalar_density(out), scalar_density(psi), atol=1e-13)


def test_apply_matrix_identity(rng):
    psi = rng.standard_normal((4, 2, 2, 2)) + 0j
    assert np.array_equal(apply_matrix(np.eye(4), psi), psi)
