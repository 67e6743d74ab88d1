"""States, operators, bases, and their validation rules."""

import numpy as np
import pytest

from cval_lab import (
    DimensionMismatch,
    HermiticityError,
    MixedEnsemble,
    NormalizationError,
    OperatorMatrix,
    OrthonormalBasis,
    StateVector,
    anticommutator,
    born_probabilities,
    commutator,
    density_matrix,
    eigenbasis,
    expectation,
    haar_basis,
    haar_state,
    kron_op,
    kron_state,
    product_basis,
    random_hermitian,
    random_operator,
    validate_density,
)


def test_state_must_be_normalized():
    with pytest.raises(NormalizationError):
        StateVector(np.array([1.0, 1.0], dtype=complex))


def test_from_unnormalized_rescales():
    psi = StateVector.from_unnormalized(np.array([3.0, 4.0], dtype=complex))
    assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-14


def test_overlap_is_conjugate_linear_in_first_argument(rng):
    a = haar_state(4, rng)
    b = haar_state(4, rng)
    assert abs(a.overlap(b) - np.conj(b.overlap(a))) < 1e-14
    assert abs(a.overlap(b) - np.vdot(a.amplitudes, b.amplitudes)) < 1e-14


def test_projector_is_idempotent_and_hermitian(rng):
    psi = haar_state(3, rng)
    p = psi.projector()
    np.testing.assert_allclose(p.entries @ p.entries, p.entries, atol=1e-14)
    np.testing.assert_allclose(p.entries, p.entries.conj().T, atol=1e-14)
    assert abs(np.trace(p.entries) - 1.0) < 1e-14


def test_hermitian_detection(rng):
    assert random_hermitian(4, rng).hermitian_hint is True
    assert random_operator(4, rng).hermitian_hint is False


def test_false_hermitian_hint_is_rejected(rng):
    m = random_operator(3, rng).entries
    assert np.max(np.abs(m - m.conj().T)) > 1e-6
    with pytest.raises(HermiticityError):
        OperatorMatrix(m, hermitian_hint=True)


def test_dagger_reverses_products(rng):
    a = random_operator(3, rng)
    b = random_operator(3, rng)
    lhs = (a @ b).dagger().entries
    rhs = (b.dagger() @ a.dagger()).entries
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)


def test_bracket_conventions_for_general_operators(rng):
    # For non-Hermitian inputs the brackets are AB + B^dag A^dag and
    # AB - B^dag A^dag, not the textbook forms.
    a = random_operator(3, rng)
    b = random_operator(3, rng)
    ab = a.entries @ b.entries
    cross = b.entries.conj().T @ a.entries.conj().T
    np.testing.assert_allclose(anticommutator(a, b).entries, ab + cross, atol=1e-14)
    np.testing.assert_allclose(commutator(a, b).entries, ab - cross, atol=1e-14)


def test_brackets_reduce_to_textbook_forms_for_hermitian(rng):
    a = random_hermitian(3, rng)
    b = random_hermitian(3, rng)
    np.testing.assert_allclose(
        anticommutator(a, b).entries, a.entries @ b.entries + b.entries @ a.entries, atol=1e-13
    )
    np.testing.assert_allclose(
        commutator(a, b).entries, a.entries @ b.entries - b.entries @ a.entries, atol=1e-13
    )


def test_basis_requires_orthonormal_columns():
    cols = np.array([[1.0, 0.8], [0.0, 0.6]], dtype=complex)  # normalized, not orthogonal
    with pytest.raises(NormalizationError):
        OrthonormalBasis(cols)


def test_basis_requires_completeness():
    cols = np.eye(3, dtype=complex)[:, :2]
    with pytest.raises((NormalizationError, DimensionMismatch)):
        OrthonormalBasis(cols)


def test_basis_from_states_roundtrip(rng):
    basis = haar_basis(4, rng)
    rebuilt = OrthonormalBasis.from_states(basis.vectors)
    np.testing.assert_allclose(rebuilt.column_matrix, basis.column_matrix, atol=1e-14)


def test_eigenbasis_reconstructs_operator(rng):
    op = random_hermitian(5, rng)
    basis, evals = eigenbasis(op)
    v = basis.column_matrix
    np.testing.assert_allclose(v @ np.diag(evals) @ v.conj().T, op.entries, atol=1e-12)
    assert np.all(np.diff(evals) >= -1e-12)


def test_eigenbasis_is_deterministic(rng):
    op = random_hermitian(6, rng)
    b1, e1 = eigenbasis(op)
    b2, e2 = eigenbasis(op)
    assert np.array_equal(b1.column_matrix, b2.column_matrix)
    assert np.array_equal(e1, e2)


def test_eigenbasis_handles_degeneracy(rng):
    # Two-fold degenerate spectrum; the returned columns must still be an
    # orthonormal eigenbasis and the call must be reproducible.
    u = haar_basis(4, rng).column_matrix
    op = OperatorMatrix(u @ np.diag([1.0, 1.0, 2.0, 3.0]) @ u.conj().T)
    basis, evals = eigenbasis(op)
    v = basis.column_matrix
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(v @ np.diag(evals) @ v.conj().T, op.entries, atol=1e-12)
    again, _ = eigenbasis(op)
    assert np.array_equal(v, again.column_matrix)


def test_eigenbasis_phase_convention(rng):
    op = random_hermitian(4, rng)
    v = eigenbasis(op)[0].column_matrix
    for n in range(4):
        col = v[:, n]
        lead = col[np.flatnonzero(np.abs(col) > 1e-8)[0]]
        assert lead.real > 0.0 and abs(lead.imag) < 1e-12


def test_born_probabilities_sum_to_one(rng):
    basis = haar_basis(5, rng)
    psi = haar_state(5, rng)
    pr = born_probabilities(basis, psi)
    assert abs(pr.sum() - 1.0) < 1e-12
    direct = np.abs(basis.column_matrix.conj().T @ psi.amplitudes) ** 2
    np.testing.assert_allclose(pr, direct, atol=1e-14)


def test_expectation_matches_quadratic_form(rng):
    op = random_operator(4, rng)
    psi = haar_state(4, rng)
    oracle = np.vdot(psi.amplitudes, op.entries @ psi.amplitudes)
    assert abs(expectation(op, psi) - oracle) < 1e-13


def test_density_matrix_properties(rng):
    states = [haar_state(3, rng) for _ in range(4)]
    ens = MixedEnsemble((0.1, 0.2, 0.3, 0.4), tuple(states))
    rho = density_matrix(ens)
    validate_density(rho)
    assert abs(np.trace(rho.entries) - 1.0) < 1e-12
    evals = np.linalg.eigvalsh(rho.entries)
    assert evals.min() > -1e-12


def test_validate_density_rejects_nonpositive():
    bad = OperatorMatrix(np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises((NormalizationError, ValueError)):
        validate_density(bad)


def test_mixed_ensemble_rejects_bad_weights(rng):
    states = (haar_state(2, rng), haar_state(2, rng))
    with pytest.raises(NormalizationError):
        MixedEnsemble((0.7, 0.7), states)


def test_kron_structure(rng):
    a, b = haar_state(2, rng), haar_state(3, rng)
    joint = kron_state(a, b)
    np.testing.assert_allclose(joint.amplitudes, np.kron(a.amplitudes, b.amplitudes), atol=1e-14)

    oa, ob = random_operator(2, rng), random_operator(3, rng)
    np.testing.assert_allclose(kron_op(oa, ob).entries, np.kron(oa.entries, ob.entries), atol=1e-14)

    ba, bb = haar_basis(2, rng), haar_basis(3, rng)
    joint_basis = product_basis(ba, bb)
    np.testing.assert_allclose(
        joint_basis.column_matrix, np.kron(ba.column_matrix, bb.column_matrix), atol=1e-14
    )


def test_operator_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        random_operator(2, rng) @ random_operator(3, rng)


def test_fingerprints_track_content(rng):
    psi = haar_state(3, rng)
    phi = haar_state(3, rng)
    assert psi.fingerprint != phi.fingerprint
    assert psi.fingerprint == StateVector(psi.amplitudes.copy()).fingerprint
