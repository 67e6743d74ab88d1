"""Estimating one observable from strong measurement of another."""

import numpy as np
import pytest

from cval_lab import (
    HermiticityError,
    MomentError,
    PAULI,
    ProvenanceError,
    OverlapError,
    StateVector,
    XiModel,
    build_cval,
    classical_limit_scan,
    decompose_variance,
    eigenbasis,
    haar_state,
    ms_error,
    optimal_estimator,
    random_hermitian,
    random_operator,
    self_estimation_tradeoff,
    single_shot_error,
    weak_value_field,
)


def test_optimal_estimator_is_the_real_weak_value(rng):
    op_a, op_b = random_hermitian(4, rng), random_hermitian(4, rng)
    psi = haar_state(4, rng)
    basis_b, _ = eigenbasis(op_b)
    est = optimal_estimator(op_a, psi, op_b)
    wv = weak_value_field(op_a, psi, basis_b)
    assert est.basis_id == basis_b.fingerprint
    assert np.allclose(est.estimates[est.valid_mask], wv.re_parts[wv.valid_mask], atol=1e-14)


def test_optimal_error_equals_the_error_term(rng, model):
    for dim in (2, 3, 4, 6):
        op_a, op_b = random_hermitian(dim, rng), random_hermitian(dim, rng)
        psi = haar_state(dim, rng)
        est = optimal_estimator(op_a, psi, op_b)
        report = ms_error(est, op_a, psi, op_b, model)
        dec = decompose_variance(op_a, psi, eigenbasis(op_b)[0], model)
        assert abs(report.ms_error - dec.err_sq) < 1e-12
        assert report.bias < 1e-12
        assert report.optimal


def test_any_perturbation_costs_its_weight_times_delta_squared(rng, model):
    op_a, op_b = random_hermitian(3, rng), random_hermitian(3, rng)
    psi = haar_state(3, rng)
    basis_b, _ = eigenbasis(op_b)
    weights = np.abs(basis_b.column_matrix.conj().T @ psi.amplitudes) ** 2
    est = optimal_estimator(op_a, psi, op_b)
    base = ms_error(est, op_a, psi, op_b, model)
    for k in range(3):
        for delta in (0.05, -0.3, 1.7):
            moved = est.perturbed(delta, k)
            report = ms_error(moved, op_a, psi, op_b, model)
            assert abs(report.ms_error - base.ms_error - weights[k] * delta**2) < 1e-12
            assert abs(report.bias - weights[k] * abs(delta)) < 1e-12
            assert not report.optimal


def test_single_shot_error_is_the_xi_term(rng, model):
    op_a, op_b = random_hermitian(3, rng), random_hermitian(3, rng)
    psi = haar_state(3, rng)
    basis_b, _ = eigenbasis(op_b)
    field = build_cval(op_a, psi, basis_b, model)
    for n in range(3):
        for xi in (-1.0, 0.5):
            got = single_shot_error(field, n, xi)
            assert abs(got - xi * field.im_part[n]) < 1e-15


def test_single_shot_error_refuses_masked_outcomes(model):
    psi = StateVector(np.array([0.0, 1.0], dtype=complex))
    basis_z, _ = eigenbasis(PAULI["sigma_z"])
    field = build_cval(PAULI["sigma_x"], psi, basis_z, model)
    masked = int(np.flatnonzero(~field.valid_mask)[0])
    with pytest.raises(OverlapError):
        single_shot_error(field, masked, 1.0)


def test_estimation_requires_hermitian_pair(rng):
    op_a = random_operator(3, rng)
    op_b = random_hermitian(3, rng)
    psi = haar_state(3, rng)
    with pytest.raises(HermiticityError):
        optimal_estimator(op_a, psi, op_b)


def test_estimator_is_tied_to_its_basis(rng, model):
    op_a, op_b = random_hermitian(3, rng), random_hermitian(3, rng)
    other = random_hermitian(3, rng)
    psi = haar_state(3, rng)
    est = optimal_estimator(op_a, psi, op_b)
    with pytest.raises(ProvenanceError):
        ms_error(est, op_a, psi, other, model)


def test_tradeoff_bound_holds(rng, model):
    for dim in (2, 3, 5):
        op_a, op_b = random_hermitian(dim, rng), random_hermitian(dim, rng)
        psi = haar_state(dim, rng)
        report = self_estimation_tradeoff(op_a, op_b, psi, model)
        assert report.kind == "kennard_robertson"
        assert report.slack >= -1e-10


def test_qubit_spin_pair_saturates_the_tradeoff(rng, model):
    for _ in range(25):
        psi = haar_state(2, rng)
        report = self_estimation_tradeoff(PAULI["sigma_x"], PAULI["sigma_y"], psi, model)
        assert abs(report.slack) < 1e-12


def test_tradeoff_needs_unit_variance(rng):
    narrow = XiModel.binary(scale=0.5)
    op_a, op_b = random_hermitian(2, rng), random_hermitian(2, rng)
    psi = haar_state(2, rng)
    with pytest.raises(MomentError):
        self_estimation_tradeoff(op_a, op_b, psi, narrow)


def test_classical_scan_follows_the_square_law(rng):
    op_a, op_b = random_hermitian(4, rng), random_hermitian(4, rng)
    psi = haar_state(4, rng)
    scales = (0.0, 0.2, 0.5, 0.8, 1.0)
    pairs = classical_limit_scan(op_a, psi, op_b, scales)
    full = dict(pairs)[1.0]
    assert full > 0.0
    for s, err in pairs:
        assert abs(err - s**2 * full) < 1e-12
    assert dict(pairs)[0.0] == 0.0


def test_classical_scan_rejects_out_of_range_scales(rng):
    op_a, op_b = random_hermitian(2, rng), random_hermitian(2, rng)
    psi = haar_state(2, rng)
    with pytest.raises(ValueError):
        classical_limit_scan(op_a, psi, op_b, (0.5, 1.5))
    with pytest.raises(ValueError):
        classical_limit_scan(op_a, psi, op_b, (-0.1,))
