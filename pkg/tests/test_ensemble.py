"""Ensemble averages of c-values against independent matrix oracles."""

import numpy as np
import pytest

from cval_lab import (
    DimensionMismatch,
    HermiticityError,
    MixedEnsemble,
    MomentError,
    OperatorMatrix,
    PAULI,
    ProvenanceError,
    StateVector,
    XiModel,
    build_cval,
    commutator_average,
    covariance,
    density_matrix,
    equivalence_theorem,
    expectation,
    full_product_representation,
    haar_basis,
    haar_state,
    haar_state_min_overlap,
    kron_op,
    mean_cval,
    mixed_product_average,
    product_average,
    product_basis,
    random_hermitian,
    random_operator,
    rotated_qubit_basis,
    separable_xi_product,
    statistical_deviation,
    variance,
    verification_record,
    xi_weighted_mean,
)

SKEWED = XiModel.discrete((-np.sqrt(2.0), 1.0 / np.sqrt(2.0)), (1.0 / 3.0, 2.0 / 3.0))


def _pair(rng, dim, hermitian=False):
    make = random_hermitian if hermitian else random_operator
    op_a, op_b = make(dim, rng), make(dim, rng)
    basis = haar_basis(dim, rng)
    psi = haar_state_min_overlap(dim, basis, rng)
    return op_a, op_b, psi, basis


def test_mean_reproduces_real_part(rng, model):
    for dim in (2, 3, 5):
        op, _, psi, basis = _pair(rng, dim)
        field = build_cval(op, psi, basis, model)
        got = mean_cval(field, psi, basis, model).value
        assert abs(got - expectation(op, psi).real) < 1e-12


def test_xi_weighted_mean_reproduces_imag_part(rng, model):
    for dim in (2, 3, 5):
        op, _, psi, basis = _pair(rng, dim)
        field = build_cval(op, psi, basis, model)
        got = xi_weighted_mean(field, psi, basis, model).value
        assert abs(got - expectation(op, psi).imag) < 1e-12


def test_enumerated_equals_exact_for_finite_support(rng):
    for m in (XiModel.binary(), SKEWED):
        op, _, psi, basis = _pair(rng, 4)
        field = build_cval(op, psi, basis, m)
        exact = mean_cval(field, psi, basis, m, method="exact").value
        enum = mean_cval(field, psi, basis, m, method="enumerated").value
        assert abs(exact - enum) < 1e-13


def test_monte_carlo_lands_near_exact(rng, model):
    op, _, psi, basis = _pair(rng, 3)
    field = build_cval(op, psi, basis, model)
    exact = mean_cval(field, psi, basis, model).value
    mc = mean_cval(field, psi, basis, model, method="monte_carlo", samples=40_000, rng=rng)
    assert mc.mc_stderr is not None and mc.mc_stderr > 0.0
    assert abs(mc.value - exact) < 6.0 * mc.mc_stderr


def test_provenance_is_enforced(rng, model):
    op, _, psi, basis = _pair(rng, 3)
    field = build_cval(op, psi, basis, model)
    other = haar_state(3, rng)
    with pytest.raises(ProvenanceError):
        mean_cval(field, other, basis, model)
    with pytest.raises(ProvenanceError):
        mean_cval(field, psi, haar_basis(3, rng), model)


def test_identity_moments_are_required(rng):
    narrow = XiModel.binary(scale=0.5)
    op, _, psi, basis = _pair(rng, 3)
    field = build_cval(op, psi, basis, narrow)
    with pytest.raises(MomentError):
        mean_cval(field, psi, basis, narrow)


def test_product_average_matches_bracket_oracle(rng, model):
    for hermitian in (False, True):
        op_a, op_b, psi, basis = _pair(rng, 4, hermitian)
        fa = build_cval(op_a, psi, basis, model)
        fb = build_cval(op_b, psi, basis, model)
        got = product_average(fa, fb, psi, basis, model).value
        sym = (op_a.dagger() @ op_b + op_b.dagger() @ op_a).entries / 2.0
        oracle = np.vdot(psi.amplitudes, sym @ psi.amplitudes).real
        assert abs(got - oracle) < 1e-12


def test_commutator_average_matches_bracket_oracle(rng, model):
    for hermitian in (False, True):
        op_a, op_b, psi, basis = _pair(rng, 4, hermitian)
        fa = build_cval(op_a, psi, basis, model)
        fb = build_cval(op_b, psi, basis, model)
        got = commutator_average(fa, fb, psi, basis, model).value
        anti = (op_a.dagger() @ op_b - op_b.dagger() @ op_a).entries / 2j
        oracle = np.vdot(psi.amplitudes, anti @ psi.amplitudes).real
        assert abs(got - oracle) < 1e-12


def test_commutator_average_requires_vanishing_third_moment(rng):
    op_a, op_b, psi, basis = _pair(rng, 3)
    fa = build_cval(op_a, psi, basis, SKEWED)
    fb = build_cval(op_b, psi, basis, SKEWED)
    with pytest.raises(MomentError):
        commutator_average(fa, fb, psi, basis, SKEWED)


def test_skewed_model_still_serves_mean_and_product(rng):
    # Only the commutator identity needs the third moment to vanish.
    op_a, op_b, psi, basis = _pair(rng, 3)
    fa = build_cval(op_a, psi, basis, SKEWED)
    fb = build_cval(op_b, psi, basis, SKEWED)
    assert abs(mean_cval(fa, psi, basis, SKEWED).value - expectation(op_a, psi).real) < 1e-12
    sym = (op_a.dagger() @ op_b + op_b.dagger() @ op_a).entries / 2.0
    oracle = np.vdot(psi.amplitudes, sym @ psi.amplitudes).real
    assert abs(product_average(fa, fb, psi, basis, SKEWED).value - oracle) < 1e-12


def test_full_product_reassembles_cross_expectation(rng, model):
    op_a, op_b, psi, basis = _pair(rng, 5)
    fa = build_cval(op_a, psi, basis, model)
    fb = build_cval(op_b, psi, basis, model)
    got = full_product_representation(fa, fb, psi, basis, model).value
    oracle = np.vdot(psi.amplitudes, op_a.dagger().entries @ op_b.entries @ psi.amplitudes)
    assert abs(got - oracle) < 1e-12
    # and it equals the weak-value overlap sum
    direct = (fa.born_weights * (fa.re_part - 1j * fa.im_part) * (fb.re_part + 1j * fb.im_part)).sum()
    assert abs(got - direct) < 1e-12


def test_variance_and_covariance_match_quantum_forms(rng, model):
    op_a, op_b, psi, basis = _pair(rng, 4, hermitian=True)
    fa = build_cval(op_a, psi, basis, model)
    fb = build_cval(op_b, psi, basis, model)
    amps = psi.amplitudes
    ea = np.vdot(amps, op_a.entries @ amps).real
    eb = np.vdot(amps, op_b.entries @ amps).real
    var_oracle = np.vdot(amps, op_a.entries @ op_a.entries @ amps).real - ea**2
    sym = (op_a.entries @ op_b.entries + op_b.entries @ op_a.entries) / 2.0
    cov_oracle = np.vdot(amps, sym @ amps).real - ea * eb
    assert abs(variance(fa, psi, basis, model).value - var_oracle) < 1e-12
    assert abs(covariance(fa, fb, psi, basis, model).value - cov_oracle) < 1e-12


def test_statistical_deviation_is_the_squared_distance(rng, model):
    op_a, op_b, psi, basis = _pair(rng, 4, hermitian=True)
    fa = build_cval(op_a, psi, basis, model)
    fb = build_cval(op_b, psi, basis, model)
    diff = op_a.entries - op_b.entries
    oracle = np.vdot(psi.amplitudes, diff @ diff @ psi.amplitudes).real
    assert abs(statistical_deviation(fa, fb, psi, basis, model).value - oracle) < 1e-12


def test_second_moments_require_hermitian_sources(rng, model):
    op, _, psi, basis = _pair(rng, 3)  # non-Hermitian
    field = build_cval(op, psi, basis, model)
    with pytest.raises(HermiticityError):
        variance(field, psi, basis, model)


def test_averages_are_basis_independent(rng, model):
    op = random_hermitian(4, rng)
    values = []
    for _ in range(10):
        basis = haar_basis(4, rng)
        psi_amps = np.zeros(4, dtype=complex)
        # one fixed state expressed against many bases
        psi_amps[:] = [0.5, 0.5, 0.5, 0.5]
        psi = StateVector(psi_amps)
        field = build_cval(op, psi, basis, model)
        values.append(variance(field, psi, basis, model).value)
    assert max(values) - min(values) < 1e-9


def test_equivalence_theorem_with_polynomial(rng, model):
    op_a, op_b, psi, _ = _pair(rng, 4, hermitian=True)
    op_c = random_hermitian(4, rng)
    coeffs = (0.3, -1.1, 0.25, 0.4)  # f(c) = 0.3 - 1.1 c + 0.25 c^2 + 0.4 c^3
    got = equivalence_theorem(op_a, op_b, coeffs, op_c, psi, model).value
    evals, vecs = np.linalg.eigh(op_c.entries)
    f_mat = vecs @ np.diag(np.polynomial.polynomial.polyval(evals, coeffs)) @ vecs.conj().T
    sym = (op_a.entries @ op_b.entries + op_b.entries @ op_a.entries) / 2.0
    oracle = np.vdot(psi.amplitudes, (sym + f_mat) @ psi.amplitudes).real
    assert abs(got - oracle) < 1e-11


def test_separable_xi_difference_is_the_cross_term(rng):
    model = XiModel.binary()
    amps = np.zeros(4, dtype=complex)
    amps[0] = 1.0 / np.sqrt(2.0)
    amps[3] = 1j / np.sqrt(2.0)
    psi = StateVector(amps)
    op_a = kron_op(PAULI["sigma_x"], OperatorMatrix.identity(2))
    op_b = kron_op(OperatorMatrix.identity(2), PAULI["sigma_x"])
    basis = product_basis(rotated_qubit_basis(0.4), rotated_qubit_basis(1.1))
    fa = build_cval(op_a, psi, basis, model)
    fb = build_cval(op_b, psi, basis, model)
    split = separable_xi_product(fa, fb, psi, basis, model, model, dims=(2, 2), ops=(op_a, op_b))
    shared = product_average(fa, fb, psi, basis, model).value
    assert abs(split.global_value - shared) < 1e-12
    assert abs(shared - split.separable.value - split.cross_term) < 1e-12
    assert abs(split.cross_term) > 0.1  # entanglement makes the loss visible
    enum = separable_xi_product(fa, fb, psi, basis, model, model, method="enumerated",
                                dims=(2, 2), ops=(op_a, op_b))
    assert abs(enum.separable.value - split.separable.value) < 1e-13


def test_separable_xi_rejects_nonlocal_operators(rng, model):
    dim = 4
    op = random_hermitian(dim, rng)  # generic, not a (x) 1
    basis = product_basis(rotated_qubit_basis(0.3), rotated_qubit_basis(0.9))
    psi = haar_state_min_overlap(dim, basis, rng)
    fa = build_cval(op, psi, basis, model)
    with pytest.raises(DimensionMismatch):
        separable_xi_product(fa, fa, psi, basis, model, model, dims=(2, 2), ops=(op, op))


def test_mixed_product_average_is_decomposition_independent(rng, model):
    z0 = StateVector(np.array([1.0, 0.0], dtype=complex))
    z1 = StateVector(np.array([0.0, 1.0], dtype=complex))
    xp = StateVector(np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0))
    xm = StateVector(np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0))
    dec_a = MixedEnsemble((0.5, 0.5), (z0, z1))
    dec_b = MixedEnsemble((0.5, 0.5), (xp, xm))
    basis = rotated_qubit_basis(0.8)
    op_a, op_b = PAULI["sigma_x"], PAULI["sigma_z"]
    va = mixed_product_average(dec_a, op_a, op_b, basis, model).value
    vb = mixed_product_average(dec_b, op_a, op_b, basis, model).value
    assert abs(va - vb) < 1e-12
    rho = density_matrix(dec_a)
    sym = (op_a.entries @ op_b.entries + op_b.entries @ op_a.entries) / 2.0
    assert abs(va - np.trace(rho.entries @ sym).real) < 1e-12


def test_verification_record_shape():
    rec = verification_record("mean", 1.0 + 0.0j, 1.0 + 1e-13j, method="exact", inputs=("a", "b"))
    assert rec["name"] == "mean"
    assert rec["abs_error"] < 1e-12
    assert rec["inputs"] == ["a", "b"]
    assert rec["method"] == "exact"
