"""Grid-based continuous-variable c-values: momentum, free energy, bounds."""

import csv

import numpy as np
import pytest

from cval_lab import (
    DimensionMismatch,
    GridError,
    GridWavefunction,
    MomentError,
    NormalizationError,
    XiModel,
    average_equality_check,
    build_gaussian,
    build_plane_wave,
    cval_hamiltonian_free,
    cval_momentum,
    grid_profile_csv,
    hamiltonian_field,
    momentum_field,
    position_momentum_krs,
)

SIGMA = 1.0
GRID = (-10.0, 10.0, 16384)


def _gaussian(**kw):
    return build_gaussian(SIGMA, 0.0, 0.0, GRID, **kw)


def test_wavefunction_validation():
    wf = _gaussian()
    with pytest.raises(GridError):
        GridWavefunction(q=np.linspace(0, 1, 8), amplitudes=np.ones(8, dtype=complex))
    with pytest.raises(DimensionMismatch):
        GridWavefunction(q=wf.q, amplitudes=wf.amplitudes[:-1])
    bent = wf.q.copy()
    bent[100] += 0.3 * wf.dq
    with pytest.raises(GridError):
        GridWavefunction(q=bent, amplitudes=wf.amplitudes)
    with pytest.raises(GridError):
        GridWavefunction(q=wf.q, amplitudes=wf.amplitudes, hbar=0.0)
    with pytest.raises(NormalizationError):
        GridWavefunction(q=wf.q, amplitudes=1.1 * wf.amplitudes)
    n = 64
    q = np.linspace(0.0, 1.0, n)
    flat = np.ones(n, dtype=complex)
    flat /= np.sqrt((np.abs(flat) ** 2).sum() * (q[1] - q[0]))
    with pytest.raises(GridError):
        GridWavefunction(q=q, amplitudes=flat)


def test_gaussian_builder_guards():
    with pytest.raises(GridError):
        build_gaussian(0.0, 0.0, 0.0, GRID)
    with pytest.raises(GridError):
        build_gaussian(SIGMA, 0.0, 0.0, (-10.0, 10.0, 128))  # under-resolved
    with pytest.raises(GridError):
        build_gaussian(SIGMA, 0.0, 0.0, (-4.0, 10.0, 16384))  # too little margin


def test_drifting_gaussian_momentum_split():
    p0, q0 = 1.5, 0.3
    wf = build_gaussian(SIGMA, q0, p0, GRID)
    mom = momentum_field(wf)
    central = np.abs(wf.q - q0) < 3.0 * SIGMA
    est = mom.estimate[central]
    assert np.nanmax(np.abs(est - p0)) < 1e-9
    # error coefficient is (hbar/2)(q - q0)/sigma^2 for a gaussian profile
    oracle = 0.5 * (wf.q[central] - q0) / SIGMA**2
    assert np.nanmax(np.abs(mom.error_coefficient[central] - oracle)) < 1e-5


def test_static_gaussian_energy_profile():
    wf = _gaussian()
    ham = hamiltonian_field(wf, mass=1.0)
    x = wf.q
    oracle = -0.5 * (-1.0 / (2.0 * SIGMA**2) + x**2 / (4.0 * SIGMA**4))
    scale = np.nanmax(np.abs(oracle))
    resid = np.abs(ham.estimate - oracle)
    assert np.nanmax(resid[ham.valid_mask]) < 5e-6 * scale
    # zero flux: the xi coupling vanishes identically for a real profile
    assert np.nanmax(np.abs(ham.error_coefficient[ham.valid_mask])) < 1e-9
    # the profile changes sign where x^2 = 2 sigma^2
    est = np.where(ham.valid_mask, ham.estimate, np.nan)
    inner = np.flatnonzero(np.abs(np.diff(np.sign(est))) == 2)
    crossings = wf.q[inner]
    for root in (-np.sqrt(2.0) * SIGMA, np.sqrt(2.0) * SIGMA):
        assert np.min(np.abs(crossings - root)) <= wf.dq


def test_mean_energy_three_ways(model):
    wf = _gaussian()
    mean_h, spectral, mean_p2 = average_equality_check(wf, 1.0, model)
    closed = 1.0 / (8.0 * SIGMA**2)
    assert abs(mean_h - closed) < 1e-6 * closed
    assert abs(mean_h - spectral) < 1e-6 * closed
    assert abs(mean_h - mean_p2) < 1e-6 * closed


def test_position_momentum_bound_saturates(model):
    report = position_momentum_krs(_gaussian(), model)
    assert report.kind == "position_momentum"
    assert abs(report.rhs - 0.25) < 1e-4
    assert abs(report.slack) < 1e-6 * report.rhs


def test_chirp_moves_the_covariance_not_the_slack(model):
    alpha = 0.7
    wf = build_gaussian(SIGMA, 0.0, 0.4, GRID, chirp=alpha)
    report = position_momentum_krs(wf, model)
    # cov = alpha sigma^2 enters squared alongside the irreducible hbar^2/4
    expected_rhs = 0.25 + (alpha * SIGMA**2) ** 2
    assert abs(report.rhs - expected_rhs) < 1e-4 * expected_rhs
    assert abs(report.slack) < 1e-6 * report.rhs


def test_plane_wave_flat_top(model):
    p0 = 1.5
    wf = build_plane_wave(p0, (-20.0, 20.0, 4096))
    mom = momentum_field(wf)
    n = wf.size
    flat = slice(3 * n // 8, 5 * n // 8)
    assert np.nanmax(np.abs(mom.estimate[flat] - p0)) < 1e-8 * p0
    assert np.nanmax(np.abs(mom.error_coefficient[flat])) < 1e-8 * p0
    mean_h, spectral, mean_p2 = average_equality_check(wf, 1.0, model)
    assert abs(mean_h - spectral) < 1e-4 * spectral


def test_plane_wave_guards():
    with pytest.raises(GridError):
        build_plane_wave(400.0, (-20.0, 20.0, 4096))  # phase advance per cell
    with pytest.raises(GridError):
        build_plane_wave(1.5, (-20.0, 20.0, 4096), envelope=1.0)


def test_pointwise_wrappers_and_masking():
    wf = _gaussian()
    mom = momentum_field(wf)
    ham = hamiltonian_field(wf, mass=2.0)
    j = wf.size // 2 + 7
    assert cval_momentum(wf, j, 0.8) == mom.evaluate_at(j, 0.8)
    assert cval_hamiltonian_free(wf, j, -0.3, 2.0) == ham.evaluate_at(j, -0.3)
    with pytest.raises(GridError):
        cval_momentum(wf, 0, 1.0)  # boundary cell is masked
    with pytest.raises(GridError):
        hamiltonian_field(wf, mass=0.0)


def test_field_evaluation_and_xi_average():
    wf = build_gaussian(SIGMA, 0.0, 0.9, GRID)
    mom = momentum_field(wf)
    plus, minus = mom.evaluate(wf.hbar), mom.evaluate(-wf.hbar)
    assert np.isnan(plus[0]) and np.isnan(plus[-1])
    back = 0.5 * (plus + minus)
    valid = mom.valid_mask
    assert np.nanmax(np.abs(back[valid] - mom.estimate[valid])) < 1e-12


def test_hbar_mismatch_is_rejected():
    wf = _gaussian(hbar=0.5)
    with pytest.raises(MomentError):
        average_equality_check(wf, 1.0, XiModel.binary())
    with pytest.raises(MomentError):
        position_momentum_krs(wf, XiModel.binary())
    with pytest.raises(MomentError):
        average_equality_check(_gaussian(), 1.0, XiModel.binary(scale=0.5))


def test_profile_csv_layout(tmp_path):
    wf = build_gaussian(SIGMA, 0.0, 0.0, (-9.0, 9.0, 1024))
    path = tmp_path / "profile.csv"
    grid_profile_csv(wf, 1.0, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["q", "rho", "S", "p_c(xi=1)", "H_c(xi=1)", "p_c(xi=-1)", "H_c(xi=-1)"]
    assert len(rows) == 1 + wf.size
    assert rows[1][3] == ""  # boundary point is masked
    mid = 1 + wf.size // 2
    assert float(rows[mid][1]) > 0.0
    assert rows[mid][3] != ""
