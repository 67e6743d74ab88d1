"""Seeded random states, operators, and bases for suites and demos.

Haar-random states are normalized i.i.d. standard complex gaussian vectors.
Haar-random bases come from the QR decomposition of a complex Ginibre matrix
with the R diagonal phases absorbed, which makes the distribution exactly
unitarily invariant instead of merely approximately so.
"""

from __future__ import annotations

import numpy as np

from .errors import OverlapError
from .hilbert import OperatorMatrix, OrthonormalBasis, StateVector

# Minimum |<phi_n|psi>| enforced by rejection sampling when a suite needs
# every post-selection overlap comfortably away from the mask cutoff.
MIN_OVERLAP_DEFAULT = 1e-3

SIGMA_X = OperatorMatrix(np.array([[0, 1], [1, 0]], dtype=complex), hermitian_hint=True)
SIGMA_Y = OperatorMatrix(np.array([[0, -1j], [1j, 0]], dtype=complex), hermitian_hint=True)
SIGMA_Z = OperatorMatrix(np.array([[1, 0], [0, -1]], dtype=complex), hermitian_hint=True)

PAULI = {"identity": OperatorMatrix.identity(2), "sigma_x": SIGMA_X, "sigma_y": SIGMA_Y, "sigma_z": SIGMA_Z}


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def haar_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state of the given dimension."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v / np.linalg.norm(v))


def haar_basis(dim: int, rng: np.random.Generator) -> OrthonormalBasis:
    """Haar-random orthonormal basis (columns of a Haar unitary)."""
    q, r = np.linalg.qr(_ginibre(dim, rng))
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return OrthonormalBasis(q * phases[np.newaxis, :])


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> OperatorMatrix:
    """GUE-style random Hermitian matrix (M + M^dag)/2 with gaussian entries."""
    m = _ginibre(dim, rng) * scale
    return OperatorMatrix((m + m.conj().T) / 2.0, hermitian_hint=True)


def random_operator(dim: int, rng: np.random.Generator, scale: float = 1.0) -> OperatorMatrix:
    """Generic (non-Hermitian) random complex matrix."""
    return OperatorMatrix(_ginibre(dim, rng) * scale, hermitian_hint=False)


def haar_state_min_overlap(
    dim: int,
    basis: OrthonormalBasis,
    rng: np.random.Generator,
    min_overlap: float = MIN_OVERLAP_DEFAULT,
    max_tries: int = 10_000,
) -> StateVector:
    """Haar-random state with every |<phi_n|psi>| at or above min_overlap.

    Rejection sampling keeps identity checks free of masked entries; the
    acceptance probability is high for the default threshold in the
    dimensions this package targets (d <= 64).
    """
    cols = basis.column_matrix.conj().T
    for _ in range(max_tries):
        psi = haar_state(dim, rng)
        if float(np.min(np.abs(cols @ psi.amplitudes))) >= min_overlap:
            return psi
    raise OverlapError(
        f"could not draw a d={dim} state with all overlaps >= {min_overlap} in {max_tries} tries"
    )


def random_ensemble(dim: int, components: int, rng: np.random.Generator):
    """Random mixed ensemble with Dirichlet weights and Haar components."""
    from .hilbert import MixedEnsemble

    w = rng.dirichlet(np.ones(components))
    states = tuple(haar_state(dim, rng) for _ in range(components))
    return MixedEnsemble(w, states)


def rotated_qubit_basis(angle: float) -> OrthonormalBasis:
    """Real rotation of the computational qubit basis by the given angle."""
    c, s = np.cos(angle), np.sin(angle)
    return OrthonormalBasis(np.array([[c, -s], [s, c]], dtype=complex))
