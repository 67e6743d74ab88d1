"""Finite-dimensional Hilbert space primitives.

States, operators, orthonormal bases, mixed ensembles, Born probabilities,
and the bracket conventions used throughout the package:

    anticommutator(A, B) = A B + B^dag A^dag
    commutator(A, B)     = A B - B^dag A^dag

For Hermitian arguments these coincide with the standard brackets; for
general operators they are kept in exactly this dagger-decorated form
because every identity downstream is stated with it.

All types are immutable after construction and safe to share across
workers. Inner products are conjugate-linear in the first slot.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    HermiticityError,
    NormalizationError,
)

# Tolerance ladder. The first three are absolute, TAU_EIG is relative to the
# matrix norm, TAU_ID is the universal tolerance for exact algebraic
# identities evaluated in double precision.
TAU_NORM = 1e-10
TAU_ORTHO = 1e-10
TAU_HERM = 1e-10
TAU_EIG = 1e-9
TAU_ID = 1e-10

# Eigenvalues closer than this (scaled by the spectral radius) are treated as
# one degenerate cluster and re-orthonormalized deterministically.
_DEGENERACY_GAP = 1e-8


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


def _digest(*arrays: np.ndarray) -> str:
    h = hashlib.sha1()
    for a in arrays:
        h.update(str(a.shape).encode())
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class PlanckConfig:
    """Action scale threaded through every xi-dependent formula.

    hbar is kept explicit (default 1) so the xi variance constraint
    var(xi) = hbar**2 stays dimensionally honest while desk-scale numbers
    remain O(1).
    """

    hbar: float = 1.0

    def __post_init__(self):
        if not (float(self.hbar) > 0.0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitude vector over a d-dimensional Hilbert space."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise DimensionMismatch(f"need dimension >= 2, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TAU_NORM:
            raise NormalizationError(f"state norm {norm!r} deviates from 1 beyond {TAU_NORM}")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @cached_property
    def fingerprint(self) -> str:
        return _digest(self.amplitudes)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>, conjugate-linear in self."""
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> "OperatorMatrix":
        """Rank-1 projector |psi><psi|."""
        return OperatorMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), hermitian_hint=True)

    @classmethod
    def from_unnormalized(cls, amplitudes: Iterable[complex]) -> "StateVector":
        amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def computational(cls, dim: int, index: int) -> "StateVector":
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex square matrix with an optional Hermiticity flag.

    Parameters
    ----------
    entries : (d, d) complex array.
    hermitian_hint : bool or None
        True asserts Hermiticity and is checked against TAU_HERM at
        construction. None means "measure it": the stored flag records
        whether the matrix actually passed the Hermiticity check.
    """

    entries: np.ndarray
    hermitian_hint: bool = None  # type: ignore[assignment]

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise DimensionMismatch("empty operator")
        defect = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        hint = self.hermitian_hint
        if hint is None:
            hint = defect <= TAU_HERM
        elif hint and defect > TAU_HERM:
            raise HermiticityError(f"hermitian_hint set but max|M - M^dag| = {defect:.3e} > {TAU_HERM}")
        object.__setattr__(self, "entries", _freeze(m))
        object.__setattr__(self, "hermitian_hint", bool(hint))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def fingerprint(self) -> str:
        return _digest(self.entries)

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, hermitian_hint=self.hermitian_hint)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim}")
        return OperatorMatrix(self.entries @ other.entries)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim}")
        return OperatorMatrix(self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim}")
        return OperatorMatrix(self.entries - other.entries)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.entries * complex(scalar))

    __rmul__ = __mul__

    @classmethod
    def identity(cls, dim: int) -> "OperatorMatrix":
        return cls(np.eye(dim, dtype=complex), hermitian_hint=True)


@dataclass(frozen=True)
class OrthonormalBasis:
    """Complete orthonormal set {|phi_n>} resolving the identity.

    The post-selection / reference coordinate context. Stored column-wise;
    ``column_matrix[:, n]`` is the n-th basis vector.
    """

    column_matrix: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.column_matrix, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionMismatch(f"basis matrix must be square, got shape {v.shape}")
        d = v.shape[0]
        gram_defect = float(np.max(np.abs(v.conj().T @ v - np.eye(d))))
        if gram_defect > TAU_ORTHO:
            raise NormalizationError(f"Gram matrix deviates from identity by {gram_defect:.3e}")
        complete_defect = float(np.max(np.abs(v @ v.conj().T - np.eye(d))))
        if complete_defect > TAU_ORTHO:
            raise NormalizationError(f"completeness defect {complete_defect:.3e}")
        object.__setattr__(self, "column_matrix", _freeze(v))

    @property
    def dim(self) -> int:
        return self.column_matrix.shape[0]

    @cached_property
    def fingerprint(self) -> str:
        return _digest(self.column_matrix)

    @cached_property
    def vectors(self) -> tuple:
        return tuple(StateVector(self.column_matrix[:, n]) for n in range(self.dim))

    def vector(self, n: int) -> StateVector:
        return StateVector(self.column_matrix[:, n])

    @classmethod
    def computational(cls, dim: int) -> "OrthonormalBasis":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def from_states(cls, states: Sequence[StateVector]) -> "OrthonormalBasis":
        return cls(np.column_stack([s.amplitudes for s in states]))


@dataclass(frozen=True)
class MixedEnsemble:
    """Convex mixture {Pr(psi_mu), |psi_mu>} of pure preparations."""

    weights: np.ndarray
    states: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        states = tuple(self.states)
        if len(states) != w.size or w.size == 0:
            raise DimensionMismatch("weights and states must have equal, nonzero length")
        if np.any(w < 0.0):
            raise NormalizationError("ensemble weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > TAU_NORM:
            raise NormalizationError(f"ensemble weights sum to {w.sum()!r}, not 1")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"ensemble states have mixed dimensions {sorted(dims)}")
        wf = np.array(w, dtype=float)
        wf.setflags(write=False)
        object.__setattr__(self, "weights", wf)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return len(self.states)

    @cached_property
    def fingerprint(self) -> str:
        return _digest(self.weights.astype(complex), *(s.amplitudes for s in self.states))


def born_probabilities(basis: OrthonormalBasis, psi: StateVector) -> np.ndarray:
    """Born-rule outcome distribution Pr(phi_n | psi) = |<phi_n|psi>|^2."""
    if basis.dim != psi.dim:
        raise DimensionMismatch(f"basis dim {basis.dim}, state dim {psi.dim}")
    overlaps = basis.column_matrix.conj().T @ psi.amplitudes
    return np.abs(overlaps) ** 2


def expectation(op: OperatorMatrix, psi: StateVector) -> complex:
    """Quantum expectation value <psi|O|psi> (complex for general O)."""
    if op.dim != psi.dim:
        raise DimensionMismatch(f"operator dim {op.dim}, state dim {psi.dim}")
    return complex(np.vdot(psi.amplitudes, op.entries @ psi.amplitudes))


def anticommutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """A B + B^dag A^dag. Reduces to the standard anticommutator for Hermitian inputs."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} and {b.dim}")
    return OperatorMatrix(a.entries @ b.entries + b.entries.conj().T @ a.entries.conj().T)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """A B - B^dag A^dag. Reduces to the standard commutator for Hermitian inputs."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} and {b.dim}")
    return OperatorMatrix(a.entries @ b.entries - b.entries.conj().T @ a.entries.conj().T)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its first significant entry is real positive."""
    idx = np.flatnonzero(np.abs(vec) > 1e-12)
    if idx.size == 0:
        return vec
    lead = vec[idx[0]]
    return vec * (lead.conjugate() / abs(lead))


def _canonical_cluster(block: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal frame for a degenerate eigenspace.

    The incoming eigenvector block depends on LAPACK internals, so instead of
    trusting it we rebuild the subspace from its projector: project the
    canonical axes e_0, e_1, ... into the subspace and keep the first k that
    survive Gram-Schmidt. That choice depends only on the subspace itself.
    """
    d, k = block.shape
    proj = block @ block.conj().T
    chosen: list[np.ndarray] = []
    for j in range(d):
        if len(chosen) == k:
            break
        w = proj[:, j].copy()
        for c in chosen:
            w -= c * np.vdot(c, w)
        nrm = np.linalg.norm(w)
        if nrm > 1e-6:
            chosen.append(w / nrm)
    # Generic subspaces never reach this fallback; it guards pathological
    # alignments where the canonical axes nearly miss the subspace.
    j = 0
    while len(chosen) < k and j < k:
        w = block[:, j].copy()
        for c in chosen:
            w -= c * np.vdot(c, w)
        nrm = np.linalg.norm(w)
        if nrm > 1e-8:
            chosen.append(w / nrm)
        j += 1
    return np.column_stack([_fix_phase(c) for c in chosen])


def eigenbasis(op: OperatorMatrix) -> tuple[OrthonormalBasis, np.ndarray]:
    """Complete eigenvector set of a Hermitian operator.

    Returns (basis, eigenvalues) with eigenvalues ascending. Degenerate
    clusters (gap below 1e-8 times the spectral scale) are re-orthonormalized
    deterministically and every vector gets a fixed global phase, so repeated
    calls agree bit for bit.

    Raises
    ------
    HermiticityError
        If the operator does not carry a verified Hermitian flag.
    """
    if not op.hermitian_hint:
        raise HermiticityError("eigenbasis requires a Hermitian operator")
    herm = (op.entries + op.entries.conj().T) / 2.0
    evals, vecs = np.linalg.eigh(herm)
    scale = max(1.0, float(np.max(np.abs(evals))) if evals.size else 1.0)
    gap = _DEGENERACY_GAP * scale

    cols = np.array(vecs, dtype=complex)
    start = 0
    d = evals.size
    for i in range(1, d + 1):
        if i == d or evals[i] - evals[i - 1] > gap:
            if i - start > 1:
                cols[:, start:i] = _canonical_cluster(cols[:, start:i])
            else:
                cols[:, start] = _fix_phase(cols[:, start])
            start = i
    return OrthonormalBasis(cols), np.array(evals, dtype=float)


def density_matrix(ens: MixedEnsemble) -> OperatorMatrix:
    """rho = sum_mu Pr(psi_mu) |psi_mu><psi_mu|."""
    d = ens.dim
    rho = np.zeros((d, d), dtype=complex)
    for w, s in zip(ens.weights, ens.states):
        rho += w * np.outer(s.amplitudes, s.amplitudes.conj())
    rho = (rho + rho.conj().T) / 2.0
    return OperatorMatrix(rho, hermitian_hint=True)


def validate_density(rho: OperatorMatrix, tol: float = TAU_HERM) -> None:
    """Check that rho is a density matrix: Hermitian, unit trace, PSD.

    Raises HermiticityError or NormalizationError with a description of the
    failing property.
    """
    if not rho.hermitian_hint:
        raise HermiticityError("density matrix must be Hermitian")
    tr = complex(np.trace(rho.entries))
    if abs(tr - 1.0) > 1e3 * tol:
        raise NormalizationError(f"density matrix trace {tr!r} deviates from 1")
    evals = np.linalg.eigvalsh((rho.entries + rho.entries.conj().T) / 2.0)
    if float(evals.min()) < -1e3 * tol:
        raise NormalizationError(f"density matrix has negative eigenvalue {evals.min():.3e}")


def kron_state(a: StateVector, b: StateVector) -> StateVector:
    """Product state |a> tensor |b>."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def kron_op(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Operator a tensor b on the composite space."""
    return OperatorMatrix(np.kron(a.entries, b.entries))


def product_basis(a: OrthonormalBasis, b: OrthonormalBasis) -> OrthonormalBasis:
    """Product basis {|phi_m> tensor |chi_n>} ordered with the second factor fastest."""
    return OrthonormalBasis(np.kron(a.column_matrix, b.column_matrix))
