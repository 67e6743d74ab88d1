"""Complex weak values with post-selection over a complete basis.

The weak value of an operator O with pre-selection |psi> and post-selection
|phi> is the quotient

    O_w(phi|psi) = <phi|O|psi> / <phi|psi>,

defined whenever the overlap is nonzero. Its real and imaginary parts also
have closed bracket forms built from the projector Pi = |phi><phi|:

    Re O_w = <psi| (Pi O + O^dag Pi) |psi> / (2 |<phi|psi>|^2)
    Im O_w = <psi| (Pi O - O^dag Pi) |psi> / (2i |<phi|psi>|^2)

Both routes are always computed; they must agree or the field constructor
raises, because a silent disagreement would poison everything downstream.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConsistencyError, DimensionMismatch, OverlapError
from .hilbert import (
    TAU_ID,
    OperatorMatrix,
    OrthonormalBasis,
    StateVector,
    validate_density,
)

# Amplitude-scale cutoff below which a post-selection overlap is treated as
# vanishing and the corresponding entry is masked instead of computed.
EPS_OVERLAP = 1e-8


@dataclass(frozen=True)
class WeakValueField:
    """Vector of weak values O_w(phi_n|psi) over a complete basis.

    Masked entries (overlap below EPS_OVERLAP) carry no value; their total
    Born weight is exposed via ``masked_weight`` so any weighted-sum identity
    can report how much probability it silently dropped.
    """

    values: np.ndarray
    valid_mask: np.ndarray
    born_weights: np.ndarray
    basis_id: str
    state_id: str
    hermitian_source: bool

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).reshape(-1)
        mask = np.asarray(self.valid_mask, dtype=bool).reshape(-1)
        born = np.asarray(self.born_weights, dtype=float).reshape(-1)
        if not (vals.size == mask.size == born.size):
            raise DimensionMismatch("values, valid_mask, born_weights must share length")
        if not np.all(np.isfinite(vals[mask].view(float))):
            raise ValueError("weak values must be finite on unmasked entries")
        for name, arr in (("values", vals), ("valid_mask", mask), ("born_weights", born)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.values.size

    @cached_property
    def masked_weight(self) -> float:
        return float(self.born_weights[~self.valid_mask].sum())

    @property
    def re_parts(self) -> np.ndarray:
        return self.values.real

    @property
    def im_parts(self) -> np.ndarray:
        return self.values.imag

    def to_csv(self, path) -> None:
        """Write columns (n, re, im, born_weight, masked); masked rows keep empty value cells."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "re", "im", "born_weight", "masked"])
            for n in range(self.dim):
                if self.valid_mask[n]:
                    writer.writerow([n, repr(self.values[n].real), repr(self.values[n].imag),
                                     repr(float(self.born_weights[n])), 0])
                else:
                    writer.writerow([n, "", "", repr(float(self.born_weights[n])), 1])


def weak_value(op: OperatorMatrix, psi: StateVector, phi: StateVector) -> complex:
    """Single weak value <phi|O|psi> / <phi|psi>.

    Raises
    ------
    OverlapError
        If |<phi|psi>| is below EPS_OVERLAP; the quotient is assumed
        well-defined only away from vanishing overlap.
    """
    if not (op.dim == psi.dim == phi.dim):
        raise DimensionMismatch(f"dims op={op.dim}, psi={psi.dim}, phi={phi.dim}")
    ov = phi.overlap(psi)
    if abs(ov) < EPS_OVERLAP:
        raise OverlapError(f"|<phi|psi>| = {abs(ov):.3e} below cutoff {EPS_OVERLAP}")
    return complex(np.vdot(phi.amplitudes, op.entries @ psi.amplitudes) / ov)


def weak_value_parts(op: OperatorMatrix, psi: StateVector, phi: StateVector) -> tuple[float, float]:
    """Real and imaginary parts computed through the bracket forms.

    Independent of the quotient route; the two must agree within TAU_ID,
    which the field constructor enforces on every entry.
    """
    if not (op.dim == psi.dim == phi.dim):
        raise DimensionMismatch(f"dims op={op.dim}, psi={psi.dim}, phi={phi.dim}")
    ov = phi.overlap(psi)
    weight = abs(ov) ** 2
    if abs(ov) < EPS_OVERLAP:
        raise OverlapError(f"|<phi|psi>| = {abs(ov):.3e} below cutoff {EPS_OVERLAP}")
    pi = np.outer(phi.amplitudes, phi.amplitudes.conj())
    odag = op.entries.conj().T
    anti = pi @ op.entries + odag @ pi
    comm = pi @ op.entries - odag @ pi
    re_part = np.vdot(psi.amplitudes, anti @ psi.amplitudes) / (2.0 * weight)
    im_part = np.vdot(psi.amplitudes, comm @ psi.amplitudes) / (2.0j * weight)
    return float(re_part.real), float(im_part.real)


def weak_value_field(op: OperatorMatrix, psi: StateVector, basis: OrthonormalBasis) -> WeakValueField:
    """Weak values over every basis element, with masking and cross-check.

    Parameters
    ----------
    op : OperatorMatrix
    psi : StateVector
        Pre-selected state.
    basis : OrthonormalBasis
        Post-selection context; one weak value per basis vector.

    Returns
    -------
    WeakValueField
        Quotient-form values. Entries with overlap below EPS_OVERLAP are
        masked. The bracket forms are recomputed per entry and compared;
        disagreement raises ConsistencyError (the comparison threshold grows
        with 1/|overlap|^2 because that is how the bracket route's roundoff
        scales).
    """
    if not (op.dim == psi.dim == basis.dim):
        raise DimensionMismatch(f"dims op={op.dim}, psi={psi.dim}, basis={basis.dim}")
    cols = basis.column_matrix
    overlaps = cols.conj().T @ psi.amplitudes
    numer = cols.conj().T @ (op.entries @ psi.amplitudes)
    born = np.abs(overlaps) ** 2
    mask = np.abs(overlaps) >= EPS_OVERLAP

    values = np.zeros(op.dim, dtype=complex)
    values[mask] = numer[mask] / overlaps[mask]

    op_scale = float(np.max(np.abs(op.entries))) if op.dim else 1.0
    odag = op.entries.conj().T
    for n in np.flatnonzero(mask):
        phi = cols[:, n]
        pi = np.outer(phi, phi.conj())
        anti = pi @ op.entries + odag @ pi
        comm = pi @ op.entries - odag @ pi
        re_part = (np.vdot(psi.amplitudes, anti @ psi.amplitudes) / (2.0 * born[n])).real
        im_part = (np.vdot(psi.amplitudes, comm @ psi.amplitudes) / (2.0j * born[n])).real
        tol = TAU_ID * max(1.0, op_scale / born[n])
        err = abs(values[n] - complex(re_part, im_part))
        if err > tol:
            raise ConsistencyError(
                f"weak value entry {n}: quotient and bracket forms differ by {err:.3e} (tol {tol:.3e})"
            )
    return WeakValueField(
        values=values,
        valid_mask=mask,
        born_weights=born,
        basis_id=basis.fingerprint,
        state_id=psi.fingerprint,
        hermitian_source=bool(op.hermitian_hint),
    )


def weak_value_mixed(op: OperatorMatrix, rho: OperatorMatrix, phi: StateVector) -> complex:
    """Weak value with a mixed pre-selection: Tr{Pi O rho} / Tr{Pi rho}."""
    if not (op.dim == rho.dim == phi.dim):
        raise DimensionMismatch(f"dims op={op.dim}, rho={rho.dim}, phi={phi.dim}")
    validate_density(rho)
    amps = phi.amplitudes
    post_prob = float(np.vdot(amps, rho.entries @ amps).real)
    if post_prob < EPS_OVERLAP**2:
        raise OverlapError(f"Tr{{Pi rho}} = {post_prob:.3e} below cutoff {EPS_OVERLAP**2}")
    # Tr{Pi O rho} = <phi| O rho |phi>
    numer = complex(np.vdot(amps, op.entries @ (rho.entries @ amps)))
    return numer / post_prob


def weak_value_field_mixed(op: OperatorMatrix, rho: OperatorMatrix, basis: OrthonormalBasis) -> WeakValueField:
    """Mixed-pre-selection weak values over a complete basis, with masking."""
    if not (op.dim == rho.dim == basis.dim):
        raise DimensionMismatch(f"dims op={op.dim}, rho={rho.dim}, basis={basis.dim}")
    validate_density(rho)
    cols = basis.column_matrix
    # Tr{Pi_n rho} and Tr{Pi_n O rho} for all n at once.
    rho_cols = rho.entries @ cols
    post_probs = np.einsum("in,in->n", cols.conj(), rho_cols).real
    numer = np.einsum("in,in->n", cols.conj(), op.entries @ rho_cols)
    mask = post_probs >= EPS_OVERLAP**2
    values = np.zeros(op.dim, dtype=complex)
    values[mask] = numer[mask] / post_probs[mask]
    return WeakValueField(
        values=values,
        valid_mask=mask,
        born_weights=np.maximum(post_probs, 0.0),
        basis_id=basis.fingerprint,
        state_id=rho.fingerprint,
        hermitian_source=bool(op.hermitian_hint),
    )
