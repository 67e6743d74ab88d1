"""Variance decomposition, uncertainty bounds, and the flow identity.

The quantum variance of a Hermitian observable splits, for any reference
basis, into

    sigma^2 = delta^2 + err^2,

where delta^2 is the classical variance of the real weak-value part over the
Born distribution and err^2 is the Born-weighted mean square of the
imaginary part. The two pieces trade off with the basis; their product
structure yields the Schrodinger bound (from delta^2) and the
Kennard-Robertson bound (from err^2), and their sum gives the full KRS
inequality.

The imaginary part also has a dynamical reading: flowing the state with the
unitary generated by A and differentiating the outcome probabilities of the
reference basis recovers Im A_w. ``epistemic_restriction_check`` verifies
that identity with a central finite difference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cval import CValField, XiModel, build_cval
from .ensemble import _check_provenance, _require_identity_moments
from .errors import ConsistencyError, HermiticityError, MomentError
from .hilbert import (
    TAU_ID,
    OperatorMatrix,
    OrthonormalBasis,
    PlanckConfig,
    StateVector,
    eigenbasis,
    expectation,
)
from .weakvalue import weak_value_field

_BOUND_KINDS = ("schrodinger", "kennard_robertson", "krs_full", "position_momentum")


@dataclass(frozen=True)
class VarianceDecomposition:
    """sigma^2 = delta^2 + err^2 for one observable in one reference basis."""

    total: float
    delta_sq: float
    err_sq: float
    basis_id: str


@dataclass(frozen=True)
class BoundReport:
    """One uncertainty-bound evaluation: lhs >= rhs expected, slack = lhs - rhs.

    The constructor does not reject negative slack: negative controls and
    corrupted-identity hooks must be able to record a violation. Judgment
    belongs to the caller (tests, verify suite).
    """

    lhs: float
    rhs: float
    slack: float
    kind: str
    masked_weight: float = 0.0

    def __post_init__(self):
        if self.kind not in _BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")

    @property
    def holds(self) -> bool:
        return self.slack >= -TAU_ID


@dataclass(frozen=True)
class JointHistogram:
    """Delta-supported joint distribution of two c-values.

    points has columns (a_value, b_value, weight); the weights are the joint
    probabilities Pr(n) chi(xi) of the generating cells and sum to 1 minus
    masked_weight. Because the c-values are deterministic functions of
    (n, xi), this is an honest, nonnegative joint distribution.
    """

    points: np.ndarray
    masked_weight: float
    binning: tuple | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"points must have shape (m, 3), got {pts.shape}")
        if np.any(pts[:, 2] < 0.0):
            raise ValueError("weights must be nonnegative")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def total_weight(self) -> float:
        return float(self.points[:, 2].sum())

    def marginal_mean(self, which: int) -> float:
        """Weighted mean of the first (which=0) or second (which=1) variable."""
        return float((self.points[:, which] * self.points[:, 2]).sum())

    def mixed_moment(self) -> float:
        """Weighted mean of the product a*b; matches the product average."""
        return float((self.points[:, 0] * self.points[:, 1] * self.points[:, 2]).sum())

    def binned(self, bins_a: int = 32, bins_b: int = 32):
        """Weighted 2D histogram (counts, a_edges, b_edges) for plotting."""
        return np.histogram2d(self.points[:, 0], self.points[:, 1],
                              bins=(bins_a, bins_b), weights=self.points[:, 2])

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["a_value", "b_value", "weight"])
            for a, b, w in self.points:
                writer.writerow([repr(float(a)), repr(float(b)), repr(float(w))])


def decompose_variance(
    op: OperatorMatrix,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
) -> VarianceDecomposition:
    """Split the variance of a Hermitian observable by reference basis.

    delta_sq is the variance of Re O_w over Pr(n); err_sq is the
    Born-weighted mean of (Im O_w)^2 scaled by E[(xi/hbar)^2] = 1. In the
    operator's own eigenbasis err_sq collapses to zero and delta_sq carries
    everything; an eigenstate of op zeroes both.
    """
    if not op.hermitian_hint:
        raise HermiticityError("variance decomposition is defined for Hermitian operators")
    _require_identity_moments(model)
    field = build_cval(op, psi, basis, model)
    w = np.where(field.valid_mask, field.born_weights, 0.0)
    re = np.where(field.valid_mask, field.re_part, 0.0)
    im = np.where(field.valid_mask, field.im_part, 0.0)
    mean_re = float((w * re).sum())
    delta_sq = float((w * re * re).sum()) - mean_re**2
    err_sq = float((w * im * im).sum())
    return VarianceDecomposition(
        total=delta_sq + err_sq,
        delta_sq=delta_sq,
        err_sq=err_sq,
        basis_id=basis.fingerprint,
    )


def _hermitian_pair_moments(opA: OperatorMatrix, opB: OperatorMatrix, psi: StateVector):
    """(<A>, <B>, covariance term, commutator term) for a Hermitian pair."""
    if not (opA.hermitian_hint and opB.hermitian_hint):
        raise HermiticityError("bound checks are defined for Hermitian operator pairs")
    mean_a = expectation(opA, psi).real
    mean_b = expectation(opB, psi).real
    ab = complex(np.vdot(psi.amplitudes, opA.entries @ (opB.entries @ psi.amplitudes)))
    ba = complex(np.vdot(psi.amplitudes, opB.entries @ (opA.entries @ psi.amplitudes)))
    cov = 0.5 * (ab + ba).real - mean_a * mean_b
    comm_sq = 0.25 * abs(ab - ba) ** 2
    return mean_a, mean_b, cov, comm_sq


def _decompositions_in_b_basis(opA, opB, psi):
    basis_b, _ = eigenbasis(opB)
    model = XiModel.binary()
    da = decompose_variance(opA, psi, basis_b, model)
    db = decompose_variance(opB, psi, basis_b, model)
    field = build_cval(opA, psi, basis_b, model)
    return da, db, field.masked_weight


def schrodinger_bound(opA: OperatorMatrix, opB: OperatorMatrix, psi: StateVector) -> BoundReport:
    """delta^2_A * delta^2_B >= (quantum covariance)^2, in the eigenbasis of B.

    The bound comes from Cauchy-Schwarz applied to the xi-independent parts
    of the two c-values. The rhs |(1/2)<{A,B}> - <A><B>|^2 is basis-free.
    """
    da, db, masked = _decompositions_in_b_basis(opA, opB, psi)
    _, _, cov, _ = _hermitian_pair_moments(opA, opB, psi)
    lhs = da.delta_sq * db.delta_sq
    rhs = cov**2
    return BoundReport(lhs=lhs, rhs=rhs, slack=lhs - rhs, kind="schrodinger", masked_weight=masked)


def kennard_robertson_bound(opA: OperatorMatrix, opB: OperatorMatrix, psi: StateVector) -> BoundReport:
    """err^2_A * delta^2_B >= (1/4)|<[A, B]>|^2, in the eigenbasis of B.

    The lhs is built from the xi-dependent error term of A's c-value; a
    commuting pair makes the rhs vanish while the lhs stays nonnegative.
    """
    da, db, masked = _decompositions_in_b_basis(opA, opB, psi)
    _, _, _, comm_sq = _hermitian_pair_moments(opA, opB, psi)
    lhs = da.err_sq * db.delta_sq
    return BoundReport(lhs=lhs, rhs=comm_sq, slack=lhs - comm_sq, kind="kennard_robertson", masked_weight=masked)


def krs_check(opA: OperatorMatrix, opB: OperatorMatrix, psi: StateVector) -> BoundReport:
    """Full KRS inequality sigma^2_A sigma^2_B >= (1/4)|<[A,B]>|^2 + cov^2.

    The lhs is computed from the c-valued variances in the eigenbasis of B
    (where they equal the quantum variances) and is cross-checked against
    the intermediate split sigma^2_A sigma^2_B = err^2_A delta^2_B +
    delta^2_A delta^2_B that underlies the sum of the two partial bounds.
    A disagreement there is a ConsistencyError, not a bound violation.
    """
    da, db, masked = _decompositions_in_b_basis(opA, opB, psi)
    _, _, cov, comm_sq = _hermitian_pair_moments(opA, opB, psi)
    lhs = da.total * db.total
    intermediate = da.err_sq * db.delta_sq + da.delta_sq * db.delta_sq
    scale = max(1.0, abs(lhs))
    # The two sides differ by da.total * db.err_sq, and B's err term in its
    # own eigenbasis is zero up to eigensolver roundoff, so this is a tight
    # internal consistency condition rather than a physics assertion.
    if abs(lhs - intermediate) > 10 * TAU_ID * scale:
        raise ConsistencyError(
            f"KRS intermediate decomposition mismatch: {lhs!r} vs {intermediate!r}"
        )
    rhs = comm_sq + cov**2
    return BoundReport(lhs=lhs, rhs=rhs, slack=lhs - rhs, kind="krs_full", masked_weight=masked)


def joint_distribution(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
) -> JointHistogram:
    """Exact joint distribution of two c-values sharing one (n, xi) draw.

    Only finite-support xi models can be enumerated; the result is supported
    on at most d * |support| points. Marginal means reproduce the respective
    mean c-values and the mixed moment reproduces the product average.
    """
    _check_provenance(fieldA, psi, basis)
    _check_provenance(fieldB, psi, basis)
    if not model.has_finite_support:
        raise MomentError(f"{model.kind!r} xi model cannot be enumerated into a joint histogram")
    xs, px = model.support_points()
    valid = fieldA.valid_mask & fieldB.valid_mask
    born = fieldA.born_weights
    rows = []
    for n in np.flatnonzero(valid):
        for x, p in zip(xs, px):
            rows.append((fieldA.evaluate(int(n), float(x)),
                         fieldB.evaluate(int(n), float(x)),
                         float(born[n] * p)))
    return JointHistogram(points=np.array(rows, dtype=float).reshape(-1, 3),
                          masked_weight=float(born[~valid].sum()))


def epistemic_restriction_check(
    opA: OperatorMatrix,
    opB: OperatorMatrix,
    psi: StateVector,
    theta_step: float | None = None,
    richardson: bool = True,
    planck: PlanckConfig = PlanckConfig(),
) -> np.ndarray:
    """Residuals of the flow identity for Im A_w in the eigenbasis of B.

    The unitary flow psi_theta = exp(-i A theta / hbar) psi changes the Born
    probabilities of the reference basis {|b_n>}; the identity states

        Im A_w(b_n|psi) = (hbar/2) d/dtheta |<b_n|psi_theta>|^2 / |<b_n|psi>|^2

    at theta = 0. The derivative is taken by a central difference of width
    theta_step (default 1e-4 * hbar). With richardson=True (default) one
    Richardson refinement is applied, lifting the truncation error from
    O(theta_step^2) to O(theta_step^4); set it False to observe the raw
    second-order convergence.

    Returns
    -------
    ndarray of per-n absolute residuals, NaN at masked entries.
    """
    if not (opA.hermitian_hint and opB.hermitian_hint):
        raise HermiticityError("the flow identity is stated for Hermitian operator pairs")
    hbar = planck.hbar
    h = 1e-4 * hbar if theta_step is None else float(theta_step)
    if h <= 0.0:
        raise ValueError(f"theta_step must be positive, got {h}")

    basis_b, _ = eigenbasis(opB)
    wv = weak_value_field(opA, psi, basis_b)
    born = wv.born_weights

    herm = (opA.entries + opA.entries.conj().T) / 2.0
    lam, frame = np.linalg.eigh(herm)
    coeff = frame.conj().T @ psi.amplitudes
    cols = basis_b.column_matrix.conj().T

    def born_at(theta: float) -> np.ndarray:
        flowed = frame @ (np.exp(-1j * lam * theta / hbar) * coeff)
        return np.abs(cols @ flowed) ** 2

    def central(step: float) -> np.ndarray:
        return (born_at(step) - born_at(-step)) / (2.0 * step)

    deriv = (4.0 * central(h / 2.0) - central(h)) / 3.0 if richardson else central(h)

    residuals = np.full(opA.dim, np.nan)
    valid = wv.valid_mask
    residuals[valid] = np.abs(wv.im_parts[valid] - (hbar / 2.0) * deriv[valid] / born[valid])
    return residuals
