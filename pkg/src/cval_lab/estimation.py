"""Estimating one observable from the strong measurement of another.

Measuring B projects onto its eigenbasis {|b_n>}; an estimator of A is any
real function T(b_n) of the outcome. Against the c-value A_c(b_n, xi) the
mean squared error splits as

    <(A_c - T)^2> = <(T - Re A_w)^2> + <((xi/hbar) Im A_w)^2>,

so the optimum is T = Re A_w, achieving exactly the err^2 term of the
variance decomposition. That scheme is unbiased at every fixed xi and its
error trades off against the self-estimation error of B through the
Kennard-Robertson bound. Shrinking the xi distribution width by a factor s
scales the optimal error by s^2, which is the classical limit knob.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cval import CValField, XiModel, build_cval
from .errors import (
    ConsistencyError,
    DimensionMismatch,
    HermiticityError,
    MomentError,
    OverlapError,
    ProvenanceError,
)
from .hilbert import TAU_ID, OperatorMatrix, StateVector, eigenbasis, expectation
from .uncertainty import BoundReport, decompose_variance
from .weakvalue import weak_value_field

_MOMENT_TOL = 1e-9


@dataclass(frozen=True)
class EstimatorField:
    """A real estimate per reference-basis outcome, tied to that basis."""

    estimates: np.ndarray
    valid_mask: np.ndarray
    basis_id: str

    def __post_init__(self):
        est = np.asarray(self.estimates, dtype=float).reshape(-1)
        mask = np.asarray(self.valid_mask, dtype=bool).reshape(-1)
        if est.size != mask.size:
            raise DimensionMismatch("estimates and valid_mask must share length")
        if not np.all(np.isfinite(est[mask])):
            raise ValueError("estimates must be finite on unmasked entries")
        est.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "estimates", est)
        object.__setattr__(self, "valid_mask", mask)

    @property
    def dim(self) -> int:
        return self.estimates.size

    def perturbed(self, delta: float, index: int) -> "EstimatorField":
        """Copy with delta added at one outcome; handy for optimality probes."""
        est = self.estimates.copy()
        est[index] += delta
        return EstimatorField(estimates=est, valid_mask=self.valid_mask.copy(), basis_id=self.basis_id)


@dataclass(frozen=True)
class EstimationReport:
    """MS error of an estimator plus bias and an optimality verdict.

    bias is reported as |b0| + |b1| where bias(xi) = b0 + (xi/hbar) b1 is
    the (affine in xi) mean single-shot error; it vanishes exactly when the
    scheme is unbiased at every fixed xi, not merely on xi average.
    """

    ms_error: float
    bias: float
    optimal: bool


def optimal_estimator(opA: OperatorMatrix, psi: StateVector, opB: OperatorMatrix) -> EstimatorField:
    """The MS-optimal estimator of A from B outcomes: T(b_n) = Re A_w(b_n|psi)."""
    if not (opA.hermitian_hint and opB.hermitian_hint):
        raise HermiticityError("estimation is set up for Hermitian operator pairs")
    basis_b, _ = eigenbasis(opB)
    wv = weak_value_field(opA, psi, basis_b)
    estimates = np.where(wv.valid_mask, wv.re_parts, np.nan)
    return EstimatorField(estimates=estimates, valid_mask=wv.valid_mask.copy(), basis_id=basis_b.fingerprint)


def single_shot_error(fieldA: CValField, n: int, xi: float) -> float:
    """A_c(b_n, xi) - Re A_w(b_n), which is (xi/hbar) Im A_w(b_n)."""
    if not fieldA.valid_mask[n]:
        raise OverlapError(f"entry {n} is masked (post-selection overlap below cutoff)")
    return float((xi / fieldA.hbar) * fieldA.im_part[n])


def ms_error(
    estimator: EstimatorField,
    opA: OperatorMatrix,
    psi: StateVector,
    opB: OperatorMatrix,
    model: XiModel,
) -> EstimationReport:
    """Mean squared error of an estimator of A measured in the B eigenbasis.

    Computed twice: directly as <(A_c - T)^2> and through the orthogonal
    decomposition <(T - Re A_w)^2> + E[(xi/hbar)^2] <(Im A_w)^2>. The two
    must agree to TAU_ID (scaled); disagreement raises ConsistencyError.
    Requires mean(xi) = 0, otherwise the cross term survives and the
    decomposition is simply false; the variance is free so the classical
    limit scan can reuse this code.
    """
    if not (opA.hermitian_hint and opB.hermitian_hint):
        raise HermiticityError("estimation is set up for Hermitian operator pairs")
    basis_b, _ = eigenbasis(opB)
    if estimator.basis_id != basis_b.fingerprint:
        raise ProvenanceError("estimator was built for a different reference basis")
    moments = model.xi_over_hbar_moments()
    if abs(moments[1]) > _MOMENT_TOL:
        raise MomentError(f"MS error decomposition needs mean(xi) = 0, got scaled mean {moments[1]:.3e}")
    m2 = moments[2]

    field = build_cval(opA, psi, basis_b, model)
    valid = field.valid_mask & estimator.valid_mask
    w = np.where(valid, field.born_weights, 0.0)
    re = np.where(valid, field.re_part, 0.0)
    im = np.where(valid, field.im_part, 0.0)
    t = np.where(valid, estimator.estimates, 0.0)

    resid = re - t
    direct = float((w * resid * resid).sum()) + 2.0 * moments[1] * float((w * resid * im).sum()) \
        + m2 * float((w * im * im).sum())
    reference = m2 * float((w * im * im).sum())
    decomposed = float((w * resid * resid).sum()) + reference
    scale = max(1.0, abs(direct))
    if abs(direct - decomposed) > TAU_ID * scale:
        raise ConsistencyError(f"MS error paths disagree: {direct!r} vs {decomposed!r}")

    b0 = float((w * resid).sum())
    b1 = float((w * im).sum())
    return EstimationReport(
        ms_error=direct,
        bias=abs(b0) + abs(b1),
        optimal=bool(direct - reference <= TAU_ID * scale),
    )


def self_estimation_tradeoff(
    opA: OperatorMatrix,
    opB: OperatorMatrix,
    psi: StateVector,
    model: XiModel,
):
    """Joint-estimation trade-off: err^2_A * err^2_{B_o} >= (1/4)|<[A,B]>|^2.

    A is estimated optimally from the B outcomes; B itself is reduced to the
    single outcome-independent estimate B_o = <B>, whose MS error is the
    spread delta^2_B of the eigenvalues under Born statistics. Those are the
    same two quantities the Kennard-Robertson bound multiplies, so the
    report carries kind "kennard_robertson". The equality of the constant
    estimator's MS error with delta^2_B is verified on the spot.
    """
    moments = model.xi_over_hbar_moments()
    if abs(moments[1]) > _MOMENT_TOL or abs(moments[2] - 1.0) > _MOMENT_TOL:
        raise MomentError("the trade-off identity needs mean(xi) = 0 and var(xi) = hbar^2")

    est_a = optimal_estimator(opA, psi, opB)
    err_a = ms_error(est_a, opA, psi, opB, model).ms_error

    basis_b, _ = eigenbasis(opB)
    db = decompose_variance(opB, psi, basis_b, model)
    mean_b = expectation(opB, psi).real
    wv_b = weak_value_field(opB, psi, basis_b)
    const = EstimatorField(
        estimates=np.full(opB.dim, mean_b),
        valid_mask=wv_b.valid_mask.copy(),
        basis_id=basis_b.fingerprint,
    )
    err_b0 = ms_error(const, opB, psi, opB, model).ms_error
    if abs(err_b0 - db.delta_sq) > TAU_ID * max(1.0, abs(err_b0)):
        raise ConsistencyError(
            f"constant-estimator MS error {err_b0!r} does not match delta^2 {db.delta_sq!r}"
        )

    ab = complex(np.vdot(psi.amplitudes, opA.entries @ (opB.entries @ psi.amplitudes)))
    ba = complex(np.vdot(psi.amplitudes, opB.entries @ (opA.entries @ psi.amplitudes)))
    rhs = 0.25 * abs(ab - ba) ** 2
    lhs = err_a * err_b0
    return BoundReport(lhs=lhs, rhs=rhs, slack=lhs - rhs, kind="kennard_robertson",
                       masked_weight=wv_b.masked_weight)


def classical_limit_scan(
    opA: OperatorMatrix,
    psi: StateVector,
    opB: OperatorMatrix,
    scales,
    model: XiModel | None = None,
) -> list[tuple[float, float]]:
    """Optimal-estimator MS error as the xi width shrinks: ms(s) = s^2 ms(1).

    Only the xi distribution is rescaled (variance (s hbar)^2); hbar inside
    the weak values stays put, so the quantum state and the estimator field
    are unchanged and the scan probes exactly the error term. s = 0 is the
    deterministic limit where the c-value collapses onto the estimator.

    Returns a list of (s, ms_error) pairs in the order given.
    """
    if model is None:
        model = XiModel.binary()
    est = optimal_estimator(opA, psi, opB)
    out = []
    for s in scales:
        s = float(s)
        if s < 0.0 or s > 1.0:
            raise ValueError(f"scale factors must lie in [0, 1], got {s}")
        scaled = replace(model, scale=s)
        out.append((s, ms_error(est, opA, psi, opB, scaled).ms_error))
    return out
