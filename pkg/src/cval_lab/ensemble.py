"""Ensemble statistics of c-valued quantities over Pr(phi_n, xi | psi).

Every quantity this module averages is a polynomial in u = xi/hbar with
coefficients indexed by the basis outcome n, so the exact path never needs
to integrate over xi numerically: only the moments E[u^k] for k <= 3 appear.
Three evaluation methods are offered everywhere:

    exact        moment-based closed form (works for every xi model)
    enumerated   literal finite sum over (n, xi) cells (finite-support models)
    monte_carlo  seeded sampling with a standard-error estimate

The identities these averages reproduce (anticommutator, commutator,
covariance, variance forms) assume mean(xi) = 0 and var(xi) = hbar^2, and
the commutator form additionally needs a vanishing third moment. Those
moment constraints are enforced here and violations raise MomentError.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cval import CValField, XiModel
from .errors import (
    DimensionMismatch,
    HermiticityError,
    MomentError,
    ProvenanceError,
)
from .hilbert import (
    OperatorMatrix,
    OrthonormalBasis,
    StateVector,
    MixedEnsemble,
    eigenbasis,
)
from .cval import build_cval

_METHODS = ("exact", "enumerated", "monte_carlo")

# Tolerance on the scaled moments (mean/hbar, var/hbar^2, m3/hbar^3) when an
# operation's derivation requires them to be exactly (0, 1, 0).
_MOMENT_TOL = 1e-9


@dataclass(frozen=True)
class EnsembleAverage:
    """A single ensemble average with its evaluation metadata.

    mc_stderr is present exactly when method == "monte_carlo". masked_weight
    is the total Born probability excluded by overlap masking; identities are
    exact only when it is zero.
    """

    value: complex | float
    method: str
    mc_stderr: float | None = None
    masked_weight: float = 0.0

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if (self.mc_stderr is not None) != (self.method == "monte_carlo"):
            raise ValueError("mc_stderr must be present iff method == 'monte_carlo'")
        if self.masked_weight < 0.0:
            raise ValueError("masked_weight must be nonnegative")


# ---------------------------------------------------------------------------
# provenance and moment guards
# ---------------------------------------------------------------------------

def _check_provenance(field: CValField, psi: StateVector | None, basis: OrthonormalBasis) -> None:
    if field.basis_id != basis.fingerprint:
        raise ProvenanceError("field was built on a different basis than the one supplied")
    if psi is not None and field.state_id != psi.fingerprint:
        raise ProvenanceError("field was built from a different state than the one supplied")


def _require_identity_moments(model: XiModel) -> None:
    m = model.xi_over_hbar_moments()
    if abs(m[1]) > _MOMENT_TOL or abs(m[2] - 1.0) > _MOMENT_TOL:
        raise MomentError(
            f"this average requires mean(xi) = 0 and var(xi) = hbar^2; got scaled moments "
            f"mean = {m[1]:.3e}, var = {m[2]:.6f}"
        )


def _require_vanishing_third_moment(model: XiModel) -> None:
    m = model.xi_over_hbar_moments()
    if abs(m[3]) > _MOMENT_TOL:
        raise MomentError(
            f"the commutator representation needs E[xi^3] = 0; this model has E[(xi/hbar)^3] = {m[3]:.3e}"
        )


# ---------------------------------------------------------------------------
# polynomial-in-u averaging engine
# ---------------------------------------------------------------------------

def _average_poly(
    born: np.ndarray,
    valid: np.ndarray,
    coeffs: np.ndarray,
    model: XiModel,
    method: str,
    samples: int,
    rng: np.random.Generator | None,
) -> tuple[float, float | None, float]:
    """Average sum_k coeffs[k, n] * u^k over Pr(n) * chi(xi), u = xi/hbar.

    Masked cells are dropped and their Born weight returned as the third
    element. Coefficients on masked entries are ignored entirely.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    kmax = coeffs.shape[0]
    w = np.where(valid, born, 0.0)
    masked = float(born[~valid].sum())

    if method == "exact":
        moments = model.xi_over_hbar_moments()
        if kmax > moments.size:
            raise MomentError(f"engine supports u powers up to {moments.size - 1}, got {kmax - 1}")
        value = float(sum((w * coeffs[k]).sum() * moments[k] for k in range(kmax)))
        return value, None, masked

    if method == "enumerated":
        xs, px = model.support_points()
        us = xs / model.hbar
        value = 0.0
        for u, p in zip(us, px):
            powers = u ** np.arange(kmax)
            per_n = coeffs.T @ powers
            value += p * float((w * per_n).sum())
        return value, None, masked

    # monte_carlo
    if samples < 2:
        raise ValueError(f"monte_carlo needs samples >= 2, got {samples}")
    if rng is None:
        rng = np.random.default_rng(model.sampler_seed)
    total = float(w.sum())
    if total <= 0.0:
        return 0.0, 0.0, masked
    idx = np.flatnonzero(valid)
    pv = born[idx] / born[idx].sum()
    ns = rng.choice(idx, size=samples, p=pv)
    us = model.sample(samples, rng=rng) / model.hbar
    vals = np.zeros(samples)
    upow = np.ones(samples)
    for k in range(kmax):
        vals += coeffs[k, ns] * upow
        upow = upow * us
    mean = float(vals.mean())
    stderr = float(total * vals.std(ddof=1) / np.sqrt(samples))
    return total * mean, stderr, masked


def _joint_valid(fa: CValField, fb: CValField) -> np.ndarray:
    if fa.dim != fb.dim:
        raise DimensionMismatch(f"field dims {fa.dim} and {fb.dim}")
    return fa.valid_mask & fb.valid_mask


# ---------------------------------------------------------------------------
# first moments
# ---------------------------------------------------------------------------

def mean_cval(
    field: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """<O_c> over the joint ensemble; equals Re <psi|O|psi> when the mask is empty.

    Parameters
    ----------
    field : CValField built from (op, psi, basis).
    psi, basis : the state and basis the field claims to come from; a
        fingerprint mismatch raises ProvenanceError.
    model : XiModel with mean 0 and variance hbar^2.
    method : "exact", "enumerated", or "monte_carlo".
    """
    _check_provenance(field, psi, basis)
    _require_identity_moments(model)
    coeffs = np.vstack([np.where(field.valid_mask, field.re_part, 0.0),
                        np.where(field.valid_mask, field.im_part, 0.0)])
    value, se, masked = _average_poly(field.born_weights, field.valid_mask, coeffs, model, method, samples, rng)
    return EnsembleAverage(value=value, method=method, mc_stderr=se, masked_weight=masked)


def xi_weighted_mean(
    field: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """<(xi/hbar) O_c>; equals Im <psi|O|psi> when the mask is empty.

    Together with mean_cval this reassembles the full complex expectation
    value <psi|O|psi> = mean + i * xi_weighted_mean.
    """
    _check_provenance(field, psi, basis)
    _require_identity_moments(model)
    zeros = np.zeros(field.dim)
    coeffs = np.vstack([zeros,
                        np.where(field.valid_mask, field.re_part, 0.0),
                        np.where(field.valid_mask, field.im_part, 0.0)])
    value, se, masked = _average_poly(field.born_weights, field.valid_mask, coeffs, model, method, samples, rng)
    return EnsembleAverage(value=value, method=method, mc_stderr=se, masked_weight=masked)


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------

def _product_coeffs(fa: CValField, fb: CValField, valid: np.ndarray) -> np.ndarray:
    ar = np.where(valid, fa.re_part, 0.0)
    ai = np.where(valid, fa.im_part, 0.0)
    br = np.where(valid, fb.re_part, 0.0)
    bi = np.where(valid, fb.im_part, 0.0)
    return np.vstack([ar * br, ar * bi + ai * br, ai * bi])


def product_average(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """<A_c B_c>, the symmetrized-product average.

    With an empty mask this equals <psi| (A^dag B + B^dag A)/2 |psi> for
    arbitrary operators, which reduces to the anticommutator form for
    Hermitian pairs and to <psi|A B|psi> for commuting local factors. The
    pointwise product rule for c-values generally fails; this average
    nevertheless matches the quantum value, which is the whole point.
    """
    _check_provenance(fieldA, psi, basis)
    _check_provenance(fieldB, psi, basis)
    _require_identity_moments(model)
    valid = _joint_valid(fieldA, fieldB)
    coeffs = _product_coeffs(fieldA, fieldB, valid)
    value, se, masked = _average_poly(fieldA.born_weights, valid, coeffs, model, method, samples, rng)
    return EnsembleAverage(value=value, method=method, mc_stderr=se, masked_weight=masked)


def commutator_average(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """<(xi/hbar) A_c(n, -xi) B_c(n, xi)>, the xi-flipped product average.

    Expanding in u = xi/hbar gives u (aR - u aI)(bR + u bI); taking the
    ensemble average with E[u] = E[u^3] = 0 and E[u^2] = 1 leaves
    sum_n (aR bI - aI bR) Pr(n), which equals
    (1/2i) <psi| (A^dag B - B^dag A) |psi> when the mask is empty. Models
    with a nonvanishing third moment are rejected, since the u^3 term then
    survives with coefficient -aI bI and the identity genuinely breaks.
    """
    _check_provenance(fieldA, psi, basis)
    _check_provenance(fieldB, psi, basis)
    _require_identity_moments(model)
    _require_vanishing_third_moment(model)
    valid = _joint_valid(fieldA, fieldB)
    ar = np.where(valid, fieldA.re_part, 0.0)
    ai = np.where(valid, fieldA.im_part, 0.0)
    br = np.where(valid, fieldB.re_part, 0.0)
    bi = np.where(valid, fieldB.im_part, 0.0)
    zeros = np.zeros(fieldA.dim)
    coeffs = np.vstack([zeros, ar * br, ar * bi - ai * br, -ai * bi])
    value, se, masked = _average_poly(fieldA.born_weights, valid, coeffs, model, method, samples, rng)
    return EnsembleAverage(value=value, method=method, mc_stderr=se, masked_weight=masked)


def full_product_representation(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """Complex recombination <A_c B_c> + i <(xi/hbar) A_c(-xi) B_c(xi)>.

    With an empty mask this equals <psi|A^dag B|psi>, and also the
    overlap-weighted sum of conjugated weak-value products
    sum_n A_w(n)^* B_w(n) |<phi_n|psi>|^2.
    """
    prod = product_average(fieldA, fieldB, psi, basis, model, method, samples, rng)
    comm = commutator_average(fieldA, fieldB, psi, basis, model, method, samples, rng)
    se = None
    if method == "monte_carlo":
        se = float(np.hypot(prod.mc_stderr, comm.mc_stderr))
    return EnsembleAverage(
        value=complex(prod.value, comm.value),
        method=method,
        mc_stderr=se,
        masked_weight=max(prod.masked_weight, comm.masked_weight),
    )


# ---------------------------------------------------------------------------
# second moments of Hermitian observables
# ---------------------------------------------------------------------------

def _require_hermitian_source(*fields: CValField) -> None:
    for f in fields:
        if not f.hermitian_source:
            raise HermiticityError("this statistic is defined for fields of Hermitian operators only")


def _second_moment_combination(
    e_prod: EnsembleAverage, e_a: EnsembleAverage, e_b: EnsembleAverage, method: str
) -> EnsembleAverage:
    value = e_prod.value - e_a.value * e_b.value
    se = None
    if method == "monte_carlo":
        # First-order propagation; the three estimates come from independent
        # draws of the same generator stream.
        se = float(np.sqrt(e_prod.mc_stderr**2
                           + (e_b.value * e_a.mc_stderr) ** 2
                           + (e_a.value * e_b.mc_stderr) ** 2))
    return EnsembleAverage(
        value=value,
        method=method,
        mc_stderr=se,
        masked_weight=max(e_prod.masked_weight, e_a.masked_weight, e_b.masked_weight),
    )


def covariance(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """Classical covariance <A_c B_c> - <A_c><B_c> of two Hermitian c-values.

    Equals the quantum covariance (1/2)<{A, B}> - <A><B> when the mask is
    empty, independent of the basis choice.
    """
    _require_hermitian_source(fieldA, fieldB)
    e_prod = product_average(fieldA, fieldB, psi, basis, model, method, samples, rng)
    e_a = mean_cval(fieldA, psi, basis, model, method, samples, rng)
    e_b = mean_cval(fieldB, psi, basis, model, method, samples, rng)
    return _second_moment_combination(e_prod, e_a, e_b, method)


def variance(
    field: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """Classical variance of a Hermitian c-value; equals the quantum variance."""
    _require_hermitian_source(field)
    e_sq = product_average(field, field, psi, basis, model, method, samples, rng)
    e_m = mean_cval(field, psi, basis, model, method, samples, rng)
    return _second_moment_combination(e_sq, e_m, e_m, method)


def statistical_deviation(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """Mean squared distance <(A_c - B_c)^2> between two Hermitian c-values.

    Equals <psi|(A - B)^2|psi>, the operator l2 distance in the state.
    """
    _require_hermitian_source(fieldA, fieldB)
    _check_provenance(fieldA, psi, basis)
    _check_provenance(fieldB, psi, basis)
    _require_identity_moments(model)
    valid = _joint_valid(fieldA, fieldB)
    dr = np.where(valid, fieldA.re_part - fieldB.re_part, 0.0)
    di = np.where(valid, fieldA.im_part - fieldB.im_part, 0.0)
    coeffs = np.vstack([dr * dr, 2.0 * dr * di, di * di])
    value, se, masked = _average_poly(fieldA.born_weights, valid, coeffs, model, method, samples, rng)
    return EnsembleAverage(value=value, method=method, mc_stderr=se, masked_weight=masked)


# ---------------------------------------------------------------------------
# equivalence theorem and bipartite xi structure
# ---------------------------------------------------------------------------

def equivalence_theorem(
    opA: OperatorMatrix,
    opB: OperatorMatrix,
    f_coeffs,
    opC: OperatorMatrix,
    psi: StateVector,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """<A_c B_c + f(c_n)> evaluated in the eigenbasis of a Hermitian C.

    f is a polynomial given by ascending coefficients; f(c_n) is a function
    of the outcome index only, so it rides along as a xi-independent term.
    With an empty mask the average equals
    <psi| (A^dag B + B^dag A)/2 + f(C) |psi>.
    """
    if not opC.hermitian_hint:
        raise HermiticityError("the reference operator C must be Hermitian")
    basis, evals = eigenbasis(opC)
    fieldA = build_cval(opA, psi, basis, model)
    fieldB = build_cval(opB, psi, basis, model)
    _require_identity_moments(model)
    valid = _joint_valid(fieldA, fieldB)
    coeffs = _product_coeffs(fieldA, fieldB, valid)
    f_of_c = np.polynomial.polynomial.polyval(evals, np.asarray(f_coeffs, dtype=float))
    coeffs[0] = coeffs[0] + np.where(valid, f_of_c, 0.0)
    value, se, masked = _average_poly(fieldA.born_weights, valid, coeffs, model, method, samples, rng)
    return EnsembleAverage(value=value, method=method, mc_stderr=se, masked_weight=masked)


@dataclass(frozen=True)
class SeparableXiProduct:
    """Outcome of replacing the shared xi by two independent local ones.

    separable : EnsembleAverage of A_c(n, xi_A) B_c(n, xi_B); the imaginary
        cross term averages away because E[xi_A xi_B] = 0.
    cross_term : sum_n Im(A_w) Im(B_w) Pr(n), the piece a shared global xi
        would have added. This is the observable difference between the two
        randomness architectures and vanishes exactly when either field is
        real on the support.
    global_value : separable.value + cross_term, i.e. what the shared-xi
        product average returns on the same fields.
    """

    separable: EnsembleAverage
    cross_term: float
    global_value: float


def _check_local_factor(op: OperatorMatrix, dims: tuple[int, int], which: str) -> None:
    da, db = dims
    if op.dim != da * db:
        raise DimensionMismatch(f"operator dim {op.dim} is not {da}*{db}")
    t = op.entries.reshape(da, db, da, db)
    if which == "first":
        local = np.trace(t, axis1=1, axis2=3) / db
        rebuilt = np.kron(local, np.eye(db))
    else:
        local = np.trace(t, axis1=0, axis2=2) / da
        rebuilt = np.kron(np.eye(da), local)
    scale = max(1.0, float(np.max(np.abs(op.entries))))
    if float(np.max(np.abs(op.entries - rebuilt))) > 1e-10 * scale:
        raise DimensionMismatch(f"operator is not of the form required on the {which} factor")


def separable_xi_product(
    fieldA: CValField,
    fieldB: CValField,
    psi: StateVector,
    basis: OrthonormalBasis,
    model_a: XiModel,
    model_b: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
    dims: tuple[int, int] | None = None,
    ops: tuple[OperatorMatrix, OperatorMatrix] | None = None,
) -> SeparableXiProduct:
    """Product average when each subsystem carries its own independent xi.

    fieldA and fieldB are c-value fields of local operators a (x) 1 and
    1 (x) b on the composite space, evaluated on a product basis. If ops and
    dims are supplied, the local structure is verified and a violation raises
    DimensionMismatch.

    Both xi models must have mean 0 and variance hbar^2. The returned
    cross_term quantifies exactly what is lost relative to a single shared
    xi; for entangled states it is generally nonzero, which is why the
    shared (global) variable is not dispensable.
    """
    if ops is not None:
        if dims is None:
            raise DimensionMismatch("dims=(dA, dB) are required to verify local operator structure")
        _check_local_factor(ops[0], dims, "first")
        _check_local_factor(ops[1], dims, "second")
    _check_provenance(fieldA, psi, basis)
    _check_provenance(fieldB, psi, basis)
    _require_identity_moments(model_a)
    _require_identity_moments(model_b)
    valid = _joint_valid(fieldA, fieldB)
    born = fieldA.born_weights
    ar = np.where(valid, fieldA.re_part, 0.0)
    ai = np.where(valid, fieldA.im_part, 0.0)
    br = np.where(valid, fieldB.re_part, 0.0)
    bi = np.where(valid, fieldB.im_part, 0.0)
    w = np.where(valid, born, 0.0)
    masked = float(born[~valid].sum())
    cross = float((w * ai * bi).sum())
    exact_separable = float((w * ar * br).sum())

    if method == "exact":
        sep = EnsembleAverage(value=exact_separable, method="exact", masked_weight=masked)
    elif method == "enumerated":
        xa, pa = model_a.support_points()
        xb, pb = model_b.support_points()
        ua, ub = xa / model_a.hbar, xb / model_b.hbar
        value = 0.0
        for u1, p1 in zip(ua, pa):
            for u2, p2 in zip(ub, pb):
                value += p1 * p2 * float((w * (ar + u1 * ai) * (br + u2 * bi)).sum())
        sep = EnsembleAverage(value=value, method="enumerated", masked_weight=masked)
    elif method == "monte_carlo":
        if rng is None:
            rng = np.random.default_rng(model_a.sampler_seed)
        total = float(w.sum())
        idx = np.flatnonzero(valid)
        pv = born[idx] / born[idx].sum()
        ns = rng.choice(idx, size=samples, p=pv)
        u1 = model_a.sample(samples, rng=rng) / model_a.hbar
        u2 = model_b.sample(samples, rng=rng) / model_b.hbar
        vals = (ar[ns] + u1 * ai[ns]) * (br[ns] + u2 * bi[ns])
        sep = EnsembleAverage(
            value=total * float(vals.mean()),
            method="monte_carlo",
            mc_stderr=float(total * vals.std(ddof=1) / np.sqrt(samples)),
            masked_weight=masked,
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    # global_value is always reported from the exact path so the difference
    # separable-vs-global is not polluted by MC noise.
    return SeparableXiProduct(separable=sep, cross_term=cross, global_value=exact_separable + cross)


def mixed_product_average(
    ensemble: MixedEnsemble,
    opA: OperatorMatrix,
    opB: OperatorMatrix,
    basis: OrthonormalBasis,
    model: XiModel,
    method: str = "exact",
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> EnsembleAverage:
    """Decomposition-weighted product average sum_mu Pr(mu) <A_c B_c>_mu.

    Equals Tr{rho (A^dag B + B^dag A)/2} when masks are empty, and is
    therefore identical across different pure-state decompositions of the
    same density matrix.
    """
    _require_identity_moments(model)
    total = 0.0
    masked = 0.0
    se_sq = 0.0
    for w, state in zip(ensemble.weights, ensemble.states):
        fa = build_cval(opA, state, basis, model)
        fb = build_cval(opB, state, basis, model)
        avg = product_average(fa, fb, state, basis, model, method, samples, rng)
        total += w * avg.value
        masked += w * avg.masked_weight
        if method == "monte_carlo":
            se_sq += (w * avg.mc_stderr) ** 2
    return EnsembleAverage(
        value=total,
        method=method,
        mc_stderr=float(np.sqrt(se_sq)) if method == "monte_carlo" else None,
        masked_weight=masked,
    )


def verification_record(
    name: str,
    value,
    oracle,
    method: str = "exact",
    masked_weight: float = 0.0,
    inputs: tuple = (),
) -> dict:
    """JSON-ready record pairing a computed average with its oracle value."""
    def _enc(x):
        x = complex(x)
        return [x.real, x.imag] if x.imag != 0.0 else x.real
    return {
        "name": name,
        "inputs": list(inputs),
        "method": method,
        "value": _enc(value),
        "oracle": _enc(oracle),
        "abs_error": abs(complex(value) - complex(oracle)),
        "masked_weight": float(masked_weight),
    }
