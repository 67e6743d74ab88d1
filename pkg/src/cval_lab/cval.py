"""Real-deterministic c-valued quantities built from weak values.

The central object is the field

    O_c(phi_n, xi | psi) = Re O_w(phi_n|psi) + (xi/hbar) * Im O_w(phi_n|psi),

a real number for every basis index n and every realization of the global
random variable xi. The field itself is deterministic; all randomness lives
in the pair (n, xi) distributed as Pr(phi_n|psi) * chi(xi).

chi(xi) is constrained only through its moments: mean 0, variance hbar^2,
and (for commutator-type averages) vanishing third moment. The default model
is binary xi = +/- hbar with half-half probability, which satisfies all
three and has finite support, so every identity can be checked by exact
enumeration with no Monte Carlo error.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, MomentError, NormalizationError, OverlapError, ConsistencyError
from .hilbert import (
    TAU_ID,
    TAU_NORM,
    MixedEnsemble,
    OperatorMatrix,
    OrthonormalBasis,
    StateVector,
    born_probabilities,
    density_matrix,
)
from .weakvalue import EPS_OVERLAP, WeakValueField, weak_value_field, weak_value_field_mixed

_XI_KINDS = ("binary", "uniform", "gaussian", "discrete")


@dataclass(frozen=True)
class XiModel:
    """Distribution chi(xi) of the global random variable.

    Parameters
    ----------
    kind : {"binary", "uniform", "gaussian", "discrete"}
        binary: xi = +/- scale*hbar with equal probability.
        uniform: flat on [-sqrt(3), sqrt(3)] * scale*hbar.
        gaussian: normal with standard deviation scale*hbar.
        discrete: user-supplied support and probabilities (see below).
    hbar : positive float
        Action scale; the variance constraint reads var(xi) = (scale*hbar)^2.
    scale : float in [0, inf)
        Width multiplier used by the classical-limit scan. scale = 1 is the
        physical regime where all identities hold; scale = 0 collapses chi
        to a point mass at 0.
    support, probabilities : arrays, discrete kind only
        Support points in units where the variance constraint applies before
        scaling, i.e. sum p_i x_i = 0 and sum p_i x_i^2 = hbar^2 are required
        of the unscaled support. The third moment is free, which is exactly
        what makes the discrete kind useful as a negative control for
        averages that need it to vanish.
    sampler_seed : int
        Root seed; ``sample`` with no explicit generator always starts from
        it, so repeated calls reproduce the same stream.
    """

    kind: str = "binary"
    hbar: float = 1.0
    scale: float = 1.0
    support: np.ndarray | None = None
    probabilities: np.ndarray | None = None
    sampler_seed: int = 0

    def __post_init__(self):
        if self.kind not in _XI_KINDS:
            raise MomentError(f"unknown xi model kind {self.kind!r}; expected one of {_XI_KINDS}")
        if not (float(self.hbar) > 0.0):
            raise MomentError(f"hbar must be positive, got {self.hbar}")
        if not (float(self.scale) >= 0.0):
            raise MomentError(f"scale must be nonnegative, got {self.scale}")
        if self.kind == "discrete":
            if self.support is None or self.probabilities is None:
                raise MomentError("discrete xi model needs support and probabilities")
            sup = np.asarray(self.support, dtype=float).reshape(-1)
            pr = np.asarray(self.probabilities, dtype=float).reshape(-1)
            if sup.size != pr.size or sup.size == 0:
                raise MomentError("support and probabilities must have equal nonzero length")
            if np.any(pr < 0.0) or abs(float(pr.sum()) - 1.0) > TAU_NORM:
                raise NormalizationError("probabilities must be nonnegative and sum to 1")
            mean = float(pr @ sup)
            var = float(pr @ sup**2)
            if abs(mean) > 1e-9 * self.hbar:
                raise MomentError(f"discrete xi mean {mean:.3e} must vanish")
            if abs(var - self.hbar**2) > 1e-9 * self.hbar**2:
                raise MomentError(f"discrete xi variance {var:.6e} must equal hbar^2 = {self.hbar**2:.6e}")
            sup.setflags(write=False)
            pr.setflags(write=False)
            object.__setattr__(self, "support", sup)
            object.__setattr__(self, "probabilities", pr)
        else:
            if self.support is not None or self.probabilities is not None:
                raise MomentError(f"support/probabilities only apply to the discrete kind, not {self.kind!r}")

    # -- analytic moments ----------------------------------------------------

    @property
    def moments(self) -> tuple[float, float, float]:
        """(mean, variance, third moment) of xi in absolute units."""
        s = float(self.scale)
        h = float(self.hbar)
        if self.kind == "discrete":
            sup = s * self.support
            pr = self.probabilities
            return (float(pr @ sup), float(pr @ sup**2), float(pr @ sup**3))
        return (0.0, (s * h) ** 2, 0.0)

    def xi_over_hbar_moments(self) -> np.ndarray:
        """E[(xi/hbar)^k] for k = 0..3; all exact ensemble averages reduce to these."""
        s = float(self.scale)
        if self.kind == "discrete":
            u = s * self.support / self.hbar
            pr = self.probabilities
            return np.array([1.0, float(pr @ u), float(pr @ u**2), float(pr @ u**3)])
        return np.array([1.0, 0.0, s * s, 0.0])

    @property
    def has_finite_support(self) -> bool:
        return self.kind in ("binary", "discrete")

    def support_points(self) -> tuple[np.ndarray, np.ndarray]:
        """(xi values, probabilities) for finite-support kinds.

        Raises MomentError for continuous kinds, which cannot be enumerated.
        """
        s = float(self.scale)
        if self.kind == "binary":
            x = s * self.hbar
            return np.array([-x, x]), np.array([0.5, 0.5])
        if self.kind == "discrete":
            return s * np.array(self.support), np.array(self.probabilities)
        raise MomentError(f"{self.kind!r} xi model has no finite support to enumerate")

    # -- sampling ------------------------------------------------------------

    def sample(self, count: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """Draw i.i.d. xi values.

        With rng omitted, a fresh generator is seeded from sampler_seed, so
        two identical calls yield identical streams. Pass a generator to draw
        from an ongoing stream instead.
        """
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        if rng is None:
            rng = np.random.default_rng(self.sampler_seed)
        s = float(self.scale)
        h = float(self.hbar)
        if self.kind == "binary":
            return (2.0 * rng.integers(0, 2, size=count) - 1.0) * (s * h)
        if self.kind == "uniform":
            half = np.sqrt(3.0) * s * h
            return rng.uniform(-half, half, size=count)
        if self.kind == "gaussian":
            if s == 0.0:
                return np.zeros(count)
            return rng.normal(0.0, s * h, size=count)
        xs, pr = self.support_points()
        return rng.choice(xs, size=count, p=pr)

    @classmethod
    def binary(cls, hbar: float = 1.0, seed: int = 0, scale: float = 1.0) -> "XiModel":
        return cls(kind="binary", hbar=hbar, scale=scale, sampler_seed=seed)

    @classmethod
    def uniform(cls, hbar: float = 1.0, seed: int = 0, scale: float = 1.0) -> "XiModel":
        return cls(kind="uniform", hbar=hbar, scale=scale, sampler_seed=seed)

    @classmethod
    def gaussian(cls, hbar: float = 1.0, seed: int = 0, scale: float = 1.0) -> "XiModel":
        return cls(kind="gaussian", hbar=hbar, scale=scale, sampler_seed=seed)

    @classmethod
    def discrete(cls, support, probabilities, hbar: float = 1.0, seed: int = 0) -> "XiModel":
        return cls(kind="discrete", hbar=hbar, support=np.asarray(support, dtype=float),
                   probabilities=np.asarray(probabilities, dtype=float), sampler_seed=seed)


def sample_xi(model: XiModel, count: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Module-level alias for XiModel.sample."""
    return model.sample(count, rng=rng)


@dataclass(frozen=True)
class CValField:
    """The deterministic map (n, xi) -> re_part[n] + (xi/hbar) * im_part[n].

    xi never lives inside the field; a realization is a JointSample. The
    field records which basis and state it was derived from (basis_id,
    state_id) so statistics routines can reject mismatched combinations.
    """

    re_part: np.ndarray
    im_part: np.ndarray
    hbar: float
    valid_mask: np.ndarray
    born_weights: np.ndarray
    basis_id: str
    state_id: str
    hermitian_source: bool = False

    def __post_init__(self):
        re = np.asarray(self.re_part, dtype=float).reshape(-1)
        im = np.asarray(self.im_part, dtype=float).reshape(-1)
        mask = np.asarray(self.valid_mask, dtype=bool).reshape(-1)
        born = np.asarray(self.born_weights, dtype=float).reshape(-1)
        if not (re.size == im.size == mask.size == born.size):
            raise DimensionMismatch("re_part, im_part, valid_mask, born_weights must share length")
        if not (float(self.hbar) > 0.0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not (np.all(np.isfinite(re[mask])) and np.all(np.isfinite(im[mask]))):
            raise ValueError("c-value parts must be finite on unmasked entries")
        for name, arr in (("re_part", re), ("im_part", im), ("valid_mask", mask), ("born_weights", born)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.re_part.size

    @cached_property
    def masked_weight(self) -> float:
        return float(self.born_weights[~self.valid_mask].sum())

    def evaluate(self, n: int, xi: float) -> float:
        """Value of the c-valued quantity at basis index n and realization xi."""
        if not self.valid_mask[n]:
            raise OverlapError(f"entry {n} is masked (post-selection overlap below cutoff)")
        return float(self.re_part[n] + (xi / self.hbar) * self.im_part[n])

    def evaluate_all(self, xi: float) -> np.ndarray:
        """Vectorized evaluate; masked entries come back as NaN."""
        out = self.re_part + (xi / self.hbar) * self.im_part
        return np.where(self.valid_mask, out, np.nan)

    def to_csv(self, path) -> None:
        """Write columns (n, re_part, im_part, born_weight); masked rows have empty parts."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "re_part", "im_part", "born_weight"])
            for n in range(self.dim):
                if self.valid_mask[n]:
                    writer.writerow([n, repr(float(self.re_part[n])), repr(float(self.im_part[n])),
                                     repr(float(self.born_weights[n]))])
                else:
                    writer.writerow([n, "", "", repr(float(self.born_weights[n]))])


def field_from_weak_values(wv: WeakValueField, hbar: float) -> CValField:
    """Wrap an existing weak-value field as a c-value field."""
    return CValField(
        re_part=wv.values.real.copy(),
        im_part=wv.values.imag.copy(),
        hbar=hbar,
        valid_mask=wv.valid_mask.copy(),
        born_weights=wv.born_weights.copy(),
        basis_id=wv.basis_id,
        state_id=wv.state_id,
        hermitian_source=wv.hermitian_source,
    )


def build_cval(op: OperatorMatrix, psi: StateVector, basis: OrthonormalBasis, xi_model: XiModel) -> CValField:
    """Construct the c-value field of an operator for a pre-selected state.

    The decomposition is additive in the operator and affine in xi; masked
    entries propagate from the underlying weak values.
    """
    wv = weak_value_field(op, psi, basis)
    return field_from_weak_values(wv, xi_model.hbar)


def recover_weak_value(field: CValField, n: int, xi: float) -> complex:
    """Invert the construction: two evaluations at +/- xi return the weak value.

    Re O_w = [f(n, xi) + f(n, -xi)] / 2 and
    Im O_w = (hbar / 2 xi) [f(n, xi) - f(n, -xi)].
    """
    if xi == 0.0:
        raise ValueError("recovery needs xi != 0; both evaluations coincide at xi = 0")
    plus = field.evaluate(n, xi)
    minus = field.evaluate(n, -xi)
    return complex((plus + minus) / 2.0, field.hbar * (plus - minus) / (2.0 * xi))


@dataclass(frozen=True)
class JointSample:
    """One realization (or enumeration cell) of the pair (phi_n, xi)."""

    n: int
    xi: float
    weight: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"basis index must be nonnegative, got {self.n}")
        if not (self.weight >= 0.0):
            raise ValueError(f"weight must be nonnegative, got {self.weight}")


@dataclass(frozen=True)
class JointEnumeration:
    """Exhaustive weighted enumeration of (n, xi) cells.

    Behaves like a sequence of JointSample; masked_weight reports the Born
    probability that was dropped because of vanishing post-selection overlap
    (the weights of the listed samples sum to 1 minus that leakage).
    """

    samples: tuple
    masked_weight: float

    def __iter__(self):
        return iter(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, idx):
        return self.samples[idx]

    @property
    def total_weight(self) -> float:
        return float(sum(s.weight for s in self.samples))


def enumerate_joint(psi: StateVector, basis: OrthonormalBasis, model: XiModel) -> JointEnumeration:
    """All (n, xi) cells of the product measure Pr(phi_n|psi) * chi(xi).

    Requires a finite-support xi model (binary or discrete); continuous kinds
    raise MomentError since they cannot be enumerated exactly.
    """
    pr = born_probabilities(basis, psi)
    xs, px = model.support_points()
    mask = pr >= EPS_OVERLAP**2
    samples = []
    for n in np.flatnonzero(mask):
        for x, p in zip(xs, px):
            samples.append(JointSample(n=int(n), xi=float(x), weight=float(pr[n] * p)))
    return JointEnumeration(samples=tuple(samples), masked_weight=float(pr[~mask].sum()))


def cval_mixed(op: OperatorMatrix, ensemble: MixedEnsemble, basis: OrthonormalBasis, xi_model: XiModel) -> CValField:
    """C-value field for a mixed preparation.

    Computed two ways: from the mixed-state weak value Tr{Pi O rho}/Tr{Pi rho}
    and as the per-entry conditional average of pure-component c-values with
    weights Pr(psi_mu | phi_n) = Pr(mu) |<phi_n|psi_mu>|^2 / Tr{Pi_n rho}.
    The two must agree (they are equal by linearity of the trace); any gap
    beyond roundoff raises ConsistencyError. The result is therefore
    independent of which decomposition of rho the ensemble represents.
    """
    if not (op.dim == ensemble.dim == basis.dim):
        raise DimensionMismatch(f"dims op={op.dim}, ensemble={ensemble.dim}, basis={basis.dim}")
    rho = density_matrix(ensemble)
    mixed_wv = weak_value_field_mixed(op, rho, basis)

    cols = basis.column_matrix
    d = op.dim
    accum = np.zeros(d, dtype=complex)
    norm = np.zeros(d, dtype=float)
    for w, state in zip(ensemble.weights, ensemble.states):
        ov = cols.conj().T @ state.amplitudes
        numer = cols.conj().T @ (op.entries @ state.amplitudes)
        nz = np.abs(ov) > 0.0
        # w * |ov|^2 * (numer/ov) stays finite as ov -> 0, so exact zeros are
        # simply zero-weight and everything else is numerically benign.
        accum[nz] += w * ov[nz].conj() * numer[nz]
        norm += w * np.abs(ov) ** 2
    mask = mixed_wv.valid_mask
    values = np.zeros(d, dtype=complex)
    values[mask] = accum[mask] / norm[mask]

    op_scale = float(np.max(np.abs(op.entries)))
    for n in np.flatnonzero(mask):
        tol = TAU_ID * max(1.0, op_scale / norm[n])
        err = abs(values[n] - mixed_wv.values[n])
        if err > tol:
            raise ConsistencyError(
                f"mixed c-value entry {n}: decomposition average and trace form differ by {err:.3e}"
            )
    return CValField(
        re_part=mixed_wv.values.real.copy(),
        im_part=mixed_wv.values.imag.copy(),
        hbar=xi_model.hbar,
        valid_mask=mask.copy(),
        born_weights=mixed_wv.born_weights.copy(),
        basis_id=basis.fingerprint,
        state_id=rho.fingerprint,
        hermitian_source=bool(op.hermitian_hint),
    )
