"""1D continuous-variable c-values on a uniform grid.

A wavefunction in polar form psi(q) = sqrt(rho) exp(i S / hbar) yields the
c-valued momentum and free-particle energy in the position reference basis:

    p_c(q, xi) = dS/dq - (xi/2) (drho/dq) / rho
    H_c(q, xi) = (dS/dq)^2 / 2m
                 - (hbar^2 / 2m) (d^2 sqrt(rho) / dq^2) / sqrt(rho)
                 - (xi / 2 rho) d/dq (rho dS/dq / m)

All derivatives are second-order central differences on the grid, and the
1/rho factors force a density cutoff: points with rho below EPS_RHO times
the peak are masked, and the probability carried by masked points is
reported alongside any integral that drops them.

The continuum statements are verified here only up to O(dq^2) truncation
plus envelope corrections; grid quantities carry the grid tolerance
TAU_GRID, not the exact-identity tolerance used in finite dimensions.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cval import XiModel
from .errors import DimensionMismatch, GridError, MomentError, NormalizationError
from .uncertainty import BoundReport

TAU_GRID = 1e-6
EPS_RHO = 1e-10

# Construction-time resolution requirements for the gaussian builder.
_MIN_POINTS_PER_SIGMA = 32
_MIN_SIGMAS_EACH_SIDE = 8.0


def _central_d1(y: np.ndarray, dq: float) -> np.ndarray:
    """Second-order first derivative; NaN on the two boundary points."""
    out = np.full_like(y, np.nan, dtype=float)
    out[1:-1] = (y[2:] - y[:-2]) / (2.0 * dq)
    return out


def _central_d2(y: np.ndarray, dq: float) -> np.ndarray:
    """Second-order second derivative via the 3-point stencil; NaN at the ends.

    Deliberately not a repeated first difference: the repeated form has a
    4x larger truncation constant, which matters at the tolerances the
    gaussian checks run at.
    """
    out = np.full_like(y, np.nan, dtype=float)
    out[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / (dq * dq)
    return out


@dataclass(frozen=True)
class GridWavefunction:
    """Normalized wavefunction sampled on a uniform grid.

    Invariants checked at construction: uniform spacing, unit norm under the
    grid measure (sum rho dq = 1 within TAU_GRID), and vanishing boundary
    density (rho at both ends below 1e-12 of the peak). The phase S is
    stored unwrapped; it is defined up to an additive constant, which never
    matters since only dS/dq enters any formula.
    """

    q: np.ndarray
    amplitudes: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(-1)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if q.size != amps.size:
            raise DimensionMismatch("grid and amplitudes must share length")
        if q.size < 16:
            raise GridError(f"grid too small ({q.size} points)")
        steps = np.diff(q)
        dq = float(steps[0])
        # linspace steps jitter by a few ulps of the endpoint magnitude
        tol = max(1e-12 * abs(dq), 8.0 * np.finfo(float).eps * float(np.max(np.abs(q))))
        if dq <= 0.0 or np.max(np.abs(steps - dq)) > tol:
            raise GridError("grid must be uniformly increasing")
        if not (float(self.hbar) > 0.0):
            raise GridError(f"hbar must be positive, got {self.hbar}")
        rho = np.abs(amps) ** 2
        norm = float(rho.sum() * dq)
        if abs(norm - 1.0) > TAU_GRID:
            raise NormalizationError(f"grid norm {norm!r} deviates from 1 beyond {TAU_GRID}")
        peak = float(rho.max())
        if max(rho[0], rho[-1]) > 1e-12 * peak:
            raise GridError("density does not vanish at the grid boundary")
        q.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def size(self) -> int:
        return self.q.size

    @property
    def dq(self) -> float:
        return float(self.q[1] - self.q[0])

    @cached_property
    def rho(self) -> np.ndarray:
        out = np.abs(self.amplitudes) ** 2
        out.setflags(write=False)
        return out

    @cached_property
    def s_phase(self) -> np.ndarray:
        """hbar times the unwrapped complex phase of the amplitudes."""
        out = self.hbar * np.unwrap(np.angle(self.amplitudes))
        out.setflags(write=False)
        return out

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha1()
        h.update(self.q.tobytes())
        h.update(self.amplitudes.tobytes())
        return h.hexdigest()[:16]

    def interior_mask(self, eps_rho: float = EPS_RHO) -> np.ndarray:
        """Points where pointwise c-values are defined.

        Requires rho above eps_rho times the peak and two grid cells of
        margin at each boundary (the energy formula differentiates a product
        of a first derivative).
        """
        mask = self.rho >= eps_rho * float(self.rho.max())
        mask[:2] = False
        mask[-2:] = False
        return mask

    def excluded_probability(self, eps_rho: float = EPS_RHO) -> float:
        mask = self.interior_mask(eps_rho)
        return float(self.rho[~mask].sum() * self.dq)


def build_gaussian(
    sigma_q: float,
    q0: float,
    p0: float,
    grid: tuple[float, float, int],
    hbar: float = 1.0,
    chirp: float = 0.0,
) -> GridWavefunction:
    """Gaussian wave packet exp(-(q-q0)^2 / 4 sigma_q^2) with drift and chirp.

    The phase is S(q) = p0 (q - q0) + chirp (q - q0)^2 / 2, so p0 is the mean
    momentum and chirp adds the position-momentum correlation used by the
    covariance checks. The grid must resolve sigma_q with at least 32 points
    and extend at least 8 sigma_q on each side of q0.
    """
    q_min, q_max, n = grid
    if sigma_q <= 0.0:
        raise GridError(f"sigma_q must be positive, got {sigma_q}")
    q = np.linspace(q_min, q_max, int(n))
    dq = float(q[1] - q[0])
    if dq > sigma_q / _MIN_POINTS_PER_SIGMA:
        raise GridError(
            f"grid spacing {dq:.3e} under-resolves sigma_q = {sigma_q}: need >= {_MIN_POINTS_PER_SIGMA} points per sigma"
        )
    if q0 - q_min < _MIN_SIGMAS_EACH_SIDE * sigma_q or q_max - q0 < _MIN_SIGMAS_EACH_SIDE * sigma_q:
        raise GridError(f"grid must extend >= {_MIN_SIGMAS_EACH_SIDE} sigma_q on each side of q0")
    x = q - q0
    s_over_hbar = (p0 * x + 0.5 * chirp * x * x) / hbar
    amps = np.exp(-(x * x) / (4.0 * sigma_q**2)) * np.exp(1j * s_over_hbar)
    amps /= np.sqrt(float((np.abs(amps) ** 2).sum() * dq))
    return GridWavefunction(q=q, amplitudes=amps, hbar=hbar)


def build_plane_wave(
    p0: float,
    grid: tuple[float, float, int],
    envelope: float = 0.7,
    hbar: float = 1.0,
) -> GridWavefunction:
    """Plane wave exp(i p0 q / hbar) under a flat-topped cosine-ramp envelope.

    envelope is the fraction of the window that is exactly flat; the rest is
    split into two cosine-squared ramps that take the density smoothly to
    zero at the boundary. Inside the flat top rho is constant to machine
    precision, which realizes the uniform-density idealization on a finite
    grid. The phase must advance less than pi/4 per grid cell so unwrapping
    is unambiguous.
    """
    if not (0.0 < envelope < 1.0):
        raise GridError(f"envelope flat fraction must lie in (0, 1), got {envelope}")
    q_min, q_max, n = grid
    q = np.linspace(q_min, q_max, int(n))
    dq = float(q[1] - q[0])
    if abs(p0) * dq / hbar > np.pi / 4.0:
        raise GridError("phase advances too fast per cell; refine the grid or lower p0")
    length = q_max - q_min
    ramp = 0.5 * (1.0 - envelope) * length
    window = np.ones_like(q)
    left = q < q_min + ramp
    right = q > q_max - ramp
    window[left] = np.sin(0.5 * np.pi * (q[left] - q_min) / ramp) ** 2
    window[right] = np.sin(0.5 * np.pi * (q_max - q[right]) / ramp) ** 2
    amps = window * np.exp(1j * p0 * q / hbar)
    amps /= np.sqrt(float((np.abs(amps) ** 2).sum() * dq))
    return GridWavefunction(q=q, amplitudes=amps, hbar=hbar)


@dataclass(frozen=True)
class GridCVal:
    """A grid c-value split into its xi-independent and xi-linear parts.

    value(q_j, xi) = estimate[j] + (xi/hbar) * error_coefficient[j] on valid
    points; NaN elsewhere. error_coefficient absorbs one factor of hbar so
    that the xi coupling matches the finite-dimensional convention.
    """

    q: np.ndarray
    estimate: np.ndarray
    error_coefficient: np.ndarray
    valid_mask: np.ndarray
    hbar: float

    def evaluate(self, xi: float) -> np.ndarray:
        out = self.estimate + (xi / self.hbar) * self.error_coefficient
        return np.where(self.valid_mask, out, np.nan)

    def evaluate_at(self, index: int, xi: float) -> float:
        if not self.valid_mask[index]:
            raise GridError(f"grid point {index} is masked (low density or boundary)")
        return float(self.estimate[index] + (xi / self.hbar) * self.error_coefficient[index])


def momentum_field(wf: GridWavefunction, eps_rho: float = EPS_RHO) -> GridCVal:
    """C-valued momentum: estimate dS/dq, error term -(xi/2) drho/rho."""
    dq = wf.dq
    ds = _central_d1(wf.s_phase, dq)
    drho = _central_d1(wf.rho, dq)
    mask = wf.interior_mask(eps_rho)
    est = np.where(mask, ds, np.nan)
    err = np.where(mask, -(wf.hbar / 2.0) * drho / np.where(mask, wf.rho, 1.0), np.nan)
    return GridCVal(q=wf.q, estimate=est, error_coefficient=err, valid_mask=mask, hbar=wf.hbar)


def hamiltonian_field(wf: GridWavefunction, mass: float, eps_rho: float = EPS_RHO) -> GridCVal:
    """C-valued free-particle energy; see the module docstring for the formula."""
    if mass <= 0.0:
        raise GridError(f"mass must be positive, got {mass}")
    dq = wf.dq
    ds = _central_d1(wf.s_phase, dq)
    sqrt_rho = np.sqrt(wf.rho)
    d2s_rho = _central_d2(sqrt_rho, dq)
    flux = wf.rho * ds / mass
    # The flux itself is only defined away from the ends, so its derivative
    # costs one more cell of margin; interior_mask already provides it.
    dflux = np.full_like(flux, np.nan)
    dflux[2:-2] = (flux[3:-1] - flux[1:-3]) / (2.0 * dq)
    mask = wf.interior_mask(eps_rho)
    safe_rho = np.where(mask, wf.rho, 1.0)
    safe_sqrt = np.where(mask, sqrt_rho, 1.0)
    est = np.where(mask, ds * ds / (2.0 * mass) - (wf.hbar**2 / (2.0 * mass)) * d2s_rho / safe_sqrt, np.nan)
    err = np.where(mask, -(wf.hbar / 2.0) * dflux / safe_rho, np.nan)
    return GridCVal(q=wf.q, estimate=est, error_coefficient=err, valid_mask=mask, hbar=wf.hbar)


def cval_momentum(wf: GridWavefunction, q_index: int, xi: float) -> float:
    """Pointwise c-valued momentum at one grid index and one xi realization."""
    return momentum_field(wf).evaluate_at(q_index, xi)


def cval_hamiltonian_free(wf: GridWavefunction, q_index: int, xi: float, mass: float) -> float:
    """Pointwise c-valued free energy at one grid index and one xi realization."""
    return hamiltonian_field(wf, mass).evaluate_at(q_index, xi)


def _require_identity_moments(model: XiModel) -> None:
    m = model.xi_over_hbar_moments()
    if abs(m[1]) > 1e-9 or abs(m[2] - 1.0) > 1e-9:
        raise MomentError("grid averages require mean(xi) = 0 and var(xi) = hbar^2")


def average_equality_check(
    wf: GridWavefunction,
    mass: float,
    model: XiModel,
) -> tuple[float, float, float]:
    """(<H_c>, <p^2>/2m by spectral oracle, <p_c^2>/2m) for one wavefunction.

    The three numbers agree within TAU_GRID for a boundary-vanishing
    wavefunction on an adequate grid. The middle value applies the momentum
    operator in Fourier space, a numerical route independent of the
    real-space finite differences used by the other two.
    """
    _require_identity_moments(model)
    if model.hbar != wf.hbar:
        raise MomentError(f"xi model hbar {model.hbar} differs from wavefunction hbar {wf.hbar}")
    moments = model.xi_over_hbar_moments()
    m1, m2 = moments[1], moments[2]
    dq = wf.dq
    mask = wf.interior_mask()
    w = np.where(mask, wf.rho * dq, 0.0)

    ham = hamiltonian_field(wf, mass)
    mean_h = float((w[mask] * (ham.estimate[mask] + m1 * ham.error_coefficient[mask])).sum())

    mom = momentum_field(wf)
    ds = np.where(mask, mom.estimate, 0.0)
    err = np.where(mask, mom.error_coefficient, 0.0)
    mean_p2 = float((w * (ds * ds + 2.0 * m1 * ds * err + m2 * err * err)).sum()) / (2.0 * mass)

    coeffs = np.fft.fft(wf.amplitudes)
    p_vals = 2.0 * np.pi * wf.hbar * np.fft.fftfreq(wf.size, d=dq)
    weights = np.abs(coeffs) ** 2
    spectral = float((weights * p_vals**2).sum() / weights.sum()) / (2.0 * mass)

    return mean_h, spectral, mean_p2


def position_momentum_krs(wf: GridWavefunction, model: XiModel) -> BoundReport:
    """KRS inequality for position and momentum from grid enumeration.

    The position c-value is q itself (real weak value, no error term), so
    its variance is the usual sigma_q^2. The momentum c-value contributes
    sigma^2 = <p_c^2> - <p_c>^2 including the xi error term; the covariance
    term uses q p_c. The bound reads

        sigma^2_q sigma^2_p >= cov^2 + hbar^2 / 4,

    saturated by real and by chirped gaussians. The report's masked_weight
    carries the probability excluded by the density cutoff.
    """
    _require_identity_moments(model)
    if model.hbar != wf.hbar:
        raise MomentError(f"xi model hbar {model.hbar} differs from wavefunction hbar {wf.hbar}")
    moments = model.xi_over_hbar_moments()
    m1, m2 = moments[1], moments[2]
    dq = wf.dq
    mask = wf.interior_mask()
    w = np.where(mask, wf.rho * dq, 0.0)
    q = wf.q

    mean_q = float((w * q).sum())
    var_q = float((w * q * q).sum()) - mean_q**2

    mom = momentum_field(wf)
    ds = np.where(mask, mom.estimate, 0.0)
    err = np.where(mask, mom.error_coefficient, 0.0)
    mean_p = float((w * (ds + m1 * err)).sum())
    mean_p2 = float((w * (ds * ds + 2.0 * m1 * ds * err + m2 * err * err)).sum())
    var_p = mean_p2 - mean_p**2

    mean_qp = float((w * q * (ds + m1 * err)).sum())
    cov = mean_qp - mean_q * mean_p

    lhs = var_q * var_p
    rhs = cov**2 + wf.hbar**2 / 4.0
    return BoundReport(lhs=lhs, rhs=rhs, slack=lhs - rhs, kind="position_momentum",
                       masked_weight=wf.excluded_probability())


def grid_profile_csv(wf: GridWavefunction, mass: float, path, xi_values=None) -> None:
    """Dump (q, rho, S, p_c and H_c at each requested xi) for plotting.

    xi_values defaults to (+hbar, -hbar). Masked grid points are written
    with empty value cells so downstream plotters can skip them.
    """
    if xi_values is None:
        xi_values = (wf.hbar, -wf.hbar)
    mom = momentum_field(wf)
    ham = hamiltonian_field(wf, mass)
    headers = ["q", "rho", "S"]
    for xi in xi_values:
        headers += [f"p_c(xi={xi:g})", f"H_c(xi={xi:g})"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(headers)
        for j in range(wf.size):
            row = [repr(float(wf.q[j])), repr(float(wf.rho[j])), repr(float(wf.s_phase[j]))]
            for xi in xi_values:
                if mom.valid_mask[j]:
                    row.append(repr(mom.evaluate_at(j, xi)))
                    row.append(repr(ham.evaluate_at(j, xi)))
                else:
                    row += ["", ""]
            writer.writerow(row)
