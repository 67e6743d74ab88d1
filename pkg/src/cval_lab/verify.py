"""Randomized verification suite over seeded instances.

One instance = one dimension, one Haar basis, one rejection-sampled Haar
state, fresh random operators. Every identity and bound in the statistics,
uncertainty, and estimation layers is evaluated against an independently
computed matrix oracle, and the worst deviation over all instances is
reported per check.

Determinism: all randomness descends from the root seed through a
SeedSequence spawned once per instance in a fixed order, and results are
reduced in that same order, so reports are identical for any worker count.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cval import XiModel, build_cval, recover_weak_value
from .ensemble import (
    commutator_average,
    covariance,
    full_product_representation,
    mean_cval,
    product_average,
    statistical_deviation,
    variance,
    xi_weighted_mean,
)
from .errors import ConfigError
from .estimation import ms_error, optimal_estimator, self_estimation_tradeoff
from .hilbert import eigenbasis, expectation
from .random_objects import (
    haar_basis,
    haar_state_min_overlap,
    random_hermitian,
    random_operator,
)
from .uncertainty import (
    decompose_variance,
    epistemic_restriction_check,
    kennard_robertson_bound,
    krs_check,
    schrodinger_bound,
)

# Checks whose reported number is a deviation (pass iff max <= threshold).
ERROR_CHECKS = {
    "expectation_real": 1e-10,
    "expectation_imag": 1e-10,
    "product_representation": 1e-10,
    "commutator_representation": 1e-10,
    "full_product_representation": 1e-10,
    "variance_equality": 1e-10,
    "covariance_equality": 1e-10,
    "statistical_deviation_equality": 1e-10,
    "variance_decomposition": 1e-10,
    "weak_value_recovery": 1e-12,
    "estimation_optimality": 1e-10,
    "estimation_bias": 1e-12,
    "flow_identity": 1e-8,
    "monte_carlo_containment": 6.0,
}

# Checks whose reported number is a slack (pass iff min >= -threshold).
BOUND_CHECKS = {
    "schrodinger_bound": 1e-10,
    "kennard_robertson_bound": 1e-10,
    "krs_bound": 1e-10,
    "estimation_tradeoff": 1e-10,
}

ALL_CHECKS = tuple(ERROR_CHECKS) + tuple(BOUND_CHECKS)


@dataclass(frozen=True)
class CheckRecord:
    """Aggregated outcome of one named check over all instances."""

    name: str
    instances: int
    max_abs_error: float
    min_slack: float | None
    masked_weight_max: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "instances": self.instances,
            "max_abs_error": self.max_abs_error,
            "min_slack": self.min_slack,
            "masked_weight_max": self.masked_weight_max,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class SuiteReport:
    records: tuple
    passed: bool
    runtime_s: float
    config_echo: dict = field(default_factory=dict)

    def as_dict(self, include_runtime: bool = True) -> dict:
        doc = {
            "config": dict(self.config_echo),
            "checks": [r.as_dict() for r in self.records],
            "passed": self.passed,
        }
        if include_runtime:
            doc["runtime_s"] = self.runtime_s
        return doc

    def summary_lines(self) -> list:
        lines = []
        for r in self.records:
            verdict = "pass" if r.passed else "FAIL"
            if r.min_slack is None:
                detail = f"max_abs_error = {r.max_abs_error:.3e} (tol {r.threshold:.0e})"
            else:
                detail = f"min_slack = {r.min_slack:.3e} (tol -{r.threshold:.0e})"
            lines.append(f"[{verdict}] {r.name}: {r.instances} instances, {detail}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return lines


def worker_count() -> int:
    """Worker cap from the CVAL_LAB_THREADS environment variable (default 1)."""
    raw = os.environ.get("CVAL_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"CVAL_LAB_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


_XI_FACTORIES = {
    "binary": XiModel.binary,
    "uniform": XiModel.uniform,
    "gaussian": XiModel.gaussian,
}


def xi_model_from_kind(kind: str, hbar: float) -> XiModel:
    try:
        return _XI_FACTORIES[kind](hbar=hbar)
    except KeyError as exc:
        raise ConfigError(f"unknown xi kind {kind!r}; choose from {', '.join(_XI_FACTORIES)}") from exc


def _instance_results(dim: int, seed_seq: np.random.SeedSequence, hbar: float, mc_samples: int, xi_kind: str) -> dict:
    """All per-instance check values: deviations for ERROR_CHECKS, slacks for BOUND_CHECKS."""
    rng = np.random.default_rng(seed_seq)
    model = xi_model_from_kind(xi_kind, hbar)
    basis = haar_basis(dim, rng)
    psi = haar_state_min_overlap(dim, basis, rng)
    out: dict[str, float] = {}
    masked = 0.0

    # General (non-Hermitian) operators: expectation and product identities.
    op_g = random_operator(dim, rng)
    op_g2 = random_operator(dim, rng)
    fg = build_cval(op_g, psi, basis, model)
    fg2 = build_cval(op_g2, psi, basis, model)
    masked = max(masked, fg.masked_weight, fg2.masked_weight)
    exp_g = expectation(op_g, psi)
    out["expectation_real"] = abs(mean_cval(fg, psi, basis, model).value - exp_g.real)
    out["expectation_imag"] = abs(xi_weighted_mean(fg, psi, basis, model).value - exp_g.imag)

    a, b = op_g.entries, op_g2.entries
    amps = psi.amplitudes
    anti_oracle = 0.5 * (np.vdot(amps, a.conj().T @ (b @ amps)) + np.vdot(amps, b.conj().T @ (a @ amps)))
    comm_oracle = (np.vdot(amps, a.conj().T @ (b @ amps)) - np.vdot(amps, b.conj().T @ (a @ amps))) / 2j
    full_oracle = complex(np.vdot(amps, a.conj().T @ (b @ amps)))
    out["product_representation"] = abs(product_average(fg, fg2, psi, basis, model).value - anti_oracle.real)
    out["commutator_representation"] = abs(commutator_average(fg, fg2, psi, basis, model).value - comm_oracle.real)
    out["full_product_representation"] = abs(full_product_representation(fg, fg2, psi, basis, model).value - full_oracle)

    # Hermitian pair: second moments, decomposition, bounds, estimation.
    op_a = random_hermitian(dim, rng)
    op_b = random_hermitian(dim, rng)
    fa = build_cval(op_a, psi, basis, model)
    fb = build_cval(op_b, psi, basis, model)
    masked = max(masked, fa.masked_weight, fb.masked_weight)
    ea = expectation(op_a, psi).real
    eb = expectation(op_b, psi).real
    aa, bb = op_a.entries, op_b.entries
    var_oracle = float(np.vdot(amps, aa @ (aa @ amps)).real) - ea**2
    cov_oracle = 0.5 * float(np.vdot(amps, (aa @ bb + bb @ aa) @ amps).real) - ea * eb
    diff = aa - bb
    dev_oracle = float(np.vdot(amps, diff @ (diff @ amps)).real)
    out["variance_equality"] = abs(variance(fa, psi, basis, model).value - var_oracle)
    out["covariance_equality"] = abs(covariance(fa, fb, psi, basis, model).value - cov_oracle)
    out["statistical_deviation_equality"] = abs(statistical_deviation(fa, fb, psi, basis, model).value - dev_oracle)

    dec = decompose_variance(op_a, psi, basis, model)
    out["variance_decomposition"] = abs(dec.total - var_oracle)

    n_probe = int(rng.integers(0, dim))
    recovered = recover_weak_value(fa, n_probe, hbar)
    out["weak_value_recovery"] = abs(recovered - complex(fa.re_part[n_probe], fa.im_part[n_probe]))

    out["schrodinger_bound"] = schrodinger_bound(op_a, op_b, psi).slack
    out["kennard_robertson_bound"] = kennard_robertson_bound(op_a, op_b, psi).slack
    out["krs_bound"] = krs_check(op_a, op_b, psi).slack
    out["estimation_tradeoff"] = self_estimation_tradeoff(op_a, op_b, psi, model).slack

    est = optimal_estimator(op_a, psi, op_b)
    report = ms_error(est, op_a, psi, op_b, model)
    ref = decompose_variance(op_a, psi, eigenbasis(op_b)[0], model).err_sq
    out["estimation_optimality"] = abs(report.ms_error - ref)
    out["estimation_bias"] = report.bias

    out["flow_identity"] = float(np.nanmax(epistemic_restriction_check(op_a, op_b, psi)))

    # One Monte Carlo containment probe: z-score of the MC mean against the
    # exact value. Deterministic for a fixed seed.
    mc = mean_cval(fa, psi, basis, model, method="monte_carlo", samples=mc_samples, rng=rng)
    exact = mean_cval(fa, psi, basis, model).value
    out["monte_carlo_containment"] = abs(mc.value - exact) / mc.mc_stderr if mc.mc_stderr > 0 else 0.0

    out["_masked"] = masked
    return out


def run_identity_suite(
    seed: int,
    dims,
    trials: int,
    hbar: float = 1.0,
    xi_kind: str = "binary",
    mc_samples: int = 20_000,
    corrupt_identity: str = "",
    threads: int | None = None,
) -> SuiteReport:
    """Run every check over `trials` instances per dimension.

    corrupt_identity is a test hook: naming any check inflates its reported
    deviation (or deflates its slack) so the failure path of the report and
    exit-code machinery can be exercised; an unknown name raises ConfigError.
    """
    dims = [int(d) for d in dims]
    if any(d < 2 or d > 64 for d in dims):
        raise ConfigError(f"dims must lie in [2, 64], got {dims}")
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if corrupt_identity and corrupt_identity not in ALL_CHECKS:
        raise ConfigError(f"unknown identity {corrupt_identity!r}; valid names: {', '.join(ALL_CHECKS)}")
    xi_model_from_kind(xi_kind, hbar)

    t0 = time.perf_counter()
    jobs = [(d, t) for d in dims for t in range(trials)]
    children = np.random.SeedSequence(seed).spawn(len(jobs))
    n_workers = worker_count() if threads is None else max(1, threads)

    def _run(idx: int) -> dict:
        d, _ = jobs[idx]
        return _instance_results(d, children[idx], hbar, mc_samples, xi_kind)

    if n_workers == 1:
        results = [_run(i) for i in range(len(jobs))]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_run, range(len(jobs))))

    records = []
    overall = True
    masked_max = max(r["_masked"] for r in results)
    for name, threshold in ERROR_CHECKS.items():
        worst = max(r[name] for r in results)
        if corrupt_identity == name:
            worst += 1e-3
        ok = worst <= threshold
        overall &= ok
        records.append(CheckRecord(
            name=name, instances=len(results), max_abs_error=float(worst), min_slack=None,
            masked_weight_max=masked_max, threshold=threshold, passed=bool(ok),
        ))
    for name, threshold in BOUND_CHECKS.items():
        worst = min(r[name] for r in results)
        if corrupt_identity == name:
            worst -= 1e-3
        ok = worst >= -threshold
        overall &= ok
        records.append(CheckRecord(
            name=name, instances=len(results), max_abs_error=0.0, min_slack=float(worst),
            masked_weight_max=masked_max, threshold=threshold, passed=bool(ok),
        ))
    runtime = time.perf_counter() - t0
    return SuiteReport(records=tuple(records), passed=bool(overall), runtime_s=runtime)
