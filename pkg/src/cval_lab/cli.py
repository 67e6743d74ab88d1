"""Command-line front end: verification suites, named demos, Monte Carlo runs.

Three subcommands:

  verify            randomized identity/bound suite over seeded instances
  demo <name>       named worked examples with CSV artifacts and assertions
  sample            Monte Carlo estimates with standard errors, as CSV

Exit codes: 0 on success, 1 when an assertion or suite check fails, 2 for
usage or configuration errors. All randomness flows from the configured
seed; nothing reads the clock except the runtime field of reports.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys

import numpy as np

from .continuum import (
    average_equality_check,
    build_gaussian,
    build_plane_wave,
    grid_profile_csv,
    hamiltonian_field,
    momentum_field,
    position_momentum_krs,
)
from .cval import build_cval, cval_mixed
from .ensemble import (
    mean_cval,
    product_average,
    separable_xi_product,
    variance,
    xi_weighted_mean,
)
from .errors import ConfigError, CvalLabError
from .estimation import self_estimation_tradeoff
from .hilbert import (
    MixedEnsemble,
    OperatorMatrix,
    OrthonormalBasis,
    StateVector,
    expectation,
    kron_op,
    product_basis,
)
from .random_objects import (
    PAULI,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    haar_basis,
    haar_state,
    haar_state_min_overlap,
    rotated_qubit_basis,
)
from .serialize import read_matrix_csv, read_state_csv, write_bound_reports_csv
from .uncertainty import kennard_robertson_bound, krs_check, schrodinger_bound
from .verify import run_identity_suite, xi_model_from_kind

DEMO_NAMES = ("gaussian", "plane_wave", "qubit_krs", "bell_separable_xi", "mixed_context")

_OP_PRESETS = tuple(PAULI)


@dataclasses.dataclass
class RunConfig:
    """Everything a run needs; defaults give the reference verification run."""

    seed: int = 42
    hbar: float = 1.0
    xi_kind: str = "binary"
    dims: tuple = (2, 3, 4, 5, 6)
    trials: int = 200
    grid_points: int = 4096
    grid_sigmas: float = 10.0
    sigma_q: float = 1.0
    mass: float = 1.0
    samples: int = 100_000
    output_dir: str = "cval_lab_out"
    format: str = "json"
    corrupt_identity: str = ""

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.dims or any(d < 2 or d > 64 for d in self.dims):
            raise ConfigError(f"dims must be a nonempty subset of [2, 64], got {list(self.dims)}")
        if self.hbar <= 0.0:
            raise ConfigError(f"hbar must be positive, got {self.hbar}")
        if self.xi_kind not in ("binary", "uniform", "gaussian"):
            raise ConfigError(f"xi_kind must be binary, uniform, or gaussian, got {self.xi_kind!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        if self.grid_points < 16:
            raise ConfigError(f"grid_points must be >= 16, got {self.grid_points}")
        if self.grid_sigmas < 6.0:
            raise ConfigError(f"grid_sigmas must be >= 6 for boundary decay, got {self.grid_sigmas}")
        if self.sigma_q <= 0.0 or self.mass <= 0.0:
            raise ConfigError("sigma_q and mass must be positive")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}")


def _parse_dims(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(",") if part)
    except ValueError as exc:
        raise ConfigError(f"dims must be a comma-separated integer list, got {text!r}") from exc


_FIELD_PARSERS = {
    "seed": int,
    "hbar": float,
    "xi_kind": str,
    "dims": _parse_dims,
    "trials": int,
    "grid_points": int,
    "grid_sigmas": float,
    "sigma_q": float,
    "mass": float,
    "samples": int,
    "output_dir": str,
    "format": str,
    "corrupt_identity": str,
}


def parse_config_file(path: str) -> dict:
    """Flat key=value file; blank lines and #-comments ignored.

    Keys are exactly the RunConfig field names; unknown keys and malformed
    values raise ConfigError with file/line diagnostics.
    """
    updates = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _FIELD_PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                updates[key] = _FIELD_PARSERS[key](value)
            except (ValueError, ConfigError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return updates


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, overlaid by the config file, overlaid by explicit CLI flags."""
    values = dataclasses.asdict(RunConfig())
    if getattr(args, "config_path", None):
        values.update(parse_config_file(args.config_path))
    for name in _FIELD_PARSERS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = _parse_dims(flag) if name == "dims" and isinstance(flag, str) else flag
    config = RunConfig(**values)
    config.validate()
    return config


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(config: RunConfig) -> int:
    report = run_identity_suite(
        seed=config.seed,
        dims=config.dims,
        trials=config.trials,
        hbar=config.hbar,
        xi_kind=config.xi_kind,
        corrupt_identity=config.corrupt_identity,
    )
    echo = {
        "seed": config.seed,
        "hbar": config.hbar,
        "xi_kind": config.xi_kind,
        "dims": list(config.dims),
        "trials": config.trials,
    }
    if config.corrupt_identity:
        echo["corrupt_identity"] = config.corrupt_identity
    report = dataclasses.replace(report, config_echo=echo)

    for line in report.summary_lines():
        print(line)
    if config.format == "json":
        path = os.path.join(config.output_dir, "verify_report.json")
        with open(path, "w") as fh:
            json.dump(report.as_dict(include_runtime=True), fh, indent=2)
            fh.write("\n")
    else:
        path = os.path.join(config.output_dir, "verify_checks.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "instances", "max_abs_error", "min_slack",
                             "masked_weight_max", "threshold", "passed"])
            for rec in report.records:
                writer.writerow([
                    rec.name, rec.instances, repr(rec.max_abs_error),
                    "" if rec.min_slack is None else repr(rec.min_slack),
                    repr(rec.masked_weight_max), repr(rec.threshold), int(rec.passed),
                ])
    print(f"report written to {path}")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# demos
# ---------------------------------------------------------------------------

def _assert_line(label: str, ok: bool, detail: str) -> bool:
    print(f"[{'pass' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def demo_gaussian(config: RunConfig) -> int:
    """Ground-state-shaped packet whose c-valued kinetic energy goes negative.

    The closed form -(hbar^2/2m)(-1/(2 sigma^2) + q^2/(4 sigma^4)) crosses
    zero at q^2 = 2 sigma^2; beyond that the c-valued energy of a free
    particle is negative even though every quantum expectation is positive.
    """
    hbar, mass, sigma = config.hbar, config.mass, config.sigma_q
    half = config.grid_sigmas * sigma
    wf = build_gaussian(sigma, 0.0, 0.0, (-half, half, config.grid_points), hbar=hbar)
    model = xi_model_from_kind(config.xi_kind, hbar)
    ham = hamiltonian_field(wf, mass)

    mask = ham.valid_mask
    q = wf.q[mask]
    closed = -(hbar**2 / (2 * mass)) * (-1.0 / (2 * sigma**2) + q**2 / (4 * sigma**4))
    scale = float(np.max(np.abs(closed)))
    max_rel = float(np.max(np.abs(ham.estimate[mask] - closed))) / scale

    sign_flips = np.flatnonzero(np.diff(np.sign(ham.estimate[mask])) != 0)
    crossing = float(np.abs(q[sign_flips[-1]])) if sign_flips.size else float("nan")
    cell_err = abs(crossing - np.sqrt(2.0) * sigma)

    mean_h, spectral, mean_p2 = average_equality_check(wf, mass, model)
    theory = hbar**2 / (8 * mass * sigma**2)
    krs = position_momentum_krs(wf, model)
    saturation = abs(krs.lhs - hbar**2 / 4.0) / (hbar**2 / 4.0)

    path = os.path.join(config.output_dir, "gaussian_profile.csv")
    grid_profile_csv(wf, mass, path, xi_values=(hbar, -hbar))

    ok = True
    ok &= _assert_line("closed-form energy profile", max_rel <= 1e-3,
                       f"max relative deviation {max_rel:.3e} on {int(mask.sum())} interior points")
    ok &= _assert_line("sign change of the energy", cell_err <= wf.dq,
                       f"crossing at |q| = {crossing:.6f}, sqrt(2)*sigma = {np.sqrt(2)*sigma:.6f}, cell {wf.dq:.2e}")
    ok &= _assert_line("mean energy equality", abs(mean_h - theory) <= 1e-4 * theory,
                       f"<H_c> = {mean_h:.9e}, hbar^2/(8 m sigma^2) = {theory:.9e}, spectral = {spectral:.9e}, <p_c^2>/2m = {mean_p2:.9e}")
    ok &= _assert_line("position-momentum bound saturation", saturation <= 1e-4,
                       f"lhs = {krs.lhs:.9e}, hbar^2/4 = {hbar**2/4:.9e}, relative gap {saturation:.3e}")
    print(f"profile written to {path}")
    return 0 if ok else 1


def demo_plane_wave(config: RunConfig) -> int:
    """Flat-density plane wave: the xi term dies and momentum is deterministic."""
    hbar, mass = config.hbar, config.mass
    p0 = 1.5 * hbar
    half = 20.0
    wf = build_plane_wave(p0, (-half, half, config.grid_points), envelope=0.7, hbar=hbar)
    model = xi_model_from_kind(config.xi_kind, hbar)
    mom = momentum_field(wf)

    # The central half of the window sits inside the flat top; there the
    # density is constant, so the error coefficient must vanish and the
    # c-valued momentum equals p0 at every xi.
    n = config.grid_points
    core = slice(3 * n // 8, 5 * n // 8)
    est_dev = float(np.max(np.abs(mom.estimate[core] - p0)))
    err_mag = float(np.max(np.abs(mom.error_coefficient[core])))
    plus = mom.evaluate(hbar)[core]
    minus = mom.evaluate(-hbar)[core]
    xi_spread = float(np.max(np.abs(plus - minus)))

    mean_h, spectral, mean_p2 = average_equality_check(wf, mass, model)

    path = os.path.join(config.output_dir, "plane_wave_profile.csv")
    grid_profile_csv(wf, mass, path, xi_values=(hbar, -hbar))

    ok = True
    ok &= _assert_line("flat-top momentum estimate", est_dev <= 1e-8 * abs(p0),
                       f"max |p_c - p0| = {est_dev:.3e} over the central half")
    ok &= _assert_line("vanishing error term on uniform density", err_mag <= 1e-8 * abs(p0),
                       f"max |error coefficient| = {err_mag:.3e}; xi = +/-hbar spread {xi_spread:.3e}")
    ok &= _assert_line("mean energy equality", abs(mean_h - spectral) <= 1e-4 * abs(spectral),
                       f"<H_c> = {mean_h:.9e}, spectral <p^2>/2m = {spectral:.9e}, <p_c^2>/2m = {mean_p2:.9e}")
    print(f"profile written to {path}")
    return 0 if ok else 1


def demo_qubit_krs(config: RunConfig) -> int:
    """All four uncertainty bounds over 100 Haar-random qubit states."""
    model = xi_model_from_kind(config.xi_kind, config.hbar)
    op_a = OperatorMatrix((config.hbar / 2.0) * SIGMA_X.entries, hermitian_hint=True)
    op_b = OperatorMatrix((config.hbar / 2.0) * SIGMA_Y.entries, hermitian_hint=True)
    children = np.random.SeedSequence(config.seed).spawn(100)
    reports, seeds = [], []
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        psi = haar_state(2, rng)
        for rep in (
            schrodinger_bound(op_a, op_b, psi),
            kennard_robertson_bound(op_a, op_b, psi),
            krs_check(op_a, op_b, psi),
            self_estimation_tradeoff(op_a, op_b, psi, model),
        ):
            reports.append(rep)
            seeds.append(k)

    path = os.path.join(config.output_dir, "qubit_krs_bounds.csv")
    write_bound_reports_csv(reports, seeds, path)

    print(f"{'kind':24s} {'lhs':>14s} {'rhs':>14s} {'slack':>14s}")
    for rep in reports[:8]:
        print(f"{rep.kind:24s} {rep.lhs:14.6e} {rep.rhs:14.6e} {rep.slack:14.6e}")
    print(f"... {len(reports)} rows total, written to {path}")

    ok = True
    for kind in ("schrodinger", "kennard_robertson", "krs_full"):
        worst = min(r.slack for r in reports if r.kind == kind)
        ok &= _assert_line(f"{kind} bound", worst >= -1e-10, f"min slack {worst:.3e} over 100 states")
    tightest = min(r.slack for r in reports if r.kind == "kennard_robertson")
    print(f"tightest Kennard-Robertson slack: {tightest:.3e} (0 means saturation)")
    return 0 if ok else 1


def demo_bell_separable_xi(config: RunConfig) -> int:
    """Why the random variable must be shared: a Bell-state product average.

    On the circularly phased Bell state (|00> + i|11>)/sqrt(2) the quantum
    correlation <sigma_x sigma_x> vanishes, and the shared-xi product
    average of sigma_x (x) 1 and 1 (x) sigma_x reproduces that. Giving each
    wing its own independent xi removes the Im x Im cross term and leaves a
    spurious correlation equal to exactly minus that term: a single global
    variable is not an optional convenience.

    A real Bell state would hide the effect, since every weak value is then
    real and the cross term vanishes identically.
    """
    hbar = config.hbar
    model = xi_model_from_kind(config.xi_kind, hbar)
    amps = np.zeros(4, dtype=complex)
    amps[0] = 1.0 / np.sqrt(2.0)
    amps[3] = 1j / np.sqrt(2.0)
    psi = StateVector(amps)
    op_a = kron_op(SIGMA_X, OperatorMatrix.identity(2))
    op_b = kron_op(OperatorMatrix.identity(2), SIGMA_X)
    # A rotated product basis keeps every overlap away from zero; the
    # computational basis would mask two outcomes and hide part of the sum.
    basis = product_basis(rotated_qubit_basis(0.4), rotated_qubit_basis(1.1))

    fa = build_cval(op_a, psi, basis, model)
    fb = build_cval(op_b, psi, basis, model)
    split = separable_xi_product(fa, fb, psi, basis, model, model, dims=(2, 2), ops=(op_a, op_b))
    shared = product_average(fa, fb, psi, basis, model)
    oracle = expectation(kron_op(SIGMA_X, SIGMA_X), psi).real

    print(f"shared-xi product average    : {shared.value:+.12f}")
    print(f"separable-xi product average : {split.separable.value:+.12f}")
    print(f"imaginary cross term         : {split.cross_term:+.12f}")
    print(f"quantum <sigma_x sigma_x>    : {oracle:+.12f}")

    ok = True
    ok &= _assert_line("shared xi reproduces the quantum correlation",
                       abs(shared.value - oracle) <= 1e-10,
                       f"|difference| = {abs(shared.value - oracle):.3e}")
    ok &= _assert_line("difference equals the cross term",
                       abs(shared.value - split.separable.value - split.cross_term) <= 1e-10,
                       f"residual = {abs(shared.value - split.separable.value - split.cross_term):.3e}")
    ok &= _assert_line("separable xi does not reproduce it",
                       abs(split.separable.value - oracle) > 1e-3,
                       f"gap = {abs(split.separable.value - oracle):.6f}")
    return 0 if ok else 1


def demo_mixed_context(config: RunConfig) -> int:
    """Preparation contextuality of the c-value assignment.

    The maximally mixed qubit admits the decompositions {|0>, |1>} and
    {|+>, |->} with equal weights. Per-component c-value fields differ, but
    the decomposition average is identical: the assignment is contextual at
    the component level and context-free at the ensemble level.
    """
    hbar = config.hbar
    model = xi_model_from_kind(config.xi_kind, hbar)
    op = SIGMA_Z
    basis = rotated_qubit_basis(0.6)

    z0 = StateVector(np.array([1.0, 0.0], dtype=complex))
    z1 = StateVector(np.array([0.0, 1.0], dtype=complex))
    xp = StateVector(np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0))
    xm = StateVector(np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0))
    dec_z = MixedEnsemble((0.5, 0.5), (z0, z1))
    dec_x = MixedEnsemble((0.5, 0.5), (xp, xm))

    field_z = cval_mixed(op, dec_z, basis, model)
    field_x = cval_mixed(op, dec_x, basis, model)
    mixed_gap = max(
        float(np.max(np.abs(field_z.re_part - field_x.re_part))),
        float(np.max(np.abs(field_z.im_part - field_x.im_part))),
    )

    comp_z = build_cval(op, z0, basis, model)
    comp_x = build_cval(op, xp, basis, model)
    comp_gap = float(np.max(np.abs(comp_z.re_part - comp_x.re_part)))

    print("per-outcome c-value fields (re, im) for the two decompositions:")
    for n in range(2):
        print(f"  n={n}: z-basis ensemble ({field_z.re_part[n]:+.6f}, {field_z.im_part[n]:+.6f})"
              f"  x-basis ensemble ({field_x.re_part[n]:+.6f}, {field_x.im_part[n]:+.6f})")
    print(f"first components differ by {comp_gap:.6f} at n=0")

    ok = True
    ok &= _assert_line("decomposition-independent mixed field", mixed_gap <= 1e-10,
                       f"max field difference {mixed_gap:.3e}")
    ok &= _assert_line("component fields are context-dependent", comp_gap > 1e-3,
                       f"component gap {comp_gap:.6f}")
    return 0 if ok else 1


_DEMOS = {
    "gaussian": demo_gaussian,
    "plane_wave": demo_plane_wave,
    "qubit_krs": demo_qubit_krs,
    "bell_separable_xi": demo_bell_separable_xi,
    "mixed_context": demo_mixed_context,
}


def cmd_demo(name: str, config: RunConfig) -> int:
    if name not in _DEMOS:
        raise ConfigError(f"unknown demo {name!r}; choose from {', '.join(DEMO_NAMES)}")
    return _DEMOS[name](config)


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def _load_operator(spec: str) -> OperatorMatrix:
    if spec in PAULI:
        return PAULI[spec]
    if os.path.exists(spec):
        return read_matrix_csv(spec)
    raise ConfigError(f"operator spec {spec!r} is neither a preset ({', '.join(_OP_PRESETS)}) nor a file")


def _load_state(spec: str, dim: int, basis: OrthonormalBasis, rng: np.random.Generator) -> StateVector:
    if spec == "haar":
        return haar_state_min_overlap(dim, basis, rng)
    if os.path.exists(spec):
        return read_state_csv(spec)
    raise ConfigError(f"state spec {spec!r} is neither 'haar' nor a file")


def cmd_sample(config: RunConfig, op_spec: str, state_spec: str, basis_spec: str) -> int:
    rng = np.random.default_rng(config.seed)
    op = _load_operator(op_spec)
    dim = op.dim
    if basis_spec == "haar":
        basis = haar_basis(dim, rng)
    elif basis_spec == "computational":
        basis = OrthonormalBasis.computational(dim)
    else:
        raise ConfigError(f"basis spec {basis_spec!r} must be 'haar' or 'computational'")
    psi = _load_state(state_spec, dim, basis, rng)
    if psi.dim != dim:
        raise ConfigError(f"state dim {psi.dim} does not match operator dim {dim}")

    model = dataclasses.replace(xi_model_from_kind(config.xi_kind, config.hbar), sampler_seed=config.seed)
    field = build_cval(op, psi, basis, model)
    n = config.samples

    quantities = [
        ("mean", mean_cval),
        ("xi_weighted_mean", xi_weighted_mean),
    ]
    rows = []
    for label, fn in quantities:
        exact = fn(field, psi, basis, model, method="exact")
        mc = fn(field, psi, basis, model, method="monte_carlo", samples=n, rng=rng)
        rows.append((label, exact.value, mc.value, mc.mc_stderr, n))
    if op.hermitian_hint:
        exact = variance(field, psi, basis, model, method="exact")
        mc = variance(field, psi, basis, model, method="monte_carlo", samples=n, rng=rng)
        rows.append(("variance", exact.value, mc.value, mc.mc_stderr, n))

    path = os.path.join(config.output_dir, "sample.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["quantity", "exact", "mc", "stderr", "n_samples"])
        for label, exact_v, mc_v, se, count in rows:
            writer.writerow([label, repr(exact_v), repr(mc_v), repr(se), count])

    print(f"{'quantity':18s} {'exact':>16s} {'mc':>16s} {'stderr':>12s} {'z':>8s}")
    for label, exact_v, mc_v, se, _ in rows:
        z = abs(mc_v - exact_v) / se if se > 0 else 0.0
        print(f"{label:18s} {exact_v:16.9e} {mc_v:16.9e} {se:12.3e} {z:8.2f}")
    print(f"written to {path}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="root seed for all randomness (default 42)")
    common.add_argument("--hbar", type=float, help="value of hbar (default 1.0)")
    common.add_argument("--xi", dest="xi_kind", choices=["binary", "uniform", "gaussian"],
                        help="distribution of the global random variable")
    common.add_argument("--trials", type=int, help="instances per dimension for verify")
    common.add_argument("--dims", type=str, help="comma-separated dimensions, e.g. 2,3,4")
    common.add_argument("--out", dest="output_dir", help="output directory (default cval_lab_out)")
    common.add_argument("--format", choices=["json", "csv"], help="report format for verify")
    common.add_argument("--config", dest="config_path", help="flat key=value config file")
    common.add_argument("--corrupt-identity", dest="corrupt_identity", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="cval-lab",
        description="Construct c-valued observables from weak values and verify their statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common],
                   help="run the randomized identity and bound suite")
    demo = sub.add_parser("demo", parents=[common], help="run a named worked example")
    demo.add_argument("name", choices=DEMO_NAMES)
    sample = sub.add_parser("sample", parents=[common],
                            help="Monte Carlo estimates with standard errors")
    sample.add_argument("--op", default="sigma_z",
                        help="operator preset (sigma_x|sigma_y|sigma_z|identity) or matrix CSV path")
    sample.add_argument("--state", default="haar", help="'haar' or a state CSV path")
    sample.add_argument("--basis", default="haar", help="'haar' or 'computational'")
    sample.add_argument("--samples", type=int, help="Monte Carlo sample count (default 100000)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        os.makedirs(config.output_dir, exist_ok=True)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "demo":
            return cmd_demo(args.name, config)
        return cmd_sample(config, args.op, args.state, args.basis)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CvalLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
