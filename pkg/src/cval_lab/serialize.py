"""Serialization: JSON documents with explicit re/im pairs, and CSV matrices.

JSON is used for structured objects (states, operators, bases, ensembles,
reports); every complex number is stored as a two-element [re, im] list so
documents stay language-neutral. CSV is used for matrix exchange with other
tools: one header line ``dim=d`` followed by d rows of d re,im pairs in
row-major order.

Loaders rebuild objects through the ordinary constructors, so every
invariant (normalization, orthonormality, Hermiticity flags) is re-validated
on read and a corrupted document fails loudly.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .errors import ConfigError
from .hilbert import MixedEnsemble, OperatorMatrix, OrthonormalBasis, StateVector


# ---------------------------------------------------------------------------
# complex <-> [re, im]
# ---------------------------------------------------------------------------

def _c_enc(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _c_dec(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise ConfigError(f"expected [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _vec_enc(v: np.ndarray) -> list:
    return [_c_enc(z) for z in v]


def _vec_dec(items) -> np.ndarray:
    return np.array([_c_dec(p) for p in items], dtype=complex)


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def to_jsonable(obj) -> dict:
    """Encode a hilbert-space object as a plain JSON-ready dictionary."""
    if isinstance(obj, StateVector):
        return {"type": "state_vector", "dim": obj.dim, "amplitudes": _vec_enc(obj.amplitudes)}
    if isinstance(obj, OperatorMatrix):
        return {
            "type": "operator",
            "dim": obj.dim,
            "hermitian": bool(obj.hermitian_hint),
            "entries": [_vec_enc(row) for row in obj.entries],
        }
    if isinstance(obj, OrthonormalBasis):
        return {
            "type": "orthonormal_basis",
            "dim": obj.dim,
            "columns": [_vec_enc(obj.column_matrix[:, n]) for n in range(obj.dim)],
        }
    if isinstance(obj, MixedEnsemble):
        return {
            "type": "mixed_ensemble",
            "weights": [float(w) for w in obj.weights],
            "states": [to_jsonable(s) for s in obj.states],
        }
    raise ConfigError(f"cannot serialize object of type {type(obj).__name__}")


def from_jsonable(doc: dict):
    """Rebuild an object from ``to_jsonable`` output, re-validating invariants."""
    if not isinstance(doc, dict) or "type" not in doc:
        raise ConfigError("JSON document must carry a 'type' field")
    kind = doc["type"]
    try:
        if kind == "state_vector":
            return StateVector(_vec_dec(doc["amplitudes"]))
        if kind == "operator":
            entries = np.array([[_c_dec(p) for p in row] for row in doc["entries"]], dtype=complex)
            hint = bool(doc.get("hermitian", False))
            return OperatorMatrix(entries, hermitian_hint=hint if hint else None)
        if kind == "orthonormal_basis":
            cols = np.column_stack([_vec_dec(col) for col in doc["columns"]])
            return OrthonormalBasis(cols)
        if kind == "mixed_ensemble":
            states = tuple(from_jsonable(s) for s in doc["states"])
            return MixedEnsemble(np.array(doc["weights"], dtype=float), states)
    except KeyError as exc:
        raise ConfigError(f"JSON document for {kind!r} is missing field {exc}") from exc
    raise ConfigError(f"unknown document type {kind!r}")


def save_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_jsonable(obj), fh, indent=2)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return from_jsonable(doc)


# ---------------------------------------------------------------------------
# matrix / state CSV (header "dim=d", rows of re,im pairs)
# ---------------------------------------------------------------------------

def write_matrix_csv(op: OperatorMatrix, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"dim={op.dim}\n")
        writer = csv.writer(fh)
        for row in op.entries:
            flat = []
            for z in row:
                flat += [repr(float(z.real)), repr(float(z.imag))]
            writer.writerow(flat)


def _read_dim_header(fh, path) -> int:
    header = fh.readline().strip()
    if not header.startswith("dim="):
        raise ConfigError(f"{path}: first line must be 'dim=d', got {header!r}")
    try:
        dim = int(header.split("=", 1)[1])
    except ValueError as exc:
        raise ConfigError(f"{path}: cannot parse dimension from {header!r}") from exc
    if dim < 1:
        raise ConfigError(f"{path}: dimension must be positive, got {dim}")
    return dim


def read_matrix_csv(path) -> OperatorMatrix:
    """Read a matrix written by write_matrix_csv (or any tool following the format)."""
    with open(path, newline="") as fh:
        dim = _read_dim_header(fh, path)
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if len(rows) != dim:
        raise ConfigError(f"{path}: expected {dim} rows, found {len(rows)}")
    entries = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != 2 * dim:
            raise ConfigError(f"{path}: row {i} has {len(row)} cells, expected {2 * dim} (re,im pairs)")
        vals = [float(x) for x in row]
        entries[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    return OperatorMatrix(entries, hermitian_hint=None)


def write_state_csv(psi: StateVector, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"dim={psi.dim}\n")
        writer = csv.writer(fh)
        flat = []
        for z in psi.amplitudes:
            flat += [repr(float(z.real)), repr(float(z.imag))]
        writer.writerow(flat)


def read_state_csv(path) -> StateVector:
    with open(path, newline="") as fh:
        dim = _read_dim_header(fh, path)
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) != 1 or len(rows[0]) != 2 * dim:
        raise ConfigError(f"{path}: expected one row of {2 * dim} cells")
    vals = [float(x) for x in rows[0]]
    return StateVector(np.array(vals[0::2]) + 1j * np.array(vals[1::2]))


# ---------------------------------------------------------------------------
# tabular exports
# ---------------------------------------------------------------------------

def write_bound_reports_csv(reports, seeds, path) -> None:
    """Columns (kind, lhs, rhs, slack, seed), one row per report."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "lhs", "rhs", "slack", "seed"])
        for report, seed in zip(reports, seeds):
            writer.writerow([report.kind, repr(float(report.lhs)), repr(float(report.rhs)),
                             repr(float(report.slack)), seed])


def write_scan_csv(pairs, path) -> None:
    """Columns (s, ms_error) for a classical-limit scan."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "ms_error"])
        for s, err in pairs:
            writer.writerow([repr(float(s)), repr(float(err))])


def write_records_json(records: list, path) -> None:
    with open(path, "w") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")
