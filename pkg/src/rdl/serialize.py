"""JSON wire formats.

Complex matrices travel as {"rows": n, "cols": n, "data": [[re, im], ...]}
with entries flattened in row-major order.  Malformed input raises ValueError
with enough context to locate the problem.
"""

from __future__ import annotations

import importlib.resources
import json

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .consistency import ConsistencyReport
from .families import StateFamily, TwoQubitParams
from .maps import MapVerdicts, SignedKraus, Superoperator
from .operators import BipartiteDims
from .subspace import Subspace
from .two_qubit import LinearityCoefficients

SCHEMA_ID = "rdl/1"


def matrix_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"can only serialize 2-d arrays, got ndim {a.ndim}")
    rows, cols = a.shape
    flat = a.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj, what: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError(f"{what}: expected an object, got {type(obj).__name__}")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise ValueError(f"{what}: missing key {key!r}")
    rows, cols = obj["rows"], obj["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ValueError(f"{what}: rows/cols must be positive integers")
    data = obj["data"]
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ValueError(
            f"{what}: data must hold rows*cols = {rows * cols} entries, got "
            f"{len(data) if isinstance(data, list) else type(data).__name__}"
        )
    out = np.zeros(rows * cols, dtype=complex)
    for idx, entry in enumerate(data):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) for v in entry)
        ):
            raise ValueError(f"{what}: entry {idx} must be a [re, im] pair, got {entry!r}")
        out[idx] = complex(entry[0], entry[1])
    return out.reshape(rows, cols)


def family_to_json(family: StateFamily) -> dict:
    return {
        "d_s": family.dims.d_s,
        "d_e": family.dims.d_e,
        "label": family.label,
        "members": [matrix_to_json(m) for m in family.members],
    }


def family_from_json(obj, tol: ToleranceConfig = DEFAULT_TOL) -> StateFamily:
    if not isinstance(obj, dict):
        raise ValueError(f"family: expected an object, got {type(obj).__name__}")
    for key in ("d_s", "d_e", "members"):
        if key not in obj:
            raise ValueError(f"family: missing key {key!r}")
    if not isinstance(obj["members"], list):
        raise ValueError("family: members must be a list")
    members = [
        matrix_from_json(m, what=f"family member {i}") for i, m in enumerate(obj["members"])
    ]
    label = obj.get("label", "")
    if not isinstance(label, str):
        raise ValueError("family: label must be a string")
    dims = BipartiteDims(d_s=obj["d_s"], d_e=obj["d_e"])
    return StateFamily(dims=dims, members=tuple(members), label=label, tol=tol)


def params_to_json(p: TwoQubitParams) -> dict:
    return {
        "alpha": [float(v) for v in p.alpha],
        "beta": [float(v) for v in p.beta],
        "gamma": [[float(v) for v in row] for row in p.gamma],
    }


def params_from_json(obj) -> TwoQubitParams:
    if not isinstance(obj, dict):
        raise ValueError(f"params: expected an object, got {type(obj).__name__}")
    for key in ("alpha", "beta", "gamma"):
        if key not in obj:
            raise ValueError(f"params: missing key {key!r}")
    return TwoQubitParams(
        alpha=np.asarray(obj["alpha"], dtype=float),
        beta=np.asarray(obj["beta"], dtype=float),
        gamma=np.asarray(obj["gamma"], dtype=float),
    )


def consistency_report_to_json(rep: ConsistencyReport) -> dict:
    return {
        "consistent": rep.consistent,
        "max_violation": rep.max_violation,
        "tolerance": rep.tolerance,
        "witness": None if rep.witness is None else matrix_to_json(rep.witness),
        "pairs_tested": rep.pairs_tested,
        "marginal": rep.marginal,
    }


def superoperator_to_json(s: Superoperator) -> dict:
    return {
        "d_s": s.d_s,
        "matrix": matrix_to_json(s.matrix),
        "choi": matrix_to_json(s.choi),
        "extension": s.extension,
        "consistency_certified": s.consistency_certified,
    }


def kraus_to_json(k: SignedKraus) -> dict:
    return {"terms": [{"e": e, "op": matrix_to_json(op)} for e, op in k.terms]}


def verdicts_to_json(v: MapVerdicts) -> dict:
    return {
        "hermitian_preserving": v.hermitian_preserving,
        "trace_preserving": v.trace_preserving,
        "completely_positive": v.completely_positive,
        "choi_min_eigenvalue": v.choi_min_eigenvalue,
    }


def subspace_to_json(sub: Subspace) -> dict:
    return {
        "d_s": sub.dims.d_s,
        "d_e": sub.dims.d_e,
        "tol_rank": sub.tol_rank,
        "span_basis": [matrix_to_json(e) for e in sub.span_basis],
        "kernel_basis": [matrix_to_json(e) for e in sub.kernel_basis],
        "pairs": [
            {"reduced": matrix_to_json(red), "joint": matrix_to_json(joint)}
            for red, joint in sub.pairs
        ],
    }


def coefficients_to_json(c: LinearityCoefficients) -> dict:
    return {
        "a11": c.a11,
        "b11": [float(v) for v in c.b11],
        "a21": c.a21,
        "b21": [float(v) for v in c.b21],
    }


def dumps_report(report: dict) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def load_report_schema() -> dict:
    """The JSON schema every CLI report validates against."""
    text = importlib.resources.files("rdl").joinpath("report_schema.json").read_text()
    return json.loads(text)
