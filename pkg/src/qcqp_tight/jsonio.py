"""JSON encoding of instances and results.

Every top-level document carries ``"schema": "qcqp-tight/1"``.  Matrices
are row-major nested lists; complex entries are two-element [re, im]
pairs, real entries plain numbers (readers accept either spelling in
either field).  The instance document is the repository's canonical
fixture format::

    { "field": "real" | "complex", "n": int, "A0": matrix,
      "constraints": [ { "A": matrix, "c": number, "sense": "le" | "eq" } ] }
"""
from __future__ import annotations

import json

import numpy as np

from .experiment import ExperimentSummary
from .linalg import COMPLEX, REAL, hermitian
from .oracle import BruteForceResult
from .sdp import Constraint, QcqpInstance, SdpPair
from .slemma import CertificateResult
from .tightness import GapDiagnosis, TightnessVerdict

SCHEMA = "qcqp-tight/1"


def _entry(v, field: str):
    if field == COMPLEX:
        v = complex(v)
        return [v.real, v.imag]
    return float(np.real(v))


def _entry_back(v) -> complex:
    if isinstance(v, (list, tuple)):
        re, im = v
        return complex(re, im)
    return complex(v)


def encode_matrix(a, field: str) -> list:
    a = np.asarray(a.mat if hasattr(a, "mat") else a)
    return [[_entry(v, field) for v in row] for row in a]


def decode_matrix(obj, field: str) -> np.ndarray:
    a = np.array([[_entry_back(v) for v in row] for row in obj])
    if field == REAL:
        return a.real
    return a


def encode_vector(x, field: str) -> list:
    return [_entry(v, field) for v in np.asarray(x).ravel()]


def decode_vector(obj, field: str) -> np.ndarray:
    x = np.array([_entry_back(v) for v in obj])
    return x.real if field == REAL else x


def instance_to_json(inst: QcqpInstance) -> dict:
    return {
        "schema": SCHEMA,
        "field": inst.field,
        "n": inst.n,
        "A0": encode_matrix(inst.objective, inst.field),
        "constraints": [
            {"A": encode_matrix(c.matrix, inst.field), "c": float(c.bound),
             "sense": c.sense}
            for c in inst.constraints
        ],
    }


def instance_from_json(obj: dict) -> QcqpInstance:
    field = obj["field"]
    if field not in (REAL, COMPLEX):
        raise ValueError(f"unknown field {field!r}")
    a0 = hermitian(decode_matrix(obj["A0"], field), field)
    cons = tuple(
        Constraint(hermitian(decode_matrix(c["A"], field), field),
                   float(c["c"]), c["sense"])
        for c in obj["constraints"]
    )
    inst = QcqpInstance(field, a0, cons)
    if "n" in obj and int(obj["n"]) != inst.n:
        raise ValueError("declared n does not match the matrices")
    return inst


def load_instance(path) -> QcqpInstance:
    with open(path, encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))


def save_instance(inst: QcqpInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json(inst), fh, indent=2)
        fh.write("\n")


def pair_to_json(pair: SdpPair, field: str) -> dict:
    return {
        "schema": SCHEMA,
        "primal_value": float(pair.primal_value),
        "dual_value": float(pair.dual_value),
        "mu": [float(v) for v in pair.mu],
        "X": encode_matrix(pair.X, field),
        "Z": encode_matrix(pair.Z, field),
        "kkt_residual": float(pair.kkt_residual),
        "iterations": int(pair.iterations),
    }


def diagnosis_to_json(diag: GapDiagnosis) -> dict:
    out = {
        "schema": SCHEMA,
        "holds": diag.holds,
        "eps2": diag.eps2,
        "field": diag.field,
        "multipliers_ok": diag.multipliers_ok,
        "dual_rank_ok": diag.dual_rank_ok,
        "primal_rank_ok": diag.primal_rank_ok,
        "first_cross_ok": diag.first_cross_ok,
        "second_cross_ok": diag.second_cross_ok,
        "split_ok": diag.split_ok,
        "rank_primal": diag.rank_primal,
        "rank_dual": diag.rank_dual,
        "first_cross": diag.first_cross,
        "second_cross": diag.second_cross,
        "split_values": list(diag.split_values),
    }
    if diag.witnesses is not None:
        out["witnesses"] = [encode_vector(w, diag.field)
                            for w in diag.witnesses]
    return out


def verdict_to_json(verdict: TightnessVerdict) -> dict:
    out = {
        "schema": SCHEMA,
        "outcome": verdict.outcome,
        "diagnosis": diagnosis_to_json(verdict.diagnosis),
    }
    if verdict.x is not None:
        out["x"] = encode_vector(verdict.x, verdict.diagnosis.field)
        out["value"] = float(verdict.value)
    return out


def certificate_to_json(cert: CertificateResult, field: str) -> dict:
    out: dict = {"schema": SCHEMA, "kind": cert.kind}
    if cert.mu0 is not None:
        out["mu0"] = [float(v) for v in cert.mu0]
        out["convex"] = cert.convex
    if cert.mu_breve is not None:
        out["mu_breve"] = [float(v) for v in cert.mu_breve]
        out["x1"] = encode_vector(cert.x1, field)
        out["x2"] = encode_vector(cert.x2, field)
    if cert.x is not None:
        out["x"] = encode_vector(cert.x, field)
        out["system"] = list(cert.system)
    if cert.permutation is not None:
        out["permutation"] = list(cert.permutation)
    return out


def summary_to_json(summary: ExperimentSummary) -> dict:
    return {
        "schema": SCHEMA,
        "field": summary.field,
        "count": summary.count,
        "seed": summary.seed,
        "eps1": summary.eps1,
        "eps2": summary.eps2,
        "rows": [
            {"n": r.n, "total": r.total, "test_failed": r.test_failed,
             "recovered": r.recovered,
             "gap_or_infeasible": r.gap_or_infeasible,
             "solver_failures": r.solver_failures}
            for r in summary.per_n
        ],
    }


def oracle_to_json(res: BruteForceResult, field: str) -> dict:
    out: dict = {"schema": SCHEMA, "feasible": res.feasible}
    if res.feasible:
        out["value"] = float(res.value)
        out["argmin"] = encode_vector(res.argmin, field)
    return out
