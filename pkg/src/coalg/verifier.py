"""Declarative identity verification with machine-readable reports.

An IdentityCase builds a left and a right operator (each optionally as a
list of factors, so the apply-to-function oracle can exercise the factors
independently of normal ordering).  check_identity normal-orders
left - right and assigns a verdict:

    PASS              residual is exactly zero
    PAPER-DISCREPANT  residual nonzero, and the case is flagged as checking
                      a printed claim the engine corrects; the computed
                      form is reported
    FAIL              residual nonzero on a case expected to vanish
    ERROR             the builder raised; the diagnostic is recorded

Reports serialise to JSON ({suite, cases: [...], summary}) and validate
against the schema shipped in coalg/schema/report.schema.json.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor

from .coeff import Coeff
from .errors import UnknownSuite
from .operators import OperatorElement, apply_op, multiply
from .printing import operator_str

SCHEMA_VERSION = 1


class IdentityCase:
    """One verifiable identity: deterministic builder plus expectation."""

    __slots__ = ("id", "anchor", "builder", "expect", "note")

    def __init__(self, case_id, anchor, builder, expect="zero", note=""):
        self.id = case_id
        self.anchor = anchor
        self.builder = builder
        self.expect = expect      # "zero" | "discrepant"
        self.note = note

    def build(self):
        """Returns (lhs_factors, rhs_factors); matrix-valued cases return
        the two matrices directly."""
        lhs, rhs = self.builder()
        if isinstance(lhs, MatrixOperator) or isinstance(rhs, MatrixOperator):
            return lhs, rhs
        if isinstance(lhs, OperatorElement):
            lhs = [lhs]
        if isinstance(rhs, OperatorElement):
            rhs = [rhs]
        return list(lhs), list(rhs)


def _compose(factors):
    out = None
    for f in factors:
        out = f if out is None else multiply(out, f)
    return out


def check_identity(case, oracle_degree=0):
    """Run one case; returns a plain-dict report entry."""
    started = time.monotonic()
    entry = {"id": case.id, "anchor": case.anchor}
    try:
        lhs_f, rhs_f = case.build()
        if isinstance(lhs_f, MatrixOperator):
            residual = lhs_f - rhs_f
            zero = residual.is_zero
            nterms = 0 if zero else sum(
                residual.entry(i, j).term_count() for i in range(4) for j in range(4))
            rstring = "" if zero else _matrix_residual_str(residual)
            oracle_ctx = None
        else:
            lhs = _compose(lhs_f)
            rhs = _compose(rhs_f)
            residual = ((lhs - rhs) if rhs is not None else lhs).pruned()
            zero = residual.is_zero
            nterms = residual.term_count()
            rstring = "" if zero else operator_str(residual)
            oracle_ctx = lhs.ctx
        if zero:
            entry["verdict"] = "PASS"
            entry["residual_terms"] = 0
        elif case.expect == "discrepant":
            entry["verdict"] = "PAPER-DISCREPANT"
            entry["residual_terms"] = nterms
            entry["residual"] = rstring
        else:
            entry["verdict"] = "FAIL"
            entry["residual_terms"] = nterms
            entry["residual"] = rstring
        if case.note:
            entry["note"] = case.note
        if zero and oracle_degree and oracle_ctx is not None:
            bad = _oracle_check(lhs_f, rhs_f, oracle_ctx, oracle_degree)
            if bad:
                entry["verdict"] = "FAIL"
                entry["residual"] = "oracle mismatch on %s" % (bad,)
    except Exception as exc:  # noqa: BLE001 - verdicts must never crash the suite
        entry["verdict"] = "ERROR"
        entry["residual_terms"] = -1
        entry["error"] = "%s: %s" % (type(exc).__name__, exc)
    entry["millis"] = round(1000.0 * (time.monotonic() - started), 3)
    return entry


def _oracle_check(lhs_f, rhs_f, ctx, degree):
    """Apply both factor chains to low-degree monomials; '' when they agree.

    Only exercised for gamma-free, shift-free chains (the chains the
    apply-to-function oracle is closed over).
    """
    chains = [f for f in (lhs_f, rhs_f)]
    for chain in chains:
        for op in chain:
            if not (op.gamma_free() and op.shift_free()):
                return ""
    names = [ctx.var_names[i] for i in ctx.position_indices] or ["r"]
    monos = [Coeff.one(ctx)]
    for name in names:
        monos.append(Coeff.var(ctx, name))
        if degree >= 2:
            monos.append(Coeff.var(ctx, name, 2))
    if degree >= 3 and len(names) >= 2:
        monos.append(Coeff.var(ctx, names[0]) * Coeff.var(ctx, names[1]))
    for f in monos:
        l = f
        for op in reversed(lhs_f):
            l = apply_op(op, l)
        r = f
        for op in reversed(rhs_f):
            r = apply_op(op, r)
        if not (l - r).is_zero:
            return repr(f)
    return ""


def run_suite(name, cases, threads=None, oracle_degree=0):
    """Execute the cases of one suite and assemble the report."""
    if threads is None:
        threads = int(os.environ.get("COALG_THREADS", "1") or "1")
    cases = sorted(cases, key=lambda c: c.id)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(
                lambda c: check_identity(c, oracle_degree), cases))
    else:
        entries = [check_identity(c, oracle_degree) for c in cases]
    entries.sort(key=lambda e: e["id"])
    summary = {"pass": 0, "fail": 0, "discrepant": 0, "error": 0}
    for e in entries:
        v = e["verdict"]
        if v == "PASS":
            summary["pass"] += 1
        elif v == "PAPER-DISCREPANT":
            summary["discrepant"] += 1
        elif v == "ERROR":
            summary["error"] += 1
        else:
            summary["fail"] += 1
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": name,
        "cases": entries,
        "summary": summary,
    }


def report_ok(report):
    return report["summary"]["fail"] == 0 and report["summary"]["error"] == 0


def report_json(report, strip_timing=False):
    if strip_timing:
        report = json.loads(json.dumps(report))
        for e in report["cases"]:
            e.pop("millis", None)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
