"""Build report documents for the command-line verbs.

Each builder returns ``(doc, status)`` where ``doc`` has ``header``,
``manifest`` and ``body`` and ``status`` is one of the strings in
:data:`EXIT_CODES`.
"""

from __future__ import annotations

import logging
import time
from fractions import Fraction

from .guess.fitting import (
    RESOURCE_EXCEEDED,
    GuessConfig,
    InsufficientTerms,
    compress_zeros,
    guess_algebraic,
    guess_ode,
    guess_polynomial,
    guess_recurrence,
)
from .guess.relations import AlgebraicRelation, GuessReport, Recurrence
from .report import check_entry, check_roundtrip, guess_entry, header, run_manifest, stepset_doc
from .sequences import expand_algebraic, unroll
from .walks import CountMode, StepSet, enumerate_dp, series_iterate_1d, series_iterate_2d, series_view

log = logging.getLogger(__name__)

VERIFIED = GuessReport.VERIFIED
NO_FIT = GuessReport.NO_FIT
INPUT_ERROR = "input-error"
PARTIAL = "partial"

EXIT_CODES = {
    VERIFIED: 0,
    "full": 0,
    NO_FIT: 1,
    "failed": 1,
    INPUT_ERROR: 2,
    RESOURCE_EXCEEDED: 3,
    PARTIAL: 4,
}

ANSATZ_CHOICES = ("poly", "alg", "rec", "ode", "auto")
AUTO_ORDER = ("poly", "alg", "rec", "ode")

# the series cross-check is quadratic-ish in the order; cap it
SERIES_CHECK_ORDER = {1: 25, 2: 16, 3: 8}


def _strs(values) -> list[str]:
    return [str(Fraction(v)) for v in values]


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


# -- enum --------------------------------------------------------------------

def enum_terms(s: StepSet, mode: CountMode, N: int) -> tuple[list, dict]:
    table = enumerate_dp(s, mode, N)
    manifest = run_manifest("enum", steps=stepset_doc(s), mode=mode.label(), N=N)
    return table.values, manifest


# -- guess -------------------------------------------------------------------

def _one_guess(kind: str, terms, max_order: int, max_degree: int, cfg: GuessConfig) -> GuessReport:
    if kind == "poly":
        return guess_polynomial(terms)
    fn = {"alg": guess_algebraic, "rec": guess_recurrence, "ode": guess_ode}[kind]
    return fn(terms, max_order, max_degree, cfg)


def overall_status(reports) -> str:
    if any(r.verified for r in reports):
        return VERIFIED
    if any(r.status == RESOURCE_EXCEEDED for r in reports):
        return RESOURCE_EXCEEDED
    return NO_FIT


def dp_series_check(s: StepSet, mode: CountMode, terms) -> dict:
    n = min(len(terms) - 1, SERIES_CHECK_ORDER[s.dim])
    if s.dim == 3:
        return _check("dp-vs-series", True, "skipped: series iteration is for dimensions 1 and 2")
    F = series_iterate_1d(s, n) if s.dim == 1 else series_iterate_2d(s, n)
    view = series_view(F, mode)[: n + 1]
    agree = 0
    for a, b in zip(view, terms):
        if Fraction(a) != Fraction(b):
            break
        agree += 1
    return _check("dp-vs-series", agree == n + 1, f"agreement depth {agree} of {n + 1}")


def unroll_check(rec: Recurrence, terms) -> dict:
    try:
        again = unroll(rec, len(terms) - 1)
    except ValueError as e:
        return _check("unroll-left-inverse", False, str(e))
    ok = again == [Fraction(t) for t in terms]
    return _check("unroll-left-inverse", ok, f"{len(terms)} terms reproduced" if ok else "unrolled terms differ")


def expansion_check(alg: AlgebraicRelation, rec: Recurrence, terms) -> dict:
    N = len(terms) - 1
    for k in range(1, len(terms) + 1):
        try:
            series = expand_algebraic(alg, terms[:k], N)
            break
        except ValueError:
            continue
    else:
        return _check("algebraic-vs-recurrence", False, "could not pin the algebraic branch")
    try:
        rec_terms = unroll(rec, N)
    except ValueError as e:
        return _check("algebraic-vs-recurrence", False, str(e))
    ok = series == rec_terms
    return _check("algebraic-vs-recurrence", ok, f"agree through index {N}" if ok else "expansions differ")


def cross_checks(terms, reports: dict) -> list[dict]:
    out = []
    rec = reports.get("rec")
    alg = reports.get("alg")
    if rec is not None and rec.verified:
        out.append(unroll_check(rec.relation, terms))
    if rec is not None and alg is not None and rec.verified and alg.verified:
        out.append(expansion_check(alg.relation, rec.relation, terms))
    return out


def guess_document(
    terms=None,
    *,
    steps: StepSet | None = None,
    mode: CountMode | None = None,
    ansatz: str = "auto",
    max_terms: int = 400,
    max_order: int = 12,
    max_degree: int = 12,
    fit_fraction: float = 0.6,
    min_verify: int = 10,
    seconds: float | None = None,
    source: str | None = None,
):
    """Guess from explicit ``terms`` or from the walks of ``steps``/``mode``.

    Raises :class:`InsufficientTerms` when no requested ansatz can run.
    """
    start = time.monotonic()
    budgets = {"max_terms": max_terms, "max_order": max_order, "max_degree": max_degree,
               "fit_fraction": fit_fraction, "min_verify": min_verify, "seconds": seconds}
    if steps is not None:
        mode = mode or CountMode("zero")
        terms = enumerate_dp(steps, mode, max_terms - 1).values
        manifest = run_manifest("guess", steps=stepset_doc(steps), mode=mode.label(), ansatz=ansatz, **budgets)
    else:
        manifest = run_manifest("guess", terms_source=source, terms=_strs(terms), ansatz=ansatz, **budgets)
    terms = [Fraction(t) for t in terms]
    compressed, g, r = compress_zeros(terms)
    kinds = AUTO_ORDER if ansatz == "auto" else (ansatz,)
    reports: dict[str, GuessReport] = {}
    insufficient = []
    for kind in kinds:
        left = None
        if seconds is not None:
            left = seconds - (time.monotonic() - start)
            if left <= 0:
                reports[kind] = GuessReport(kind=kind, status=RESOURCE_EXCEEDED, notes=["time budget spent"])
                continue
        cfg = GuessConfig(fit_fraction=fit_fraction, min_verify=min_verify, time_limit=left)
        # polynomial formulas are about a(n) itself, not the compressed sequence
        data = terms if kind == "poly" else compressed
        try:
            reports[kind] = _one_guess(kind, data, max_order, max_degree, cfg)
        except InsufficientTerms as e:
            insufficient.append(str(e))
            if ansatz != "auto":
                raise
            reports[kind] = GuessReport(kind=kind, status=NO_FIT, notes=[str(e)])
    if len(insufficient) == len(kinds):
        raise InsufficientTerms("; ".join(insufficient))
    status = overall_status(reports.values())
    checks = []
    if steps is not None:
        checks.append(dp_series_check(steps, mode, terms))
    checks.extend(cross_checks(compressed, reports))
    body = {
        "terms": _strs(terms),
        "compression": {"period": g, "residue": r, "terms": len(compressed)},
        "guesses": [guess_entry(rep) for rep in reports.values()],
        "checks": checks,
        "degenerate": all(t == 0 for t in terms),
        "status": status,
    }
    doc = {"header": header(time.monotonic() - start), "manifest": manifest, "body": body}
    body["checks"].append(_check("relation-round-trip", check_roundtrip(doc)))
    return doc, status


# -- check -------------------------------------------------------------------

def check_document(rel, rel_text: str, terms, from_index: int = 0):
    start = time.monotonic()
    manifest = run_manifest("check", relation=rel_text.strip(), terms=_strs(terms), from_index=from_index)
    entry = check_entry(rel, terms, from_index)
    status = PARTIAL if entry["status"] == "partial" else entry["status"]
    body = {"verifications": [entry], "status": status}
    return {"header": header(time.monotonic() - start), "manifest": manifest, "body": body}, status
