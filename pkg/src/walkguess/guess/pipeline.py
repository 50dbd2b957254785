"""End-to-end guess-and-check for one step set and count mode."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..walks import CountMode, StepSet, enumerate_dp
from .fitting import (
    RESOURCE_EXCEEDED,
    GuessConfig,
    InsufficientTerms,
    compress_zeros,
    guess_algebraic,
    guess_ode,
    guess_recurrence,
)
from .relations import GuessReport

log = logging.getLogger(__name__)

ANSATZ_ORDER = ("alg", "rec", "ode")
_GUESSERS = {"alg": guess_algebraic, "rec": guess_recurrence, "ode": guess_ode}


@dataclass(frozen=True)
class Budget:
    max_terms: int = 400
    max_order: int = 12
    max_degree: int = 12
    seconds: float | None = None
    ansatze: tuple[str, ...] = ANSATZ_ORDER
    fit_fraction: float = 0.6
    min_verify: int = 10

    def config(self, time_limit: float | None = None) -> GuessConfig:
        return GuessConfig(fit_fraction=self.fit_fraction, min_verify=self.min_verify, time_limit=time_limit)


@dataclass
class PipelineResult:
    steps: StepSet
    mode: CountMode
    budget: Budget
    terms: list
    period: int
    residue: int
    compressed: list
    reports: dict[str, GuessReport] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def verified(self) -> bool:
        return any(r.verified for r in self.reports.values())

    @property
    def status(self) -> str:
        if self.verified:
            return GuessReport.VERIFIED
        if any(r.status == RESOURCE_EXCEEDED for r in self.reports.values()):
            return RESOURCE_EXCEEDED
        return GuessReport.NO_FIT


def run_guessers(terms, budget: Budget, start: float | None = None) -> dict[str, GuessReport]:
    start = time.monotonic() if start is None else start
    reports = {}
    for kind in ANSATZ_ORDER:
        if kind not in budget.ansatze:
            continue
        left = None
        if budget.seconds is not None:
            left = budget.seconds - (time.monotonic() - start)
            if left <= 0:
                reports[kind] = GuessReport(kind=kind, status=RESOURCE_EXCEEDED, notes=["time budget spent"])
                continue
        t0 = time.monotonic()
        try:
            rep = _GUESSERS[kind](terms, budget.max_order, budget.max_degree, budget.config(left))
        except InsufficientTerms as e:
            rep = GuessReport(kind=kind, status=GuessReport.NO_FIT, notes=[str(e)])
        log.info("%s sweep: %s in %.1fs", kind, rep.status, time.monotonic() - t0)
        reports[kind] = rep
    return reports


def guess_pipeline(s: StepSet, mode: CountMode, budget: Budget | None = None) -> PipelineResult:
    """Enumerate by DP, compress away periodic zeros, then sweep the
    algebraic, recurrence and differential ansatzes in that order."""
    budget = budget or Budget()
    start = time.monotonic()
    table = enumerate_dp(s, mode, budget.max_terms - 1)
    terms = [Fraction(v) for v in table.values]
    compressed, g, r = compress_zeros(terms)
    result = PipelineResult(s, mode, budget, terms, g, r, compressed)
    if all(v == 0 for v in compressed[1:]) and len(compressed) > 1:
        log.info("sequence is eventually zero; nothing to guess")
    result.reports = run_guessers(compressed, budget, start)
    result.elapsed = time.monotonic() - start
    return result
