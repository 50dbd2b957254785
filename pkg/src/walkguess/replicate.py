"""Canned runs of the worked examples, diffed against stored outputs.

A mismatch shows up as a failed check and a non-verified status; it is
never hidden.
"""

from __future__ import annotations

import time
from fractions import Fraction

from .guess.fitting import RESOURCE_EXCEEDED, GuessConfig, compress_zeros, guess_algebraic, guess_polynomial, guess_recurrence
from .guess.pipeline import Budget, guess_pipeline
from .report import check_roundtrip, guess_entry, header, relation_text, run_manifest
from .runs import NO_FIT, VERIFIED, _check, _strs, cross_checks, unroll_check
from .sequences import binomial_coefficient, closed_form_catalan, convolution_oracle, unroll
from .walks import AnyEndpoint, ReturnToOrigin, StepSet, enumerate_dp, probability_table

EXPECTED = {
    "gauss": "1/2*n^2 + 1/2*n",
    "catalan-alg": "(t)*C^2 + (-1)*C + (1) = 0",
    "catalan-rec": "(n + 2)*a(n+1) + (-4*n - 2)*a(n) = 0",
    "catalan-100": 896519947090131496687170070074100632420837521538745909320,
}

DYCK = StepSet.of(-1, 1)
FAIR_COIN = StepSet.of(-1, 1, weights=(Fraction(1, 2), Fraction(1, 2)))
S123 = StepSet.of(-1, -2, 3)
S123_BUDGET = Budget(max_terms=700, max_order=21, max_degree=40, ansatze=("rec",))
S123_ORDER_CAPS = {"zero": 20, "any": 21}
MIN_HELD_OUT_DEPTH = 100


def _match(name: str, got, want) -> dict:
    return _check(name, got == want, f"got {got!r}" if got != want else str(want))


def _catalan_terms(N: int) -> list[int]:
    """c(0..N) from the return-to-origin walks of {-1, 1}."""
    compressed, _, _ = compress_zeros(enumerate_dp(DYCK, ReturnToOrigin, 2 * N).values)
    return [int(v) for v in compressed[: N + 1]]


def gauss() -> dict:
    data = [0, 1, 3, 6, 10]
    rep = guess_polynomial(data)
    checks = [_match("formula", relation_text(rep.relation), EXPECTED["gauss"])]
    if rep.verified:
        sums = {n: sum(range(n + 1)) for n in (5, 6, 100)}
        checks.append(_check("confirmed at n=5, n=6", all(rep.relation(n) == sums[n] for n in (5, 6))))
        checks.append(_match("a(100)", rep.relation(100), 5050))
    return {"terms": _strs(data), "guesses": [guess_entry(rep)], "checks": checks}


def catalan_theorem() -> dict:
    alg = guess_algebraic(_catalan_terms(13), 12, 12, GuessConfig(min_verify=5))
    rec = guess_recurrence(_catalan_terms(11), 12, 12, GuessConfig(min_verify=4))
    checks = [
        _match("algebraic equation", relation_text(alg.relation), EXPECTED["catalan-alg"]),
        _match("recurrence", relation_text(rec.relation), EXPECTED["catalan-rec"]),
    ]
    N = 200
    conv = convolution_oracle(N)
    closed = [closed_form_catalan(n) for n in range(N + 1)]
    checks.append(_check("convolution = closed form to 200", conv == closed))
    if rec.verified:
        checks.append(_check("unroll = closed form to 200", unroll(rec.relation, N) == closed))
    dp = _catalan_terms(60)
    checks.append(_check("walk counts = closed form to 60", dp == closed[:61]))
    checks.extend(cross_checks(closed, {"alg": alg, "rec": rec}))
    return {"guesses": [guess_entry(alg), guess_entry(rec)], "checks": checks}


def gambler_101() -> dict:
    """Good gambling histories (never in debt, n wins and n losses) are
    walks of {-1, 1} back to 0; guess their law from the walk counts."""
    terms = _catalan_terms(30)
    rec = guess_recurrence(terms, 12, 12)
    checks = [
        _match("recurrence", relation_text(rec.relation), EXPECTED["catalan-rec"]),
        _match("n=3 good histories", terms[3], 5),
        _match("n=3 all histories", binomial_coefficient(6, 3), 20),
        _match("n=3 ratio", Fraction(terms[3], binomial_coefficient(6, 3)), Fraction(1, 4)),
    ]
    if rec.verified:
        checks.append(unroll_check(rec.relation, terms))
        checks.append(_match("n=100 via the recurrence", int(unroll(rec.relation, 100)[100]), EXPECTED["catalan-100"]))
    checks.append(_match("n=100 closed form", closed_form_catalan(100), EXPECTED["catalan-100"]))
    return {"terms": _strs(terms), "guesses": [guess_entry(rec)], "checks": checks}


def probability(n_max: int = 50) -> dict:
    table = probability_table(FAIR_COIN, ReturnToOrigin, 2 * n_max)
    bad = [n for n in range(n_max + 1)
           if table.values[2 * n] * 4**n / binomial_coefficient(2 * n, n) != Fraction(1, n + 1)]
    checks = [_check(f"ratio = 1/(n+1) for n = 0..{n_max}", not bad, f"fails at n={bad}" if bad else "")]
    checks.append(_match("survival-and-break-even at 2n=6", table.values[6], Fraction(5, 64)))
    return {"terms": _strs(table.values[::2]), "guesses": [], "checks": checks}


def s_123(budget: Budget = S123_BUDGET) -> dict:
    guesses, checks, statuses = [], [], []
    for mode in (ReturnToOrigin, AnyEndpoint):
        res = guess_pipeline(S123, mode, budget)
        rep = res.reports["rec"]
        guesses.append({"mode": mode.label(), **guess_entry(rep)})
        statuses.append(rep.status)
        cap = S123_ORDER_CAPS[mode.kind]
        if rep.verified:
            checks.append(_check(f"{mode.label()}: order <= {cap}", rep.shape[0] <= cap, f"order {rep.shape[0]}"))
            checks.append(_check(f"{mode.label()}: held-out depth >= {MIN_HELD_OUT_DEPTH}",
                                 rep.verification_depth >= MIN_HELD_OUT_DEPTH,
                                 f"depth {rep.verification_depth}"))
            checks.append(unroll_check(rep.relation, res.compressed))
        else:
            checks.append(_check(f"{mode.label()}: recurrence found", False, rep.status))
    return {"guesses": guesses, "checks": checks, "statuses": statuses}


EXAMPLES = {
    "gauss": gauss,
    "catalan-theorem": catalan_theorem,
    "gambler-101": gambler_101,
    "probability": probability,
    "s-123": s_123,
}


class UnknownExample(KeyError):
    pass


def replicate(example: str):
    if example not in EXAMPLES:
        raise UnknownExample(f"unknown example {example!r}; choose from {', '.join(EXAMPLES)}")
    start = time.monotonic()
    body = EXAMPLES[example]()
    statuses = body.pop("statuses", [])
    if RESOURCE_EXCEEDED in statuses:
        status = RESOURCE_EXCEEDED
    elif all(c["ok"] for c in body["checks"]):
        status = VERIFIED
    else:
        status = NO_FIT
    body["status"] = status
    doc = {"header": header(time.monotonic() - start), "manifest": run_manifest("replicate", example=example), "body": body}
    body["checks"].append(_check("relation-round-trip", check_roundtrip(doc)))
    if not body["checks"][-1]["ok"]:
        body["status"] = status = NO_FIT
    return doc, status
