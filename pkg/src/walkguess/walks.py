"""Step sets and exact counting of walks confined to the non-negative orthant.

Counts are produced two independent ways: forward dynamic programming over
walk end-points (the ground truth), and iteration of the functional
equations satisfied by the weight enumerator ``F(t, x[, y])``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith.poly import CatalyticPoly
from .arith.series import TruncatedSeries


class StepSetError(ValueError):
    pass


class ResourceExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class StepSet:
    dim: int
    steps: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise StepSetError(f"dimension must be 1, 2 or 3, got {self.dim}")
        steps = tuple(tuple(int(v) for v in (s if isinstance(s, (tuple, list)) else (s,))) for s in self.steps)
        if not steps:
            raise StepSetError("step set is empty")
        for s in steps:
            if len(s) != self.dim:
                raise StepSetError(f"step {list(s)} does not have dimension {self.dim}")
        if len(set(steps)) != len(steps):
            raise StepSetError("steps must be distinct")
        object.__setattr__(self, "steps", steps)
        if self.weights is not None:
            ws = tuple(Fraction(w) if not isinstance(w, float) else _reject_float(w) for w in self.weights)
            if len(ws) != len(steps):
                raise StepSetError("one weight per step is required")
            if any(w <= 0 for w in ws):
                raise StepSetError("weights must be positive")
            object.__setattr__(self, "weights", ws)

    @classmethod
    def of(cls, *steps, weights=None) -> StepSet:
        """``StepSet.of(-1, 1)`` or ``StepSet.of((1, 0), (0, -1))``."""
        dim = len(steps[0]) if isinstance(steps[0], (tuple, list)) else 1
        return cls(dim, tuple(steps), None if weights is None else tuple(weights))

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def weight_list(self) -> tuple:
        return self.weights if self.weights is not None else (1,) * len(self.steps)

    def max_up(self, axis: int) -> int:
        return max(0, max(s[axis] for s in self.steps))

    def max_down(self, axis: int) -> int:
        return max(0, -min(s[axis] for s in self.steps))


def _reject_float(w):
    raise StepSetError(f"weights must be exact rationals, got float {w!r}")


@dataclass(frozen=True)
class CountMode:
    """``zero``: walks returning to the origin; ``any``: every endpoint;
    ``slice``: walks ending exactly at ``target``."""

    kind: str
    target: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("zero", "any", "slice"):
            raise ValueError(f"unknown count mode {self.kind!r}")
        if self.kind == "slice":
            if self.target is None or any(v < 0 for v in self.target):
                raise ValueError("slice mode needs a non-negative target")
            object.__setattr__(self, "target", tuple(self.target))

    def end_target(self, dim: int) -> tuple[int, ...] | None:
        if self.kind == "zero":
            return (0,) * dim
        if self.kind == "slice":
            if len(self.target) != dim:
                raise ValueError(f"target {self.target} does not have dimension {dim}")
            return self.target
        return None

    def label(self) -> str:
        if self.kind == "slice":
            return "slice " + ",".join(map(str, self.target))
        return self.kind


ReturnToOrigin = CountMode("zero")
AnyEndpoint = CountMode("any")


def EndpointSlice(*target: int) -> CountMode:
    return CountMode("slice", tuple(target))


@dataclass
class CountTable:
    steps: StepSet
    mode: CountMode
    order: int
    values: list = field(default_factory=list)
    normalized: bool = False


def enumerate_dp(s: StepSet, mode: CountMode, N: int, max_states: int = 5_000_000) -> CountTable:
    """Total weight of n-step walks from the origin that never leave the
    non-negative orthant, for n = 0..N, filtered by ``mode``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    target = mode.end_target(s.dim)
    if s.dim == 1:
        values = _dp_line(s, target, N, max_states)
    else:
        values = _dp_general(s, target, N, max_states)
    if not s.weighted:
        values = [int(v) for v in values]
    return CountTable(s, mode, N, values)


def _dp_line(s: StepSet, target, N: int, max_states: int) -> list:
    steps = [(st[0], w) for st, w in zip(s.steps, s.weight_list())]
    up, down = s.max_up(0), s.max_down(0)
    goal = None if target is None else target[0]
    width = N * up + 1
    if width > max_states:
        raise ResourceExceeded(f"{width} heights exceed the state cap {max_states}")
    h = [0] * width
    h[0] = 1
    top = 0
    out = [1 if goal in (None, 0) else 0]
    for n in range(1, N + 1):
        new = [0] * width
        new_top = min(top + up, width - 1)
        # heights that can no longer come down to the goal are dropped
        limit = new_top if goal is None else min(new_top, goal + (N - n) * down)
        for x in range(top + 1):
            v = h[x]
            if not v:
                continue
            for st, w in steps:
                y = x + st
                if 0 <= y <= limit:
                    new[y] += v * w if w != 1 else v
        h, top = new, new_top
        out.append(sum(h[: top + 1]) if goal is None else (h[goal] if goal <= top else 0))
    return out


def _dp_general(s: StepSet, target, N: int, max_states: int) -> list:
    d = s.dim
    steps = list(zip(s.steps, s.weight_list()))
    down = [s.max_down(a) for a in range(d)]
    origin = (0,) * d
    states = {origin: 1}
    out = [1 if target in (None, origin) else 0]
    for n in range(1, N + 1):
        rem = N - n
        new: dict = {}
        for pos, v in states.items():
            for st, w in steps:
                q = tuple(a + b for a, b in zip(pos, st))
                if min(q) < 0:
                    continue
                if target is not None and any(q[a] - rem * down[a] > target[a] for a in range(d)):
                    continue
                new[q] = new.get(q, 0) + (v * w if w != 1 else v)
        if len(new) > max_states:
            raise ResourceExceeded(f"{len(new)} live states exceed the cap {max_states} at n={n}")
        states = new
        out.append(sum(states.values()) if target is None else states.get(target, 0))
    return out


def probability_table(s: StepSet, mode: CountMode, N: int) -> CountTable:
    """Probability of surviving n rounds (filtered by ``mode``) when step i
    is taken with probability ``weights[i]``."""
    if not s.weighted:
        raise StepSetError("probability_table needs weights")
    total = sum(s.weights)
    normalized = False
    if total != 1:
        warnings.warn(f"weights sum to {total}; normalising", stacklevel=2)
        s = StepSet(s.dim, s.steps, tuple(w / total for w in s.weights))
        normalized = True
    table = enumerate_dp(s, mode, N)
    table.values = [Fraction(v) for v in table.values]
    table.normalized = normalized
    return table


def _step_term(f_prev: CatalyticPoly, step: tuple[int, ...]) -> CatalyticPoly:
    """``x^s1 y^s2 (f - low slices)``: remove the end-points that the step
    would push below zero, then shift.  No negative exponent is formed."""
    g = f_prev
    if len(step) == 1:
        s = step[0]
        if s < 0:
            low = CatalyticPoly.zero(1)
            for i in range(-s):
                low = low + f_prev.coeff("x", i).embed("x", i, 1)
            g = f_prev - low
        return g.shift(step)
    s1, s2 = step
    lx = f_prev.low_slices("x", -s1) if s1 < 0 else None
    ly = f_prev.low_slices("y", -s2) if s2 < 0 else None
    if lx is not None:
        g = g - lx
    if ly is not None:
        g = g - ly
    if lx is not None and ly is not None:
        g = g + lx.low_slices("y", -s2)
    return g.shift(step)


def _next_coeff(s: StepSet, f_prev: CatalyticPoly) -> CatalyticPoly:
    acc = CatalyticPoly.zero(s.dim)
    for step, w in zip(s.steps, s.weight_list()):
        term = _step_term(f_prev, step)
        acc = acc + (term * w if w != 1 else term)
    return acc


def functional_map(s: StepSet, f: TruncatedSeries) -> TruncatedSeries:
    """One application of ``f -> 1 + t * sum_s w_s x^s (f - low slices)``.

    The image is valid one order further than ``f``.
    """
    if s.dim not in (1, 2) or f.arity != s.dim:
        raise ValueError("functional map needs a 1D or 2D step set and a matching series")
    head = CatalyticPoly.constant(1, s.dim)
    return TruncatedSeries([head] + [_next_coeff(s, c) for c in f.coeffs], f.exact, s.dim)


def functional_residual(s: StepSet, g: TruncatedSeries) -> TruncatedSeries:
    """``g - map(g)`` up to the order of ``g``; zero iff ``g`` is a
    truncated solution of the functional equation."""
    return g - functional_map(s, g).truncate(g.order)


def _iterate(s: StepSet, N: int) -> TruncatedSeries:
    # After k applications of the map starting from 1, coefficients 0..k are
    # final, and coefficient k+1 only depends on coefficient k, so the N-fold
    # iteration is computed one coefficient at a time.
    coeffs = [CatalyticPoly.constant(1, s.dim)]
    for _ in range(N):
        coeffs.append(_next_coeff(s, coeffs[-1]))
    return TruncatedSeries(coeffs, True, s.dim)


def series_iterate_1d(s: StepSet, N: int) -> TruncatedSeries:
    if s.dim != 1:
        raise ValueError(f"series_iterate_1d needs a 1D step set, got dimension {s.dim}")
    return _iterate(s, N)


def series_iterate_2d(s: StepSet, N: int) -> TruncatedSeries:
    if s.dim != 2:
        raise ValueError(f"series_iterate_2d needs a 2D step set, got dimension {s.dim}")
    return _iterate(s, N)


def slice_count(s: StepSet) -> int:
    """``r = -min(S) - 1``: the highest catalytic slice the 1D equation uses."""
    return s.max_down(0) - 1


# G(t, x) = 1 + 2xt G + t(-x + t + t x^2) G^2, coefficient by coefficient.
_X = CatalyticPoly({(1,): 1}, 1)
_TWO_X = CatalyticPoly({(1,): 2}, 1)
_ONE_PLUS_X2 = CatalyticPoly({(0,): 1, (2,): 1}, 1)


def quadratic_map(g: TruncatedSeries) -> TruncatedSeries:
    """One application of ``g -> 1 + 2xt g + t(-x + t + t x^2) g^2``
    (valid one order further than ``g``)."""
    sq = g * g
    out = [CatalyticPoly.constant(1, 1)]
    for n in range(1, g.order + 2):
        c = _TWO_X * g.coeffs[n - 1] - _X * sq.coeffs[n - 1]
        if n >= 2:
            c = c + _ONE_PLUS_X2 * sq.coeffs[n - 2]
        out.append(c)
    return TruncatedSeries(out, g.exact, 1)


def iterate_quadratic_map(N: int) -> TruncatedSeries:
    """Order-N truncation of the fixed point G(t, x) of :func:`quadratic_map`."""
    if N < 0:
        raise ValueError("N must be non-negative")
    g = [CatalyticPoly.constant(1, 1)]
    sq = [CatalyticPoly.constant(1, 1)]
    for n in range(1, N + 1):
        c = _TWO_X * g[n - 1] - _X * sq[n - 1]
        if n >= 2:
            c = c + _ONE_PLUS_X2 * sq[n - 2]
        g.append(c)
        acc = CatalyticPoly.zero(1)
        for i in range(n + 1):
            acc = acc + g[i] * g[n - i]
        sq.append(acc)
    return TruncatedSeries(g, True, 1)


# -- step-set documents ------------------------------------------------------

def stepset_to_text(s: StepSet) -> str:
    doc = {"dim": s.dim, "steps": [list(v) for v in s.steps]}
    if s.weights is not None:
        doc["weights"] = [str(w) for w in s.weights]
    return json.dumps(doc) + "\n"


def stepset_from_text(text: str) -> StepSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StepSetError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise StepSetError("step-set document must be an object")
    unknown = set(doc) - {"dim", "steps", "weights"}
    if unknown:
        raise StepSetError(f"unknown fields: {sorted(unknown)}")
    if "dim" not in doc or "steps" not in doc:
        raise StepSetError("fields 'dim' and 'steps' are required")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise StepSetError("'dim' must be an integer")
    steps = doc["steps"]
    if not isinstance(steps, list):
        raise StepSetError("'steps' must be a list of integer vectors")
    vecs = []
    for i, v in enumerate(steps):
        if not isinstance(v, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in v):
            raise StepSetError(f"steps[{i}] must be a list of integers")
        vecs.append(tuple(v))
    weights = doc.get("weights")
    if weights is not None:
        if not isinstance(weights, list):
            raise StepSetError("'weights' must be a list of rational strings")
        parsed = []
        for i, w in enumerate(weights):
            if not isinstance(w, str):
                raise StepSetError(f"weights[{i}] must be a string like \"1/3\"")
            try:
                parsed.append(Fraction(w))
            except ValueError:
                raise StepSetError(f"weights[{i}]: {w!r} is not a rational") from None
        weights = tuple(parsed)
    return StepSet(dim, tuple(vecs), weights)


def parse_steps_arg(text: str) -> StepSet:
    """Inline form for the command line: ``-1,-2,3`` or ``1:0,-1:0,0:1,0:-1``."""
    vecs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise StepSetError(f"empty step in {text!r}")
        try:
            vecs.append(tuple(int(v) for v in part.split(":")))
        except ValueError:
            raise StepSetError(f"bad step {part!r} in {text!r}") from None
    return StepSet(len(vecs[0]), tuple(vecs))


def series_view(F: TruncatedSeries, mode: CountMode) -> list:
    """Read the counts for ``mode`` off a weight enumerator."""
    from .arith.series import coeff_slice, substitute

    dim = F.arity
    if mode.kind == "any":
        view = F
        for _ in range(dim):
            view = substitute(view, "x", 1)
        return view.terms()
    target = mode.end_target(dim)
    view = F
    for k in target:
        view = coeff_slice(view, "x", k)
    return view.terms()
