"""Canonical text form of relations, and a parser for it.

Printed forms::

    (n + 2)*a(n+1) + (-4*n - 2)*a(n) = 0
    (t)*C^2 + (-1)*C + (1) = 0
    (t - 1)*D[C] + (1)*C = 0

Terms run in descending shift/power/derivative order and zero terms are
omitted, so string equality is relation equality.  The parser is more
lenient (any sum of products, either side of ``=``) and canonicalises.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..arith.poly import UniPoly
from .relations import (
    AlgebraicRelation,
    DifferentialRelation,
    Recurrence,
    TrivialRelation,
)


class RelationSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


def format_poly(p: UniPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.degree, -1, -1):
        c = p.coeffs[e]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = p.var if e == 1 else f"{p.var}^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


format_formula = format_poly


def _basis_name(rel, i: int) -> str | None:
    if isinstance(rel, Recurrence):
        return "a(n)" if i == 0 else f"a(n+{i})"
    if isinstance(rel, DifferentialRelation):
        return "C" if i == 0 else ("D[C]" if i == 1 else f"D^{i}[C]")
    return None if i == 0 else ("C" if i == 1 else f"C^{i}")


def format_relation(rel) -> str:
    parts = []
    for i in range(rel.order, -1, -1):
        p = rel.coeffs[i]
        if p.is_zero():
            continue
        name = _basis_name(rel, i)
        parts.append(f"({format_poly(p)})" + (f"*{name}" if name else ""))
    return " + ".join(parts) + " = 0"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            if m.group(3).strip():
                toks.append(("sym", m.group(3), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


# An expression is a dict: basis key -> {power of the variable: Fraction}.
# Basis keys: ("1", 0), ("C", k), ("a", k), ("D", k).
ONE = ("1", 0)


def _add(a: dict, b: dict, sign: int = 1) -> dict:
    out = {k: dict(v) for k, v in a.items()}
    for key, poly in b.items():
        tgt = out.setdefault(key, {})
        for e, c in poly.items():
            v = tgt.get(e, 0) + sign * c
            if v:
                tgt[e] = v
            else:
                tgt.pop(e, None)
    return {k: v for k, v in out.items() if v}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.var: str | None = None

    def error(self, msg: str, tok=None):
        tok = tok or self.toks[self.i]
        raise RelationSyntaxError(msg, self.text, tok[2])

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, sym: str):
        tok = self.take()
        if tok[0] != "sym" or tok[1] != sym:
            self.i -= 1
            self.error(f"expected {sym!r}")
        return tok

    def expect_int(self) -> int:
        tok = self.take()
        if tok[0] != "int":
            self.i -= 1
            self.error("expected an integer")
        return tok[1]

    def relation(self) -> dict:
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")
        return _add(lhs, rhs, -1)

    def expr(self) -> dict:
        sign = 1
        tok = self.peek()
        if tok[0] == "sym" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = _add({}, self.term(), sign)
        while True:
            tok = self.peek()
            if tok[0] == "sym" and tok[1] in "+-":
                self.take()
                acc = _add(acc, self.term(), -1 if tok[1] == "-" else 1)
            else:
                return acc

    def term(self) -> dict:
        acc = self.factor()
        while self.peek()[0] == "sym" and self.peek()[1] == "*":
            tok = self.take()
            acc = self.mul(acc, self.factor(), tok)
        return acc

    def mul(self, a: dict, b: dict, tok) -> dict:
        out: dict = {}
        for ka, pa in a.items():
            for kb, pb in b.items():
                if ka == ONE:
                    key = kb
                elif kb == ONE:
                    key = ka
                elif ka[0] == kb[0] == "C":
                    key = ("C", ka[1] + kb[1])
                else:
                    self.error("product of two unknowns is not linear", tok)
                poly = out.setdefault(key, {})
                for ea, ca in pa.items():
                    for eb, cb in pb.items():
                        poly[ea + eb] = poly.get(ea + eb, 0) + ca * cb
        return {k: {e: c for e, c in v.items() if c} for k, v in out.items() if any(v.values())}

    def power(self) -> int | None:
        if self.peek()[0] == "sym" and self.peek()[1] == "^":
            self.take()
            return self.expect_int()
        return None

    def factor(self) -> dict:
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return {ONE: {0: Fraction(val)}}
        if kind == "sym" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            if val in ("n", "t"):
                if self.var is not None and self.var != val:
                    self.i -= 1
                    self.error(f"mixed variables {self.var} and {val}")
                self.var = val
                k = self.power()
                return {ONE: {1 if k is None else k: Fraction(1)}}
            if val == "C":
                k = self.power()
                return {("C", 1 if k is None else k): {0: Fraction(1)}}
            if val == "D":
                k = self.power()
                self.expect("[")
                c = self.take()
                if c[0] != "name" or c[1] != "C":
                    self.i -= 1
                    self.error("expected C inside D[...]")
                self.expect("]")
                return {("D", 1 if k is None else k): {0: Fraction(1)}}
            if val == "a":
                self.expect("(")
                n = self.take()
                if n[0] != "name" or n[1] != "n":
                    self.i -= 1
                    self.error("expected n inside a(...)")
                shift = 0
                if self.peek()[0] == "sym" and self.peek()[1] == "+":
                    self.take()
                    shift = self.expect_int()
                self.expect(")")
                return {("a", shift): {0: Fraction(1)}}
        self.i -= 1
        self.error(f"unexpected {val!r}" if val is not None else "unexpected end of input")


def _poly(d: dict, var: str) -> UniPoly:
    if not d:
        return UniPoly([], var)
    return UniPoly([d.get(e, 0) for e in range(max(d) + 1)], var)


def parse_relation(text: str):
    """Parse a relation string into a Recurrence, AlgebraicRelation or
    DifferentialRelation in canonical form."""
    p = _Parser(text)
    body = p.relation()
    kinds = {k[0] for k in body}
    if not body:
        raise TrivialRelation(f"relation reduces to 0 = 0: {text!r}")
    if "a" in kinds:
        if kinds - {"a"}:
            raise RelationSyntaxError("recurrence mixes a(n+K) with other terms", text, 0)
        if p.var == "t":
            raise RelationSyntaxError("recurrence coefficients must be polynomials in n", text, 0)
        order = max(k[1] for k in body)
        return Recurrence(tuple(_poly(body.get(("a", i), {}), "n") for i in range(order + 1)))
    if "D" in kinds:
        bad = [k for k in body if k[0] == "1" or (k[0] == "C" and k[1] != 1)]
        if bad:
            raise RelationSyntaxError("differential relation must be linear and homogeneous in C", text, 0)
        if p.var == "n":
            raise RelationSyntaxError("differential coefficients must be polynomials in t", text, 0)
        terms = {(0 if k[0] == "C" else k[1]): v for k, v in body.items()}
        order = max(terms)
        return DifferentialRelation(tuple(_poly(terms.get(i, {}), "t") for i in range(order + 1)))
    if p.var == "n":
        raise RelationSyntaxError("algebraic coefficients must be polynomials in t", text, 0)
    terms = {(0 if k[0] == "1" else k[1]): v for k, v in body.items()}
    order = max(terms)
    return AlgebraicRelation(tuple(_poly(terms.get(i, {}), "t") for i in range(order + 1)))
