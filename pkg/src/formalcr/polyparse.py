"""Parsing and printing of polynomial strings with Gaussian-rational coefficients.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary | implicit)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') INTEGER)?
    atom   := NUMBER | 'i' | NAME | '(' expr ')'

A number directly followed by a name or a parenthesis multiplies it (``2i``,
``3z1``).  Division is only allowed by constants.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ParseError
from .gauss import ONE, GaussRational
from .series import Exponent, TruncatedSeries, _grlex_key

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)

Poly = dict[Exponent, GaussRational]


def _tokenize(text: str, line: int | None):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], line: int | None):
        self.vars = tuple(vars)
        self.index = {v: k for k, v in enumerate(self.vars)}
        self.line = line
        self.tokens = _tokenize(text, line)
        self.pos = 0
        self.zero_exp = (0,) * len(self.vars)

    def error(self, msg: str):
        col = self.tokens[self.pos][2]
        raise ParseError(msg, self.line, col)

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = _padd(p, q if op == "+" else _pscale(q, GaussRational(-1)))
        return p

    def term(self) -> Poly:
        p = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = _pmul(p, self.unary())
            elif kind == "op" and val == "/":
                self.take()
                col = self.peek()[2]
                q = self.unary()
                if not q:
                    raise ParseError("division by zero", self.line, col)
                if any(e != self.zero_exp for e in q):
                    raise ParseError("division by a non-constant polynomial", self.line, col)
                p = _pscale(p, q[self.zero_exp].inverse())
            elif kind in ("name", "num") or (kind == "op" and val == "("):
                # implicit product, e.g. 2i or 3(z1 + z2)
                p = _pmul(p, self.power())
            else:
                return p

    def unary(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            p = self.unary()
            return p if val == "+" else _pscale(p, GaussRational(-1))
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            kind, val, _ = self.peek()
            if kind != "num" or not val.isdigit():
                self.error("exponent must be a nonnegative integer")
            self.take()
            k = int(val)
            result = {self.zero_exp: ONE}
            for _ in range(k):
                result = _pmul(result, base)
            return result
        return base

    def atom(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return _const(GaussRational(Fraction(val)), self.zero_exp)
        if kind == "name":
            self.take()
            if val == "i" and "i" not in self.index:
                return _const(GaussRational(0, 1), self.zero_exp)
            if val not in self.index:
                self.pos -= 1
                self.error(f"unknown variable {val!r}")
            exp = [0] * len(self.vars)
            exp[self.index[val]] = 1
            return {tuple(exp): ONE}
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return p
        if kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected {val!r}")


def _const(c: GaussRational, zero_exp) -> Poly:
    return {} if c.is_zero() else {zero_exp: c}


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def _pscale(p: Poly, k: GaussRational) -> Poly:
    if k.is_zero():
        return {}
    return {e: c * k for e, c in p.items()}


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e)
            out[e] = c1 * c2 if s is None else s + c1 * c2
    return {e: c for e, c in out.items() if not c.is_zero()}


def parse_polynomial(text: str, vars: Sequence[str], line: int | None = None) -> Poly:
    """Parse ``text`` into an exact (untruncated) polynomial over ``vars``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a polynomial string, got {type(text).__name__}", line)
    return _Parser(text, vars, line).parse()


def parse_series(text: str, vars: Sequence[str], cap: int, line: int | None = None) -> TruncatedSeries:
    return TruncatedSeries(vars, cap, parse_polynomial(text, vars, line))


# -- printing ---------------------------------------------------------------


def _format_coeff(c: GaussRational) -> str:
    re_, im = c.re, c.im
    if im == 0:
        return str(re_)
    if re_ == 0:
        return f"{im}*i"
    sign = "-" if im < 0 else "+"
    return f"({re_}{sign}{abs(im)}*i)"


def _format_monomial(exp: Exponent, names: Sequence[str]) -> str:
    parts = []
    for v, e in zip(names, exp):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_terms(terms: Mapping[Exponent, GaussRational], names: Sequence[str]) -> str:
    if not terms:
        return "0"
    out = []
    # highest degree first reads most naturally
    for exp in sorted(terms, key=_grlex_key, reverse=True):
        c = terms[exp]
        mono = _format_monomial(exp, names)
        negative = (c.im == 0 and c.re < 0) or (c.re == 0 and c.im < 0)
        mag = -c if negative else c
        if mono and mag == ONE:
            body = mono
        elif mono:
            body = f"{_format_coeff(mag)}*{mono}"
        else:
            body = _format_coeff(mag)
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def format_series(s: TruncatedSeries, names: Sequence[str] | None = None) -> str:
    """Render a series as a polynomial string that :func:`parse_series` reads back."""
    return format_terms(s.terms, names or s.vars)
