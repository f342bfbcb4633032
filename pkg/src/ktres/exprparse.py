"""Recursive-descent parser for ASCII algebraic expressions.

Grammar (``^`` binds tighter than unary minus, which binds tighter than ``*``)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-' | '+') factor | power
    power  := atom ('^' INT)?
    atom   := NUMBER ('/' NUMBER)? | NAME | '(' expr ')'

Names may carry a brace group, e.g. ``u1_{2,0}`` or ``af1_3_{1,0}``. The
parser is generic: callers supply how to build constants and resolve names,
and the resulting values only need ``+``, ``-``, ``*`` and ``**``.
"""
import re
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*(?:\{[0-9,\s]*\})?)|(?P<op>[-+*/^()]))"
)


def tokenize(text, line=None):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text, const, resolve, line):
        self.toks = tokenize(text, line)
        self.i = 0
        self.const = const
        self.resolve = resolve
        self.line = line
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text) + 1)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of expression", self.line, tok[2])
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", self.line, tok[2])
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression", self.line, 1)
        v = self.expr()
        tok = self.peek()
        if tok[0] is not None:
            raise ParseError(f"unexpected token {tok[1]!r}", self.line, tok[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek()[1] == "*":
            self.take()
            v = v * self.factor()
        return v

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.factor()
        if self.peek()[1] == "+":
            self.take()
            return self.factor()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", self.line, col)
            v = v ** int(val)
        return v

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            num = int(val)
            if self.peek()[1] == "/":
                self.take()
                k2, v2, c2 = self.take()
                if k2 != "num" or int(v2) == 0:
                    raise ParseError("bad rational denominator", self.line, c2)
                return self.const(Fraction(num, int(v2)))
            return self.const(Fraction(num))
        if kind == "name":
            try:
                return self.resolve(val)
            except ParseError:
                raise
            except (KeyError, ValueError) as exc:
                raise ParseError(f"unknown symbol {val!r} ({exc})", self.line, col) from None
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        raise ParseError(f"unexpected token {val!r}", self.line, col)


def parse_expression(text, const, resolve, line=None):
    """Parse ``text`` using ``const(Fraction)`` for numbers and ``resolve(name)`` for names."""
    return _Parser(text, const, resolve, line).parse()


def split_top_level(text, sep):
    """Split on ``sep`` outside of braces and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def format_coefficient_term(coeff, body):
    """Render ``coeff*body`` with a sign prefix; ``body`` may be empty."""
    neg = coeff < 0
    c = -coeff if neg else coeff
    if body:
        s = body if c == 1 else f"{_frac(c)}*{body}"
    else:
        s = _frac(c)
    return neg, s


def join_terms(pieces):
    """Join ``(negative, text)`` pieces into ``a - b + c`` form; empty means ``0``."""
    if not pieces:
        return "0"
    out = []
    for k, (neg, s) in enumerate(pieces):
        if k == 0:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f" - {s}" if neg else f" + {s}")
    return "".join(out)


def _frac(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
