"""Reading and writing series in a small polynomial grammar.

::

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := rational | var ('^' uint)? | '(' expr ')'
    rational := '-'? uint ('/' uint)?
    var      := 'x' uint                 (1-based)

Whitespace is insignificant.  A leading ``-`` on a factor is accepted for any
factor, not just rationals, so ``-x1`` parses as ``-1*x1``.
"""

import re

from ._rational import ONE, Q
from .series import TruncatedSeries, graded_lex_key

__all__ = ["ParseError", "parse_series", "format_series"]


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|([-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("var", int(m.group(3)), m.start(2)))
        else:
            tokens.append((m.group(4), None, m.start(4)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, n_vars, trunc_order):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n_vars = n_vars
        self.d = trunc_order

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[0]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "-":
            self.take()
            return -self.factor()
        if kind == "int":
            self.take()
            num = tok[1]
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take("int")
                if den_tok[1] == 0:
                    raise ParseError("zero denominator", den_tok[2])
                return TruncatedSeries.constant(Q(num, den_tok[1]), self.n_vars, self.d)
            return TruncatedSeries.constant(num, self.n_vars, self.d)
        if kind == "var":
            self.take()
            i = tok[1]
            if not 1 <= i <= self.n_vars:
                raise ParseError(f"variable x{i} outside x1..x{self.n_vars}", tok[2])
            power = 1
            if self.peek()[0] == "^":
                self.take()
                power = self.take("int")[1]
            index = [0] * self.n_vars
            index[i - 1] = power
            return TruncatedSeries.monomial(index, self.n_vars, self.d)
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"unexpected {what}", tok[2])


def parse_series(text, n_vars, trunc_order):
    """Parse ``text`` into a series at full precision ``trunc_order``.

    Terms of degree above ``trunc_order`` are dropped silently.
    """
    if not isinstance(text, str):
        raise TypeError("expected a string")
    if text.strip() == "":
        raise ParseError("empty expression", 0)
    return _Parser(text, n_vars, trunc_order).parse()


def _monomial_str(index):
    parts = []
    for i, e in enumerate(index, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_series(f):
    if not f.terms:
        return "0"
    out = []
    for index in sorted(f.terms, key=graded_lex_key):
        c = f.terms[index]
        mono = _monomial_str(index)
        neg = c < 0
        mag = -c if neg else c
        if mag.denominator == 1:
            coeff = str(int(mag.numerator))
        else:
            coeff = f"{int(mag.numerator)}/{int(mag.denominator)}"
        if not mono:
            body = coeff
        elif mag == ONE:
            body = mono
        else:
            body = f"{coeff}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)
