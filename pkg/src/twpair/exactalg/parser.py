"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := atom ('^' exponent)?
    exponent:= ['-'] INT | '(' ['-'] INT ')'
    atom    := INT | NAME | '(' expr ')' | '-' factor

Division is only allowed by units of the target ring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ring import NotInvertible, Ring, RingElem


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


@dataclass
class _Tok:
    kind: str  # INT NAME OP END
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Tok("INT", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("NAME", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            toks.append(_Tok("OP", ch, i))
            i += 1
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", text, i)
    toks.append(_Tok("END", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise PolySyntaxError(msg, self.text, tok.pos)

    def expect(self, value: str):
        t = self.peek()
        if t.kind != "OP" or t.value != value:
            self.error(f"expected {value!r}")
        return self.take()

    def parse(self) -> RingElem:
        if self.peek().kind == "END":
            self.error("empty expression")
        v = self.expr()
        if self.peek().kind != "END":
            self.error(f"unexpected {self.peek().value!r}")
        return v

    def expr(self) -> RingElem:
        t = self.peek()
        sign = 1
        if t.kind == "OP" and t.value in "+-":
            self.take()
            sign = -1 if t.value == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while True:
            t = self.peek()
            if t.kind == "OP" and t.value in "+-":
                self.take()
                rhs = self.term()
                v = v + rhs if t.value == "+" else v - rhs
            else:
                return v

    def term(self) -> RingElem:
        v = self.factor()
        while True:
            t = self.peek()
            if t.kind == "OP" and t.value in "*/":
                self.take()
                rhs = self.factor()
                if t.value == "*":
                    v = v * rhs
                else:
                    try:
                        v = v * rhs.inverse()
                    except NotInvertible:
                        self.error("division by a non-unit", t)
            else:
                return v

    def factor(self) -> RingElem:
        t = self.peek()
        if t.kind == "OP" and t.value == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        t = self.peek()
        if t.kind == "OP" and t.value == "^":
            self.take()
            k = self.exponent()
            try:
                return base ** k
            except NotInvertible:
                self.error("negative power of a non-unit", t)
        return base

    def exponent(self) -> int:
        t = self.peek()
        paren = t.kind == "OP" and t.value == "("
        if paren:
            self.take()
        sign = 1
        t = self.peek()
        if t.kind == "OP" and t.value == "-":
            self.take()
            sign = -1
        t = self.peek()
        if t.kind != "INT":
            self.error("expected integer exponent")
        self.take()
        if paren:
            self.expect(")")
        return sign * int(t.value)

    def atom(self) -> RingElem:
        t = self.peek()
        if t.kind == "INT":
            self.take()
            return self.ring.from_base(int(t.value))
        if t.kind == "NAME":
            self.take()
            if t.value not in self.ring.names:
                self.error(f"unknown variable {t.value!r}", t)
            return self.ring.gen(t.value)
        if t.kind == "OP" and t.value == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "END":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.value!r}")


def parse_poly(text: str, ring: Ring) -> RingElem:
    """Parse ``text`` into a canonical element of ``ring``."""
    return _Parser(text, ring).parse()
