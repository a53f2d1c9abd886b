"""Recursive-descent parser for the expression grammar.

::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' ['-'] int)?
    atom   := int | 't' | ident
            | 'd' ('^' int)? '(' expr ')'
            | 'tensor' '(' expr (',' expr)+ ')'
            | '(' expr ')'

Division and negative powers are only allowed on units, i.e. nonzero scalars
times products of designated denominators.  ``tensor(a, b, ...)`` builds an
element of a tensor power; plain scalars mix freely with tensors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from .diffpoly import Element, Presentation, tensor
from .scalar import T, DivisionByZero, RatFunc

__all__ = ["ParseError", "UnknownIdentifier", "parse_expr", "parse_scalar"]


class ParseError(ValueError):
    code = "SyntaxError"

    def __init__(self, message: str, pos: int, expected=()):
        self.pos = pos
        self.expected = tuple(expected)
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {pos}{detail}")


class UnknownIdentifier(ValueError):
    code = "UnknownIdentifier"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass
class _Tok:
    kind: str  # 'int', 'ident', 'op', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos and m.group(0) == "":
            break
        if m.group(1):
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(_Tok("ident", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            toks.append(_Tok("op", ch, m.start(3)))
        pos = m.end()
        if pos >= len(text) or text[pos:].strip() == "":
            break
    toks.append(_Tok("end", "", len(text)))
    return toks


Value = Union[Fraction, RatFunc, Element]


def _is_scalar(x) -> bool:
    return not isinstance(x, Element)


class _Parser:
    def __init__(self, text: str, pres: Optional[Presentation], has_t: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.pres = pres
        self.has_t = has_t

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.kind == "op" and t.text == text:
            return self.take()
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, [repr(text)])

    def at_op(self, *ops) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in ops

    # grammar --------------------------------------------------------------
    def parse(self) -> Value:
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.pos, ["operator", "end of input"])
        return v

    def expr(self) -> Value:
        neg = False
        if self.at_op("+", "-"):
            neg = self.take().text == "-"
        v = self.term()
        if neg:
            v = -v
        while self.at_op("+", "-"):
            op = self.take().text
            w = self.term()
            v = _combine(v, w, op)
        return v

    def term(self) -> Value:
        v = self.factor()
        while self.at_op("*", "/"):
            tok = self.take()
            w = self.factor()
            if tok.text == "*":
                v = _combine(v, w, "*")
            else:
                v = _divide(v, w, tok.pos)
        return v

    def factor(self) -> Value:
        base = self.atom()
        if self.at_op("^"):
            tok = self.take()
            neg = False
            if self.at_op("-"):
                self.take()
                neg = True
            t = self.peek()
            if t.kind != "int":
                raise ParseError("exponent must be an integer", t.pos, ["integer"])
            self.take()
            k = int(t.text)
            if neg:
                base = _invert(base, tok.pos)
            base = base ** k
        return base

    def atom(self) -> Value:
        t = self.peek()
        if t.kind == "int":
            self.take()
            return Fraction(int(t.text))
        if t.kind == "op" and t.text == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "ident":
            self.take()
            if t.text == "d" and self.at_op("(", "^"):
                order = 1
                if self.at_op("^"):
                    self.take()
                    n = self.peek()
                    if n.kind != "int" or int(n.text) < 1:
                        raise ParseError("derivative order must be a positive integer", n.pos, ["integer"])
                    self.take()
                    order = int(n.text)
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return _derive(inner, order, self.pres)
            if t.text == "tensor" and self.at_op("("):
                self.take()
                parts = [self.expr()]
                while self.at_op(","):
                    self.take()
                    parts.append(self.expr())
                self.expect(")")
                if len(parts) < 2:
                    raise ParseError("tensor needs at least two factors", t.pos, ["','"])
                return _tensor(parts, self.pres, t.pos)
            if t.text == "t":
                if not self.has_t:
                    raise UnknownIdentifier("'t' is not available over the field Q")
                return T
            if self.pres is not None and t.text in self.pres.generators:
                return self.pres.gen(t.text)
            raise UnknownIdentifier(f"unknown identifier {t.text!r} at position {t.pos}")
        raise ParseError(
            f"unexpected {t.text or 'end of input'!r}", t.pos, ["number", "identifier", "'('"]
        )


def _lift(v, ring):
    return ring.const(v) if _is_scalar(v) else v


def _combine(a: Value, b: Value, op: str) -> Value:
    if isinstance(a, Element) and isinstance(b, Element) and a.ring is not b.ring:
        raise ValueError("cannot combine elements of different tensor powers")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    return a * b


def _invert(v: Value, pos: int) -> Value:
    if _is_scalar(v):
        if v == 0:
            raise DivisionByZero(f"division by zero at position {pos}")
        return 1 / v
    return v.inverse()


def _divide(a: Value, b: Value, pos: int) -> Value:
    inv = _invert(b, pos)
    return _combine(a, inv, "*")


def _derive(v: Value, order: int, pres) -> Value:
    for _ in range(order):
        if _is_scalar(v):
            v = v.derive() if isinstance(v, RatFunc) else Fraction(0)
        else:
            v = v.derive()
    return v


def _tensor(parts, pres, pos):
    if pres is None:
        raise ParseError("tensor() needs an algebra", pos)
    ring = pres.ring(1)
    elems = []
    for p in parts:
        if isinstance(p, Element) and p.ring.legs != 1:
            raise ParseError("tensor() factors must be single algebra elements", pos)
        elems.append(_lift(p, ring))
    return tensor(*elems)


def parse_expr(text: str, ctx: Presentation, legs: int = 1) -> Element:
    """Parse ``text`` into a normal-form element of ``ctx`` (or its tensor power)."""
    v = _Parser(text, ctx, ctx.field.has_t).parse()
    ring = ctx.ring(legs)
    if _is_scalar(v):
        return ring.const(v)
    if v.ring is not ring:
        raise ValueError(
            f"expression lives in the {v.ring.legs}-fold tensor power, expected {legs}"
        )
    return v


def parse_scalar(text: str, has_t: bool = True):
    """Parse a scalar expression in Q or Q(t)."""
    v = _Parser(text, None, has_t).parse()
    if isinstance(v, Element):
        raise ValueError("not a scalar")
    return v
