"""Coefficient fields: Q with the zero derivation and Q(t) with d/dt.

Constants are plain :class:`fractions.Fraction` values.  Non-constant
elements of Q(t) are :class:`RatFunc` instances; a RatFunc never holds a
constant, so two equal scalars always have the same type and the same stored
representation.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd
from typing import Union

__all__ = [
    "DivisionByZero",
    "FieldDescriptor",
    "FieldKind",
    "QQ",
    "QT",
    "RatFunc",
    "Scalar",
    "as_scalar",
    "is_constant",
    "scalar_arith",
    "scalar_derive",
    "T",
]


class DivisionByZero(ZeroDivisionError):
    code = "DivisionByZero"


# ---------------------------------------------------------------------------
# dense univariate helpers; coefficient tuples are stored low degree first

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    """Division with remainder over Q (Fraction arithmetic)."""
    a = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        c = a[-1] / lb
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = list(_trim(a))
    return _trim(q), _trim(a)


def _pgcd(a, b):
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    lc = Fraction(a[-1])
    return tuple(Fraction(c) / lc for c in a)


def _pderiv(a):
    return _trim(i * a[i] for i in range(1, len(a)))


def _content_lcm(coeffs):
    den = 1
    for c in coeffs:
        d = Fraction(c).denominator
        den = den * d // gcd(den, d)
    return den


class RatFunc:
    """A non-constant element of Q(t), stored as num/den in Z[t] in lowest terms.

    Use :meth:`make` to build values: it returns a Fraction whenever the
    quotient is constant.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den):
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def make(cls, num, den=(1,)):
        num = _trim(num)
        den = _trim(den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            return Fraction(0)
        if len(den) > 1 and len(num) > 0:
            g = _pgcd(num, den)
            if len(g) > 1:
                num, _ = _pdivmod(num, g)
                den, _ = _pdivmod(den, g)
        if len(num) == 1 and len(den) == 1:
            return Fraction(num[0]) / Fraction(den[0])
        # scale to coprime integer coefficients with positive leading denominator
        m = _content_lcm(num + den)
        num = [int(Fraction(c) * m) for c in num]
        den = [int(Fraction(c) * m) for c in den]
        g = 0
        for c in num + den:
            g = gcd(g, c)
        if den[-1] < 0:
            g = -g
        return cls(tuple(c // g for c in num), tuple(c // g for c in den))

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, RatFunc):
            return x.num, x.den
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return (x.numerator,) if x else (), (x.denominator,)
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return RatFunc.make(
            _padd(_pmul(self.num, o[1]), _pmul(o[0], self.den)), _pmul(self.den, o[1])
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(_pneg(self.num), self.den)

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return RatFunc.make(
            _padd(_pmul(self.num, o[1]), _pneg(_pmul(o[0], self.den))),
            _pmul(self.den, o[1]),
        )

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return RatFunc.make(_pmul(self.num, o[0]), _pmul(self.den, o[1]))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        if not o[0]:
            raise DivisionByZero("division by zero scalar")
        return RatFunc.make(_pmul(self.num, o[1]), _pmul(self.den, o[0]))

    def __rtruediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return RatFunc.make(_pmul(o[0], self.den), _pmul(o[1], self.num))

    def __pow__(self, k: int):
        if k < 0:
            return 1 / (self ** (-k))
        out = RatFunc.make((1,))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return True

    def derive(self):
        n, d = self.num, self.den
        return RatFunc.make(_padd(_pmul(_pderiv(n), d), _pneg(_pmul(n, _pderiv(d)))), _pmul(d, d))

    def evaluate(self, value: Fraction) -> Fraction:
        def ev(p):
            acc = Fraction(0)
            for c in reversed(p):
                acc = acc * value + c
            return acc

        d = ev(self.den)
        if d == 0:
            raise DivisionByZero("pole of rational function")
        return ev(self.num) / d

    def __repr__(self):
        return f"RatFunc({_poly_str(self.num)!r}, {_poly_str(self.den)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, RatFunc]

T = RatFunc.make((0, 1))


def _poly_str(p) -> str:
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append((" + " if c > 0 else " - ") + body)
    return "".join(terms) or "0"


def format_scalar(c: Scalar) -> str:
    """Canonical text for a scalar; re-parses to the same value."""
    if isinstance(c, RatFunc):
        num = _poly_str(c.num)
        if c.den == (1,):
            return num
        if len([x for x in c.num if x]) > 1:
            num = f"({num})"
        den = _poly_str(c.den)
        if len([x for x in c.den if x]) > 1 or len(c.den) > 1 and c.den[-1] != 1:
            den = f"({den})"
        return f"{num}/{den}"
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def is_constant(c: Scalar) -> bool:
    return not isinstance(c, RatFunc)


def as_scalar(x) -> Scalar:
    if isinstance(x, RatFunc):
        return x
    return Fraction(x)


class FieldKind(enum.Enum):
    RationalsZeroDerivation = "Q"
    RationalFunctionsInT = "Q(t)"


class FieldDescriptor:
    """The base differential field K; the derivation count is always 1."""

    derivation_count = 1

    def __init__(self, kind: FieldKind):
        self.kind = kind

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def has_t(self) -> bool:
        return self.kind is FieldKind.RationalFunctionsInT

    def derive(self, c: Scalar) -> Scalar:
        if isinstance(c, RatFunc):
            return c.derive()
        return Fraction(0)

    def contains(self, c: Scalar) -> bool:
        return self.has_t or not isinstance(c, RatFunc)

    @staticmethod
    def from_name(name: str) -> "FieldDescriptor":
        key = name.strip().replace(" ", "")
        if key in ("Q", "QQ"):
            return QQ
        if key in ("Q(t)", "QQ(t)", "Qt"):
            return QT
        raise ValueError(f"unknown field {name!r}; expected 'Q' or 'Q(t)'")

    def __eq__(self, other):
        return isinstance(other, FieldDescriptor) and other.kind is self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"FieldDescriptor({self.name})"


QQ = FieldDescriptor(FieldKind.RationalsZeroDerivation)
QT = FieldDescriptor(FieldKind.RationalFunctionsInT)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZero("division by zero scalar")
        return a / b
    raise ValueError(f"unknown scalar operation {op!r}")


def scalar_derive(a: Scalar) -> Scalar:
    if isinstance(a, RatFunc):
        return a.derive()
    return Fraction(0)
