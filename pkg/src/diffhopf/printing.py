"""Canonical text for elements; the output re-parses to an equal element."""

from __future__ import annotations

from fractions import Fraction

from . import _poly as P
from .scalar import RatFunc, format_scalar


def _scalar_sign_and_text(c):
    """Split a scalar into (negative?, text of |c|) for use inside a sum."""
    if isinstance(c, RatFunc):
        neg = c.num[-1] < 0
        if neg:
            c = -c
        text = format_scalar(c)
        if c.den == (1,) and sum(1 for x in c.num if x) > 1:
            text = f"({text})"
        return neg, text
    c = Fraction(c)
    return c < 0, format_scalar(abs(c))


def _var_text(pres, v):
    return pres.var_name(v[2], v[1])


def _mono_text(pres, m):
    # graded-lex by (order, generator) ascending inside a monomial
    parts = []
    for v, e in sorted(m, key=lambda ve: (ve[0][1], ve[0][2], ve[0][0])):
        s = _var_text(pres, v)
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def _term_order(m):
    return (P.mono_degree(m), P.lex_key(m))


def format_poly(pres, poly) -> str:
    if not poly:
        return "0"
    out = []
    for m in sorted(poly, key=_term_order, reverse=True):
        c = poly[m]
        neg, ctext = _scalar_sign_and_text(c)
        if m:
            mt = _mono_text(pres, m)
            body = mt if ctext == "1" else f"{ctext}*{mt}"
        else:
            body = ctext
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _is_atomic(text: str) -> bool:
    if text.isidentifier():
        return True
    if text.startswith("d") and text.endswith(")") and "(" in text:
        inner = text[text.index("(") + 1 : -1]
        return inner.isidentifier()
    return False


def _den_text(ring, den) -> str:
    pres = ring.pres
    factors = []
    for k, e in enumerate(den):
        if not e:
            continue
        base = format_poly(pres, _single_leg(ring.den_poly(k)))
        if not _is_atomic(base):
            base = f"({base})"
        factors.append(base if e == 1 else f"{base}^{e}")
    if len(factors) == 1:
        return factors[0]
    return "(" + "*".join(factors) + ")"


def _single_leg(poly):
    return P.p_rename(poly, lambda v: (0, v[1], v[2]))


def _format_single(pres, ring, num, den) -> str:
    text = format_poly(pres, num)
    if not any(den):
        return text
    if len(num) > 1:
        text = f"({text})"
    return f"{text}/{_den_text(ring, den)}"


def split_legs(x):
    """Decompose a multi-leg element into a canonical list of tensor terms.

    Each term is a tuple of single-leg elements.  The coefficient rides on the
    first factor.
    """
    from .diffpoly import Element

    ring = x.ring
    pres = ring.pres
    legs = ring.legs
    m = len(pres.denominators)
    one = pres.ring(1)
    groups = {}
    for mono, c in x.num.items():
        first = tuple((v, e) for v, e in mono if v[0] == 0)
        rest = tuple((v, e) for v, e in mono if v[0] != 0)
        groups.setdefault(rest, {})[first] = c
    terms = []
    for rest in sorted(groups, key=_term_order, reverse=True):
        left = Element(one, groups[rest], x.den[:m], reduce=True)
        factors = [left]
        for leg in range(1, legs):
            part = tuple(((0, v[1], v[2]), e) for v, e in rest if v[0] == leg)
            factors.append(
                Element(one, {part: Fraction(1)}, x.den[leg * m : (leg + 1) * m], reduce=True)
            )
        terms.append(tuple(factors))
    return terms


def format_element(x) -> str:
    ring = x.ring
    pres = ring.pres
    if ring.legs == 0:
        return format_scalar(x.num.get(P.ONE_MONO, Fraction(0)))
    if ring.legs == 1:
        return _format_single(pres, ring, x.num, x.den)
    if not x.num:
        return "0"
    parts = []
    for factors in split_legs(x):
        parts.append("tensor(" + ", ".join(format_element(f) for f in factors) + ")")
    return " + ".join(parts)
