"""Sparse multivariate polynomials as plain dicts.

A polynomial is ``{monomial: coefficient}`` with no zero coefficients.  A
monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable;
variables are any mutually comparable hashable values.  Coefficients are
scalars (Fraction or RatFunc).
"""

from __future__ import annotations

import heapq

ONE_MONO = ()


class _Desc:
    """Heap entry ordering monomials by descending :func:`lex_key`."""

    __slots__ = ("mono", "key")

    def __init__(self, mono):
        self.mono = mono
        self.key = lex_key(mono)

    def __lt__(self, other):
        return self.key > other.key


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_divides(a, b):
    """True when monomial ``a`` divides ``b``."""
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(b, a):
    d = dict(b)
    for v, e in a:
        r = d[v] - e
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_degree(m):
    return sum(e for _, e in m)


def lex_key(m):
    # lexicographic order with the largest variable most significant
    return tuple(reversed(m))


def p_const(c):
    return {ONE_MONO: c} if c else {}


def p_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def p_iadd(out, b, c=1):
    """In place ``out += c * b``; returns ``out``."""
    for m, x in b.items():
        x = x * c if c != 1 else x
        s = out.get(m)
        if s is None:
            out[m] = x
        else:
            s = s + x
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def p_sub(a, b):
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = -c
        else:
            s = s - c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def p_neg(a):
    return {m: -c for m, c in a.items()}


def p_scale(a, c):
    if not c:
        return {}
    if c == 1:
        return a
    return {m: x * c for m, x in a.items()}


def p_mul(a, b):
    if not a or not b:
        return {}
    if len(a) == 1 and ONE_MONO in a:
        return p_scale(b, a[ONE_MONO])
    if len(b) == 1 and ONE_MONO in b:
        return p_scale(a, b[ONE_MONO])
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            s = out.get(m)
            out[m] = ca * cb if s is None else s + ca * cb
    return {m: c for m, c in out.items() if c}


def p_mul_mono(a, mono, c=1):
    if not mono:
        return p_scale(a, c)
    return {mono_mul(m, mono): x * c for m, x in a.items()}


def p_pow(a, k):
    out = {ONE_MONO: 1}
    base = a
    while k:
        if k & 1:
            out = p_mul(out, base)
        k >>= 1
        if k:
            base = p_mul(base, base)
    return out


def p_leading(a):
    m = max(a, key=lex_key)
    return m, a[m]


def p_divexact(a, d):
    """Return ``a / d`` if ``d`` divides ``a`` exactly, else ``None``.

    A single divisor is its own Groebner basis, so the division algorithm
    leaves a zero remainder exactly when ``d`` divides ``a``.
    """
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lm_d, lc_d = p_leading(d)
    if len(d) == 1:
        if not all(mono_divides(lm_d, m) for m in a):
            return None
        return {mono_div(m, lm_d): c / lc_d for m, c in a.items()}
    rest = dict(a)
    heap = [_Desc(m) for m in rest]
    heapq.heapify(heap)
    quot = {}
    while rest:
        lm = heapq.heappop(heap).mono
        lc = rest.get(lm)
        if lc is None:
            continue  # stale heap entry
        if not mono_divides(lm_d, lm):
            return None
        qm = mono_div(lm, lm_d)
        qc = lc / lc_d
        quot[qm] = qc
        for m, c in d.items():
            mm = mono_mul(m, qm)
            old = rest.get(mm)
            s = (0 if old is None else old) - c * qc
            if s:
                rest[mm] = s
                if old is None:
                    heapq.heappush(heap, _Desc(mm))
            elif old is not None:
                del rest[mm]
    return quot


def p_variables(a):
    out = set()
    for m in a:
        for v, _ in m:
            out.add(v)
    return out


def p_is_const(a):
    return not a or (len(a) == 1 and ONE_MONO in a)


def p_const_value(a):
    return a.get(ONE_MONO, 0) if p_is_const(a) else None


def p_rename(a, fn):
    """Apply an order-preserving-or-not variable renaming ``fn``."""
    out = {}
    for m, c in a.items():
        nm = tuple(sorted((fn(v), e) for v, e in m))
        out[nm] = c
    return out


def p_eval(a, values):
    """Evaluate with ``values[var]`` scalars."""
    acc = 0
    for m, c in a.items():
        t = c
        for v, e in m:
            t = t * values[v] ** e
        acc = acc + t
    return acc
