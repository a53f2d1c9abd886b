"""Localized differential polynomial algebras and their tensor powers.

An algebra ``K{y_1..y_n, 1/d_1..1/d_m}`` is described by a
:class:`Presentation`.  Elements are fractions ``P / prod d_i^{k_i}`` over the
fixed designated denominators.  Tensor powers ``A^{(x)k}`` are handled as the
same kind of fraction over ``k`` copies ("legs") of the variables, so one
element type serves A, A(x)A and A(x)A(x)A.

Variables are triples ``(leg, order, generator)``; ``(0, 2, 1)`` is the second
derivative of the second generator on the first leg.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import _poly as P
from .scalar import QQ, FieldDescriptor, RatFunc, Scalar, as_scalar

__all__ = [
    "AlgebraElement",
    "DerivedVariable",
    "Element",
    "IllegalInverse",
    "Presentation",
    "PresentationMismatch",
    "Ring",
    "RingHom",
    "TensorElement",
    "element_sum",
    "equals",
    "poly_arith",
    "poly_derive",
    "tensor",
]


class PresentationMismatch(ValueError):
    code = "PresentationMismatch"


class IllegalInverse(ValueError):
    code = "IllegalInverse"


Var = Tuple[int, int, int]


class DerivedVariable(tuple):
    """``d^order`` applied to generator ``gen`` (a 0-based index)."""

    def __new__(cls, gen: int, order: int = 0):
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        return super().__new__(cls, (gen, order))

    @property
    def gen(self) -> int:
        return self[0]

    @property
    def order(self) -> int:
        return self[1]


class Presentation:
    """Generators, designated denominators and derivative rewrite rules.

    ``denominators`` are dict polynomials in the order-0 generators (the
    ``num`` of an element built with :meth:`gen`).
    ``rewrite`` maps a generator index to the element that ``d(generator)``
    rewrites to; rules only mention order-0 variables.
    """

    def __init__(self, generators: Sequence[str], field: FieldDescriptor = QQ, name: str = ""):
        for g in generators:
            if g in ("t", "d", "tensor") or not g.isidentifier():
                raise ValueError(f"illegal generator name {g!r}")
        if len(set(generators)) != len(generators):
            raise ValueError("duplicate generator names")
        self.generators = tuple(generators)
        self.field = field
        self.name = name
        self.denominators: Tuple[dict, ...] = ()
        self.rewrite: Dict[int, "Element"] = {}
        self._frozen = False
        self._rings: Dict[int, Ring] = {}

    # construction ---------------------------------------------------------
    def set_denominators(self, polys: Iterable[dict]):
        if self._frozen:
            raise RuntimeError("presentation is frozen")
        dens = []
        for d in polys:
            if not d or P.p_is_const(d):
                raise ValueError("designated denominators must be non-constant polynomials")
            for v in P.p_variables(d):
                if v[0] != 0 or v[1] != 0:
                    raise ValueError("denominators must be polynomials in order-0 generators")
            dens.append(dict(d))
        self.denominators = tuple(dens)
        self._rings.clear()

    def set_rewrite(self, rules: Dict[int, "Element"]):
        if self._frozen:
            raise RuntimeError("presentation is frozen")
        for g, img in rules.items():
            if img.ring.pres is not self or img.ring.legs != 1:
                raise PresentationMismatch("rewrite image over a different algebra")
            for v in P.p_variables(img.num):
                if v[1] != 0:
                    raise ValueError("rewrite images must only involve order-0 generators")
        self.rewrite = dict(rules)
        for ring in self._rings.values():
            ring._deriv_cache.clear()
            ring._den_deriv_cache.clear()

    def freeze(self):
        self._frozen = True
        return self

    # access ---------------------------------------------------------------
    def ring(self, legs: int = 1) -> "Ring":
        r = self._rings.get(legs)
        if r is None:
            r = self._rings[legs] = Ring(self, legs)
        return r

    def gen_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(name) from None

    def gen(self, name_or_index, order: int = 0) -> "Element":
        i = name_or_index if isinstance(name_or_index, int) else self.gen_index(name_or_index)
        return self.ring(1).var(0, i, order)

    def one(self) -> "Element":
        return self.ring(1).one()

    def zero(self) -> "Element":
        return self.ring(1).zero()

    def const(self, c) -> "Element":
        return self.ring(1).const(c)

    def var_name(self, gen: int, order: int) -> str:
        g = self.generators[gen]
        if order == 0:
            return g
        if order == 1:
            return f"d({g})"
        return f"d^{order}({g})"

    def __repr__(self):
        return f"Presentation({self.name or ','.join(self.generators)} over {self.field.name})"


class Ring:
    """The ``legs``-fold tensor power of a presentation's algebra (legs=0 is K)."""

    def __init__(self, pres: Presentation, legs: int):
        self.pres = pres
        self.legs = legs
        m = len(pres.denominators)
        self.nden = m * legs
        self._den_polys = [
            P.p_rename(pres.denominators[i], lambda v, L=leg: (L, v[1], v[2]))
            for leg in range(legs)
            for i in range(m)
        ]
        self._den_pow_cache: Dict[Tuple[int, int], dict] = {}
        self._deriv_cache: Dict[Var, Element] = {}
        self._den_deriv_cache: Dict[int, Element] = {}
        self.zero_den = (0,) * self.nden

    def den_poly(self, k: int) -> dict:
        return self._den_polys[k]

    def den_pow(self, k: int, e: int) -> dict:
        key = (k, e)
        p = self._den_pow_cache.get(key)
        if p is None:
            p = self._den_pow_cache[key] = P.p_pow(self._den_polys[k], e)
        return p

    def den_derivative(self, k: int) -> "Element":
        r = self._den_deriv_cache.get(k)
        if r is None:
            r = self._den_deriv_cache[k] = Element(self, self._den_polys[k], self.zero_den).derive()
        return r

    def zero(self) -> "Element":
        return Element(self, {}, self.zero_den)

    def one(self) -> "Element":
        return Element(self, {P.ONE_MONO: Fraction(1)}, self.zero_den)

    def const(self, c) -> "Element":
        c = as_scalar(c)
        return Element(self, P.p_const(c), self.zero_den)

    def var(self, leg: int, gen: int, order: int = 0) -> "Element":
        if not 0 <= leg < self.legs:
            raise IndexError("leg out of range")
        if not 0 <= gen < len(self.pres.generators):
            raise IndexError("generator out of range")
        x = Element(self, {(((leg, 0, gen), 1),): Fraction(1)}, self.zero_den)
        for _ in range(order):
            x = x.derive()
        return x

    def den_inverse(self, k: int) -> "Element":
        den = [0] * self.nden
        den[k] = 1
        return Element(self, {P.ONE_MONO: Fraction(1)}, tuple(den))

    def derive_var(self, v: Var) -> "Element":
        r = self._deriv_cache.get(v)
        if r is None:
            leg, order, gen = v
            rule = self.pres.rewrite.get(gen)
            if rule is not None:
                if order != 0:
                    raise AssertionError("rewritten generator carries a derivative")
                r = rule.on_leg(self, leg)
            else:
                r = Element(self, {(((leg, order + 1, gen), 1),): Fraction(1)}, self.zero_den)
            self._deriv_cache[v] = r
        return r

    def __repr__(self):
        return f"Ring({self.pres!r}, legs={self.legs})"


class Element:
    """A fraction ``num / prod(den_k ^ exps[k])`` in a :class:`Ring`.

    Values are immutable and kept reduced: no designated denominator with a
    positive exponent divides the numerator.
    """

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: Ring, num: dict, den: Tuple[int, ...], reduce: bool = False):
        self.ring = ring
        self.num = num
        self.den = den
        if reduce:
            self._reduce()

    # normal form ---------------------------------------------------------
    def _reduce(self):
        if not self.num:
            self.den = self.ring.zero_den
            return
        if not any(self.den):
            return
        den = list(self.den)
        num = self.num
        for k, e in enumerate(den):
            while e > 0:
                q = P.p_divexact(num, self.ring.den_poly(k))
                if q is None:
                    break
                num = q
                e -= 1
            den[k] = e
        self.num = num
        self.den = tuple(den)

    def normal_form(self) -> "Element":
        return Element(self.ring, dict(self.num), self.den, reduce=True)

    # helpers --------------------------------------------------------------
    def _check(self, other: "Element"):
        if other.ring is not self.ring:
            if other.ring.pres is not self.ring.pres:
                raise PresentationMismatch("elements over different presentations")
            raise PresentationMismatch("elements in different tensor powers")

    def _coerce(self, other):
        if isinstance(other, Element):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.ring.const(other)
        return None

    def _lift(self, target: Tuple[int, ...]) -> dict:
        num = self.num
        for k, (e, t) in enumerate(zip(self.den, target)):
            if t > e:
                num = P.p_mul(num, self.ring.den_pow(k, t - e))
        return num

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return Element(self.ring, P.p_add(self.num, other.num), self.den, reduce=True)
        target = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return Element(self.ring, P.p_add(self._lift(target), other._lift(target)), target, reduce=True)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.ring, P.p_neg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            if not other:
                return self.ring.zero()
            return Element(self.ring, P.p_scale(self.num, as_scalar(other)), self.den)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        den = tuple(a + b for a, b in zip(self.den, other.den))
        return Element(self.ring, P.p_mul(self.num, other.num), den, reduce=any(den))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            if not other:
                from .scalar import DivisionByZero

                raise DivisionByZero("division by zero scalar")
            return self * (1 / as_scalar(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.ring.const(other) * self.inverse()

    def unit_factor(self) -> Optional[Tuple[Scalar, Tuple[int, ...]]]:
        """Write the numerator as ``c * prod den_k^m_k`` if possible."""
        if not self.num:
            return None
        num = self.num
        mult = [0] * self.ring.nden
        for k in range(self.ring.nden):
            while not P.p_is_const(num):
                q = P.p_divexact(num, self.ring.den_poly(k))
                if q is None:
                    break
                num = q
                mult[k] += 1
        if not P.p_is_const(num):
            return None
        return num[P.ONE_MONO], tuple(mult)

    def is_unit(self) -> bool:
        return self.unit_factor() is not None

    def inverse(self) -> "Element":
        uf = self.unit_factor()
        if uf is None:
            raise IllegalInverse(f"{self} is not a unit of the presentation")
        c, mult = uf
        # inverse of c * D^mult / D^den is D^den / (c * D^mult)
        num = P.p_const(1 / c)
        for k, e in enumerate(self.den):
            if e:
                num = P.p_mul(num, self.ring.den_pow(k, e))
        return Element(self.ring, num, mult, reduce=any(mult))

    # derivation -----------------------------------------------------------
    def derive(self) -> "Element":
        """Apply d by the Leibniz rule, then rewrite to normal form."""
        ring = self.ring
        field = ring.pres.field
        # coefficient derivatives
        poly_part = {}
        for m, c in self.num.items():
            dc = field.derive(c)
            if dc:
                poly_part[m] = dc
        # variable derivatives, collected per variable as partial derivatives
        partials: Dict[Var, dict] = {}
        for m, c in self.num.items():
            for idx, (v, e) in enumerate(m):
                rest = m[:idx] + ((v, e - 1),) + m[idx + 1 :] if e > 1 else m[:idx] + m[idx + 1 :]
                part = partials.setdefault(v, {})
                s = part.get(rest)
                cc = c * e
                part[rest] = cc if s is None else s + cc
        result = Element(ring, poly_part, ring.zero_den)
        for v, part in partials.items():
            part = {m: c for m, c in part.items() if c}
            if not part:
                continue
            dv = ring.derive_var(v)
            if not dv.num:
                continue
            result = result + Element(ring, part, ring.zero_den) * dv
        if any(self.den):
            # d(D^-k) = -k d(D) D^-(k+1)
            inv = Element(ring, {P.ONE_MONO: Fraction(1)}, self.den)
            dinv = ring.zero()
            for k, e in enumerate(self.den):
                if not e:
                    continue
                dd = ring.den_derivative(k)
                if not dd.num:
                    continue
                bump = [0] * ring.nden
                bump[k] = 1
                dinv = dinv + dd * Element(ring, {P.ONE_MONO: Fraction(-e)}, tuple(bump))
            res = result * inv
            if dinv.num:
                res = res + Element(ring, self.num, ring.zero_den) * inv * dinv
            return res
        return result

    def derive_n(self, k: int) -> "Element":
        x = self
        for _ in range(k):
            x = x.derive()
        return x

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            other = self.ring.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        if self.den == other.den:
            return self.num == other.num
        target = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return self._lift(target) == other._lift(target)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return not any(self.den) and P.p_is_const(self.num)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not a scalar")
        return self.num.get(P.ONE_MONO, Fraction(0))

    # structure ------------------------------------------------------------
    def variables(self):
        return P.p_variables(self.num)

    def max_order(self) -> int:
        return max((v[1] for v in self.variables()), default=0)

    def on_leg(self, ring: Ring, leg: int) -> "Element":
        """Move a single-leg element onto ``leg`` of ``ring``."""
        if self.ring.legs != 1 or ring.pres is not self.ring.pres:
            raise PresentationMismatch("on_leg needs a single-leg element of the same algebra")
        if leg == 0 and ring is self.ring:
            return self
        num = P.p_rename(self.num, lambda v: (leg, v[1], v[2])) if leg else self.num
        m = len(ring.pres.denominators)
        den = [0] * ring.nden
        den[leg * m : (leg + 1) * m] = self.den
        return Element(ring, num, tuple(den))

    def common_denominator_poly(self, target: Tuple[int, ...]) -> dict:
        """Numerator after multiplying by ``prod den^target`` (target >= den)."""
        return self._lift(target)

    def __repr__(self):
        from .printing import format_element

        return f"<{format_element(self)}>"

    def __str__(self):
        from .printing import format_element

        return format_element(self)


AlgebraElement = Element
TensorElement = Element


def tensor(*factors: Element) -> Element:
    """``a (x) b (x) ...`` for single- or multi-leg factors of one algebra."""
    if not factors:
        raise ValueError("tensor needs at least one factor")
    pres = factors[0].ring.pres
    legs = sum(f.ring.legs for f in factors)
    ring = pres.ring(legs)
    num = {P.ONE_MONO: Fraction(1)}
    den: List[int] = []
    offset = 0
    for f in factors:
        if f.ring.pres is not pres:
            raise PresentationMismatch("tensor factors over different presentations")
        shifted = P.p_rename(f.num, lambda v, o=offset: (v[0] + o, v[1], v[2])) if offset else f.num
        num = P.p_mul(num, shifted)
        den.extend(f.den)
        offset += f.ring.legs
    return Element(ring, num, tuple(den))


def element_sum(ring: Ring, items: Iterable[Element]) -> Element:
    """Sum of many elements of ``ring`` with a single final reduction."""
    groups: Dict[Tuple[int, ...], dict] = {}
    for x in items:
        if x.ring is not ring:
            x = ring.zero() + x  # raises on a mismatch
        if not x.num:
            continue
        acc = groups.get(x.den)
        if acc is None:
            groups[x.den] = dict(x.num)
        else:
            P.p_iadd(acc, x.num)
    groups = {d: n for d, n in groups.items() if n}
    if not groups:
        return ring.zero()
    if len(groups) == 1:
        (den, num), = groups.items()
        return Element(ring, num, den, reduce=any(den))
    top = tuple(max(col) for col in zip(*groups))
    total: dict = {}
    for den, num in groups.items():
        P.p_iadd(total, Element(ring, num, den)._lift(top))
    return Element(ring, total, top, reduce=True)


def tensor_from_pairs(pairs: Iterable[Tuple[Element, Element]], pres: Presentation) -> Element:
    out = pres.ring(2).zero()
    for a, b in pairs:
        out = out + tensor(a, b)
    return out


class RingHom:
    """A K-algebra map out of a ring, defined on variables and denominators.

    ``var_image(v)`` gives the image of the variable ``v = (leg, order, gen)``;
    ``den_image(k)`` the image of designated denominator ``k``, which must be a
    unit in the target.  Images are cached.
    """

    def __init__(self, source: Ring, target: Ring, var_image: Callable[[Var], Element],
                 den_image: Callable[[int], Element]):
        self.source = source
        self.target = target
        self._var_image = var_image
        self._den_image = den_image
        self._vcache: Dict[Var, Element] = {}
        self._powcache: Dict[Tuple[Var, int], Element] = {}
        self._dcache: Dict[int, Element] = {}

    def var(self, v: Var) -> Element:
        r = self._vcache.get(v)
        if r is None:
            r = self._vcache[v] = self._var_image(v)
        return r

    def _var_pow(self, v: Var, e: int) -> Element:
        key = (v, e)
        r = self._powcache.get(key)
        if r is None:
            r = self.var(v) if e == 1 else self._var_pow(v, e - 1) * self.var(v)
            self._powcache[key] = r
        return r

    def den_inverse(self, k: int) -> Element:
        r = self._dcache.get(k)
        if r is None:
            img = self._den_image(k)
            if img.ring is not self.target:
                raise PresentationMismatch("denominator image in the wrong ring")
            r = self._dcache[k] = img.inverse()
        return r

    def __call__(self, x: Element) -> Element:
        if x.ring is not self.source:
            raise PresentationMismatch("element outside the source ring of the map")
        tgt = self.target
        # sum numerators per denominator vector, reduce once at the end
        groups: Dict[Tuple[int, ...], dict] = {}
        for m, c in x.num.items():
            num = P.p_const(c)
            den = tgt.zero_den
            for v, e in m:
                img = self._var_pow(v, e)
                num = P.p_mul(num, img.num)
                if any(img.den):
                    den = tuple(a + b for a, b in zip(den, img.den))
            acc = groups.get(den)
            if acc is None:
                groups[den] = dict(num)  # num may alias a cached image
            else:
                P.p_iadd(acc, num)
        out = element_sum(tgt, (Element(tgt, n, d) for d, n in groups.items()))
        for k, e in enumerate(x.den):
            if e:
                out = out * (self.den_inverse(k) ** e)
        return out


def poly_arith(a: Element, b: Element, op: str) -> Element:
    if not isinstance(a, Element) or not isinstance(b, Element):
        raise TypeError("poly_arith expects algebra elements")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_derive(a: Element) -> Element:
    return a.derive()


def equals(a: Element, b: Element) -> bool:
    a._check(b)
    return a == b
