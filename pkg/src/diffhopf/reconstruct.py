"""Reconstruction of the coordinate algebra from comodule symbols.

A symbol ``a_V(j, i)`` (1-based) pairs basis vector ``v_j`` of ``V`` with the
dual basis functional ``u_i``.  Its image under ``Phi`` is the matrix entry
``a_ij`` of ``V``.  Elements are K-linear combinations of symbols; products,
derivatives, antipodes and duals land on symbols of companion comodules
(``V⊗W``, ``V^(1)``, ``V*``) that the registry creates on demand.
Equality of elements is decided through ``Phi``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from . import _poly as P
from .comodule import (Comodule, ComoduleMorphism, _Span, dual, prolong, tensor_product,
                       trivial_comodule)
from .diffpoly import Element, element_sum, tensor
from .hopf import HopfPresentation
from .printing import format_element
from .report import Report
from .scalar import Scalar, format_scalar

__all__ = [
    "IndexOutOfRange",
    "NotGenerated",
    "ReconElement",
    "Registry",
    "UnknownComodule",
    "antipode_law",
    "check_generation",
    "check_reconstruction",
    "check_relations",
    "counit_law",
    "default_targets",
    "delta_in_basis",
    "random_element",
    "vector_symbol",
    "phi_map",
    "phi_tensor",
    "tilde_antipode",
    "tilde_counit",
    "tilde_delta",
    "tilde_derive",
    "tilde_product",
]


class UnknownComodule(KeyError):
    code = "UnknownComodule"


class IndexOutOfRange(IndexError):
    code = "IndexOutOfRange"


class NotGenerated(ValueError):
    code = "NotGenerated"


Symbol = Tuple[str, int, int]  # (comodule name, vector index j, dual index i)


def _wrap(name: str) -> str:
    return f"({name})" if any(ch in name for ch in "⊗⊕*^ ") else name


def tensor_name(a: str, b: str) -> str:
    return f"{_wrap(a)}⊗{_wrap(b)}"


def dual_name(a: str) -> str:
    return f"{_wrap(a)}*"


def prolong_name(a: str) -> str:
    return f"{_wrap(a)}^(1)"


class Registry:
    """Named comodules over one Hopf algebra plus registered morphisms.

    Members are stored as specifications: a concrete comodule, or the tensor
    product, dual or first prolongation of other members.  Matrices of
    derived members are only built when asked for; ``Phi`` on symbols works
    from the specification directly.
    """

    def __init__(self, hopf: HopfPresentation):
        self.hopf = hopf
        self._specs: Dict[str, tuple] = {}
        self._dims: Dict[str, int] = {}
        self._built: Dict[str, Comodule] = {}
        self._phi: Dict[Symbol, Element] = {}
        self.morphisms: List[Tuple[str, str, ComoduleMorphism]] = []
        self.unit = self.add(trivial_comodule(hopf, 1, name="1"), "1")

    # members -------------------------------------------------------------
    def add(self, V: Comodule, name: Optional[str] = None) -> str:
        if V.hopf is not self.hopf:
            raise ValueError("comodule over a different algebra")
        name = name or V.name
        if name in self._specs:
            if self._specs[name][0] == "base" and self._specs[name][1] is V:
                return name
            raise ValueError(f"duplicate comodule name {name!r}")
        self._specs[name] = ("base", V)
        self._dims[name] = V.dim
        self._built[name] = V
        return name

    def add_morphism(self, phi: ComoduleMorphism, source: str, target: str):
        if self.dim(source) != phi.source.dim or self.dim(target) != phi.target.dim:
            raise ValueError("morphism shape does not match the named comodules")
        self.morphisms.append((source, target, phi))

    def names(self) -> List[str]:
        return list(self._specs)

    def __contains__(self, name: str) -> bool:
        return name in self._specs

    def spec(self, name: str) -> tuple:
        try:
            return self._specs[name]
        except KeyError:
            raise UnknownComodule(name) from None

    def dim(self, name: str) -> int:
        self.spec(name)
        return self._dims[name]

    def tensor(self, a: str, b: str) -> str:
        name = tensor_name(a, b)
        if name not in self._specs:
            self._specs[name] = ("tensor", a, b)
            self._dims[name] = self.dim(a) * self.dim(b)
        return name

    def dual(self, a: str) -> str:
        name = dual_name(a)
        if name not in self._specs:
            self._specs[name] = ("dual", a)
            self._dims[name] = self.dim(a)
        return name

    def prolong(self, a: str) -> str:
        name = prolong_name(a)
        if name not in self._specs:
            self._specs[name] = ("prolong", a)
            self._dims[name] = 2 * self.dim(a)
        return name

    def comodule(self, name: str) -> Comodule:
        """Materialize a member's comodule (cached)."""
        V = self._built.get(name)
        if V is not None:
            return V
        spec = self.spec(name)
        if spec[0] == "tensor":
            V = tensor_product(self.comodule(spec[1]), self.comodule(spec[2]))
        elif spec[0] == "dual":
            V = dual(self.comodule(spec[1]))
        else:
            V = prolong(self.comodule(spec[1]), 1)
        V.name = name
        self._built[name] = V
        return V

    def close(self, duals: bool = True, prolong_depth: int = 2, tensor_factors: int = 2) -> List[str]:
        """Close the base members under duals, iterated prolongation and tensors."""
        level = [n for n, s in self._specs.items() if s[0] == "base" and n != self.unit]
        if duals:
            level += [self.dual(n) for n in list(level)]
        grown = list(level)
        frontier = list(level)
        for _ in range(prolong_depth):
            frontier = [self.prolong(n) for n in frontier]
            grown += frontier
        out = list(grown)
        if tensor_factors >= 2:
            for a in grown:
                for b in grown:
                    out.append(self.tensor(a, b))
        return out

    # symbols --------------------------------------------------------------
    def symbol(self, name: str, j: int, i: int) -> "ReconElement":
        self._check(name, j, i)
        return ReconElement(self, {(name, j, i): Fraction(1)})

    def symbols(self, name: str) -> List["ReconElement"]:
        n = self.dim(name)
        return [self.symbol(name, j, i) for j in range(1, n + 1) for i in range(1, n + 1)]

    def one(self) -> "ReconElement":
        return self.symbol(self.unit, 1, 1)

    def _check(self, name: str, j: int, i: int):
        n = self.dim(name)
        if not (1 <= j <= n and 1 <= i <= n):
            raise IndexOutOfRange(f"index ({j}, {i}) out of range for {name} of dimension {n}")

    def phi_symbol(self, sym: Symbol) -> Element:
        hit = self._phi.get(sym)
        if hit is not None:
            return hit
        name, j, i = sym
        self._check(name, j, i)
        spec = self.spec(name)
        kind = spec[0]
        if kind == "base":
            img = spec[1].matrix[i - 1][j - 1]
        elif kind == "tensor":
            a, b = spec[1], spec[2]
            nb = self.dim(b)
            j1, j2 = divmod(j - 1, nb)
            i1, i2 = divmod(i - 1, nb)
            img = self.phi_symbol((a, j1 + 1, i1 + 1)) * self.phi_symbol((b, j2 + 1, i2 + 1))
        elif kind == "dual":
            img = self.hopf.S(self.phi_symbol((spec[1], i, j)))
        else:
            n = self.dim(spec[1])
            s, jj = divmod(j - 1, n)
            q, ii = divmod(i - 1, n)
            if q > s:
                img = self.hopf.zero()
            else:
                img = self.phi_symbol((spec[1], jj + 1, ii + 1)).derive_n(s - q) * comb(s, q)
        self._phi[sym] = img
        return img


def _sym_text(sym: Symbol) -> str:
    name, j, i = sym
    return f"a[{name}]({j},{i})"


class ReconElement:
    """A K-linear combination of symbols ``a_V(j, i)``."""

    __slots__ = ("reg", "terms")

    def __init__(self, reg: Registry, terms: Dict[Symbol, Scalar]):
        self.reg = reg
        self.terms = {s: c for s, c in terms.items() if c}

    def __add__(self, other: "ReconElement") -> "ReconElement":
        return ReconElement(self.reg, P.p_iadd(dict(self.terms), other.terms))

    def __neg__(self):
        return ReconElement(self.reg, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ReconElement":
        return ReconElement(self.reg, {s: x * c for s, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ReconElement):
            return tilde_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def is_zero_formally(self) -> bool:
        return not self.terms

    def phi(self) -> Element:
        return phi_map(self)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for s in sorted(self.terms):
            c = self.terms[s]
            parts.append(_sym_text(s) if c == 1 else f"{format_scalar(c)}*{_sym_text(s)}")
        return " + ".join(parts)

    __repr__ = __str__


def phi_map(x: ReconElement) -> Element:
    """``Phi``: the symbol ``a_V(j, i)`` goes to the matrix entry ``a_ij``."""
    ring = x.reg.hopf.ring(1)
    return element_sum(ring, (x.reg.phi_symbol(s) * c for s, c in x.terms.items()))


def tilde_product(x: ReconElement, y: ReconElement) -> ReconElement:
    """``a_V(v (x) u) a_W(w (x) t) = a_{V⊗W}((v (x) w) (x) (u (x) t))``."""
    reg = x.reg
    out: Dict[Symbol, Scalar] = {}
    for (a, j1, i1), c1 in x.terms.items():
        for (b, j2, i2), c2 in y.terms.items():
            name = reg.tensor(a, b)
            nb = reg.dim(b)
            key = (name, (j1 - 1) * nb + j2, (i1 - 1) * nb + i2)
            P.p_iadd(out, {key: c1 * c2})
    return ReconElement(reg, out)


def _functional_F(reg: Registry, name: str, i: int) -> Dict[int, Scalar]:
    """Coordinates of ``F(u_i)`` on the dual basis of ``V^(1)``.

    ``F(u)(v) = u(v)`` and ``F(u)(d v) = d(u(v))``; on basis vectors the
    pairing values are constants, evaluated here rather than assumed.
    """
    n = reg.dim(name)
    derive = reg.hopf.field.derive
    out = {}
    for k in range(2 * n):
        q, l = divmod(k, n)
        val = Fraction(1 if l + 1 == i else 0)
        if q:
            val = derive(val)
        if val:
            out[k + 1] = val
    return out


def tilde_derive(x: ReconElement) -> ReconElement:
    """``d a_V(v (x) u) = a_{V^(1)}(d v (x) F(u))``, plus derivatives of coefficients."""
    reg = x.reg
    derive = reg.hopf.field.derive
    out: Dict[Symbol, Scalar] = {}
    for (name, j, i), c in x.terms.items():
        dc = derive(c)
        if dc:
            P.p_iadd(out, {(name, j, i): dc})
        pname = reg.prolong(name)
        n = reg.dim(name)
        for k, f in _functional_F(reg, name, i).items():
            P.p_iadd(out, {(pname, n + j, k): c * f})
    return ReconElement(reg, out)


def tilde_delta(x: ReconElement) -> Dict[Tuple[Symbol, Symbol], Scalar]:
    """``Delta a_V(v_j (x) u_i) = sum_k a_V(v_k (x) u_i) (x) a_V(v_j (x) u_k)``."""
    reg = x.reg
    out: Dict[Tuple[Symbol, Symbol], Scalar] = {}
    for (name, j, i), c in x.terms.items():
        for k in range(1, reg.dim(name) + 1):
            P.p_iadd(out, {((name, k, i), (name, j, k)): c})
    return out


def tilde_antipode(x: ReconElement) -> ReconElement:
    """``S a_V(v (x) u) = a_{V*}(u (x) v)``."""
    reg = x.reg
    out: Dict[Symbol, Scalar] = {}
    for (name, j, i), c in x.terms.items():
        P.p_iadd(out, {(reg.dual(name), i, j): c})
    return ReconElement(reg, out)


def tilde_counit(x: ReconElement) -> Scalar:
    """``eps a_V(v_j (x) u_i) = u_i(v_j)``."""
    total = Fraction(0)
    for (_, j, i), c in x.terms.items():
        if i == j:
            total = total + c
    return total


def phi_tensor(reg: Registry, t: Dict[Tuple[Symbol, Symbol], Scalar]) -> Element:
    """``(Phi (x) Phi)`` of a formal sum of symbol pairs."""
    two = reg.hopf.ring(2)
    return element_sum(two, (tensor(reg.phi_symbol(a), reg.phi_symbol(b)) * c
                             for (a, b), c in t.items()))


def counit_law(x: ReconElement) -> ReconElement:
    """``m (id (x) eps) Delta`` applied to ``x``."""
    reg = x.reg
    out: Dict[Symbol, Scalar] = {}
    for (a, b), c in tilde_delta(x).items():
        e = tilde_counit(ReconElement(reg, {b: Fraction(1)}))
        if e:
            P.p_iadd(out, {a: c * e})
    return ReconElement(reg, out)


def antipode_law(x: ReconElement) -> ReconElement:
    """``m (S (x) id) Delta`` applied to ``x``."""
    reg = x.reg
    acc = ReconElement(reg, {})
    for (a, b), c in tilde_delta(x).items():
        left = tilde_antipode(ReconElement(reg, {a: c}))
        acc = acc + tilde_product(left, ReconElement(reg, {b: Fraction(1)}))
    return acc


def delta_in_basis(reg: Registry, name: str, v: Sequence[Scalar], u: Sequence[Scalar],
                   change: Sequence[Sequence[Scalar]]) -> Dict[Tuple[Symbol, Symbol], Scalar]:
    """``Delta a_V(v (x) u)`` summed over the basis given by the columns of ``change``."""
    from . import linalg

    n = reg.dim(name)
    inv = linalg.inverse([list(r) for r in change])
    cols = [[change[r][k] for r in range(n)] for k in range(n)]
    out: Dict[Tuple[Symbol, Symbol], Scalar] = {}
    for k in range(n):
        w, w_star = cols[k], inv[k]
        for j, i, j2, i2 in iproduct(range(n), repeat=4):
            c = w[j] * u[i] * v[j2] * w_star[i2]
            if c:
                P.p_iadd(out, {((name, j + 1, i + 1), (name, j2 + 1, i2 + 1)): c})
    return out


def vector_symbol(reg: Registry, name: str, v: Sequence[Scalar], u: Sequence[Scalar]) -> ReconElement:
    """``a_V(v (x) u)`` for coordinate vectors ``v`` in V and ``u`` in V*."""
    terms = {}
    for j, vj in enumerate(v):
        for i, ui in enumerate(u):
            if vj and ui:
                terms[(name, j + 1, i + 1)] = vj * ui
    return ReconElement(reg, terms)


def random_element(reg: Registry, rng: random.Random, names: Sequence[str], terms: int = 3) -> ReconElement:
    out: Dict[Symbol, Scalar] = {}
    for _ in range(terms):
        name = rng.choice(list(names))
        n = reg.dim(name)
        sym = (name, rng.randint(1, n), rng.randint(1, n))
        P.p_iadd(out, {sym: Fraction(rng.randint(-5, 5))})
    return ReconElement(reg, out)


# ---------------------------------------------------------------------------
# checks

def _projection_from_prolong(reg: Registry, name: str) -> ComoduleMorphism:
    V = reg.comodule(name)
    W = reg.comodule(reg.prolong(name))
    n = V.dim
    mat = [[Fraction(1 if c == n + r else 0) for c in range(2 * n)] for r in range(n)]
    return ComoduleMorphism(W, V, mat)


def check_relations(reg: Registry) -> Report:
    """Check that the defining relations are killed by ``Phi``.

    For every registered morphism ``phi: V -> W`` and all ``j, i``:
    ``a_V(v_j (x) phi*(u_i)) = a_W(phi(v_j) (x) u_i)``.  For every member
    ``V`` whose prolongation is registered, also
    ``a_V(v (x) u) = a_{V^(1)}(d v (x) pi*(u))`` with ``pi: d v -> v, v -> 0``.
    """
    rep = Report("reconstruct-check", data={"morphisms": len(reg.morphisms)})
    checks = [(s, t, phi) for s, t, phi in reg.morphisms]
    for name in reg.names():
        pname = prolong_name(name)
        if pname in reg:
            checks.append((pname, name, _projection_from_prolong(reg, name)))
    rep.data["relations"] = len(checks)
    for src, tgt, phi in checks:
        nV, nW = reg.dim(src), reg.dim(tgt)
        for j in range(1, nV + 1):
            for i in range(1, nW + 1):
                lhs = ReconElement(reg, {(src, j, l): phi.matrix[i - 1][l - 1] for l in range(1, nV + 1)})
                rhs = ReconElement(reg, {(tgt, k, i): phi.matrix[k - 1][j - 1] for k in range(1, nW + 1)})
                a, b = phi_map(lhs), phi_map(rhs)
                if a != b:
                    rep.fail(V=src, W=tgt, i=i, j=j, lhs=format_element(a), rhs=format_element(b))
    return rep


@dataclass
class _Gen:
    element: Element
    recipe: str


def check_generation(reg: Registry, targets: Sequence[Element],
                     expressions: Optional[Dict[int, ReconElement]] = None,
                     rounds: int = 3, max_size: int = 400,
                     names: Optional[Sequence[str]] = None) -> Report:
    """Check that each target lies in the differential subalgebra of Phi-images.

    Caller-provided ``expressions`` (target index to element) are checked
    directly.  Otherwise the span of Phi-images of materialized members is
    grown by products and derivatives for a few rounds; when a round adds
    nothing the span is a differential subalgebra and a miss is certified.
    ``names`` restricts the generating symbols (default: every member).
    """
    rep = Report("generation", data={"targets": [format_element(t) for t in targets]})
    ring = reg.hopf.ring(1)
    found: Dict[int, str] = {}
    for k, expr in (expressions or {}).items():
        if phi_map(expr) == targets[k]:
            found[k] = str(expr)
        else:
            rep.fail(code="NotGenerated", target=format_element(targets[k]),
                     reason="provided expression has a different image")
            return rep
    todo = [k for k in range(len(targets)) if k not in found]
    span = _Span(ring)
    recipes: List[str] = []
    gens: List[_Gen] = []

    def offer(x: Element, recipe: str) -> bool:
        if len(span.elems) >= max_size:
            return False
        if span.add(x):
            recipes.append(recipe)
            return True
        return False

    offer(ring.one(), "1")
    for name in (reg.names() if names is None else names):
        n = reg.dim(name)
        for j in range(1, n + 1):
            for i in range(1, n + 1):
                img = reg.phi_symbol((name, j, i))
                if offer(img, f"Φ({_sym_text((name, j, i))})"):
                    gens.append(_Gen(img, recipes[-1]))
    saturated = False
    for rnd in range(rounds + 1):
        for k in list(todo):
            coords = span.coords(targets[k])
            if coords is not None:
                found[k] = " + ".join(
                    recipes[t] if c == 1 else f"{format_scalar(c)}*{recipes[t]}"
                    for t, c in enumerate(coords) if c) or "0"
                todo.remove(k)
        if not todo or rnd == rounds:
            break
        grew = False
        current = list(zip(span.elems, recipes))
        for x, rx in current:
            if offer(x.derive(), f"d({rx})"):
                grew = True
            for g in gens:
                if offer(x * g.element, f"{rx}·{g.recipe}"):
                    grew = True
        if not grew and len(span.elems) < max_size:
            saturated = True
            break
    rep.data["expressions"] = {format_element(targets[k]): e for k, e in sorted(found.items())}
    rep.data["span_dim"] = len(span.elems)
    if todo:
        rep.fail(code="NotGenerated", target=format_element(targets[todo[0]]),
                 certified=saturated)
    return rep


def default_targets(A: HopfPresentation) -> List[Element]:
    """Generators, inverses of the designated denominators and first derivatives."""
    ring = A.ring(1)
    out = [A.gen(g) for g in range(len(A.generators))]
    out += [ring.den_inverse(k) for k in range(len(A.denominators))]
    out += [A.gen(g, 1) for g in range(len(A.generators))]
    return out


def check_reconstruction(reg: Registry, samples: int = 200, seed: int = 0,
                         targets: Optional[Sequence[Element]] = None) -> Report:
    """Relations, Phi compatibilities and generation on symbols plus random elements.

    Every symbol of the members present on entry is tested, followed by
    ``samples`` random combinations drawn with ``seed``.  One witness is kept
    per failing identity.
    """
    A = reg.hopf
    rep = Report("reconstruct-check")
    names = reg.names()
    elements = [s for name in names for s in reg.symbols(name)]
    nsym = len(elements)
    rng = random.Random(seed)
    elements += [random_element(reg, rng, names) for _ in range(samples)]
    partners = [random_element(reg, rng, names) for _ in range(len(elements))]
    one = A.one()
    failed = set()

    def record(identity, x, lhs, rhs):
        if identity not in failed:
            failed.add(identity)
            rep.fail(identity=identity, element=str(x), lhs=_text(lhs), rhs=_text(rhs))

    for x, y in zip(elements, partners):
        fx = phi_map(x)
        lhs, rhs = phi_map(tilde_product(x, y)), fx * phi_map(y)
        if lhs != rhs:
            record("Φ(xy) = Φ(x)Φ(y)", x, lhs, rhs)
        lhs, rhs = phi_map(tilde_derive(x)), fx.derive()
        if lhs != rhs:
            record("Φ(∂̃x) = ∂Φ(x)", x, lhs, rhs)
        lhs, rhs = phi_tensor(reg, tilde_delta(x)), A.Delta(fx)
        if lhs != rhs:
            record("(Φ⊗Φ)Δ̃x = ΔΦ(x)", x, lhs, rhs)
        lhs, rhs = phi_map(tilde_antipode(x)), A.S(fx)
        if lhs != rhs:
            record("Φ(S̃x) = SΦ(x)", x, lhs, rhs)
        e1, e2 = tilde_counit(x), A.eps(fx)
        if e1 != e2:
            record("ε̃(x) = εΦ(x)", x, e1, e2)
        lhs = phi_map(counit_law(x))
        if lhs != fx:
            record("m(id⊗ε̃)Δ̃x = x", x, lhs, fx)
        lhs, rhs = phi_map(antipode_law(x)), one * e1
        if lhs != rhs:
            record("m(S̃⊗id)Δ̃x = ε̃(x)1", x, lhs, rhs)

    rel = check_relations(reg)
    for w in rel.witnesses:
        rep.fail(identity="relation", **w)
    gen = check_generation(reg, list(targets) if targets is not None else default_targets(A),
                           names=names)
    for w in gen.witnesses:
        rep.fail(code="NotGenerated", identity="generation", **w)
    rep.data.update(members=len(names), symbols=nsym, samples=samples, seed=seed,
                    relations=rel.data["relations"], generation=gen.data["expressions"])
    return rep


def _text(x) -> str:
    return format_element(x) if isinstance(x, Element) else format_scalar(x)
