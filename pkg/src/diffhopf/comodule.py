"""Differential comodules over a presented Hopf algebra.

A comodule of dimension n is an n x n matrix ``a`` of algebra elements with
``rho(v_j) = sum_i v_i (x) a_ij``: column j is the image of basis vector j.
Morphisms are scalar matrices ``phi`` (target dim x source dim) with
``A_target * phi = phi * A_source``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, count
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from . import _poly as P
from . import linalg
from .diffpoly import Element, PresentationMismatch, element_sum
from .hopf import AntipodeRequired, HopfMorphism, HopfPresentation, check_hopf_morphism, det_of
from .printing import format_element, split_legs
from .report import Report
from .scalar import Scalar, format_scalar

__all__ = [
    "BoundsExceeded",
    "Comodule",
    "ComoduleMorphism",
    "LSpace",
    "NotClosed",
    "OrbitModule",
    "ZeroElement",
    "check_comodule",
    "combine",
    "constant_split_check",
    "coordinate_rep",
    "determinant_comodule",
    "det_twist",
    "direct_sum",
    "dual",
    "hom_basis",
    "linear_comodule_L",
    "orbit_module",
    "prolong",
    "prolong_morphism",
    "pushforward",
    "regular_embedding",
    "regular_subcomodule",
    "standard_comodule",
    "sym_power",
    "tensor_product",
    "trivial_comodule",
    "verify_intertwiner",
    "verify_subquotient",
]

MAX_L = 3


class ZeroElement(ValueError):
    code = "ZeroElement"


class BoundsExceeded(ValueError):
    code = "BoundsExceeded"


class NotClosed(ValueError):
    code = "NotClosed"


def _wrap(name: str) -> str:
    return f"({name})" if any(ch in name for ch in "⊗⊕*^ ") else name


class Comodule:
    """A finite-dimensional comodule given by its matrix over ``hopf``."""

    def __init__(self, hopf: HopfPresentation, matrix, basis: Optional[Sequence[str]] = None,
                 name: str = ""):
        ring = hopf.ring(1)
        rows = []
        for row in matrix:
            if len(row) != len(matrix):
                raise ValueError("comodule matrix must be square")
            new = []
            for x in row:
                if isinstance(x, Element):
                    if x.ring is not ring:
                        raise PresentationMismatch("matrix entry over a different algebra")
                    new.append(x)
                else:
                    new.append(ring.const(x))
            rows.append(tuple(new))
        self.hopf = hopf
        self.matrix: Tuple[Tuple[Element, ...], ...] = tuple(rows)
        self.dim = len(rows)
        if basis is None:
            basis = [f"v{i + 1}" for i in range(self.dim)]
        if len(basis) != self.dim:
            raise ValueError("basis labels do not match the dimension")
        self.basis = tuple(basis)
        self.name = name or "V"

    def entry(self, i: int, j: int) -> Element:
        return self.matrix[i][j]

    def same_matrix(self, other: "Comodule") -> bool:
        if other.hopf is not self.hopf or other.dim != self.dim:
            return False
        return all(a == b for ra, rb in zip(self.matrix, other.matrix) for a, b in zip(ra, rb))

    def rho_text(self, j: int) -> str:
        """``rho(v_j) = v_1 (x) (a_1j) + ...`` with unicode tensor signs."""
        parts = []
        for i in range(self.dim):
            a = self.matrix[i][j]
            if a.is_zero():
                continue
            text = format_element(a)
            if not _atomic(text):
                text = f"({text})"
            parts.append(f"{self.basis[i]} ⊗ {text}")
        return f"ρ({self.basis[j]}) = " + (" + ".join(parts) if parts else "0")

    def __repr__(self):
        return f"Comodule({self.name}, dim={self.dim}, over {self.hopf.name})"


def _atomic(text: str) -> bool:
    if text.lstrip("-").isidentifier() or text.lstrip("-").isdigit():
        return not text.startswith("-")
    if text.startswith("d") and text.endswith(")") and text.count("(") == 1:
        return True
    return False


class ComoduleMorphism:
    """A K-linear map between comodules, target.dim x source.dim scalars."""

    def __init__(self, source: Comodule, target: Comodule, matrix, name: str = ""):
        if source.hopf is not target.hopf:
            raise PresentationMismatch("morphism between comodules over different algebras")
        if len(matrix) != target.dim or any(len(r) != source.dim for r in matrix):
            raise ValueError("morphism matrix must be target.dim x source.dim")
        self.source = source
        self.target = target
        self.matrix = tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in r) for r in matrix)
        self.name = name

    def rank(self) -> int:
        return linalg.rank([list(r) for r in self.matrix])

    def __repr__(self):
        return f"ComoduleMorphism({self.source.name} -> {self.target.name})"


# ---------------------------------------------------------------------------
# standard comodules

def trivial_comodule(A: HopfPresentation, dim: int = 1, name: str = "Trivial") -> Comodule:
    return Comodule(A, linalg.identity(dim), name=name)


def standard_comodule(A: HopfPresentation) -> Comodule:
    """The defining representation of a builtin group."""
    key = A.builtin_key
    if key is None:
        raise ValueError("standard comodule is only defined for builtin presentations")
    family, n, _ = key
    if family == "gl":
        mat = [[A.gen(i * n + j) for j in range(n)] for i in range(n)]
        return Comodule(A, mat, name="V")
    if family == "gm":
        return Comodule(A, [[A.gen(0)]], name="V")
    if family == "ga":
        return Comodule(A, [[A.one(), A.gen(0)], [A.zero(), A.one()]], name="V")
    return trivial_comodule(A, 1, name="V")


def determinant_comodule(V: Comodule) -> Comodule:
    """The 1-dimensional comodule ``det(a)`` of the top exterior power."""
    if V.dim == 0:
        return trivial_comodule(V.hopf, 1, name="det")
    return Comodule(V.hopf, [[det_of([list(r) for r in V.matrix])]], ["det"], name=f"det{_wrap(V.name)}")


# ---------------------------------------------------------------------------
# checks

def _fmt(x) -> str:
    return format_element(x) if isinstance(x, Element) else format_scalar(x)


def _placed(V: Comodule):
    two = V.hopf.ring(2)
    left = [[a.on_leg(two, 0) for a in row] for row in V.matrix]
    right = [[a.on_leg(two, 1) for a in row] for row in V.matrix]
    return two, left, right


def check_comodule(V: Comodule) -> Report:
    """Check ``Delta(a_ij) = sum_r a_ir (x) a_rj`` and ``eps(a_ij) = delta_ij``."""
    rep = Report("check-comodule", data={"comodule": V.name, "dim": V.dim})
    A = V.hopf
    two, left, right = _placed(V)
    n = V.dim
    for i in range(n):
        for j in range(n):
            a = V.matrix[i][j]
            e = A.eps(a)
            want = 1 if i == j else 0
            if e != want:
                rep.fail(identity="counit", i=i + 1, j=j + 1, lhs=_fmt(e), rhs=str(want))
                continue
            lhs = A.Delta(a)
            rhs = element_sum(two, (left[i][r] * right[r][j] for r in range(n)
                                    if not V.matrix[i][r].is_zero() and not V.matrix[r][j].is_zero()))
            if lhs != rhs:
                rep.fail(identity="coassociativity", i=i + 1, j=j + 1, lhs=_fmt(lhs), rhs=_fmt(rhs))
    return rep


def _product(lhs, rhs, ring):
    out = []
    for row in lhs:
        new = []
        for j in range(len(rhs[0]) if rhs else 0):
            terms = []
            for k, x in enumerate(row):
                y = rhs[k][j]
                if isinstance(x, Element):
                    if not x.is_zero() and y:
                        terms.append(x * y)
                elif x and not y.is_zero():
                    terms.append(y * x)
            new.append(element_sum(ring, terms))
        out.append(new)
    return out


def verify_intertwiner(phi: ComoduleMorphism) -> Report:
    """Check ``A_target * phi = phi * A_source`` entrywise."""
    rep = Report("check-morphism", data={"source": phi.source.name, "target": phi.target.name})
    ring = phi.source.hopf.ring(1)
    lhs = _product(phi.target.matrix, phi.matrix, ring)
    rhs = _product(phi.matrix, phi.source.matrix, ring)
    for i, (ra, rb) in enumerate(zip(lhs, rhs)):
        for j, (a, b) in enumerate(zip(ra, rb)):
            if a != b:
                rep.fail(identity="A_W phi = phi A_V", i=i + 1, j=j + 1, lhs=_fmt(a), rhs=_fmt(b))
    return rep


def verify_subquotient(injection: ComoduleMorphism, surjection: ComoduleMorphism) -> Report:
    """Certify that ``injection.source`` is a subcomodule of a quotient of ``surjection.source``.

    ``surjection: X -> Q`` must be an onto intertwiner and ``injection: V -> Q``
    a one-to-one intertwiner into the same ``Q``.
    """
    rep = Report("subquotient", data={"sub": injection.source.name, "of": surjection.source.name})
    if injection.target is not surjection.target:
        rep.fail(identity="maps share the quotient", lhs=injection.target.name, rhs=surjection.target.name)
        return rep
    for label, m in (("injection", injection), ("surjection", surjection)):
        r = verify_intertwiner(m)
        for w in r.witnesses:
            rep.fail(map=label, **w)
    if injection.rank() != injection.source.dim:
        rep.fail(identity="injective", lhs=str(injection.rank()), rhs=str(injection.source.dim))
    if surjection.rank() != surjection.target.dim:
        rep.fail(identity="surjective", lhs=str(surjection.rank()), rhs=str(surjection.target.dim))
    return rep


# ---------------------------------------------------------------------------
# prolongation

def _derivative_table(matrix, p, derive):
    table = []
    for row in matrix:
        new = []
        for a in row:
            ds = [a]
            for _ in range(p):
                ds.append(derive(ds[-1]))
            new.append(ds)
        table.append(new)
    return table


def _prolonged(table, rows, cols, p, zero):
    # column of d^s x_j has C(s, q) d^(s-q) a_ij in the row of d^q y_i
    out = [[zero] * (cols * (p + 1)) for _ in range(rows * (p + 1))]
    for s in range(p + 1):
        for q in range(s + 1):
            c = comb(s, q)
            for i in range(rows):
                for j in range(cols):
                    x = table[i][j][s - q]
                    out[q * rows + i][s * cols + j] = x * c if c != 1 else x
    return out


def _d_label(label: str, q: int) -> str:
    if q == 0:
        return label
    return f"d({label})" if q == 1 else f"d^{q}({label})"


def prolong(V: Comodule, p: int) -> Comodule:
    """``V^(p)`` on the basis ``v, d(v), ..., d^p(v)`` (ascending order)."""
    if p < 1:
        raise ValueError("prolongation order must be positive")
    A = V.hopf
    table = _derivative_table(V.matrix, p, lambda a: a.derive())
    mat = _prolonged(table, V.dim, V.dim, p, A.zero())
    basis = [_d_label(b, q) for q in range(p + 1) for b in V.basis]
    return Comodule(A, mat, basis, name=f"{_wrap(V.name)}^({p})")


def prolong_morphism(phi: ComoduleMorphism, p: int) -> ComoduleMorphism:
    """Extend ``phi`` to ``V^(p) -> W^(p)`` with ``d^s v -> d^s phi(v)``."""
    field_ = phi.source.hopf.field
    table = _derivative_table(phi.matrix, p, field_.derive)
    mat = _prolonged(table, phi.target.dim, phi.source.dim, p, Fraction(0))
    return ComoduleMorphism(prolong(phi.source, p), prolong(phi.target, p), mat)


# ---------------------------------------------------------------------------
# constructions

def _same_hopf(*Vs: Comodule) -> HopfPresentation:
    A = Vs[0].hopf
    for V in Vs[1:]:
        if V.hopf is not A:
            raise PresentationMismatch("comodules over different algebras")
    return A


def tensor_product(V: Comodule, W: Comodule) -> Comodule:
    """Kronecker product; basis ``v_i (x) w_k`` at index ``i * dim W + k``."""
    A = _same_hopf(V, W)
    n, m = V.dim, W.dim
    mat = [[V.matrix[i][j] * W.matrix[k][l] for j in range(n) for l in range(m)]
           for i in range(n) for k in range(m)]
    basis = [f"{a}⊗{b}" for a in V.basis for b in W.basis]
    return Comodule(A, mat, basis, name=f"{_wrap(V.name)}⊗{_wrap(W.name)}")


def direct_sum(*Vs: Comodule) -> Comodule:
    if not Vs:
        raise ValueError("direct sum needs at least one summand")
    A = _same_hopf(*Vs)
    total = sum(V.dim for V in Vs)
    mat = [[A.zero()] * total for _ in range(total)]
    basis = []
    off = 0
    for k, V in enumerate(Vs):
        for i in range(V.dim):
            for j in range(V.dim):
                mat[off + i][off + j] = V.matrix[i][j]
        basis.extend(V.basis if len(Vs) == 1 else [f"{b}[{k + 1}]" for b in V.basis])
        off += V.dim
    return Comodule(A, mat, basis, name="⊕".join(_wrap(V.name) for V in Vs))


def dual(V: Comodule) -> Comodule:
    """Contragredient comodule with matrix ``S(a_ji)``."""
    A = V.hopf
    if not A.has_antipode:
        raise AntipodeRequired("the dual comodule needs an antipode")
    n = V.dim
    mat = [[A.S(V.matrix[j][i]) for j in range(n)] for i in range(n)]
    return Comodule(A, mat, [f"{b}*" for b in V.basis], name=f"{_wrap(V.name)}*")


def sym_power(V: Comodule, s: int) -> Comodule:
    """``Sym^s V`` on the monomial basis ``v^alpha`` with ``|alpha| = s``.

    ``rho(v_j1 ... v_js)`` is the product of the ``rho(v_jk)``, expanded and
    collected on sorted index tuples.
    """
    if s < 0:
        raise ValueError("symmetric power must be nonnegative")
    A = V.hopf
    ring = A.ring(1)
    n = V.dim
    monos = list(combinations_with_replacement(range(n), s))
    index = {m: k for k, m in enumerate(monos)}
    mat = [[A.zero()] * len(monos) for _ in monos]
    for col, beta in enumerate(monos):
        acc: Dict[Tuple[int, ...], List[Element]] = {(): [A.one()]}
        for j in beta:
            nxt: Dict[Tuple[int, ...], List[Element]] = {}
            for alpha, terms in acc.items():
                base = element_sum(ring, terms)
                if base.is_zero():
                    continue
                for i in range(n):
                    a = V.matrix[i][j]
                    if a.is_zero():
                        continue
                    key = tuple(sorted(alpha + (i,)))
                    nxt.setdefault(key, []).append(base * a)
            acc = nxt
        for alpha, terms in acc.items():
            mat[index[alpha]][col] = element_sum(ring, terms)
    basis = [_mono_label(V.basis, m) for m in monos]
    return Comodule(A, mat, basis, name=f"Sym^{s}{_wrap(V.name)}")


def _mono_label(labels, mono) -> str:
    if not mono:
        return "1"
    parts = []
    for i in sorted(set(mono)):
        e = mono.count(i)
        parts.append(labels[i] if e == 1 else f"{labels[i]}^{e}")
    return "*".join(parts)


def det_twist(V: Comodule, r: int, base: Optional[Comodule] = None) -> Comodule:
    """``(det*)^{(x) r} (x) V`` with ``det`` taken from ``base``.

    ``base`` defaults to the standard comodule of the builtin group.
    """
    if r < 0:
        raise ValueError("twist exponent must be nonnegative")
    A = V.hopf
    if r == 0:
        return V
    if not A.has_antipode:
        raise AntipodeRequired("det twist needs an antipode")
    D = determinant_comodule(base if base is not None else standard_comodule(A))
    entry = A.S(D.matrix[0][0]) ** r
    twist = Comodule(A, [[entry]], ["det*" if r == 1 else f"(det*)^{r}"], name=f"(det*)^{r}")
    out = tensor_product(twist, V)
    out.basis = tuple(f"{twist.basis[0]}⊗{b}" for b in V.basis)
    return out


def pushforward(V: Comodule, f: HopfMorphism, check: bool = True) -> Comodule:
    """Apply the Hopf map ``f`` to every matrix entry."""
    if V.hopf is not f.source:
        raise PresentationMismatch("comodule is not over the source of the morphism")
    if check:
        rep = check_hopf_morphism(f)
        if not rep.passed:
            raise ValueError(f"not a Hopf morphism: {rep.witnesses[0]}")
    mat = [[f(a) for a in row] for row in V.matrix]
    return Comodule(f.target, mat, V.basis, name=f"{f.name or 'f'}_*{_wrap(V.name)}")


def combine(inputs: Sequence[Comodule], op: str, *, s: int = 1, r: int = 1,
            morphism: Optional[HopfMorphism] = None, base: Optional[Comodule] = None) -> Comodule:
    """Dispatch to a construction by name."""
    op = op.replace("-", "_")
    if op == "tensor":
        out = inputs[0]
        for W in inputs[1:]:
            out = tensor_product(out, W)
        return out
    if op == "direct_sum":
        return direct_sum(*inputs)
    if len(inputs) != 1:
        raise ValueError(f"{op} takes exactly one comodule")
    (V,) = inputs
    if op == "dual":
        return dual(V)
    if op == "sym_power":
        return sym_power(V, s)
    if op == "det_twist":
        return det_twist(V, r, base)
    if op == "pushforward":
        if morphism is None:
            raise ValueError("pushforward needs a Hopf morphism")
        return pushforward(V, morphism)
    raise ValueError(f"unknown construction {op!r}")


# ---------------------------------------------------------------------------
# Hom spaces

def intertwining_system(V: Comodule, W: Comodule, order=None):
    """Linear equations over K for ``phi`` with ``A_W phi = phi A_V``.

    Unknown ``phi[k][l]`` has index ``k * dim V + l``.  Each matrix position
    is cleared to a common denominator and split along monomials; ``order``
    (a key on monomials) fixes the row order, lex by default.
    """
    A = _same_hopf(V, W)
    n, m = V.dim, W.dim
    nunk = m * n
    rows = []
    for i in range(m):
        for j in range(n):
            coeffs: Dict[int, List[Element]] = {}
            for k in range(m):
                a = W.matrix[i][k]
                if not a.is_zero():
                    coeffs.setdefault(k * n + j, []).append(a)
            for l in range(n):
                a = V.matrix[l][j]
                if not a.is_zero():
                    coeffs.setdefault(i * n + l, []).append(-a)
            ring = A.ring(1)
            elems = {u: element_sum(ring, xs) for u, xs in coeffs.items()}
            elems = {u: x for u, x in elems.items() if not x.is_zero()}
            if not elems:
                continue
            top = tuple(max(col) for col in zip(*(x.den for x in elems.values())))
            polys = {u: x.common_denominator_poly(top) for u, x in elems.items()}
            monos = set()
            for poly in polys.values():
                monos.update(poly)
            for mono in sorted(monos, key=order or P.lex_key):
                row = [Fraction(0)] * nunk
                for u, poly in polys.items():
                    c = poly.get(mono)
                    if c:
                        row[u] = c
                rows.append(row)
    return rows, nunk


def hom_basis(V: Comodule, W: Comodule) -> List[ComoduleMorphism]:
    """A K-basis of comodule maps ``V -> W``."""
    rows, nunk = intertwining_system(V, W)
    n = V.dim
    out = []
    for vec in linalg.nullspace(rows, nunk):
        mat = [vec[k * n:(k + 1) * n] for k in range(W.dim)]
        out.append(ComoduleMorphism(V, W, mat))
    return out


def _combination(basis, coeffs, rows, cols):
    mat = [[Fraction(0)] * cols for _ in range(rows)]
    for c, phi in zip(coeffs, basis):
        if not c:
            continue
        for i in range(rows):
            for j in range(cols):
                x = phi.matrix[i][j]
                if x:
                    mat[i][j] = mat[i][j] + c * x
    return mat


def constant_split_check(V: Comodule, p: int, seed: int = 0, trials: int = 64,
                         symbolic_limit: int = 6) -> Report:
    """Decide over K whether ``V^(p)`` is isomorphic to ``V^{(+)(p+1)}``.

    Result ``"splits"`` comes with a verified invertible intertwiner.  Result
    ``"no"`` is certified: the determinant of a generic element of the Hom
    space vanishes identically.  Result ``"inconclusive"`` means random
    sampling over a large Hom space found no invertible element.
    """
    if p < 1:
        raise ValueError("p must be positive")
    rep = Report("const-split", data={"comodule": V.name, "p": p, "seed": seed})
    target = prolong(V, p)
    source = direct_sum(*([V] * (p + 1)))
    N = target.dim
    basis = hom_basis(source, target)
    m = len(basis)
    rep.data["hom_dim"] = m
    rng = random.Random(seed)
    witness = None
    if N == 0:
        witness = []
    elif m == 0:
        rep.data.update(result="no", certified=True, method="empty Hom space")
    elif m <= symbolic_limit:
        param = [[{} for _ in range(N)] for _ in range(N)]
        for k, phi in enumerate(basis):
            for i in range(N):
                for j in range(N):
                    c = phi.matrix[i][j]
                    if c:
                        P.p_iadd(param[i][j], {((k, 1),): c})
        detpoly = linalg.bareiss_det(param)
        rep.data["method"] = "symbolic determinant"
        if not detpoly:
            rep.data.update(result="no", certified=True)
        else:
            for attempt in count():
                bound = 1 + attempt
                vals = {k: Fraction(rng.randint(-bound, bound)) for k in range(m)}
                if P.p_eval(detpoly, vals):
                    witness = _combination(basis, [vals[k] for k in range(m)], N, N)
                    break
    else:
        rep.data["method"] = "random sampling"
        for attempt in range(trials):
            bound = 1 + attempt
            coeffs = [Fraction(rng.randint(-bound, bound)) for _ in range(m)]
            mat = _combination(basis, coeffs, N, N)
            if linalg.det(mat):
                witness = mat
                break
        else:
            rep.data.update(result="inconclusive", certified=False)
    if witness is not None:
        phi = ComoduleMorphism(source, target, witness)
        check = verify_intertwiner(phi)
        if not check.passed or (N and not linalg.det(witness)):
            raise AssertionError("constructed splitting is not an isomorphism")
        rep.data.update(result="splits", certified=True,
                        witness=[[format_scalar(x) for x in row] for row in witness])
        rep.data.setdefault("method", "trivial")
    elif rep.data["result"] == "no":
        rep.fail(code="NoSplitting", identity="det of generic Hom element", lhs="0",
                 rhs="nonzero polynomial")
    else:
        rep.fail(code="Inconclusive", identity="invertible Hom element", trials=trials)
    return rep


# ---------------------------------------------------------------------------
# representative functions

class _Span:
    """Incremental K-span of algebra elements with coordinate extraction."""

    def __init__(self, ring):
        self.ring = ring
        self.elems: List[Element] = []
        self.top = ring.zero_den
        self.rows: List[Tuple[tuple, dict, dict]] = []  # (pivot, vector, combination)

    def _vector(self, x: Element) -> dict:
        return x.common_denominator_poly(self.top)

    def _rebuild(self, top):
        elems = self.elems
        self.elems, self.rows, self.top = [], [], top
        for x in elems:
            self.add(x)

    def _reduce(self, x: Element):
        if any(a > b for a, b in zip(x.den, self.top)):
            self._rebuild(tuple(max(a, b) for a, b in zip(x.den, self.top)))
        vec = dict(self._vector(x))
        combo: Dict[int, Scalar] = {}
        for pivot, rvec, rcombo in self.rows:
            c = vec.get(pivot)
            if c:
                P.p_iadd(vec, rvec, -c)
                P.p_iadd(combo, rcombo, c)
        return vec, combo

    def add(self, x: Element) -> bool:
        vec, combo = self._reduce(x)
        if not vec:
            return False
        idx = len(self.elems)
        self.elems.append(x)
        pivot = max(vec, key=P.lex_key)
        inv = 1 / vec[pivot]
        rcombo = {k: -c * inv for k, c in combo.items()}
        rcombo[idx] = inv
        self.rows.append((pivot, {m: c * inv for m, c in vec.items()}, rcombo))
        return True

    def coords(self, x: Element) -> Optional[List[Scalar]]:
        vec, combo = self._reduce(x)
        if vec:
            return None
        return [combo.get(k, Fraction(0)) for k in range(len(self.elems))]


@dataclass
class OrbitModule:
    f: Element
    basis: List[Element]
    comodule: Comodule


def regular_subcomodule(A: HopfPresentation, elements: Sequence[Element],
                        labels: Optional[Sequence[str]] = None, name: str = "W") -> Comodule:
    """The comodule on a Delta-stable span: ``Delta(h_j) = sum_i h_i (x) c_ij``.

    ``elements`` must be linearly independent; raises :class:`NotClosed`
    when some left tensor factor leaves their span.
    """
    span = _Span(A.ring(1))
    for x in elements:
        if not span.add(x):
            raise ValueError("elements are linearly dependent")
    return _coaction_matrix(A, span, labels, name)


def _coaction_matrix(A, span: _Span, labels, name) -> Comodule:
    basis = span.elems
    n = len(basis)
    ring = A.ring(1)
    cols: List[List[List[Element]]] = []
    for h in basis:
        col: List[List[Element]] = [[] for _ in range(n)]
        for left, right in split_legs(A.Delta(h)):
            coords = span.coords(left)
            if coords is None:
                raise NotClosed(f"{format_element(left)} is outside the span")
            for i, c in enumerate(coords):
                if c:
                    col[i].append(right * c)
        cols.append(col)
    mat = [[element_sum(ring, cols[j][i]) for j in range(n)] for i in range(n)]
    if labels is None:
        labels = [format_element(h) for h in basis]
    return Comodule(A, mat, labels, name=name)


def orbit_module(A: HopfPresentation, f: Element) -> OrbitModule:
    """The K-span of the translates of ``f``, with its coaction matrix.

    The basis starts with ``f``; the other vectors are left tensor factors of
    ``Delta(f)`` taken in canonical order.
    """
    if f.ring is not A.ring(1):
        raise PresentationMismatch("element is not over this algebra")
    if f.is_zero():
        raise ZeroElement("the orbit of 0 is not a representative function")
    span = _Span(A.ring(1))
    span.add(f)
    for left, _ in split_legs(A.Delta(f)):
        span.add(left)
    V = _coaction_matrix(A, span, None, name=f"Orbit({format_element(f)})")
    return OrbitModule(f, list(span.elems), V)


def coordinate_rep(om: OrbitModule):
    """Conjugate the orbit comodule so ``f`` becomes a matrix coefficient.

    Returns ``(comodule, C, (1, k), c)`` with ``f = c * M[0][k-1]`` for the
    conjugated matrix ``M = C c_perm C^-1``; ``C`` has the counit values of the
    (permuted) basis as first row and the identity below.
    """
    V = om.comodule
    A = V.hopf
    n = V.dim
    if n == 0 or om.f.is_zero():
        raise ZeroElement("zero function")
    evals = [A.eps(h) for h in om.basis]
    perm = list(range(n))
    if not evals[0]:
        k = next((i for i, e in enumerate(evals) if e), None)
        if k is None:
            raise ZeroElement("all counit values vanish")
        perm[0], perm[k] = perm[k], perm[0]
    e = [evals[i] for i in perm]
    mat = [[V.matrix[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    C = linalg.identity(n)
    C[0] = list(e)
    Cinv = linalg.inverse(C)
    ring = A.ring(1)
    M = _product(_product([[ring.const(x) for x in row] for row in C], mat, ring), Cinv, ring)
    pos = perm.index(0)
    if pos == 0:
        index, coeff = (1, 1), e[0]
    else:
        index, coeff = (1, pos + 1), Fraction(1)
    W = Comodule(A, M, [f"w{i + 1}" for i in range(n)], name=f"Coord({format_element(om.f)})")
    got = W.matrix[0][index[1] - 1] * coeff
    if got != om.f:
        raise AssertionError("function is not recovered as a coordinate")
    return W, C, index, coeff


def regular_embedding(U: Comodule) -> Report:
    """``rho: U -> U (x) A``: the columns of the matrix, with injectivity.

    Injectivity is certified by ``(id (x) eps) rho = id``, i.e. the counit of
    the matrix is the identity.
    """
    rep = Report("regular-embed", data={"comodule": U.name})
    A = U.hopf
    comps = []
    lines = []
    for j in range(U.dim):
        comps.append({"vector": U.basis[j],
                      "components": [format_element(U.matrix[i][j]) for i in range(U.dim)]})
        lines.append(U.rho_text(j))
        for i in range(U.dim):
            e = A.eps(U.matrix[i][j])
            if e != (1 if i == j else 0):
                rep.fail(identity="(id ⊗ ε)ρ = id", i=i + 1, j=j + 1, lhs=_fmt(e),
                         rhs="1" if i == j else "0")
    rep.data.update(injective=rep.passed, components=comps, rho=lines)
    return rep


# ---------------------------------------------------------------------------
# the spaces L_{r,s,p}

@dataclass
class LSpace:
    comodule: Comodule
    linear: Comodule
    isomorphism: ComoduleMorphism
    iso_report: Report = field(repr=False)


def linear_comodule_L(n: int, r: int, s: int, p: int, homogeneous: bool = True) -> LSpace:
    """``L_{r,s,p}`` over ``GL_n``: twisted polynomials in ``d^q X_ij``.

    ``L_{0,1,p}`` has basis ``d^q X_ij`` ordered by ``q`` and then row-major;
    ``L_{0,s,p}`` is its ``s``-th symmetric power (with ``homogeneous=False``,
    the sum of all powers up to ``s``).  The checked isomorphism
    ``(V^(p))^n -> L_{0,1,p}`` sends ``d^q v_j`` in copy ``i`` to ``d^q X_ij``.
    """
    if not (1 <= n <= MAX_L and 0 <= s <= MAX_L and 0 <= p <= MAX_L) or r < 0:
        raise BoundsExceeded(f"need 1 <= n <= {MAX_L}, s <= {MAX_L}, p <= {MAX_L}, r >= 0")
    from .hopf import builtin

    A = builtin("GLn", n)
    funcs, labels = [], []
    for q in range(p + 1):
        for i in range(n):
            for j in range(n):
                funcs.append(A.gen(i * n + j, q))
                labels.append(_d_label(f"X{i + 1}{j + 1}", q))
    lin = regular_subcomodule(A, funcs, labels, name=f"L(0,1,{p})")
    # (V^(p))^n -> L(0,1,p)
    V = standard_comodule(A)
    Vp = prolong(V, p) if p else V
    src = direct_sum(*([Vp] * n))
    size = n * n * (p + 1)
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for q in range(p + 1):
            for j in range(n):
                col = i * n * (p + 1) + q * n + j
                row = q * n * n + i * n + j
                mat[row][col] = Fraction(1)
    iso = ComoduleMorphism(src, lin, mat, name="phi")
    iso_rep = verify_intertwiner(iso)
    if iso.rank() != size:
        iso_rep.fail(identity="bijective", lhs=str(iso.rank()), rhs=str(size))
    if homogeneous:
        body = sym_power(lin, s)
    else:
        body = direct_sum(*[sym_power(lin, k) for k in range(s + 1)])
    out = det_twist(body, r, V)
    out.name = f"L({r},{s},{p})"
    return LSpace(out, lin, iso, iso_rep)
