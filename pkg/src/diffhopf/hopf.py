"""Presented differential Hopf algebras, their structure maps and axiom checks.

Comultiplication, antipode and counit are stored on generators only and
extended to every element as differential algebra homomorphisms: the image of
``d^k g`` is ``d^k`` of the image of ``g`` unless an explicit override for
that derived variable is installed (used to model broken presentations).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, Optional, Tuple

from . import _poly as P
from .diffpoly import Element, PresentationMismatch, Presentation, RingHom, tensor
from .report import Report
from .scalar import QQ, FieldDescriptor, Scalar

__all__ = [
    "AntipodeRequired",
    "HopfMorphism",
    "HopfPresentation",
    "NonUnitDenominatorImage",
    "apply_structure_map",
    "builtin",
    "builtin_name",
    "check_hopf_axioms",
    "check_hopf_morphism",
    "derived_override",
    "det_of",
]

MAX_GLN = 4


class NonUnitDenominatorImage(ValueError):
    code = "NonUnitDenominatorImage"


class AntipodeRequired(ValueError):
    code = "AntipodeRequired"


def _sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def det_of(matrix):
    """Leibniz-formula determinant of a small square matrix of elements."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    acc = None
    for perm in permutations(range(n)):
        term = matrix[0][perm[0]]
        for i in range(1, n):
            term = term * matrix[i][perm[i]]
        term = term if _sign(perm) > 0 else -term
        acc = term if acc is None else acc + term
    return acc


class HopfPresentation(Presentation):
    """A presentation together with Delta, S and epsilon on generators.

    ``delta`` maps a generator index to an element of the 2-leg ring,
    ``antipode`` to an element of the algebra (may be ``None`` when absent),
    ``counit`` to a scalar.  ``overrides`` maps ``(map, gen, order)`` with
    ``map`` in {"delta", "antipode", "counit"} to an explicit image of the
    derived variable, replacing the homomorphic extension.
    """

    def __init__(self, generators, field: FieldDescriptor = QQ, name: str = ""):
        super().__init__(generators, field, name)
        self.delta: Dict[int, Element] = {}
        self.antipode: Optional[Dict[int, Element]] = {}
        self.counit: Dict[int, Scalar] = {}
        self.overrides: Dict[Tuple[str, int, int], object] = {}
        self._maps: Dict[object, RingHom] = {}
        self.builtin_key: Optional[Tuple[str, int, bool]] = None

    def set_structure(self, delta, antipode, counit, overrides=None):
        if self._frozen:
            raise RuntimeError("presentation is frozen")
        n = len(self.generators)
        if set(delta) != set(range(n)) or set(counit) != set(range(n)):
            raise ValueError("delta and counit must be given on every generator")
        if antipode is not None and set(antipode) != set(range(n)):
            raise ValueError("antipode must be given on every generator")
        for g, x in delta.items():
            if x.ring is not self.ring(2):
                raise PresentationMismatch("delta image must lie in A (x) A")
        for g, x in (antipode or {}).items():
            if x.ring is not self.ring(1):
                raise PresentationMismatch("antipode image must lie in A")
        self.delta = dict(delta)
        self.antipode = None if antipode is None else dict(antipode)
        self.counit = {g: Fraction(c) if isinstance(c, int) else c for g, c in counit.items()}
        self.overrides = dict(overrides or {})
        self._maps.clear()

    def freeze(self):
        super().freeze()
        if self.antipode is not None:
            # every designated denominator must go to a unit
            for k in range(len(self.denominators)):
                try:
                    self.antipode_map(1).den_inverse(k)
                except Exception as exc:
                    raise NonUnitDenominatorImage(
                        f"antipode of denominator {k + 1} is not a unit"
                    ) from exc
        return self

    @property
    def has_antipode(self) -> bool:
        return self.antipode is not None

    def den_element(self, k: int) -> Element:
        return Element(self.ring(1), dict(self.denominators[k]), self.ring(1).zero_den)

    # generator images, extended along derivatives --------------------------
    def _derived_image(self, kind: str, gen: int, order: int):
        key = (kind, gen, order)
        if key in self.overrides:
            return self.overrides[key]
        cache_key = ("img",) + key
        hit = self._maps.get(cache_key)
        if hit is not None:
            return hit
        if order == 0:
            if kind == "delta":
                img = self.delta[gen]
            elif kind == "antipode":
                if self.antipode is None:
                    raise AntipodeRequired(f"{self.name or 'presentation'} has no antipode")
                img = self.antipode[gen]
            else:
                img = self.counit[gen]
        else:
            prev = self._derived_image(kind, gen, order - 1)
            img = self.field.derive(prev) if kind == "counit" else prev.derive()
        self._maps[cache_key] = img
        return img

    # structure maps on tensor powers --------------------------------------
    def _leg_slice(self, legs: int, leg: int):
        m = len(self.denominators)
        return leg * m, (leg + 1) * m

    def map_on_leg(self, kind: str, legs: int, leg: int) -> RingHom:
        """Apply ``kind`` on one leg of the ``legs``-fold tensor power.

        ``kind`` is "delta" (adds a leg), "antipode" (same legs), "counit"
        (drops a leg) or "mult" (merges ``leg`` and ``leg + 1``).
        """
        key = (kind, legs, leg)
        hom = self._maps.get(key)
        if hom is not None:
            return hom
        src = self.ring(legs)
        m = len(self.denominators)
        if kind == "delta":
            tgt = self.ring(legs + 1)
        elif kind == "antipode":
            tgt = src
        elif kind == "counit":
            tgt = self.ring(legs - 1)
        elif kind == "mult":
            tgt = self.ring(legs - 1)
        else:
            raise ValueError(kind)

        def place(x: Element, at: int) -> Element:
            # move an element of A^{(x)j} onto legs at..at+j-1 of tgt
            j = x.ring.legs
            num = P.p_rename(x.num, lambda v: (v[0] + at, v[1], v[2])) if at else x.num
            den = [0] * tgt.nden
            den[at * m : (at + j) * m] = x.den
            return Element(tgt, num, tuple(den))

        def var_image(v):
            vleg, order, gen = v
            if kind == "mult":
                new_leg = vleg if vleg <= leg else vleg - 1
                return Element(tgt, {(((new_leg, order, gen), 1),): Fraction(1)}, tgt.zero_den)
            if vleg < leg:
                return Element(tgt, {((v, 1),): Fraction(1)}, tgt.zero_den)
            if vleg > leg:
                shift = {"delta": 1, "antipode": 0, "counit": -1}[kind]
                return Element(tgt, {(((vleg + shift, order, gen), 1),): Fraction(1)}, tgt.zero_den)
            img = self._derived_image(kind, gen, order)
            if kind == "counit":
                return tgt.const(img)
            return place(img, leg)

        def den_image(k):
            dleg, i = divmod(k, m)
            if kind == "mult":
                new_leg = dleg if dleg <= leg else dleg - 1
                return tgt.den_inverse(new_leg * m + i).inverse()
            if dleg != leg:
                shift = 0 if dleg < leg else {"delta": 1, "antipode": 0, "counit": -1}[kind]
                return Element(tgt, tgt.den_poly((dleg + shift) * m + i), tgt.zero_den)
            base = self.map_on_leg(kind, 1, 0)(self.den_element(i))
            return place(base, leg) if kind != "counit" else tgt.const(base.constant_value())

        hom = RingHom(src, tgt, var_image, den_image)
        self._maps[key] = hom
        return hom

    def delta_map(self, legs: int = 1, leg: int = 0) -> RingHom:
        return self.map_on_leg("delta", legs, leg)

    def antipode_map(self, legs: int = 1, leg: int = 0) -> RingHom:
        if self.antipode is None:
            raise AntipodeRequired(f"{self.name or 'presentation'} has no antipode")
        return self.map_on_leg("antipode", legs, leg)

    def counit_map(self, legs: int = 1, leg: int = 0) -> RingHom:
        return self.map_on_leg("counit", legs, leg)

    def mult_map(self, legs: int = 2, leg: int = 0) -> RingHom:
        return self.map_on_leg("mult", legs, leg)

    def Delta(self, x: Element) -> Element:
        return self.delta_map()(x)

    def S(self, x: Element) -> Element:
        return self.antipode_map()(x)

    def eps(self, x: Element) -> Scalar:
        return self.counit_map()(x).constant_value()


def apply_structure_map(A: HopfPresentation, kind: str, x: Element):
    """Apply Delta, Antipode or Counit to an element of ``A``."""
    if x.ring is not A.ring(1):
        raise PresentationMismatch("element is not over this presentation")
    k = kind.lower()
    if k == "delta":
        return A.Delta(x)
    if k == "antipode":
        return A.S(x)
    if k == "counit":
        return A.eps(x)
    raise ValueError(f"unknown structure map {kind!r}")


# ---------------------------------------------------------------------------
# builtins

def _var_poly(gen, order=0):
    return {(((0, order, gen), 1),): Fraction(1)}


def _make(name, generators, field, dens, delta, antipode, counit, constant) -> HopfPresentation:
    A = HopfPresentation(generators, field, name)
    A.set_denominators(dens(A))
    if constant:
        A.set_rewrite({g: A.zero() for g in range(len(generators))})
    A.set_structure(delta(A), antipode(A), counit(A))
    return A.freeze()


def gln_generators(n: int):
    return [f"X{i + 1}{j + 1}" for i in range(n) for j in range(n)]


def _gln(n: int, field, constant: bool) -> HopfPresentation:
    if not 1 <= n <= MAX_GLN:
        raise ValueError(f"GLn supported for 1 <= n <= {MAX_GLN}")
    names = gln_generators(n)

    def X(A, i, j):
        return A.gen(i * n + j)

    def dens(A):
        one = A.ring(1)
        mat = [[Element(one, _var_poly(i * n + j), one.zero_den) for j in range(n)] for i in range(n)]
        return [det_of(mat).num]

    def delta(A):
        out = {}
        for i in range(n):
            for j in range(n):
                acc = A.ring(2).zero()
                for l in range(n):
                    acc = acc + tensor(X(A, i, l), X(A, l, j))
                out[i * n + j] = acc
        return out

    def antipode(A):
        mat = [[X(A, i, j) for j in range(n)] for i in range(n)]
        det_inv = A.ring(1).den_inverse(0)
        out = {}
        for i in range(n):
            for j in range(n):
                # (X^-1)_ij = cofactor_ji / det
                if n == 1:
                    cof = A.one()
                else:
                    minor = [[mat[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
                    cof = det_of(minor)
                    if (i + j) % 2:
                        cof = -cof
                out[i * n + j] = cof * det_inv
        return out

    def counit(A):
        return {i * n + j: Fraction(1 if i == j else 0) for i in range(n) for j in range(n)}

    label = f"GL{n}" + ("Constant" if constant else "")
    return _make(label, names, field, dens, delta, antipode, counit, constant)


def parse_builtin_name(name: str, n: Optional[int] = None) -> Tuple[str, int, bool]:
    """Normalize a builtin name to ``(family, n, constant)``."""
    key = name.strip().lower().replace("_", "").replace("-", "")
    constant = key.endswith("constant")
    if constant:
        key = key[: -len("constant")]
    if key.startswith("gl"):
        rest = key[2:]
        if rest == "n":
            if n is None:
                raise ValueError("GLn needs n")
            return "gl", n, constant
        if rest.isdigit():
            return "gl", int(rest), constant
    if key in ("gm", "ga"):
        return key, 1, constant
    if key == "trivial" and not constant:
        return "trivial", 0, False
    raise ValueError(f"unknown builtin presentation {name!r}")


def builtin(name: str, n: Optional[int] = None, field: FieldDescriptor = QQ) -> HopfPresentation:
    """Standard presentations: Gm, Ga, GLn, their constant variants, Trivial.

    Names are case-insensitive; ``"GL3"`` and ``("GLn", 3)`` are equivalent.
    Repeated calls return the same frozen presentation.
    """
    return _builtin(*parse_builtin_name(name, n), field)


@lru_cache(maxsize=None)
def _builtin(family: str, n: int, constant: bool, field: FieldDescriptor) -> HopfPresentation:
    if family == "gl":
        A = _gln(n, field, constant)
    elif family == "gm":
        A = _make(
            "GmConstant" if constant else "Gm",
            ["y"],
            field,
            lambda A: [_var_poly(0)],
            lambda A: {0: tensor(A.gen(0), A.gen(0))},
            lambda A: {0: A.ring(1).den_inverse(0)},
            lambda A: {0: Fraction(1)},
            constant,
        )
    elif family == "ga":
        A = _make(
            "GaConstant" if constant else "Ga",
            ["y"],
            field,
            lambda A: [],
            lambda A: {0: tensor(A.gen(0), A.one()) + tensor(A.one(), A.gen(0))},
            lambda A: {0: -A.gen(0)},
            lambda A: {0: Fraction(0)},
            constant,
        )
    else:
        A = _make("Trivial", [], field, lambda A: [], lambda A: {}, lambda A: {}, lambda A: {}, False)
    A.builtin_key = (family, n, constant)
    return A


def builtin_name(A: HopfPresentation) -> Optional[str]:
    """The CLI name of a builtin presentation, e.g. ``"gl2-constant"``."""
    key = getattr(A, "builtin_key", None)
    if key is None:
        return None
    family, n, constant = key
    base = f"gl{n}" if family == "gl" else family
    return base + ("-constant" if constant else "")


BUILTIN_NAMES = ("trivial", "gm", "ga", "gm-constant", "ga-constant", "gl1", "gl2", "gl3", "gl4",
                 "gl1-constant", "gl2-constant", "gl3-constant", "gl4-constant")


def derived_override(A: HopfPresentation, kind: str, gen: int, order: int, image) -> HopfPresentation:
    """A copy of ``A`` with one derived-variable image replaced (test fixtures)."""
    B = HopfPresentation(A.generators, A.field, A.name + "*")
    B.set_denominators(A.denominators)
    B.set_rewrite({g: Element(B.ring(1), dict(x.num), x.den) for g, x in A.rewrite.items()})

    def move(x, legs):
        return Element(B.ring(legs), dict(x.num), x.den)

    B.set_structure(
        {g: move(x, 2) for g, x in A.delta.items()},
        None if A.antipode is None else {g: move(x, 1) for g, x in A.antipode.items()},
        dict(A.counit),
        {**{k: (move(v, v.ring.legs) if isinstance(v, Element) else v) for k, v in A.overrides.items()},
         (kind, gen, order): image if not isinstance(image, Element) else move(image, image.ring.legs)},
    )
    return B.freeze()


# ---------------------------------------------------------------------------
# checks

def _fmt(x) -> str:
    from .printing import format_element
    from .scalar import format_scalar

    if isinstance(x, Element):
        return format_element(x)
    return format_scalar(x)


def _test_elements(A: HopfPresentation, depth: int):
    one = A.ring(1)
    for g in range(len(A.generators)):
        for k in range(depth + 1):
            label = A.var_name(g, k)
            if k == 0:
                yield label, g, k, A.gen(g)
            elif g in A.rewrite:
                yield label, g, k, A.gen(g).derive_n(k)
            else:
                yield label, g, k, Element(one, {(((0, k, g), 1),): Fraction(1)}, one.zero_den)


def check_hopf_axioms(A: HopfPresentation, depth: int = 0) -> Report:
    """Verify the Hopf identities on generators and their first derivatives.

    For each ``d^k g`` with ``k <= depth`` this checks coassociativity, both
    counit laws, both antipode laws, and that Delta, S and epsilon commute with
    ``d`` (which also covers compatibility with the rewrite rules).  Checking
    stops at the first failing identity per element.
    """
    rep = Report("check-hopf", data={"presentation": A.name, "depth": depth})
    D = A.delta_map()
    eps = A.counit_map()
    one = A.ring(1)
    for label, g, k, x in _test_elements(A, depth):
        dx = D(x)
        checks = []
        checks.append(("coassociativity", lambda: (A.delta_map(2, 0)(dx), A.delta_map(2, 1)(dx))))
        checks.append(("right counit", lambda: (A.counit_map(2, 1)(dx), x)))
        checks.append(("left counit", lambda: (A.counit_map(2, 0)(dx), x)))
        if A.has_antipode:
            epsx = eps(x).constant_value()
            checks.append(("antipode (S (x) id)", lambda: (A.mult_map()(A.antipode_map(2, 0)(dx)), one.const(epsx))))
            checks.append(("antipode (id (x) S)", lambda: (A.mult_map()(A.antipode_map(2, 1)(dx)), one.const(epsx))))
        if k < max(depth, 1):
            if A.has_antipode:
                checks.append(("antipode commutes with d", lambda: (A.S(x.derive()), A.S(x).derive())))
            checks.append(("delta commutes with d", lambda: (D(x.derive()), dx.derive())))
            checks.append(("counit commutes with d", lambda: (
                one.const(A.eps(x.derive())), one.const(A.field.derive(A.eps(x))))))
        for name, thunk in checks:
            lhs, rhs = thunk()
            if lhs != rhs:
                rep.fail(identity=name, element=label, lhs=_fmt(lhs), rhs=_fmt(rhs))
                break
        rep.data.setdefault("checked", []).append(label)
    return rep


class HopfMorphism:
    """A map of presented Hopf algebras given on source generators.

    Extends to a differential algebra homomorphism ``source -> target``; the
    image of every designated denominator must be a unit in the target.
    """

    def __init__(self, source: HopfPresentation, target: HopfPresentation, images: Dict[int, Element],
                 name: str = ""):
        if set(images) != set(range(len(source.generators))):
            raise ValueError("a morphism needs an image for every source generator")
        for x in images.values():
            if x.ring is not target.ring(1):
                raise PresentationMismatch("generator image is not over the target algebra")
        if source.field != target.field:
            raise PresentationMismatch("source and target have different base fields")
        self.source = source
        self.target = target
        self.images = dict(images)
        self.name = name
        self._homs: Dict[int, RingHom] = {}

    def hom(self, legs: int = 1) -> RingHom:
        """The map applied on every leg of the ``legs``-fold tensor power."""
        h = self._homs.get(legs)
        if h is not None:
            return h
        src = self.source.ring(legs)
        tgt = self.target.ring(legs)
        m = len(self.source.denominators)
        tm = len(self.target.denominators)
        cache: Dict[Tuple[int, int], Element] = {}

        def gen_image(gen, order):
            key = (gen, order)
            r = cache.get(key)
            if r is None:
                r = self.images[gen] if order == 0 else gen_image(gen, order - 1).derive()
                cache[key] = r
            return r

        def place(x, leg):
            num = P.p_rename(x.num, lambda v: (leg, v[1], v[2])) if leg else x.num
            den = [0] * tgt.nden
            den[leg * tm : (leg + 1) * tm] = x.den
            return Element(tgt, num, tuple(den))

        def var_image(v):
            return place(gen_image(v[2], v[1]), v[0])

        one_src = self.source.ring(1)
        base = None

        def den_image(k):
            nonlocal base
            if base is None:
                base = self.hom(1) if legs != 1 else None
            leg, i = divmod(k, m)
            d = Element(one_src, dict(self.source.denominators[i]), one_src.zero_den)
            if legs == 1:
                img = Element(self.target.ring(1), {}, self.target.ring(1).zero_den)
                acc = self.target.ring(1).zero()
                for mono, c in d.num.items():
                    term = self.target.ring(1).const(c)
                    for vv, e in mono:
                        term = term * gen_image(vv[2], vv[1]) ** e
                    acc = acc + term
                img = acc
            else:
                img = self.hom(1)(d)
            return place(img, leg)

        h = RingHom(src, tgt, var_image, den_image)
        self._homs[legs] = h
        return h

    def __call__(self, x: Element) -> Element:
        return self.hom(x.ring.legs)(x)


def check_hopf_morphism(f: HopfMorphism, depth: int = 1) -> Report:
    """Check that ``f`` respects d, the rewrite rules, Delta, S and epsilon."""
    rep = Report("check-morphism", data={"source": f.source.name, "target": f.target.name})
    src, tgt = f.source, f.target
    try:
        for k in range(len(src.denominators)):
            f.hom(1).den_inverse(k)
    except Exception:
        rep.fail(identity="denominator image is a unit", element=f"denominator {k + 1}",
                 lhs=_fmt(f.hom(1)(src.den_element(k))), rhs="unit")
        return rep
    for label, g, k, x in _test_elements(src, depth):
        fx = f(x)
        checks = [
            ("commutes with d", lambda: (f(x.derive()), fx.derive())),
            ("delta", lambda: (tgt.Delta(fx), f(src.Delta(x)))),
            ("counit", lambda: (tgt.ring(1).const(tgt.eps(fx)), tgt.ring(1).const(src.eps(x)))),
        ]
        if src.has_antipode and tgt.has_antipode:
            checks.append(("antipode", lambda: (tgt.S(fx), f(src.S(x)))))
        for name, thunk in checks:
            lhs, rhs = thunk()
            if lhs != rhs:
                rep.fail(identity=name, element=label, lhs=_fmt(lhs), rhs=_fmt(rhs))
                break
    # rewrite rules of the source must survive in the target
    for g, rule in src.rewrite.items():
        lhs = f(src.gen(g)).derive()
        rhs = f(rule)
        if lhs != rhs:
            rep.fail(identity="rewrite rule", element=src.var_name(g, 1), lhs=_fmt(lhs), rhs=_fmt(rhs))
    return rep
