"""JSON file formats for presentations, comodules, morphisms and registries.

Output is ``json.dumps(indent=2, ensure_ascii=False)`` with a fixed key order
per object type and a trailing newline, so loading and re-serializing a
canonical file reproduces it byte for byte.  Algebra elements are stored as
expression strings in the parser grammar.

References to other files (``"hopf": "ga_bad.json"``) resolve relative to
the referring file, then along ``DIFFHOPF_PATH``.  Strings without a
``.json`` suffix name builtin presentations.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .comodule import Comodule, ComoduleMorphism
from .diffpoly import Element
from .hopf import HopfMorphism, HopfPresentation, builtin, builtin_name
from .parser import parse_expr, parse_scalar
from .printing import format_element, format_poly
from .reconstruct import Registry
from .report import Report
from .scalar import QQ, FieldDescriptor, format_scalar

__all__ = ["FormatError", "dumps", "load", "load_file", "serialize", "search_path"]

ENV_PATH = "DIFFHOPF_PATH"


class FormatError(ValueError):
    code = "FormatError"

    def __init__(self, message: str, location: str = "$"):
        self.location = location
        super().__init__(f"{location}: {message}")


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def search_path() -> List[Path]:
    raw = os.environ.get(ENV_PATH, "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


# ---------------------------------------------------------------------------
# helpers

class _Ctx:
    """Resolution context: base directory and a cache of loaded references."""

    def __init__(self, base: Optional[Path]):
        self.base = base
        self.cache: Dict[Tuple[str, str], Any] = {}

    def resolve(self, ref: str, where: str) -> Path:
        candidates = []
        if self.base is not None:
            candidates.append(self.base / ref)
        candidates.append(Path(ref))
        candidates.extend(d / ref for d in search_path())
        for c in candidates:
            if c.is_file():
                return c
        raise FormatError(f"cannot find referenced file {ref!r}", where)

    def load_ref(self, ref: str, where: str):
        path = self.resolve(ref, where)
        key = (str(path.resolve()), ref)
        if key not in self.cache:
            sub = _Ctx(path.parent)
            sub.cache = self.cache
            obj = _from_data(_read_json(path.read_text(encoding="utf-8"), str(path)), sub, "$")
            if isinstance(obj, (HopfPresentation, Comodule)):
                obj.source_ref = ref
            self.cache[key] = obj
        return self.cache[key]


def _read_json(text: str, origin: str = "<text>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", f"{origin}:{exc.lineno}:{exc.colno}") from None


def _need(obj: dict, key: str, where: str, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}", where)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise FormatError(f"field {key!r} has the wrong type", f"{where}.{key}")
    return val


def _expr(text, A: HopfPresentation, where: str, legs: int = 1) -> Element:
    if not isinstance(text, str):
        raise FormatError("expected an expression string", where)
    try:
        return parse_expr(text, A, legs)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc), where) from None


def _scalar(text, field: FieldDescriptor, where: str):
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError("expected a scalar expression", where)
    try:
        return parse_scalar(text, field.has_t)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc), where) from None


def _field(obj: dict, where: str) -> FieldDescriptor:
    name = obj.get("field", "Q")
    try:
        return FieldDescriptor.from_name(name)
    except (ValueError, TypeError):
        raise FormatError(f"unknown field {name!r}", f"{where}.field") from None


_DERIVED = re.compile(r"^d(?:\^(\d+))?\(([A-Za-z_][A-Za-z0-9_]*)\)$")


def _derived_key(key: str, A: HopfPresentation, where: str) -> Tuple[int, int]:
    """``"y"`` -> (gen, 0); ``"d(y)"`` -> (gen, 1); ``"d^3(y)"`` -> (gen, 3)."""
    key = key.replace(" ", "")
    if key in A.generators:
        return A.gen_index(key), 0
    m = _DERIVED.match(key)
    if m is None or m.group(2) not in A.generators:
        raise FormatError(f"bad generator key {key!r}", where)
    order = int(m.group(1) or 1)
    if order < 1:
        raise FormatError(f"bad derivative order in {key!r}", where)
    return A.gen_index(m.group(2)), order


# ---------------------------------------------------------------------------
# presentations

def _load_presentation(obj: dict, where: str) -> HopfPresentation:
    field = _field(obj, where)
    gens = _need(obj, "generators", where, list)
    try:
        A = HopfPresentation(gens, field, obj.get("name", ""))
    except ValueError as exc:
        raise FormatError(str(exc), f"{where}.generators") from None
    dens = []
    for k, text in enumerate(obj.get("denominators", [])):
        x = _expr(text, A, f"{where}.denominators[{k}]")
        if any(x.den) or not x.num:
            raise FormatError("denominator must be a polynomial", f"{where}.denominators[{k}]")
        dens.append(x.num)
    try:
        A.set_denominators(dens)
    except ValueError as exc:
        raise FormatError(str(exc), f"{where}.denominators") from None
    rules = {}
    for key, text in (obj.get("rewrite") or {}).items():
        g, order = _derived_key(key, A, f"{where}.rewrite")
        if order:
            raise FormatError("rewrite keys are generator names", f"{where}.rewrite.{key}")
        rules[g] = _expr(text, A, f"{where}.rewrite.{key}")
    try:
        A.set_rewrite(rules)
    except ValueError as exc:
        raise FormatError(str(exc), f"{where}.rewrite") from None
    overrides = {}

    def images(section: str, parse):
        raw = _need(obj, section, where, dict)
        out = {}
        for key, text in raw.items():
            loc = f"{where}.{section}.{key}"
            g, order = _derived_key(key, A, loc)
            val = parse(text, loc)
            if order:
                overrides[(section, g, order)] = val
            else:
                out[g] = val
        return out

    delta = images("delta", lambda t, loc: _expr(t, A, loc, legs=2))
    antipode = None
    if obj.get("antipode") is not None:
        antipode = images("antipode", lambda t, loc: _expr(t, A, loc))
    counit = images("counit", lambda t, loc: _scalar(t, field, loc))
    try:
        A.set_structure(delta, antipode, counit, overrides)
        A.freeze()
    except ValueError as exc:
        raise FormatError(str(exc), where) from None
    return A


def _presentation_data(A: HopfPresentation) -> Dict[str, Any]:

    def section(kind: str, base: Dict[int, Any], fmt) -> Dict[str, str]:
        out = {A.generators[g]: fmt(x) for g, x in sorted(base.items())}
        for (k, g, order), x in sorted(A.overrides.items(), key=lambda kv: kv[0]):
            if k == kind:
                out[A.var_name(g, order)] = fmt(x)
        return out

    data: Dict[str, Any] = {}
    if A.name:
        data["name"] = A.name
    data["field"] = A.field.name
    data["generators"] = list(A.generators)
    data["denominators"] = [format_poly(A, d) for d in A.denominators]
    data["rewrite"] = {A.generators[g]: format_element(x) for g, x in sorted(A.rewrite.items())}
    data["delta"] = section("delta", A.delta, format_element)
    data["antipode"] = None if A.antipode is None else section("antipode", A.antipode, format_element)
    data["counit"] = section("counit", A.counit, format_scalar)
    return data


def _hopf_ref(A: HopfPresentation):
    ref = getattr(A, "source_ref", None)
    if ref:
        return ref
    name = builtin_name(A)
    if name:
        return name
    return _presentation_data(A)


def _resolve_hopf(ref, field: Optional[FieldDescriptor], ctx: _Ctx, where: str) -> HopfPresentation:
    if isinstance(ref, dict):
        return _load_presentation(ref, where)
    if not isinstance(ref, str):
        raise FormatError("expected a builtin name, file reference or object", where)
    if ref.endswith(".json"):
        A = ctx.load_ref(ref, where)
        if not isinstance(A, HopfPresentation):
            raise FormatError(f"{ref} is not a presentation", where)
        if field is not None and A.field != field:
            raise FormatError("field does not match the referenced presentation", where)
        return A
    try:
        return builtin(ref, field=field or QQ)
    except ValueError as exc:
        raise FormatError(str(exc), where) from None


# ---------------------------------------------------------------------------
# comodules and morphisms

def _load_comodule(obj: dict, ctx: _Ctx, where: str) -> Comodule:
    field = _field(obj, where) if "field" in obj else None
    A = _resolve_hopf(_need(obj, "hopf", where), field, ctx, f"{where}.hopf")
    dim = _need(obj, "dim", where, int)
    rows = _need(obj, "matrix", where, list)
    if len(rows) != dim or any(not isinstance(r, list) or len(r) != dim for r in rows):
        raise FormatError(f"matrix must be {dim} x {dim}", f"{where}.matrix")
    mat = [[_expr(x, A, f"{where}.matrix[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    basis = obj.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim):
        raise FormatError("basis must list one label per dimension", f"{where}.basis")
    return Comodule(A, mat, basis, name=obj.get("name", ""))


def _comodule_data(V: Comodule) -> Dict[str, Any]:
    return {
        "name": V.name,
        "hopf": _hopf_ref(V.hopf),
        "field": V.hopf.field.name,
        "dim": V.dim,
        "basis": list(V.basis),
        "matrix": [[format_element(x) for x in row] for row in V.matrix],
    }


def _comodule_ref(V: Comodule):
    ref = getattr(V, "source_ref", None)
    return ref if ref else _comodule_data(V)


def _resolve_comodule(ref, ctx: _Ctx, where: str) -> Comodule:
    if isinstance(ref, dict):
        return _load_comodule(ref, ctx, where)
    if isinstance(ref, str):
        V = ctx.load_ref(ref, where)
        if isinstance(V, Comodule):
            return V
    raise FormatError("expected a comodule file reference or object", where)


def _load_comodule_morphism(obj: dict, ctx: _Ctx, where: str) -> ComoduleMorphism:
    src = _resolve_comodule(_need(obj, "source", where), ctx, f"{where}.source")
    tgt = _resolve_comodule(_need(obj, "target", where), ctx, f"{where}.target")
    rows = _need(obj, "matrix", where, list)
    field = src.hopf.field
    mat = [[_scalar(x, field, f"{where}.matrix[{i}][{j}]") for j, x in enumerate(r)]
           for i, r in enumerate(rows)]
    try:
        return ComoduleMorphism(src, tgt, mat, name=obj.get("name", ""))
    except ValueError as exc:
        raise FormatError(str(exc), f"{where}.matrix") from None


def _comodule_morphism_data(phi: ComoduleMorphism) -> Dict[str, Any]:
    return {
        "name": phi.name,
        "source": _comodule_ref(phi.source),
        "target": _comodule_ref(phi.target),
        "matrix": [[format_scalar(x) for x in row] for row in phi.matrix],
    }


def _load_hopf_morphism(obj: dict, ctx: _Ctx, where: str) -> HopfMorphism:
    field = _field(obj, where) if "field" in obj else None
    src = _resolve_hopf(_need(obj, "source", where), field, ctx, f"{where}.source")
    tgt = _resolve_hopf(_need(obj, "target", where), field, ctx, f"{where}.target")
    raw = _need(obj, "images", where, dict)
    images = {}
    for key, text in raw.items():
        if key not in src.generators:
            raise FormatError(f"unknown source generator {key!r}", f"{where}.images")
        images[src.gen_index(key)] = _expr(text, tgt, f"{where}.images.{key}")
    try:
        return HopfMorphism(src, tgt, images, name=obj.get("name", ""))
    except ValueError as exc:
        raise FormatError(str(exc), f"{where}.images") from None


def _hopf_morphism_data(f: HopfMorphism) -> Dict[str, Any]:
    return {
        "name": f.name,
        "source": _hopf_ref(f.source),
        "target": _hopf_ref(f.target),
        "field": f.source.field.name,
        "images": {f.source.generators[g]: format_element(x) for g, x in sorted(f.images.items())},
    }


# ---------------------------------------------------------------------------
# registries

class RegistryManifest:
    """A registry together with the closure request it was built with."""

    def __init__(self, registry: Registry, closure: Dict[str, int], members: Dict[str, Any],
                 morphisms: List[Dict[str, Any]]):
        self.registry = registry
        self.closure = closure
        self._members = members
        self._morphisms = morphisms


def _load_registry(obj: dict, ctx: _Ctx, where: str) -> RegistryManifest:
    field = _field(obj, where) if "field" in obj else None
    A = _resolve_hopf(_need(obj, "hopf", where), field, ctx, f"{where}.hopf")
    reg = Registry(A)
    members = _need(obj, "comodules", where, dict)
    for name, ref in members.items():
        V = _resolve_comodule(ref, ctx, f"{where}.comodules.{name}")
        if V.hopf is not A:
            raise FormatError("comodule over a different algebra", f"{where}.comodules.{name}")
        reg.add(V, name)
    closure = obj.get("closure") or {}
    for key in closure:
        if key not in ("dual", "prolong", "tensor"):
            raise FormatError(f"unknown closure option {key!r}", f"{where}.closure")
    reg.close(bool(closure.get("dual", False)), int(closure.get("prolong", 0)),
              int(closure.get("tensor", 1)))
    morphisms = obj.get("morphisms") or []
    for k, m in enumerate(morphisms):
        loc = f"{where}.morphisms[{k}]"
        s, t = _need(m, "source", loc, str), _need(m, "target", loc, str)
        if s not in reg or t not in reg:
            raise FormatError("morphism names an unknown member", loc)
        rows = _need(m, "matrix", loc, list)
        mat = [[_scalar(x, A.field, f"{loc}.matrix[{i}][{j}]") for j, x in enumerate(r)]
               for i, r in enumerate(rows)]
        try:
            reg.add_morphism(ComoduleMorphism(reg.comodule(s), reg.comodule(t), mat), s, t)
        except ValueError as exc:
            raise FormatError(str(exc), loc) from None
    return RegistryManifest(reg, dict(closure), dict(members), list(morphisms))


def _registry_data(man: RegistryManifest) -> Dict[str, Any]:
    reg = man.registry
    return {
        "hopf": _hopf_ref(reg.hopf),
        "field": reg.hopf.field.name,
        "comodules": man._members,
        "morphisms": man._morphisms,
        "closure": man.closure,
    }


# ---------------------------------------------------------------------------
# entry points

def _from_data(obj, ctx: _Ctx, where: str):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object", where)
    if "generators" in obj:
        return _load_presentation(obj, where)
    if "comodules" in obj:
        return _load_registry(obj, ctx, where)
    if "images" in obj:
        return _load_hopf_morphism(obj, ctx, where)
    if "source" in obj and "matrix" in obj:
        return _load_comodule_morphism(obj, ctx, where)
    if "hopf" in obj and "matrix" in obj:
        return _load_comodule(obj, ctx, where)
    if "check" in obj and "status" in obj:
        rep = Report(obj["check"], obj["status"] == "pass", list(obj.get("witnesses", [])),
                     dict(obj.get("data", {})), obj.get("code", ""))
        return rep
    raise FormatError("unrecognized object", where)


def load(text: str, base_dir: Optional[os.PathLike] = None):
    """Parse a file's text into a presentation, comodule, morphism, registry or report."""
    ctx = _Ctx(Path(base_dir) if base_dir is not None else None)
    return _from_data(_read_json(text), ctx, "$")


def load_file(path: os.PathLike):
    p = Path(path)
    if not p.is_file():
        for d in search_path():
            if (d / p).is_file():
                p = d / p
                break
        else:
            raise FormatError(f"no such file {str(path)!r}")
    return load(p.read_text(encoding="utf-8"), p.parent)


def serialize(obj) -> str:
    """Canonical text for any object :func:`load` understands."""
    if isinstance(obj, HopfPresentation):
        data = _presentation_data(obj)
    elif isinstance(obj, Comodule):
        data = _comodule_data(obj)
    elif isinstance(obj, ComoduleMorphism):
        data = _comodule_morphism_data(obj)
    elif isinstance(obj, HopfMorphism):
        data = _hopf_morphism_data(obj)
    elif isinstance(obj, RegistryManifest):
        data = _registry_data(obj)
    elif isinstance(obj, Report):
        data = obj.to_dict()
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return dumps(data)
