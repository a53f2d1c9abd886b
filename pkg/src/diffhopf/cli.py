"""Command-line front end: ``diffhopf <subcommand> ...``.

Every subcommand runs one kernel operation and prints a JSON report.  Exit
status is 0 when the report passes, 1 on a property failure (the report
carries witnesses) and 2 on an input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

from .report import Report

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    """Argument errors become input-error reports instead of usage text."""

    def error(self, message):
        raise InputError("UsageError", message)


# ---------------------------------------------------------------------------
# input resolution

def _load(path: str):
    from .serialize import load_file

    return load_file(path)


def _field(args):
    from .scalar import FieldDescriptor

    return FieldDescriptor.from_name(args.field)


def _hopf(args):
    from .hopf import HopfPresentation, builtin

    if getattr(args, "hopf", None):
        A = _load(args.hopf)
        if not isinstance(A, HopfPresentation):
            raise InputError("WrongObject", f"{args.hopf} is not a Hopf presentation")
        return A
    if not args.builtin:
        raise InputError("MissingInput", "give a presentation file or --builtin")
    return builtin(args.builtin, field=_field(args))


def _comodule(args, path: Optional[str]):
    from .comodule import Comodule, standard_comodule

    if path:
        V = _load(path)
        if not isinstance(V, Comodule):
            raise InputError("WrongObject", f"{path} is not a comodule")
        return V
    if not args.builtin:
        raise InputError("MissingInput", "give a comodule file or --builtin")
    return standard_comodule(_hopf(args))


def _element(args, A):
    from .parser import parse_expr

    if not args.element:
        raise InputError("MissingInput", "--element is required")
    return parse_expr(args.element, A)


def _matrix_text(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(r) + "]" for r in rows) + "]"


def _comodule_data(V) -> Dict:
    from .printing import format_element

    rows = [[format_element(x) for x in row] for row in V.matrix]
    return {"name": V.name, "dim": V.dim, "basis": list(V.basis), "matrix": rows,
            "matrix_text": _matrix_text(rows)}


def _write(args, obj):
    if getattr(args, "output", None):
        from .serialize import serialize

        Path(args.output).write_text(serialize(obj), encoding="utf-8")


def _checked_comodule(check: str, V, args) -> Report:
    from .comodule import check_comodule

    inner = check_comodule(V)
    rep = Report(check, inner.passed, inner.witnesses, _comodule_data(V), inner.code)
    _write(args, V)
    return rep


# ---------------------------------------------------------------------------
# subcommands

def cmd_check_hopf(args) -> Report:
    from .hopf import check_hopf_axioms

    if args.input:
        args.hopf = args.input
    return check_hopf_axioms(_hopf(args), args.depth)


def cmd_check_comodule(args) -> Report:
    from .comodule import check_comodule

    return check_comodule(_comodule(args, args.input))


def cmd_check_morphism(args) -> Report:
    from .comodule import ComoduleMorphism, verify_intertwiner
    from .hopf import HopfMorphism, check_hopf_morphism

    obj = _load(args.input)
    if isinstance(obj, HopfMorphism):
        return check_hopf_morphism(obj, args.depth)
    if isinstance(obj, ComoduleMorphism):
        return verify_intertwiner(obj)
    raise InputError("WrongObject", f"{args.input} is not a morphism")


def cmd_prolong(args) -> Report:
    from .comodule import prolong

    return _checked_comodule("prolong", prolong(_comodule(args, args.input), args.p), args)


def cmd_combine(args) -> Report:
    from .comodule import combine
    from .hopf import HopfMorphism

    inputs = [_comodule(args, p) for p in args.inputs] or [_comodule(args, None)]
    morphism = None
    if args.morphism:
        morphism = _load(args.morphism)
        if not isinstance(morphism, HopfMorphism):
            raise InputError("WrongObject", f"{args.morphism} is not a Hopf morphism")
    base = _comodule(args, args.base) if args.base else None
    V = combine(inputs, args.op, s=args.s, r=args.r, morphism=morphism, base=base)
    return _checked_comodule("combine", V, args)


def cmd_hom(args) -> Report:
    from .comodule import hom_basis
    from .scalar import format_scalar

    V, W = _comodule(args, args.source), _comodule(args, args.target)
    basis = hom_basis(V, W)
    return Report("hom", data={
        "source": V.name, "target": W.name, "dim": len(basis),
        "basis": [[[format_scalar(c) for c in row] for row in phi.matrix] for phi in basis],
    })


def cmd_orbit(args) -> Report:
    from .comodule import check_comodule, orbit_module
    from .printing import format_element

    A = _hopf(args)
    om = orbit_module(A, _element(args, A))
    rep = check_comodule(om.comodule)
    rep.check = "orbit"
    rep.data.update(_comodule_data(om.comodule))
    rep.data["element"] = format_element(om.f)
    _write(args, om.comodule)
    return rep


def cmd_coordinate_rep(args) -> Report:
    from .comodule import check_comodule, coordinate_rep, orbit_module
    from .scalar import format_scalar

    A = _hopf(args)
    W, C, index, coeff = coordinate_rep(orbit_module(A, _element(args, A)))
    rep = check_comodule(W)
    rep.check = "coordinate-rep"
    rep.data.update(_comodule_data(W))
    rep.data.update(change=[[format_scalar(c) for c in row] for row in C],
                    index=list(index), coefficient=format_scalar(coeff))
    _write(args, W)
    return rep


def cmd_const_split(args) -> Report:
    from .comodule import constant_split_check

    return constant_split_check(_comodule(args, args.input), args.p, seed=args.seed)


def cmd_regular_embed(args) -> Report:
    from .comodule import regular_embedding

    return regular_embedding(_comodule(args, args.input))


def cmd_build_l(args) -> Report:
    from .comodule import check_comodule, linear_comodule_L

    L = linear_comodule_L(args.n, args.r, args.s, args.p, homogeneous=not args.cumulative)
    rep = check_comodule(L.comodule)
    rep.check = "build-L"
    for w in L.iso_report.witnesses:
        rep.fail(**w)
    rep.data.update(name=L.comodule.name, dim=L.comodule.dim, linear_dim=L.linear.dim,
                    basis=list(L.comodule.basis))
    _write(args, L.comodule)
    return rep


def cmd_reconstruct_check(args) -> Report:
    from .comodule import standard_comodule
    from .reconstruct import Registry, check_reconstruction
    from .serialize import RegistryManifest

    if args.input:
        man = _load(args.input)
        if not isinstance(man, RegistryManifest):
            raise InputError("WrongObject", f"{args.input} is not a registry manifest")
        reg = man.registry
    else:
        A = _hopf(args)
        reg = Registry(A)
        reg.add(standard_comodule(A), "V")
        reg.close(True, args.prolong, args.tensor)
    return check_reconstruction(reg, samples=args.samples, seed=args.seed)


# ---------------------------------------------------------------------------
# argument parsing

def _common(p: argparse.ArgumentParser, hopf_file: bool = True):
    p.add_argument("--builtin", help="builtin presentation (gm, ga, gl2, gm-constant, ...)")
    p.add_argument("--field", default="Q", help="base field: Q or Q(t)")
    if hopf_file:
        p.add_argument("--hopf", help="presentation file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diffhopf", description="Differential Hopf algebra and comodule checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("check-hopf", cmd_check_hopf, "verify the differential Hopf axioms")
    p.add_argument("input", nargs="?")
    p.add_argument("--depth", type=int, default=3)
    _common(p)

    p = add("check-comodule", cmd_check_comodule, "verify the comodule axioms")
    p.add_argument("input", nargs="?")
    _common(p)

    p = add("check-morphism", cmd_check_morphism, "verify a Hopf or comodule morphism")
    p.add_argument("input")
    p.add_argument("--depth", type=int, default=1)

    p = add("prolong", cmd_prolong, "p-th prolongation of a comodule")
    p.add_argument("input", nargs="?")
    p.add_argument("-p", type=int, default=1)
    p.add_argument("-o", "--output")
    _common(p)

    p = add("combine", cmd_combine, "tensor, direct sum, dual, sym power, twist or pushforward")
    p.add_argument("op", choices=["tensor", "direct-sum", "dual", "sym-power", "det-twist",
                                  "pushforward"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("-s", type=int, default=1)
    p.add_argument("-r", type=int, default=1)
    p.add_argument("--morphism", help="Hopf morphism file for pushforward")
    p.add_argument("--base", help="comodule whose determinant twists (det-twist)")
    p.add_argument("-o", "--output")
    _common(p)

    p = add("hom", cmd_hom, "basis of the space of comodule morphisms")
    p.add_argument("source", nargs="?")
    p.add_argument("target", nargs="?")
    _common(p)

    for name, func, text in (("orbit", cmd_orbit, "orbit comodule of an element"),
                             ("coordinate-rep", cmd_coordinate_rep,
                              "realize an element as a matrix coefficient")):
        p = add(name, func, text)
        p.add_argument("--element", required=True)
        p.add_argument("-o", "--output")
        _common(p)

    p = add("const-split", cmd_const_split, "does V^(p) split as copies of V over K")
    p.add_argument("input", nargs="?")
    p.add_argument("-p", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = add("regular-embed", cmd_regular_embed, "embedding of a comodule into copies of A")
    p.add_argument("input", nargs="?")
    _common(p)

    p = add("build-L", cmd_build_l, "the comodule L(r,s,p) over GLn")
    p.add_argument("-n", type=int, default=2)
    p.add_argument("-r", type=int, default=0)
    p.add_argument("-s", type=int, default=1)
    p.add_argument("-p", type=int, default=0)
    p.add_argument("--cumulative", action="store_true",
                   help="sum of symmetric powers up to s instead of the s-th power")
    p.add_argument("-o", "--output")

    p = add("reconstruct-check", cmd_reconstruct_check, "reconstruction suite on a registry")
    p.add_argument("input", nargs="?", help="registry manifest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--prolong", type=int, default=2)
    p.add_argument("--tensor", type=int, default=2)
    _common(p)
    return parser


def _error_code(exc: BaseException) -> str:
    return getattr(exc, "code", None) or type(exc).__name__


def run(argv: Optional[List[str]] = None, out=None) -> int:
    """Run one command; print its report and return the exit status."""
    out = out or sys.stdout
    command = argv[0] if argv else ""
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        rep = args.func(args)
        status = EXIT_PASS if rep.passed else EXIT_FAIL
        payload = rep.to_dict()
    except (InputError, ValueError, KeyError, IndexError, ZeroDivisionError, OSError,
            RuntimeError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        payload = {"check": command, "status": "error", "code": _error_code(exc),
                   "message": str(message), "witnesses": []}
        status = EXIT_INPUT
    out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    return status


def main(argv: Optional[List[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
