"""Exact differential Hopf algebras, their comodules and reconstruction from comodules."""

from .comodule import (Comodule, ComoduleMorphism, check_comodule, constant_split_check,
                       coordinate_rep, dual, direct_sum, hom_basis, linear_comodule_L,
                       orbit_module, prolong, regular_embedding, standard_comodule, sym_power,
                       tensor_product)
from .diffpoly import Element, Presentation
from .hopf import HopfMorphism, HopfPresentation, builtin, check_hopf_axioms, check_hopf_morphism
from .parser import parse_expr
from .printing import format_element
from .reconstruct import Registry, check_reconstruction
from .report import Report
from .scalar import QQ, QT
from .serialize import FormatError, load, load_file, serialize

__all__ = [
    "Comodule", "ComoduleMorphism", "Element", "FormatError", "HopfMorphism",
    "HopfPresentation", "Presentation", "QQ", "QT", "Registry", "Report", "builtin",
    "check_comodule", "check_hopf_axioms", "check_hopf_morphism", "check_reconstruction",
    "constant_split_check", "coordinate_rep", "direct_sum", "dual", "format_element",
    "hom_basis", "linear_comodule_L", "load", "load_file", "orbit_module", "parse_expr",
    "prolong", "regular_embedding", "serialize", "standard_comodule", "sym_power",
    "tensor_product",
]
