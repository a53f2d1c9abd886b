import random
from fractions import Fraction

import pytest

from diffhopf import linalg
from diffhopf.comodule import ComoduleMorphism, dual, hom_basis, standard_comodule
from diffhopf.hopf import builtin
from diffhopf.parser import parse_expr
from diffhopf.reconstruct import (IndexOutOfRange, Registry, UnknownComodule, antipode_law,
                                  check_generation, check_reconstruction, check_relations, counit_law,
                                  delta_in_basis, phi_map, phi_tensor, random_element, tilde_antipode,
                                  tilde_counit, tilde_delta, tilde_derive, tilde_product, vector_symbol)
from diffhopf.serialize import load_file
from test_comodule import unipotent

GM = builtin("gm")


@pytest.fixture(scope="module")
def registry():
    reg = Registry(GM)
    reg.add(standard_comodule(GM), "V")
    reg.close(duals=True, prolong_depth=2, tensor_factors=2)
    # companions created by later operations must not widen the sampled names
    reg.base_names = reg.names()
    return reg


def test_registry_closure_names(registry):
    names = registry.names()
    for expected in ("1", "V", "V*", "V^(1)", "(V^(1))^(1)", "V⊗V", "(V*)⊗V", "(V^(1))⊗(V*)"):
        assert expected in names
    assert registry.dim("V^(1)") == 2
    assert registry.dim("(V^(1))^(1)") == 4


def test_symbol_images(registry):
    assert phi_map(registry.symbol("V", 1, 1)) == GM.gen("y")
    assert phi_map(registry.symbol("V*", 1, 1)) == parse_expr("1/y", GM)
    assert phi_map(registry.symbol("V^(1)", 2, 1)) == GM.gen("y", 1)
    assert phi_map(registry.one()) == GM.one()


def test_lookup_errors(registry):
    with pytest.raises(UnknownComodule):
        registry.symbol("W", 1, 1)
    with pytest.raises(IndexOutOfRange):
        registry.symbol("V", 2, 1)


def _elements(reg, count, seed):
    names = reg.base_names
    symbols = [s for name in names for s in reg.symbols(name)]
    rng = random.Random(seed)
    return symbols + [random_element(reg, rng, names) for _ in range(count)]


def test_phi_is_a_differential_hopf_map(registry):
    rng = random.Random(17)
    names = registry.base_names
    for x in _elements(registry, 200, 1):
        y = random_element(registry, rng, names)
        fx = phi_map(x)
        assert phi_map(tilde_product(x, y)) == fx * phi_map(y)
        assert phi_map(x + y) == fx + phi_map(y)
        assert phi_map(tilde_derive(x)) == fx.derive()
        assert phi_tensor(registry, tilde_delta(x)) == GM.Delta(fx)
        assert phi_map(tilde_antipode(x)) == GM.S(fx)
        assert tilde_counit(x) == GM.eps(fx)


def test_hopf_laws_hold_formally(registry):
    for x in _elements(registry, 200, 2):
        assert phi_map(counit_law(x)) == phi_map(x)
        assert phi_map(antipode_law(x)) == GM.one() * tilde_counit(x)


def test_product_is_compatible_with_derivation(registry):
    rng = random.Random(8)
    names = ["V", "V*", "V^(1)"]
    for _ in range(30):
        x, y = random_element(registry, rng, names), random_element(registry, rng, names)
        lhs = phi_map(tilde_derive(tilde_product(x, y)))
        rhs = phi_map(tilde_product(tilde_derive(x), y) + tilde_product(x, tilde_derive(y)))
        assert lhs == rhs


def test_delta_independent_of_basis():
    reg = Registry(GM)
    U = unipotent()
    reg.add(U, "U")
    rng = random.Random(3)
    for _ in range(10):
        change = [[Fraction(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
        if not linalg.det(change):
            continue
        v = [Fraction(rng.randint(-3, 3)) for _ in range(2)]
        u = [Fraction(rng.randint(-3, 3)) for _ in range(2)]
        std = delta_in_basis(reg, "U", v, u, linalg.identity(2))
        other = delta_in_basis(reg, "U", v, u, change)
        assert phi_tensor(reg, std) == phi_tensor(reg, other)
        assert phi_tensor(reg, std) == GM.Delta(phi_map(vector_symbol(reg, "U", v, u)))


def test_relations_from_morphisms():
    reg = Registry(GM)
    U = unipotent()
    reg.add(U, "U")
    reg.add(dual(U), "U*")
    for phi in hom_basis(U, U):
        reg.add_morphism(phi, "U", "U")
    reg.prolong("U")
    assert check_relations(reg).passed
    reg.add_morphism(ComoduleMorphism(U, U, [[0, 0], [1, 0]]), "U", "U")
    rep = check_relations(reg)
    assert not rep.passed and rep.witnesses[0]["V"] == "U"


def test_generation_certifies_a_miss():
    reg = Registry(GM)
    rep = check_generation(reg, [GM.gen("y")])
    assert not rep.passed
    assert rep.code == "NotGenerated" and rep.witnesses[0]["certified"]


def test_generation_with_expressions(registry):
    expr = {0: tilde_product(registry.symbol("V", 1, 1), registry.symbol("V", 1, 1))}
    rep = check_generation(registry, [GM.gen("y") ** 2], expressions=expr, names=registry.base_names)
    assert rep.passed


def test_full_suite_on_manifest(fixtures_dir):
    man = load_file(fixtures_dir / "gm_registry.json")
    rep = check_reconstruction(man.registry, samples=50, seed=0)
    assert rep.passed, rep.witnesses
    assert set(rep.data["generation"]) == {"y", "1/y", "d(y)"}
