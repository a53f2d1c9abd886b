import random
from fractions import Fraction
from math import comb

import pytest
import sympy

from conftest import to_sympy
from diffhopf import linalg
from diffhopf.comodule import (BoundsExceeded, Comodule, ComoduleMorphism, ZeroElement, check_comodule,
                               combine, constant_split_check, coordinate_rep, det_twist, direct_sum,
                               dual, hom_basis, intertwining_system, linear_comodule_L, orbit_module,
                               prolong, prolong_morphism, pushforward, regular_embedding,
                               standard_comodule, sym_power, tensor_product, trivial_comodule,
                               verify_intertwiner, verify_subquotient)
from diffhopf.hopf import builtin
from diffhopf.parser import parse_expr
from diffhopf.printing import format_element
from diffhopf.scalar import QT
from diffhopf.serialize import load_file

GM = builtin("gm")
GL2 = builtin("gl2")
GL3 = builtin("gl3")


def unipotent(A=GM):
    e = lambda s: parse_expr(s, A)
    return Comodule(A, [[e("1"), e("d(y)/y")], [e("0"), e("1")]], ["u1", "u2"], "U")


def conjugate(V, C):
    """``C a C^-1`` with a scalar matrix ``C``."""
    A = V.hopf
    ring = A.ring(1)
    Ci = linalg.inverse(C)
    Cm = [[ring.const(x) for x in row] for row in C]
    Cim = [[ring.const(x) for x in row] for row in Ci]
    M = linalg.matmul(linalg.matmul(Cm, [list(r) for r in V.matrix]), Cim)
    M = [[x if x is not None else A.zero() for x in row] for row in M]
    return Comodule(A, M, name=f"{V.name}'")


def random_invertible(rng, n):
    while True:
        C = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if linalg.det(C):
            return C


# -- axioms and constructions -----------------------------------------------------

def test_unipotent_comodule_and_broken_fixture(fixtures_dir):
    assert check_comodule(unipotent()).passed
    rep = check_comodule(load_file(fixtures_dir / "broken.json"))
    assert not rep.passed
    assert (rep.witnesses[0]["i"], rep.witnesses[0]["j"]) == (2, 2)
    assert rep.witnesses[0]["identity"] == "counit"


@pytest.mark.parametrize("name", ["gm", "ga", "gl2", "gl3", "trivial", "gm-constant"])
def test_standard_comodules(name):
    assert check_comodule(standard_comodule(builtin(name))).passed


def test_constructions_are_comodules():
    U, V = unipotent(), standard_comodule(GM)
    for W in (tensor_product(U, V), direct_sum(U, V, U), dual(U), sym_power(U, 3),
              det_twist(U, 2, V), tensor_product(dual(U), U), prolong(dual(U), 2)):
        assert check_comodule(W).passed, W.name
    S = standard_comodule(GL2)
    for W in (sym_power(S, 2), det_twist(S, 1), dual(S), tensor_product(S, dual(S))):
        assert check_comodule(W).passed, W.name


def test_sym_power_dimensions():
    S = standard_comodule(GL3)
    for s in range(4):
        assert sym_power(S, s).dim == comb(3 + s - 1, s)


def test_dual_of_unipotent():
    D = dual(unipotent())
    assert format_element(D.matrix[1][0]) == "-d(y)/y"
    assert D.matrix[0][1].is_zero()


def test_pushforward_along_rho_star(fixtures_dir):
    rho = load_file(fixtures_dir / "rho_star.json")
    W = pushforward(standard_comodule(GL2), rho)
    assert W.same_matrix(unipotent())
    assert combine([standard_comodule(GL2)], "pushforward", morphism=rho).same_matrix(W)


def test_combine_dispatch():
    U = unipotent()
    assert combine([U, U], "direct-sum").dim == 4
    assert combine([U], "sym-power", s=2).dim == 3
    with pytest.raises(ValueError):
        combine([U, U], "dual")
    with pytest.raises(ValueError):
        combine([U], "wedge")


# -- prolongation ----------------------------------------------------------------

def prolong_oracle(V, p):
    """Differentiate ``rho(v_j) = sum_i v_i (x) a_ij`` with the tensor derivation.

    ``d(w (x) a) = d(w) (x) a + w (x) d(a)``; coordinates ``(q, i)`` stand for
    ``d^q v_i``.  Returns the column of each ``d^s v_j`` as a dict.
    """
    n = V.dim
    cols = {}
    for j in range(n):
        cur = {(0, i): V.matrix[i][j] for i in range(n) if not V.matrix[i][j].is_zero()}
        for s in range(p + 1):
            cols[(s, j)] = cur
            nxt = {}
            for (q, i), a in cur.items():
                for key, val in (((q + 1, i), a), ((q, i), a.derive())):
                    nxt[key] = nxt[key] + val if key in nxt else val
            cur = nxt
    return cols


def random_gl3_comodule(seed):
    return conjugate(standard_comodule(GL3), random_invertible(random.Random(seed), 3))


@pytest.mark.parametrize("which", ["unipotent", "gm", "gl3"])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_prolongation_matches_tensor_derivation(which, p):
    V = {"unipotent": unipotent(), "gm": standard_comodule(GM), "gl3": random_gl3_comodule(7)}[which]
    P = prolong(V, p)
    n = V.dim
    oracle = prolong_oracle(V, p)
    for s in range(p + 1):
        for j in range(n):
            col = oracle[(s, j)]
            for q in range(p + 1):
                for i in range(n):
                    want = col.get((q, i), V.hopf.zero())
                    assert P.matrix[q * n + i][s * n + j] == want


def test_prolongation_is_comodule_and_block_triangular():
    P = prolong(unipotent(), 2)
    assert check_comodule(P).passed
    assert P.basis == ("u1", "u2", "d(u1)", "d(u2)", "d^2(u1)", "d^2(u2)")
    for r in range(2, 6):
        for c in range(0, 2):
            assert P.matrix[r][c].is_zero()


def test_prolong_morphism_intertwines():
    U = unipotent()
    for phi in hom_basis(U, U):
        for p in (1, 2):
            assert verify_intertwiner(prolong_morphism(phi, p)).passed


def test_prolong_morphism_with_time_coefficients():
    A = builtin("gm", field=QT)
    V = trivial_comodule(A, 2)
    t = parse_expr("t", A).constant_value()
    phi = ComoduleMorphism(V, V, [[t, 1], [0, t * t]])
    Pphi = prolong_morphism(phi, 2)
    assert verify_intertwiner(Pphi).passed
    # d(t v) = t d(v) + v
    assert Pphi.matrix[0][2] == 1


# -- hom spaces -------------------------------------------------------------------

def test_hom_of_unipotent():
    basis = hom_basis(unipotent(), unipotent())
    assert len(basis) == 2
    mats = sorted([[list(r) for r in phi.matrix] for phi in basis])
    assert mats == [[[0, 1], [0, 0]], [[1, 0], [0, 1]]]
    for phi in basis:
        assert verify_intertwiner(phi).passed


def test_forced_zero_row():
    V = standard_comodule(GM)
    basis = hom_basis(direct_sum(V, V), prolong(V, 1))
    assert basis
    for phi in basis:
        assert all(c == 0 for c in phi.matrix[1])


def _pool():
    rng = random.Random(99)
    out = []
    U, V = unipotent(), standard_comodule(GM)
    gm_list = [U, V, dual(V), dual(U), tensor_product(V, V), direct_sum(V, trivial_comodule(GM)),
               direct_sum(U, V), trivial_comodule(GM, 2), direct_sum(dual(V), U)]
    S = standard_comodule(GL2)
    gl_list = [S, dual(S), direct_sum(S, trivial_comodule(GL2)), trivial_comodule(GL2, 2)]
    ga = builtin("ga")
    G = standard_comodule(ga)
    ga_list = [G, direct_sum(G, trivial_comodule(ga)), trivial_comodule(ga, 3)]
    pairs = []
    for group in (gm_list, gl_list, ga_list):
        conj = [conjugate(W, random_invertible(rng, W.dim)) for W in group]
        pairs.append(group + conj)
    for k in range(20):
        group = pairs[k % 3]
        V, W = rng.choice(group), rng.choice(group)
        out.append((V, W))
    return out


def sympy_hom_system(V, W, rng):
    """Dense equations for ``A_W phi = phi A_V`` built in sympy, rows shuffled."""
    n, m = V.dim, W.dim
    unknowns = sympy.symbols(f"p0:{m * n}")
    phi = sympy.Matrix(m, n, unknowns)
    AV = sympy.Matrix(n, n, [to_sympy(x) for row in V.matrix for x in row])
    AW = sympy.Matrix(m, m, [to_sympy(x) for row in W.matrix for x in row])
    eqs = []
    for e in (AW * phi - phi * AV):
        num = sympy.numer(sympy.together(e))
        gens = sorted(num.free_symbols - set(unknowns), key=str)
        if not gens:
            eqs.append(sympy.expand(num))
            continue
        eqs.extend(sympy.Poly(num, *gens).coeffs())
    rng.shuffle(eqs)
    M, _ = sympy.linear_eq_to_matrix(eqs, unknowns) if eqs else (sympy.zeros(0, m * n), None)
    return M, unknowns


def test_hom_solver_against_dense_resolve():
    rng = random.Random(4)
    for V, W in _pool():
        basis = hom_basis(V, W)
        M, unknowns = sympy_hom_system(V, W, rng)
        null = M.nullspace() if M.rows else [sympy.eye(len(unknowns))[:, k] for k in range(len(unknowns))]
        assert len(null) == len(basis), (V.name, W.name)
        for phi in basis:
            vec = sympy.Matrix([sympy.Rational(c.numerator, c.denominator)
                                for row in phi.matrix for c in row])
            assert (M * vec).is_zero_matrix if M.rows else True
        # the same system in a shuffled monomial order has the same solution space
        salt = rng.random()
        rows, nunk = intertwining_system(V, W, order=lambda mono: hash((mono, salt)))
        other = linalg.nullspace(rows, nunk)
        ours = [[c for row in phi.matrix for c in row] for phi in basis]
        assert linalg.rref(other)[0] == linalg.rref(ours)[0] if ours else not other


def test_subquotient_certificate():
    U = unipotent()
    one = trivial_comodule(GM, 1)
    inj = ComoduleMorphism(one, U, [[1], [0]])
    assert verify_subquotient(inj, ComoduleMorphism(U, U, [[1, 0], [0, 1]])).passed
    bad = ComoduleMorphism(one, U, [[0], [1]])
    rep = verify_subquotient(bad, ComoduleMorphism(U, U, [[1, 0], [0, 1]]))
    assert not rep.passed


# -- splitting criterion --------------------------------------------------------------

@pytest.mark.parametrize("p", [1, 2, 3])
def test_constant_group_splits(p):
    V = standard_comodule(builtin("gm-constant"))
    rep = constant_split_check(V, p, seed=1)
    assert rep.passed and rep.data["result"] == "splits"
    W = [[parse_expr(c, builtin("gm")).constant_value() for c in row] for row in rep.data["witness"]]
    phi = ComoduleMorphism(direct_sum(*([V] * (p + 1))), prolong(V, p), W)
    assert verify_intertwiner(phi).passed and linalg.det(W) != 0


def test_gm_over_time_field_certified_no():
    rep = constant_split_check(standard_comodule(builtin("gm", field=QT)), 1)
    assert not rep.passed
    assert rep.code == "NoSplitting" and rep.data["certified"]


def test_trivial_splits_and_seed_determinism():
    for p in (1, 2, 3):
        assert constant_split_check(standard_comodule(builtin("trivial")), p).passed
    V = standard_comodule(builtin("gl2-constant"))
    a = constant_split_check(V, 1, seed=5).to_dict()
    b = constant_split_check(V, 1, seed=5).to_dict()
    assert a == b and a["status"] == "pass"
    with pytest.raises(ValueError):
        constant_split_check(V, 0)


# -- representative functions -------------------------------------------------------

def test_orbit_of_log_derivative():
    om = orbit_module(GM, parse_expr("d(y)/y", GM))
    V = om.comodule
    assert V.dim == 2
    assert [format_element(x) for x in om.basis] == ["d(y)/y", "1"]
    assert [[format_element(x) for x in row] for row in V.matrix] == [["1", "0"], ["d(y)/y", "1"]]
    assert check_comodule(V).passed


def test_orbit_errors_and_small_cases():
    with pytest.raises(ZeroElement):
        orbit_module(GM, GM.zero())
    assert orbit_module(GM, GM.gen("y")).comodule.dim == 1
    assert orbit_module(GL2, GL2.gen("X11")).comodule.dim == 2


@pytest.mark.parametrize("A,text", [(GM, "d(y)/y"), (GM, "y"), (GM, "y + d(y)/y + 3"),
                                    (GL2, "X12"), (GL2, "X11*X22"), (GM, "d^2(y)/y")])
def test_coordinate_representation(A, text):
    f = parse_expr(text, A)
    W, C, (row, col), coeff = coordinate_rep(orbit_module(A, f))
    assert row == 1
    assert W.matrix[0][col - 1] * coeff == f
    assert check_comodule(W).passed


def test_coordinate_rep_of_log_derivative():
    W, C, index, coeff = coordinate_rep(orbit_module(GM, parse_expr("d(y)/y", GM)))
    assert C == [[1, 0], [0, 1]]
    assert index == (1, 2) and coeff == 1
    assert format_element(W.matrix[0][1]) == "d(y)/y"


def test_regular_embedding_text():
    rep = regular_embedding(unipotent())
    assert rep.passed
    assert rep.data["rho"][1] == "ρ(u2) = u1 ⊗ (d(y)/y) + u2 ⊗ 1"


# -- L spaces -------------------------------------------------------------------------

@pytest.mark.parametrize("p", [0, 1])
def test_linear_space_isomorphism(p):
    L = linear_comodule_L(2, 0, 1, p)
    assert L.iso_report.passed
    assert L.isomorphism.rank() == 4 * (p + 1)
    assert check_comodule(L.comodule).passed


def test_linear_space_powers_and_twists():
    L = linear_comodule_L(2, 1, 2, 1)
    assert L.comodule.dim == comb(8 + 1, 2)
    assert check_comodule(L.comodule).passed
    cumulative = linear_comodule_L(2, 0, 2, 0, homogeneous=False)
    assert cumulative.comodule.dim == 1 + 4 + 10
    with pytest.raises(BoundsExceeded):
        linear_comodule_L(4, 0, 1, 1)
