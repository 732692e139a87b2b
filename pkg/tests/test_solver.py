import itertools
from fractions import Fraction

import pytest
import sympy

from closed_forms import projective_product, projective_seidel, taut_product, taut_seidel
from conftest import matrix_to_sympy, to_sympy
from eqseidel.catalog import builtin
from eqseidel.errors import DegreeViolation, Inconsistent, Stuck
from eqseidel.poly import Poly, unknown_var
from eqseidel.seidel import intertwining_residual
from eqseidel.module import ModuleElem
from eqseidel.product import product_expand
from eqseidel.solver import (
    ConstraintSystem,
    Equation,
    Slot,
    ansatz_build,
    extract_constraints,
    induct_over_r,
    legal_slots,
    solve_sequential,
)


def var(name, level):
    return Poly.var(unknown_var(name, level))


def sym(name, level):
    return sympy.Symbol(f"?{name}@{level}")


def equations_sympy(system):
    """Equations with seeds substituted, as a set of sympy expressions up to sign."""
    subs = {sympy.Symbol(v): sympy.Rational(c) for v, c in system.seeds.items()}
    out = set()
    for eq in system.equations:
        e = sympy.expand(to_sympy(eq.poly).subs(subs))
        if e != 0:
            lead = sympy.Poly(e, *sorted(e.free_symbols, key=str)).LC() if e.free_symbols else e
            out.add(sympy.expand(e if lead > 0 else -e))
    return out


# ansatz ------------------------------------------------------------------

def test_projective_plane_unknowns():
    a = ansatz_build(builtin("projective_space(2)"))
    assert set(a.unknowns) == {"alpha", "gamma", "A", "B", "F"}


def test_taut_2_unknowns():
    s = builtin("taut_line_bundle(2)")
    a = ansatz_build(s)
    seeded = {seed.name for seed in a.seeds if seed.level is None}
    assert set(a.unknowns) - seeded == {"c", "d"}
    assert seeded == {"diag0", "diag1", "diag2"}


def test_empty_structural_zeros_opens_every_slot():
    s = builtin("projective_space(2)")
    a = ansatz_build(s, structural_zeros=[])
    slots = legal_slots(s.basis, s.config, "product", 2, skip_sources=("e0",))
    slots += legal_slots(s.basis, s.config, "seidel", 4)
    assert len(a.unknowns) == len(slots)


def test_illegal_structural_zero():
    s = builtin("projective_space(2)")
    with pytest.raises(DegreeViolation):
        ansatz_build(s, structural_zeros=[Slot("seidel", "e0", "e0", 1, 0)])


# constraint extraction -----------------------------------------------------

@pytest.mark.parametrize("rr", range(4))
def test_projective_plane_x_e1(rr):
    a = ansatz_build(builtin("projective_space(2)"))
    got = equations_sympy(extract_constraints(a, rr, inputs=["e1"]))
    alpha = 0 if rr == 0 else sym("alpha", rr)  # alpha@0 is seeded
    assert got == {sym("F", rr) + alpha - 1}


@pytest.mark.parametrize("rr", range(4))
def test_projective_plane_x_e0(rr):
    a = ansatz_build(builtin("projective_space(2)"))
    got = equations_sympy(extract_constraints(a, rr, inputs=["e0"]))
    A, alpha_next, gamma_next = sym("A", rr), sym("alpha", rr + 1), sym("gamma", rr + 1)
    assert got == {gamma_next + A, A * alpha_next + (rr + 1) ** 2}


def test_identically_zero_residual_gives_empty_system():
    assert extract_constraints(ansatz_build(builtin("complex_plane")), 3).equations == []
    # once every unknown is known, nothing is left to solve
    s = builtin("projective_space(2)")
    solved = induct_over_r(s, 3)
    system = extract_constraints(ansatz_build(s), 2, known=solved.values)
    assert equations_sympy(system) == set()


def test_listing_and_json():
    a = ansatz_build(builtin("projective_space(2)"))
    system = extract_constraints(a, 1, inputs=["e1"])
    assert "F@1 + alpha@1 - 1 = 0" in system.listing() or "-1 + F@1 + alpha@1 = 0" in system.listing()
    data = system.to_json()
    assert data["level"] == 1 and set(data["unknowns"]) == {"F@1", "alpha@1"}


# solving -------------------------------------------------------------------

@pytest.mark.parametrize("rr", range(5))
def test_projective_plane_level_step(rr):
    a = ansatz_build(builtin("projective_space(2)"))
    known = {unknown_var("alpha", rr): Fraction(-rr), unknown_var("gamma", rr): Fraction(-rr)}
    got = solve_sequential(extract_constraints(a, rr, known=known))
    assert got[unknown_var("F", rr)] == rr + 1
    assert got[unknown_var("A", rr)] == rr + 1
    assert got[unknown_var("alpha", rr + 1)] == -(rr + 1)
    assert got[unknown_var("gamma", rr + 1)] == -(rr + 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_taut_coefficients(n):
    coeffs = induct_over_r(builtin(f"taut_line_bundle({n})"), 4).coefficients()
    assert all(coeffs["d"][rr] == -(rr + 1) for rr in range(5))
    assert all(coeffs["c"][rr] == rr for rr in range(6))


def test_square_is_stuck():
    with pytest.raises(Stuck) as info:
        solve_sequential(ConstraintSystem([Equation(var("X", 0) * var("X", 0) - 1)]))
    assert "X@0^2" in str(info.value)


def test_inconsistent():
    x = var("X", 0)
    with pytest.raises(Inconsistent):
        solve_sequential(ConstraintSystem([Equation(x - 1), Equation(x - 2)]))


def test_repeated_root_is_accepted():
    x = var("X", 0)
    assert solve_sequential(ConstraintSystem([Equation(x * x - x * 2 + 1)])) == {unknown_var("X", 0): 1}


def test_stuck_reports_level():
    s = builtin("projective_space(2)")
    with pytest.raises(Stuck) as info:
        induct_over_r(s, 2, ansatz=ansatz_build(s, structural_zeros=[]))
    assert info.value.level == 0


# induction against hand-entered closed forms -------------------------------

def _check_against(solved, product, seidel, n, r_max):
    for rr in range(r_max + 1):
        assert matrix_to_sympy(solved.product_at(rr).L) == product(n, rr).expand()
        assert matrix_to_sympy(solved.seidel_at(rr)) == seidel(n, rr).expand()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_induction(n):
    solved = induct_over_r(builtin(f"projective_space({n})"), 5)
    _check_against(solved, projective_product, projective_seidel, n, 5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_taut_induction(n):
    solved = induct_over_r(builtin(f"taut_line_bundle({n})"), 5)
    _check_against(solved, taut_product, taut_seidel, n, 5)


@pytest.mark.parametrize("sid", ["projective_space(2)", "projective_space(3)", "taut_line_bundle(2)"])
def test_round_trip_residual_zero(sid):
    s = builtin(sid)
    solved = induct_over_r(s, 5)
    for rr in range(6):
        P, P_next = product_expand(solved.product_at(rr)), product_expand(solved.product_at(rr + 1))
        for lab in s.basis.labels:
            x = ModuleElem.basis_vector(s.basis, s.config, lab)
            assert intertwining_residual(solved.seidel_at(rr), P, P_next, x).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_r0_solution_has_no_u_terms(n):
    L = induct_over_r(builtin(f"projective_space({n})"), 0).product_at(0).L
    assert all(b == 0 for row in L.matrix for e in row for (_, b) in e.terms)


@pytest.mark.parametrize("sid", ["projective_space(2)", "projective_space(3)", "taut_line_bundle(2)"])
def test_input_order_does_not_matter(sid):
    s = builtin(sid)
    base = induct_over_r(s, 3).values
    for perm in itertools.permutations(s.basis.labels):
        assert induct_over_r(s, 3, inputs=list(perm)).values == base


def test_deterministic():
    s = builtin("projective_space(3)")
    first = induct_over_r(s, 4)
    second = induct_over_r(s, 4)
    assert first.values == second.values
    assert list(first.values) == list(second.values)
    assert first.listing() == second.listing()
