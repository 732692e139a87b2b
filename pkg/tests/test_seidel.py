import dataclasses
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import matrix_to_sympy, q, r, to_sympy, u
from eqseidel.catalog import builtin, builtin_ids, builtin_text, parse_space
from eqseidel.errors import BasisMismatch, NonIntegralWeight, SemanticError
from eqseidel.module import GradedMap, ModuleElem, check_grading, map_apply, map_compose
from eqseidel.ring import RingElem
from eqseidel.seidel import (
    WeightRule,
    intertwining_residual,
    seidel_instantiate,
    verify_inverse_pair,
    weighted_seidel,
)


def basis_vector(spec, label):
    return ModuleElem.basis_vector(spec.basis, spec.config, label)


def vec(spec, mapping):
    return ModuleElem.from_dict(spec.basis, spec.config, mapping)


def test_complex_plane_at_r2():
    M = seidel_instantiate(builtin("complex_plane").seidel_family(), 2)
    assert to_sympy(M.matrix[0][0]) == 3 * u
    assert M.shift == 2 and M.levels == (2, 3)


def test_complex_space_3_at_r0():
    M = seidel_instantiate(builtin("complex_space(3)").seidel_family(), 0)
    assert to_sympy(M.matrix[0][0]) == u**3
    assert M.shift == 6


def test_taut_2_en_column_at_r1():
    s = builtin("taut_line_bundle(2)")
    c = s.config
    got = seidel_instantiate(s.seidel_family(), 1).column("e2")
    want = vec(s, {
        "e1": RingElem.q(c),
        "e2": RingElem.monomial(c, 2, 0, 1),
        "e0": RingElem.monomial(c, -2, 1, 1),
    })
    assert got == want


def test_negative_level_rejected():
    with pytest.raises(ValueError):
        seidel_instantiate(builtin("complex_plane").seidel_family(), -1)


@pytest.mark.parametrize("sid", builtin_ids(4))
def test_instances_are_graded(sid):
    F = builtin(sid).seidel_family()
    for rr in range(6):
        M = F.instantiate(rr)
        assert M.shift == F.maslov_shift
        assert check_grading(M).passed


@pytest.mark.parametrize("sid", builtin_ids(4))
def test_u_zero_is_r_independent(sid):
    F = builtin(sid).seidel_family()
    base = F.nonequivariant()
    for rr in range(6):
        assert F.instantiate(rr).at_u_zero() == base


# weighted maps ------------------------------------------------------------

def test_weighted_projective_plane():
    s = builtin("projective_space(2)")
    for rr in range(4):
        W = weighted_seidel(s.seidel_family().instantiate(rr))
        assert map_apply(W, basis_vector(s, "e0")).is_zero()
        assert map_apply(W, basis_vector(s, "e1")) == vec(s, {"e0": RingElem.q(s.config)})
        # degree 2 weight keeps the codomain degree
        assert W.shift == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weighted_taut_vanishes_below_top(n):
    s = builtin(f"taut_line_bundle({n})")
    W = weighted_seidel(s.seidel_family().instantiate(2))
    for k in range(n):
        assert map_apply(W, basis_vector(s, f"e{k}")).is_zero()


def test_zero_weight_gives_zero_map():
    M = builtin("projective_space(3)").seidel_family().instantiate(1)
    W = weighted_seidel(M, WeightRule(0, 0))
    assert all(not e for row in W.matrix for e in row)


def test_non_integral_weight():
    M = builtin("projective_space(2)").seidel_family().instantiate(0)
    with pytest.raises(NonIntegralWeight):
        weighted_seidel(M, WeightRule(Fraction(1, 2), 0))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
       st.sampled_from(builtin_ids(3)), st.integers(0, 5))
def test_weighting_is_additive(s1, o1, s2, o2, sid, rr):
    M = builtin(sid).seidel_family().instantiate(rr)
    w1, w2 = WeightRule(s1, o1), WeightRule(s2, o2)
    left = weighted_seidel(M, w1 + w2)
    a, b = weighted_seidel(M, w1), weighted_seidel(M, w2)
    for l, row in enumerate(left.matrix):
        for k, e in enumerate(row):
            assert e == a.matrix[l][k] + b.matrix[l][k]


# intertwining residual ---------------------------------------------------

def residual(spec, x, rr):
    return intertwining_residual(
        spec.seidel_family(), spec.table_at(rr), spec.table_at(rr + 1), x, r=rr
    )


def test_residual_projective_plane_e2_r3():
    s = builtin("projective_space(2)")
    assert residual(s, basis_vector(s, "e2"), 3).is_zero()


def test_residual_of_zero():
    s = builtin("taut_line_bundle(2)")
    assert residual(s, ModuleElem.zero(s.basis, s.config), 1).is_zero()


def test_residual_taut_2_against_hand_expansion():
    # matrices typed in by hand, independent of the catalog
    def product(level):
        return sympy.Matrix([[0, 0, level * u * q], [1, 0, -q], [0, 1, 0]])

    k = (r + 1) * u
    S = sympy.Matrix([[k, 0, -k * q], [-1, k, q], [0, -1, k]])
    W = sympy.Matrix([[0, 0, -k * q], [0, 0, q], [0, 0, 0]])  # q-exponent weights
    x = sympy.Matrix([0, 0, 1])
    oracle = S * product(r) * x - product(r + 1) * S * x - u * W * x
    assert sympy.expand(oracle.subs(r, 0)) == sympy.zeros(3, 1)

    s = builtin("taut_line_bundle(2)")
    assert matrix_to_sympy(s.seidel_family().instantiate(0)) == S.subs(r, 0)
    assert residual(s, basis_vector(s, "e2"), 0).is_zero()


@pytest.mark.parametrize("sid", [sid for sid in builtin_ids(4) if "e1" in builtin(sid).basis.labels])
def test_residual_vanishes_on_builtins(sid):
    s = builtin(sid)
    for rr in range(6):
        for lab in s.basis.labels:
            assert residual(s, basis_vector(s, lab), rr).is_zero(), (rr, lab)


def test_residual_detects_wrong_seidel_map():
    s = builtin("projective_space(2)")
    M = s.seidel_family().instantiate(1)
    bad = M.map_entries(lambda e: e)
    rows = [list(row) for row in bad.matrix]
    rows[0][0] = rows[0][0] + RingElem.u(s.config, 2)  # B off by one
    bad = dataclasses.replace(bad, matrix=tuple(tuple(row) for row in rows))
    res = intertwining_residual(bad, s.table_at(1), s.table_at(2), basis_vector(s, "e0"))
    assert not res.is_zero()


def test_residual_basis_mismatch():
    s, t = builtin("projective_space(2)"), builtin("projective_space(3)")
    with pytest.raises(BasisMismatch):
        intertwining_residual(
            s.seidel_family().instantiate(0), t.table_at(0), t.table_at(1), basis_vector(t, "e0")
        )


def test_residual_needs_degree_two_class():
    s = builtin("projective_space(2)")
    args = (s.seidel_family(), s.table_at(0), s.table_at(1), basis_vector(s, "e0"))
    with pytest.raises(ValueError):
        intertwining_residual(*args, alpha_plus="e2", r=0)


# inverse pairs -----------------------------------------------------------

@pytest.mark.parametrize("rr", range(5))
def test_projective_plane_inverse_pair(rr):
    s = builtin("projective_space(2)")
    assert verify_inverse_pair(s.seidel_family(), s.inverse_family(), rr).passed


def test_complex_plane_inverse_is_rejected():
    text = builtin_text("complex_plane").replace(
        "[limit]", "[inverse]\nshift = -2\ne0 -> u^-1*e0\n\n[limit]"
    )
    with pytest.raises(SemanticError, match="localized"):
        parse_space(text)


def test_perturbed_inverse_fails_with_location():
    text = builtin_text("projective_space(2)").replace("e0 -> q^-1*e1", "e0 -> -q^-1*e1")
    s = parse_space(text)
    rep = verify_inverse_pair(s.seidel_family(), s.inverse_family(), 0)
    assert not rep.passed
    assert any("entry (e" in f for f in rep.failures)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_inverse_composite_is_identity(n):
    s = builtin(f"projective_space({n})")
    for rr in range(4):
        C = map_compose(s.inverse_family().instantiate(rr), s.seidel_family().instantiate(rr))
        assert C == GradedMap.identity(s.basis, s.config, rr)
