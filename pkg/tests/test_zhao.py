import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy import ZZ
from sympy.matrices.normalforms import smith_normal_form

from eqseidel.errors import TruncationTooSmall
from eqseidel.limit import recognize_rank_one
from eqseidel.seidel import seidel_instantiate
from eqseidel.catalog import builtin
from eqseidel.snf import invariant_factors, mat_mul, rank, smith
from eqseidel.zhao import (
    build_complex,
    cohomology,
    cohomology_csv,
    cohomology_in_degree,
    continuation_action,
    continuation_factors,
    flip_sign_fault,
    unclosed_fault,
    verify_d_squared,
)


def sympy_invariants(A):
    if not A or not A[0]:
        return []
    S = smith_normal_form(sympy.Matrix(A), domain=ZZ)
    return [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i]]


# the complex ------------------------------------------------------------------

def test_s1_differential():
    C = build_complex(1, 3)
    assert C.d((0, 1)) == {(0, 0): 1, (1, 2): -1}
    assert C.degree_of((0, 1)) == -1


@pytest.mark.parametrize("s", range(4))
def test_even_generators_are_closed(s):
    C = build_complex(s, 4)
    assert all(not C.d(g) for g in C.generators if g[1] % 2 == 0)


def test_s0_differential_vanishes():
    C = build_complex(0, 5)
    assert all(not C.d(g) for g in C.generators)


def test_bad_parameters():
    with pytest.raises(ValueError):
        build_complex(-1, 3)
    with pytest.raises(ValueError):
        build_complex(1, 0)


@pytest.mark.parametrize("s,K", [(s, K) for s in range(5) for K in range(2, 11)])
def test_d_squared(s, K):
    assert verify_d_squared(build_complex(s, K)).passed


@pytest.mark.parametrize("s,K", [(2, 5), (3, 8)])
def test_d_squared_matrix_oracle(s, K):
    C = build_complex(s, K)
    for D in C.degrees():
        first, second = C.matrix(D), C.matrix(D + 1)
        if first and first[0] and second and second[0]:
            product = sympy.Matrix(second) * sympy.Matrix(first)
            # rows for targets with k + 1 >= K see the truncation
            bad = [i for i, g in enumerate(C.in_degree(D + 2)) if any(product[i, :])]
            assert all(C.in_degree(D + 2)[i][0] >= K for i in bad)


@pytest.mark.parametrize("j", [2, 4])
def test_injected_fault_is_located(j):
    C = build_complex(2, 5, fault=unclosed_fault(j, target_k=1))
    rep = verify_d_squared(C)
    assert not rep.passed
    heads = [f.split(" = ")[0] for f in rep.failures]
    assert f"d^2 (c_1, x_{j})" in heads
    # the other failures are the chains whose image runs through the broken generator
    assert all(h == f"d^2 (c_1, x_{j})" or f"(c_1, x_{j - 1})" in f for h, f in zip(heads, rep.failures))


def test_sign_flip_is_invisible_to_d_squared():
    # even generators are closed, so d^2 vanishes for any signs
    C = build_complex(2, 5, fault=flip_sign_fault(3))
    assert verify_d_squared(C).passed
    assert [h.rank for h in cohomology(C).values()] == [h.rank for h in cohomology(build_complex(2, 5)).values()]


@pytest.mark.parametrize("s", [0, 2])
def test_sign_flip_is_caught_by_continuation(s):
    f = continuation_action(s, fault=flip_sign_fault(2 * s + 1))
    assert f.terms == {(0, 1): -(s + 1)}


def test_json_export():
    data = build_complex(1, 2).to_json()
    assert data["s"] == 1 and len(data["generators"]) == 9
    assert {"source": "(c_0, x_1)", "image": {"(c_0, x_0)": 1, "(c_1, x_2)": -1}} in data["differential"]


# cohomology -------------------------------------------------------------------

@pytest.mark.parametrize("s,K", [(1, 6), (2, 8), (3, 9), (4, 10)])
def test_rank_pattern(s, K):
    C = build_complex(s, K)
    table = cohomology(C)
    assert min(table) == -2 * s
    for D, h in table.items():
        assert h.rank == (1 if D % 2 == 0 else 0)
        assert h.torsion == []


def test_s1_degrees_minus_two_to_four():
    table = cohomology(build_complex(1, 6), range(-2, 5))
    assert [table[D].rank for D in range(-2, 5)] == [1, 0, 1, 0, 1, 0, 1]


def test_s0_is_polynomial_ring_on_one_generator():
    table = cohomology(build_complex(0, 5))
    for D, h in table.items():
        if D % 2 == 0:
            assert h.generators == [{(D // 2, 0): 1}]


@pytest.mark.parametrize("s,K", [(1, 6), (2, 8)])
def test_ranks_against_sympy(s, K):
    C = build_complex(s, K)
    for D in range(-2 * s, C.max_valid_degree() + 1):
        m = len(C.in_degree(D))
        out_rank = sympy.Matrix(C.matrix(D)).rank() if C.matrix(D) and C.matrix(D)[0] else 0
        in_rank = sympy.Matrix(C.matrix(D - 1)).rank() if C.matrix(D - 1) and C.matrix(D - 1)[0] else 0
        assert cohomology_in_degree(C, D).rank == m - out_rank - in_rank
        # the kernel is saturated, so H is torsion-free iff d into degree D has unit invariants
        assert set(sympy_invariants(C.matrix(D - 1))) <= {1}


def test_truncation_too_small():
    C = build_complex(2, 4)
    with pytest.raises(TruncationTooSmall):
        cohomology_in_degree(C, C.max_valid_degree() + 1)


def test_cohomology_csv():
    text = cohomology_csv(cohomology(build_complex(1, 4)))
    lines = text.splitlines()
    assert lines[0] == "degree,rank,torsion,generator"
    assert lines[1].startswith("-2,1,,")


# continuation -----------------------------------------------------------------

@pytest.mark.parametrize("s", range(5))
def test_continuation_factor(s):
    f = continuation_action(s)
    assert f.terms == {(0, 1): s + 1}


@pytest.mark.parametrize("s", [2, 4])
def test_continuation_chase_oracle(s):
    # (c_0, x_2s) - (s+1) (c_1, x_2s+2) must be a boundary in the slope s+1 complex
    C = build_complex(s + 1, 6)
    D = -2 * s
    gens = C.in_degree(D)
    v = sympy.Matrix([{(0, 2 * s): 1, (1, 2 * s + 2): -(s + 1)}.get(g, 0) for g in gens])
    B = sympy.Matrix(C.matrix(D - 1))
    sol, params = B.gauss_jordan_solve(v)
    sol = sol.subs({p: 0 for p in params})
    assert all(x.is_integer for x in sol)


def test_continuation_other_k():
    assert continuation_action(2, k=2).terms == {(0, 1): 3}


def test_limit_is_rationals():
    factors = continuation_factors(4)
    assert recognize_rank_one(factors) == "Q[u, u^-1]"


@pytest.mark.parametrize("r", range(5))
def test_matches_complex_plane_seidel_map(r):
    M = seidel_instantiate(builtin("complex_plane").seidel_family(), r)
    assert M.matrix[0][0].terms == continuation_action(r).terms


# smith normal form ------------------------------------------------------------

matrices = st.integers(1, 5).flatmap(
    lambda rows: st.integers(1, 5).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(-9, 9), min_size=cols, max_size=cols), min_size=rows, max_size=rows
        )
    )
)


def _det(M):
    return int(sympy.Matrix(M).det())


@given(matrices)
def test_smith_against_sympy(A):
    U, S, V = smith(A)
    assert mat_mul(mat_mul(U, A), V) == S
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert [abs(d) for d in invariant_factors(A)] == sympy_invariants(A)
    assert rank(A) == sympy.Matrix(A).rank()


def test_smith_example():
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]
