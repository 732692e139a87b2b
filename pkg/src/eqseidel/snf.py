"""Smith normal form of integer matrices, with the left and right transforms."""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M, src, dst, c):
    """row[dst] += c * row[src]"""
    if c:
        M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]


def _add_col(M, src, dst, c):
    if c:
        for row in M:
            row[dst] += c * row[src]


def smith(A):
    """Return ``(U, S, V)`` with ``U * A * V == S``, U and V unimodular.

    ``S`` is diagonal with non-negative entries ``d_1 | d_2 | ...``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    S = [list(map(int, row)) for row in A]
    U, V = _identity(m), _identity(n)
    t = 0
    while t < min(m, n):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        _swap_rows(S, t, i)
        _swap_rows(U, t, i)
        _swap_cols(S, t, j)
        _swap_cols(V, t, j)
        done = False
        while not done:
            done = True
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    c = S[i][t] // p
                    _add_row(S, t, i, -c)
                    _add_row(U, t, i, -c)
                    if S[i][t]:
                        _swap_rows(S, t, i)
                        _swap_rows(U, t, i)
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, n):
                if S[t][j]:
                    c = S[t][j] // p
                    _add_col(S, t, j, -c)
                    _add_col(V, t, j, -c)
                    if S[t][j]:
                        _swap_cols(S, t, j)
                        _swap_cols(V, t, j)
                        done = False
                        break
            if not done:
                continue
            # the pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is not None:
                _add_row(S, bad[0], t, 1)
                _add_row(U, bad[0], t, 1)
                done = False
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, S, V


def invariant_factors(A):
    """Nonzero diagonal entries of the Smith form."""
    _, S, _ = smith(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def rank(A):
    if not A or not A[0]:
        return 0
    return len(invariant_factors(A))


def mat_mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]
