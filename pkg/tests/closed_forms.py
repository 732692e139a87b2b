"""Closed forms typed in by hand as sympy matrices (column k = image of e_k)."""

import sympy

from conftest import q, u


def projective_product(n, r):
    L = sympy.zeros(n + 1, n + 1)
    L[1, 0] = 1
    for k in range(1, n):
        L[k + 1, k] = 1
        L[k, k] = -r * u
    L[0, n] = q
    L[n, n] = -r * u
    return L


def projective_seidel(n, r):
    S = sympy.zeros(n + 1, n + 1)
    for l in range(n + 1):
        S[l, 0] = ((r + 1) * u) ** (n - l)
    for k in range(1, n + 1):
        for l in range(k):
            S[l, k] = ((r + 1) * u) ** (k - 1 - l) * q
    return S


def taut_product(n, r):
    L = sympy.zeros(n + 1, n + 1)
    for k in range(n):
        L[k + 1, k] = 1
    L[1, n] += -q
    L[0, n] += r * u * q
    return L


def taut_seidel(n, r):
    S = sympy.zeros(n + 1, n + 1)
    k_u = (r + 1) * u
    for k in range(n):
        S[k + 1, k] = -1
        S[k, k] = k_u
    S[1, n] += q
    S[n, n] += k_u
    S[0, n] += -k_u * q
    return S
