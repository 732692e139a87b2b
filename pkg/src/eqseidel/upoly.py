"""Dense univariate polynomials over Q as coefficient lists, lowest degree first."""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def to_univariate(poly: Poly, var):
    out = []
    for mono, c in poly.terms.items():
        e = dict(mono).get(var, 0)
        while len(out) <= e:
            out.append(Fraction(0))
        out[e] += c
    return _trim(out)


def poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        _trim(a)
    return _trim(q), a


def poly_gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def _derivative(p):
    return _trim([i * c for i, c in enumerate(p)][1:])


def squarefree_part(p):
    """``p / gcd(p, p')``, made monic."""
    g = poly_gcd(p, _derivative(p))
    q, rem = poly_divmod(p, g)
    assert not rem
    return [c / q[-1] for c in q]


def derivative(p):
    return _derivative(p)


def from_laurent(poly: Poly, var):
    """``(coefficients, shift)`` with ``poly = var^shift * sum c_i var^i``."""
    exps = [dict(m).get(var, 0) for m in poly.terms]
    shift = min(exps) if exps else 0
    out = [Fraction(0)] * ((max(exps) - shift + 1) if exps else 0)
    for mono, c in poly.terms.items():
        out[dict(mono).get(var, 0) - shift] += c
    return _trim(out), shift


def to_poly(coeffs, var, shift=0):
    return Poly({((var, i + shift),) if i + shift else (): c for i, c in enumerate(coeffs) if c})
