"""A small lex-order Buchberger over Q, used as the solver's last resort.

Only meant for the handful of low-degree equations in a few unknowns that
remain once every linear pivot is exhausted.
"""

from __future__ import annotations

from fractions import Fraction


class TooLarge(Exception):
    pass


def _lead(p):
    m = max(p)
    return m, p[m]


def _sub_scaled(p, q, coeff, shift):
    """``p - coeff * x^shift * q``."""
    out = dict(p)
    for m, c in q.items():
        mm = tuple(a + b for a, b in zip(m, shift))
        v = out.get(mm, 0) - coeff * c
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _reduce(p, basis):
    p = dict(p)
    rem = {}
    while p:
        m, c = _lead(p)
        for g in basis:
            gm, gc = _lead(g)
            if _divides(gm, m):
                p = _sub_scaled(p, g, c / gc, tuple(x - y for x, y in zip(m, gm)))
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _monic(p):
    _, c = _lead(p)
    return {m: v / c for m, v in p.items()}


def _spoly(f, g):
    fm, fc = _lead(f)
    gm, gc = _lead(g)
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    left = {tuple(a + b for a, b in zip(m, (l - x for l, x in zip(lcm, fm)))): c / fc for m, c in f.items()}
    return _sub_scaled(left, g, 1 / gc, tuple(l - x for l, x in zip(lcm, gm)))


def groebner_lex(polys, max_pairs=4000):
    """Reduced lex basis of exponent-dict polynomials (first variable largest)."""
    basis = [_monic(p) for p in polys if p]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    seen = 0
    while pairs:
        i, j = pairs.pop()
        seen += 1
        if seen > max_pairs:
            raise TooLarge("Buchberger pair budget exhausted")
        fm, gm = _lead(basis[i])[0], _lead(basis[j])[0]
        if all(a == 0 or b == 0 for a, b in zip(fm, gm)):
            continue  # coprime leading monomials
        h = _reduce(_spoly(basis[i], basis[j]), basis)
        if h:
            basis.append(_monic(h))
            k = len(basis) - 1
            pairs.extend((k, m) for m in range(k))
    # inter-reduce
    basis.sort(key=lambda p: _lead(p)[0])
    out = []
    for p in basis:
        if any(_divides(_lead(g)[0], _lead(p)[0]) for g in out):
            continue
        out.append(p)
    reduced = []
    for i, p in enumerate(out):
        r = _reduce(p, out[:i] + out[i + 1:])
        if r:
            reduced.append(_monic(r))
    return sorted(reduced, key=lambda p: _lead(p)[0])


def to_dicts(polys, variables):
    """Convert Polys in ``variables`` (and constants) to exponent dicts."""
    index = {v: i for i, v in enumerate(variables)}
    out = []
    for p in polys:
        d = {}
        for mono, c in p.terms.items():
            exp = [0] * len(variables)
            for v, e in mono:
                exp[index[v]] = e
            d[tuple(exp)] = Fraction(c)
        out.append(d)
    return out


def univariate_in_last(basis, nvars):
    """Coefficient list (lowest first) of a basis element in the last variable only."""
    for p in basis:
        if all(all(e == 0 for e in m[:-1]) for m in p):
            deg = max(m[-1] for m in p)
            coeffs = [Fraction(0)] * (deg + 1)
            for m, c in p.items():
                coeffs[m[-1]] = c
            return coeffs
    return None
