"""Sparse polynomials over Q in named variables.

This is the symbolic layer shared by the space templates (variables ``q``,
``u``, the action level ``r`` and unknowns ``?name``) and by the solver
(leveled unknowns ``?name@3``).  ``q`` and ``u`` may carry negative
exponents; every other variable is polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import IllegalExponent, NotDivisible
from .ring import RingElem, coeff_text, render_terms

Q, U, R = "q", "u", "r"


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        s = d.get(v, 0) + e
        if s:
            d[v] = s
        else:
            del d[v]
    return tuple(sorted(d.items()))


def unknown_var(name, level=None):
    return f"?{name}" if level is None else f"?{name}@{level}"


def parse_unknown(var):
    """``'?alpha@3'`` -> ``('alpha', 3)``; ``'?alpha'`` -> ``('alpha', None)``."""
    body = var[1:]
    if "@" in body:
        name, level = body.split("@")
        return name, int(level)
    return body, None


def is_unknown(var):
    return var.startswith("?")


def var_sort_key(var):
    """Unknowns order by (level, name); plain symbols come first."""
    if is_unknown(var):
        name, level = parse_unknown(var)
        return (1, -1 if level is None else level, name)
    return (0, 0, var)


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, name, exp=1):
        return cls({((name, exp),): 1}) if exp else cls.const(1)

    @classmethod
    def from_ring(cls, x: RingElem):
        out = {}
        for (a, b), c in x.terms.items():
            mono = []
            if a:
                mono.append((Q, a))
            if b:
                mono.append((U, b))
            out[tuple(mono)] = c
        return cls(out)

    @staticmethod
    def lift(x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, RingElem):
            return Poly.from_ring(x)
        if isinstance(x, Rational):
            return Poly.const(x)
        return None

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = Poly.lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = Poly.lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Poly.lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = Poly.lift(other)
        if other is None:
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = Poly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = Poly.lift(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # inspection -------------------------------------------------------
    def variables(self):
        return {v for m in self.terms for v, _ in m}

    def unknowns(self):
        return {v for v in self.variables() if is_unknown(v)}

    def is_constant(self):
        return all(not m for m in self.terms)

    def constant_value(self):
        return self.terms.get((), Fraction(0))

    def degree_in(self, var):
        degs = [dict(m).get(var, 0) for m in self.terms]
        return max(degs) if degs else 0

    def total_degree(self, variables):
        best = 0
        for m in self.terms:
            best = max(best, sum(e for v, e in m if v in variables))
        return best

    def coefficient_of(self, var, exp):
        """Coefficient Poly of ``var^exp`` (other variables kept)."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == exp:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(out)

    def split(self, variables):
        """Group terms by their exponents in ``variables``.

        Returns ``{exponent tuple: Poly in the remaining variables}``.
        """
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            key = tuple(d.pop(v, 0) for v in variables)
            rest = tuple(sorted(d.items()))
            bucket = out.setdefault(key, {})
            bucket[rest] = bucket.get(rest, 0) + c
        return {k: Poly(v) for k, v in out.items()}

    # substitution -------------------------------------------------------
    def subs(self, values):
        """Substitute variables by numbers or Polys."""
        if not values:
            return self
        lifted = {v: Poly.lift(x) for v, x in values.items()}
        out = Poly()
        for m, c in self.terms.items():
            acc = Poly.const(c)
            keep = []
            for v, e in m:
                if v in lifted:
                    acc = acc * lifted[v] ** e
                else:
                    keep.append((v, e))
            out = out + acc * Poly({tuple(keep): 1})
        return out

    def rename(self, fn):
        """Apply ``fn`` to every variable name."""
        out = {}
        for m, c in self.terms.items():
            d = {}
            for v, e in m:
                nv = fn(v)
                d[nv] = d.get(nv, 0) + e
            key = tuple(sorted((v, e) for v, e in d.items() if e))
            out[key] = out.get(key, 0) + c
        return Poly(out)

    def map_terms(self, fn):
        """Multiply each term by ``fn(q exponent, u exponent)``."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            out[m] = c * fn(d.get(Q, 0), d.get(U, 0))
        return Poly(out)

    def at_u_zero(self):
        out = {}
        for m, c in self.terms.items():
            e = dict(m).get(U, 0)
            if e < 0:
                raise IllegalExponent("cannot set u = 0 with negative u-powers")
            if e == 0:
                out[m] = c
        return Poly(out)

    # units ------------------------------------------------------------
    def is_unit(self):
        if len(self.terms) != 1:
            return False
        (m, c), = self.terms.items()
        return all(v in (Q, U) for v, _ in m) and c != 0

    def unit_inverse(self):
        if not self.is_unit():
            raise NotDivisible(f"{self} is not an invertible monomial")
        (m, c), = self.terms.items()
        return Poly({tuple((v, -e) for v, e in m): 1 / c})

    def exact_div(self, other):
        other = Poly.lift(other)
        return self * other.unit_inverse()

    # conversion -------------------------------------------------------
    def to_ring(self, config) -> RingElem:
        triples = []
        for m, c in self.terms.items():
            d = dict(m)
            a, b = d.pop(Q, 0), d.pop(U, 0)
            if d:
                raise IllegalExponent(f"{self} still involves {sorted(d)}")
            triples.append((c, a, b))
        return RingElem.make(config, triples)

    # rendering ----------------------------------------------------------
    def sorted_terms(self):
        def key(item):
            m, _ = item
            d = dict(m)
            rest = sorted(((var_sort_key(v), e) for v, e in m if v not in (Q, U, R)))
            return (d.get(U, 0), d.get(Q, 0), rest, d.get(R, 0))

        return sorted(self.terms.items(), key=key)

    def __str__(self):
        return render_terms([(c, monomial_text(m)) for m, c in self.sorted_terms()])

    def __repr__(self):
        return f"Poly({self})"


def monomial_text(mono):
    order = sorted(mono, key=lambda ve: (var_sort_key(ve[0]), ve[0]))
    parts = []
    for v, e in order:
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


__all__ = [
    "Poly",
    "Q",
    "U",
    "R",
    "unknown_var",
    "parse_unknown",
    "is_unknown",
    "var_sort_key",
    "monomial_text",
    "coeff_text",
]
