"""Exact arithmetic in the graded ring Lambda (x) Z[u].

Lambda is either Z (no Novikov variable) or the Laurent ring Z[q, q^-1] with
``q`` of some even degree; ``u`` has degree 2.  A localized variant admits
negative powers of ``u`` and rational coefficients.

Elements are finite sparse maps ``(a, b) -> coefficient`` standing for
``sum c * q^a * u^b``.  They are immutable and hashable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import (
    ConfigMismatch,
    IllegalCoefficient,
    IllegalExponent,
    NotDivisible,
    NotHomogeneous,
    ZeroElement,
)


class CoeffDomain(enum.Enum):
    INTEGER = "integer"
    RATIONAL = "rational"


@dataclass(frozen=True)
class RingConfig:
    has_q: bool = False
    q_degree: int = 0
    coeff_domain: CoeffDomain = CoeffDomain.INTEGER
    u_localized: bool = False

    def __post_init__(self):
        if self.has_q:
            if self.q_degree <= 0 or self.q_degree % 2:
                raise ValueError(f"q_degree must be even and positive, got {self.q_degree}")
        elif self.q_degree != 0:
            raise ValueError("q_degree must be 0 when the ring has no q")
        if self.u_localized and self.coeff_domain is not CoeffDomain.RATIONAL:
            raise ValueError("a u-localized ring needs rational coefficients")

    @property
    def rational(self) -> bool:
        return self.coeff_domain is CoeffDomain.RATIONAL

    def localized(self) -> "RingConfig":
        return RingConfig(self.has_q, self.q_degree, CoeffDomain.RATIONAL, True)

    def without_u_localization(self) -> "RingConfig":
        return RingConfig(self.has_q, self.q_degree, self.coeff_domain, False)


def _coerce_coeff(config, c):
    if config.rational:
        if isinstance(c, Rational):
            return Fraction(c)
        raise IllegalCoefficient(f"not a rational number: {c!r}")
    if isinstance(c, int):
        return c
    if isinstance(c, Rational) and c.denominator == 1:
        return int(c.numerator)
    raise IllegalCoefficient(f"{c!r} is not an integer")


class RingElem:
    """An element of the (possibly localized) coefficient ring."""

    __slots__ = ("config", "terms", "_hash")

    def __init__(self, config: RingConfig, terms=None, _trusted=False):
        self.config = config
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for (a, b), c in (terms or {}).items():
                _check_exponent(config, a, b)
                c = _coerce_coeff(config, c)
                if c:
                    clean[(a, b)] = clean.get((a, b), 0) + c
            self.terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def make(cls, config, triples):
        """Build from ``(coeff, a, b)`` triples, merging like terms."""
        acc = {}
        for c, a, b in triples:
            _check_exponent(config, a, b)
            c = _coerce_coeff(config, c)
            acc[(a, b)] = acc.get((a, b), 0) + c
        return cls(config, {k: v for k, v in acc.items() if v}, _trusted=True)

    @classmethod
    def zero(cls, config):
        return cls(config, {}, _trusted=True)

    @classmethod
    def one(cls, config):
        return cls.monomial(config, 1, 0, 0)

    @classmethod
    def monomial(cls, config, c=1, a=0, b=0):
        return cls.make(config, [(c, a, b)])

    @classmethod
    def q(cls, config, a=1):
        return cls.monomial(config, 1, a, 0)

    @classmethod
    def u(cls, config, b=1):
        return cls.monomial(config, 1, 0, b)

    def with_config(self, config):
        """Re-home this element in a compatible ring (e.g. its localization)."""
        if config == self.config:
            return self
        if config.has_q != self.config.has_q or config.q_degree != self.config.q_degree:
            raise ConfigMismatch("cannot move elements between different Novikov rings")
        return RingElem(config, dict(self.terms))

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.config != self.config:
                raise ConfigMismatch(f"{self.config} vs {other.config}")
            return other
        if isinstance(other, Rational):
            return RingElem.monomial(self.config, other)
        return None

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return RingElem(self.config, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.config, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    del out[k]
        return RingElem(self.config, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = RingElem.one(self.config)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.exact_div(other)

    # comparisons ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.config == other.config and self.terms == other.terms
        if isinstance(other, Rational):
            if other == 0:
                return not self.terms
            return self.terms == {(0, 0): other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.config, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # grading ----------------------------------------------------------
    def monomial_degree(self, a, b):
        return a * self.config.q_degree + 2 * b

    def degrees(self):
        return {self.monomial_degree(a, b) for a, b in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        if not self.terms:
            raise ZeroElement("the zero element has no degree")
        degs = self.degrees()
        if len(degs) != 1:
            raise NotHomogeneous(f"{self} mixes degrees {sorted(degs)}")
        return degs.pop()

    # u-adic structure ---------------------------------------------------
    def u_valuation(self) -> int:
        if not self.terms:
            raise ZeroElement("the zero element has infinite u-valuation")
        return min(b for _, b in self.terms)

    def truncate_u(self, order: int) -> "RingElem":
        """Drop every term with u-exponent >= order (the o(u^order) part)."""
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        return RingElem(
            self.config, {k: c for k, c in self.terms.items() if k[1] < order}, _trusted=True
        )

    def at_u_zero(self) -> "RingElem":
        """Specialize u = 0 (non-equivariant limit); negative u-powers are illegal here."""
        if any(b < 0 for _, b in self.terms):
            raise IllegalExponent("cannot set u = 0 in an element with negative u-powers")
        return self.truncate_u(1)

    def coefficient(self, a=0, b=0):
        return self.terms.get((a, b), 0)

    def map_terms(self, fn):
        """Replace each term ``c q^a u^b`` by ``fn(a, b) * c q^a u^b``."""
        return RingElem(
            self.config, {k: fn(*k) * c for k, c in self.terms.items()}
        )

    # units and division -------------------------------------------------
    def is_monomial(self):
        return len(self.terms) == 1

    def is_unit(self):
        if len(self.terms) != 1:
            return False
        ((a, b), c), = self.terms.items()
        if b != 0 and not self.config.u_localized:
            return False
        return self.config.rational or c in (1, -1)

    def inverse(self):
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit")
        ((a, b), c), = self.terms.items()
        inv = Fraction(1, 1) / c if self.config.rational else c
        return RingElem(self.config, {(-a, -b): inv}, _trusted=True)

    def exact_div(self, other: "RingElem") -> "RingElem":
        """Return ``z`` with ``z * other == self``; raise NotDivisible otherwise."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero element")
        if not self.terms:
            return RingElem.zero(self.config)
        if other.is_unit():
            return self * other.inverse()
        # the quotient's Newton polygon fits in the difference of bounding boxes
        xa = [a for a, _ in self.terms]
        xb = [b for _, b in self.terms]
        ya = [a for a, _ in other.terms]
        yb = [b for _, b in other.terms]
        lo_a, hi_a = min(xa) - min(ya), max(xa) - max(ya)
        lo_b, hi_b = min(xb) - min(yb), max(xb) - max(yb)
        if lo_a > hi_a or lo_b > hi_b:
            raise NotDivisible(f"{self} is not divisible by {other}")
        lead_y = max(other.terms, key=lambda k: (k[1], k[0]))
        cy = other.terms[lead_y]
        rem = dict(self.terms)
        quot = {}
        while rem:
            lead = max(rem, key=lambda k: (k[1], k[0]))
            a, b = lead[0] - lead_y[0], lead[1] - lead_y[1]
            if not (lo_a <= a <= hi_a and lo_b <= b <= hi_b):
                raise NotDivisible(f"{self} is not divisible by {other}")
            c = rem[lead]
            if self.config.rational:
                t = Fraction(c) / cy
            else:
                if c % cy:
                    raise NotDivisible(f"{self} is not divisible by {other}")
                t = c // cy
            quot[(a, b)] = t
            for (ya_, yb_), yc in other.terms.items():
                k = (ya_ + a, yb_ + b)
                s = rem.get(k, 0) - t * yc
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        if not self.config.u_localized and any(b < 0 for _, b in quot):
            raise NotDivisible(f"{self} is not divisible by {other}")
        return RingElem(self.config, quot, _trusted=True)

    def divides(self, other) -> bool:
        try:
            other.exact_div(self)
        except NotDivisible:
            return False
        return True

    # rendering ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def __str__(self):
        return render_terms(
            [(c, _monomial_text(a, b)) for (a, b), c in self.sorted_terms()]
        )

    def __repr__(self):
        return f"RingElem({self})"


def _check_exponent(config, a, b):
    if not isinstance(a, int) or not isinstance(b, int):
        raise IllegalExponent(f"exponents must be integers, got ({a!r}, {b!r})")
    if a and not config.has_q:
        raise IllegalExponent(f"q^{a} in a ring without q")
    if b < 0 and not config.u_localized:
        raise IllegalExponent(f"u^{b} needs the localized ring")


def _power_text(var, e):
    if e == 1:
        return var
    return f"{var}^{e}"


def _monomial_text(a, b):
    parts = []
    if a:
        parts.append(_power_text("q", a))
    if b:
        parts.append(_power_text("u", b))
    return "*".join(parts)


def coeff_text(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render_terms(pairs):
    """Render ``(coefficient, monomial-text)`` pairs as a signed sum."""
    if not pairs:
        return "0"
    out = []
    for i, (c, mono) in enumerate(pairs):
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = coeff_text(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{coeff_text(mag)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# functional surface -------------------------------------------------------

def ring_make(config, triples):
    return RingElem.make(config, triples)


def ring_add(x, y):
    return x + y


def ring_mul(x, y):
    return x * y


def ring_neg(x):
    return -x


def ring_degree(x):
    return x.degree()


def ring_exact_div(x, y):
    return x.exact_div(y)


def ring_truncate_u(x, order):
    return x.truncate_u(order)


def ring_u_valuation(x):
    return x.u_valuation()


INTEGER_U = RingConfig()


def novikov(q_degree, rational=False):
    domain = CoeffDomain.RATIONAL if rational else CoeffDomain.INTEGER
    return RingConfig(True, q_degree, domain, False)
