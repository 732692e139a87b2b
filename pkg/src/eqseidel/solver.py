"""Re-derive unknown coefficients from the intertwining relation.

An ansatz replaces the u-dependent parts of a space's product and Seidel
templates by named unknowns.  Expanding the residual at level ``r`` gives one
polynomial equation per (basis element, q-u monomial); these are solved by
sequential elimination and the solved values seed level ``r + 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import groebner, linalg
from .errors import DegreeViolation, EngineError, Inconsistent, Stuck
from .module import ModuleElem
from .poly import Q, U, Poly, is_unknown, parse_unknown, unknown_var, var_sort_key
from .product import GeneratorProduct, product_expand
from .seidel import SeidelFamily, intertwining_residual
from .template import MapTemplate
from .upoly import poly_gcd, squarefree_part, to_univariate


@dataclass(frozen=True, order=True)
class Unknown:
    level: int
    name: str

    @property
    def var(self):
        return unknown_var(self.name, self.level)

    @classmethod
    def from_var(cls, var):
        name, level = parse_unknown(var)
        return cls(level, name)

    def __str__(self):
        return f"{self.name}@{self.level}"


# ---------------------------------------------------------------------------
# ansatz

@dataclass(frozen=True)
class Slot:
    """A graded-legal place ``q^a u^b`` in entry ``(target, source)`` of a map."""

    kind: str  # "product" or "seidel"
    source: str
    target: str
    a: int
    b: int

    def __str__(self):
        return f"{self.kind} {self.source}->{self.target} q^{self.a} u^{self.b}"


@dataclass(frozen=True)
class Ansatz:
    space_id: str
    basis: object
    config: object
    product: MapTemplate | None
    seidel: MapTemplate
    unknowns: tuple  # names
    structural_zeros: tuple  # Slots forced to vanish
    seeds: tuple  # Seed objects
    generator: str | None = "e1"
    unit: str = "e0"


def legal_slots(basis, config, kind, shift, skip_sources=()):
    """Every ``q^a u^b`` with ``a >= 0`` and ``b >= 1`` allowed by the grading."""
    out = []
    for src in basis.labels:
        if src in skip_sources:
            continue
        for tgt in basis.labels:
            want = shift + basis.degree_of(src) - basis.degree_of(tgt)
            if config.has_q:
                a = 0
                while a * config.q_degree + 2 <= want:
                    rest = want - a * config.q_degree
                    if rest % 2 == 0:
                        out.append(Slot(kind, src, tgt, a, rest // 2))
                    a += 1
            elif want >= 2 and want % 2 == 0:
                out.append(Slot(kind, src, tgt, 0, want // 2))
    return out


def _declared_slots(template, basis, kind):
    """Map slot -> unknown name for single-unknown terms of a declared ansatz."""
    found = {}
    if template is None:
        return found
    for k, src in enumerate(basis.labels):
        for l, tgt in enumerate(basis.labels):
            for mono, c in template.columns[k][l].terms.items():
                d = dict(mono)
                names = [v for v in d if is_unknown(v)]
                if len(names) == 1 and d[names[0]] == 1 and c == 1:
                    found[Slot(kind, src, tgt, d.get(Q, 0), d.get(U, 0))] = names[0][1:]
    return found


def _slot_template(base, basis, slots, names):
    cols = [list(col) for col in base.columns]
    for s in slots:
        k, l = basis.index(s.source), basis.index(s.target)
        mono = Poly.var(unknown_var(names[s])) * Poly.var(U, s.b) * Poly.var(Q, s.a)
        cols[k][l] = cols[k][l] + mono
    return MapTemplate(base.shift, cols)


def ansatz_build(spec, structural_zeros=None) -> Ansatz:
    """Build the ansatz for ``spec``.

    With ``structural_zeros=None`` the space's declared ansatz is used.  Otherwise
    every graded-legal slot not listed in ``structural_zeros`` carries an unknown
    (declared names are reused where a slot matches).  The known parts are the
    u = 0 terms of the templates, and the unit column of the product is fixed.
    """
    if spec.seidel is None:
        raise EngineError(f"{spec.id} has no Seidel map to derive")
    basis, config = spec.basis, spec.config
    prod_base = spec.product.at_u_zero() if spec.product is not None else None
    if prod_base is not None:
        # the unit column L(unit) = generator stays as declared
        k = basis.index(spec.unit)
        cols = list(prod_base.columns)
        cols[k] = spec.product.columns[k]
        prod_base = MapTemplate(prod_base.shift, cols)
    seid_base = spec.seidel.at_u_zero()

    slots = []
    if prod_base is not None:
        slots += legal_slots(basis, config, "product", prod_base.shift, skip_sources=(spec.unit,))
    slots += legal_slots(basis, config, "seidel", seid_base.shift)
    declared = {}
    declared.update(_declared_slots(spec.ansatz_product, basis, "product"))
    declared.update(_declared_slots(spec.ansatz_seidel, basis, "seidel"))

    if structural_zeros is None:
        prod = prod_base
        if prod is not None and spec.ansatz_product is not None:
            prod = MapTemplate(
                prod.shift,
                [[p + a for p, a in zip(c1, c2)] for c1, c2 in zip(prod.columns, spec.ansatz_product.columns)],
            )
        seid = seid_base
        if spec.ansatz_seidel is not None:
            seid = MapTemplate(
                seid.shift,
                [[p + a for p, a in zip(c1, c2)] for c1, c2 in zip(seid.columns, spec.ansatz_seidel.columns)],
            )
        zeros = tuple(s for s in slots if s not in declared)
        seeds = spec.seeds
    else:
        zeros = tuple(structural_zeros)
        legal = set(slots)
        for z in zeros:
            if z not in legal:
                raise DegreeViolation(f"structural zero {z} is not a graded-legal slot")
        live = [s for s in slots if s not in set(zeros)]
        names = {s: declared.get(s, f"{s.kind[0]}_{s.source}_{s.target}_{s.a}_{s.b}") for s in live}
        prod = None
        if prod_base is not None:
            prod = _slot_template(prod_base, basis, [s for s in live if s.kind == "product"], names)
        seid = _slot_template(seid_base, basis, [s for s in live if s.kind == "seidel"], names)
        used = set(names.values())
        seeds = tuple(s for s in spec.seeds if s.name in used)

    unknowns = set()
    for t in (prod, seid):
        if t is not None:
            unknowns |= {v[1:] for v in t.unknowns()}
    return Ansatz(
        spec.id, basis, config, prod, seid, tuple(sorted(unknowns)), zeros, tuple(seeds),
        spec.generator, spec.unit,
    )


# ---------------------------------------------------------------------------
# constraint systems

@dataclass
class Equation:
    poly: Poly
    origin: str = ""

    def text(self):
        return f"{_named(self.poly)} = 0"


@dataclass
class ConstraintSystem:
    equations: list
    seeds: dict = field(default_factory=dict)  # var -> Fraction
    level: int | None = None

    def unknowns(self):
        out = set(self.seeds)
        for eq in self.equations:
            out |= eq.poly.unknowns()
        return out

    def listing(self):
        lines = [f"{_var_name(v)} = {_frac(c)}  (seed)" for v, c in sorted(self.seeds.items(), key=lambda kv: var_sort_key(kv[0]))]
        lines += [eq.text() + (f"    [{eq.origin}]" if eq.origin else "") for eq in self.equations]
        return "\n".join(lines)

    def to_json(self):
        return {
            "level": self.level,
            "unknowns": [_var_name(v) for v in sorted(self.unknowns(), key=var_sort_key)],
            "seeds": {_var_name(v): _frac(c) for v, c in sorted(self.seeds.items(), key=lambda kv: var_sort_key(kv[0]))},
            "equations": [{"origin": eq.origin, "equation": eq.text()} for eq in self.equations],
        }


def _var_name(v):
    return str(Unknown.from_var(v)) if is_unknown(v) else v


def _named(p: Poly):
    return str(p.rename(lambda v: _var_name(v) if is_unknown(v) else v))


def _frac(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _product_table(ansatz, r):
    if ansatz.product is None:
        return None
    L = ansatz.product.instantiate(ansatz.basis, ansatz.config, r, levels=(r, r))
    return product_expand(GeneratorProduct(ansatz.basis, ansatz.config, ansatz.unit, L, r, ansatz.generator))


def seeds_at(seeds, r, levels):
    out = {}
    for s in seeds:
        for lvl in levels:
            if s.applies(lvl):
                out[unknown_var(s.name, lvl)] = s.at(lvl)
    return out


def extract_constraints(ansatz: Ansatz, r: int, alpha="e1", inputs=None, known=None) -> ConstraintSystem:
    """Expand the residual at level ``r`` into coefficient equations.

    ``known`` adds already solved values (``{var: value}``) to the seeds.
    """
    if ansatz.product is None:
        return ConstraintSystem([], {}, r)
    P_r, P_next = _product_table(ansatz, r), _product_table(ansatz, r + 1)
    family = SeidelFamily(ansatz.space_id, ansatz.basis, ansatz.config, ansatz.seidel)
    S = family.instantiate(r)
    labels = list(ansatz.basis.labels if inputs is None else inputs)
    equations = []
    for lab in labels:
        x = ModuleElem.basis_vector(ansatz.basis, ansatz.config, lab)
        res = intertwining_residual(S, P_r, P_next, x, alpha, alpha)
        for tgt, coord in res.items():
            coord = Poly.lift(coord)
            for (a, b), coeff in sorted(coord.split((Q, U)).items()):
                if coeff:
                    equations.append(Equation(coeff, f"x={lab}, {tgt}, q^{a} u^{b}"))
    present = set()
    for eq in equations:
        present |= eq.poly.unknowns()
    seeds = seeds_at(ansatz.seeds, r, (r, r + 1))
    if known:
        seeds.update(known)
    seeds = {v: c for v, c in seeds.items() if v in present}
    return ConstraintSystem(equations, seeds, r)


def resultant(p: Poly, q: Poly, var) -> Poly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``."""
    m, n = p.degree_in(var), q.degree_in(var)
    if m == 0 or n == 0:
        raise ValueError(f"both polynomials must involve {var}")
    a = [p.coefficient_of(var, i) for i in range(m, -1, -1)]
    b = [q.coefficient_of(var, i) for i in range(n, -1, -1)]
    size = m + n
    zero = Poly()
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return linalg.det_berkowitz(rows)


def _resultant_root(eqs):
    """Find ``(var, value)`` from bivariate pairs whose resultant pins one root."""
    by_var = {}
    for i, p in enumerate(eqs):
        for q in eqs[i + 1:]:
            vs = p.unknowns() | q.unknowns()
            if len(vs) != 2:
                continue
            for elim in sorted(vs, key=var_sort_key, reverse=True):
                if p.degree_in(elim) == 0 or q.degree_in(elim) == 0:
                    continue
                res = resultant(p, q, elim)
                if not res:
                    continue
                (keep,) = vs - {elim}
                by_var.setdefault(keep, []).append(to_univariate(res, keep))
    for v in sorted(by_var, key=var_sort_key):
        g = []
        for u in by_var[v]:
            g = poly_gcd(g, u) if g else u
        if len(g) > 1:
            sq = squarefree_part(g)
            if len(sq) == 2:
                return v, -sq[0] / sq[1]
    return None


GROEBNER_MAX_UNKNOWNS = 4


def _groebner_root(eqs):
    unknowns = set()
    for p in eqs:
        unknowns |= p.unknowns()
    if not unknowns or len(unknowns) > GROEBNER_MAX_UNKNOWNS:
        return None
    # the variable to solve for is the smallest in pivot order; lex puts it last
    order = sorted(unknowns, key=var_sort_key, reverse=True)
    try:
        basis = groebner.groebner_lex(groebner.to_dicts(eqs, order))
    except groebner.TooLarge:
        return None
    uni = groebner.univariate_in_last(basis, len(order))
    if uni is None or len(uni) < 2:
        return None
    sq = squarefree_part(uni)
    if len(sq) == 2:
        return order[-1], -sq[0] / sq[1]
    return None


# ---------------------------------------------------------------------------
# solving

def _normalize(p: Poly) -> Poly:
    """Scale to coprime integer coefficients with a positive leading term."""
    if not p:
        return p
    terms = p.sorted_terms()
    from math import gcd, lcm

    den = 1
    for _, c in terms:
        den = lcm(den, c.denominator)
    nums = [int(c * den) for _, c in terms]
    g = 0
    for n in nums:
        g = gcd(g, n)
    scale = Fraction(den, g)
    if terms[-1][1] < 0:
        scale = -scale
    return p * scale


def _eq_key(p: Poly):
    return (len(p.terms), str(p))


def solve_sequential(system: ConstraintSystem) -> dict:
    """Solve by linear pivots, square-free univariate roots and substitution.

    Returns ``{var: Fraction}`` for every unknown in the system.  Raises
    :class:`Stuck` when no rule applies and :class:`Inconsistent` when an
    equation reduces to a nonzero constant or a value is not an integer.
    """
    level = system.level
    values = {v: Fraction(c) for v, c in system.seeds.items()}
    all_unknowns = system.unknowns()
    eqs = [eq.poly.subs(values) for eq in system.equations]
    eliminated = []  # (var, expression) in elimination order

    def check(eqs):
        live = []
        for p in eqs:
            if not p:
                continue
            if p.is_constant():
                raise Inconsistent(f"equation reduces to {p} = 0", [p], level)
            live.append(_normalize(p))
        return sorted(set(live), key=_eq_key)

    def assign(var, value, eqs):
        values[var] = value
        return [p.subs({var: value}) for p in eqs]

    eqs = check(eqs)
    while eqs:
        # 1. an equation linear in a single unknown
        linear = []
        univariate = {}
        for p in eqs:
            vs = p.unknowns()
            if len(vs) == 1:
                (v,) = vs
                univariate.setdefault(v, []).append(p)
                if p.degree_in(v) == 1:
                    linear.append((var_sort_key(v), _eq_key(p), v, p))
        if linear:
            _, _, v, p = min(linear)
            coeff = p.coefficient_of(v, 1).constant_value()
            value = -p.coefficient_of(v, 0).constant_value() / coeff
            eqs = check(assign(v, value, eqs))
            continue

        # 2. a repeated root: the common factor of all equations in v is a
        #    power of a linear polynomial
        progress = False
        for v in sorted(univariate, key=var_sort_key):
            g = []
            for p in univariate[v]:
                g = poly_gcd(g, to_univariate(p, v)) if g else to_univariate(p, v)
            if len(g) <= 1:
                raise Inconsistent(f"equations in {_var_name(v)} have no common root", univariate[v], level)
            sq = squarefree_part(g)
            if len(sq) == 2:
                eqs = check(assign(v, -sq[0] / sq[1], eqs))
                progress = True
                break
        if progress:
            continue

        # 3. eliminate an unknown that appears linearly with a constant coefficient
        candidates = []
        for p in eqs:
            for v in p.unknowns():
                if p.degree_in(v) != 1:
                    continue
                coeff = p.coefficient_of(v, 1)
                if coeff.is_constant():
                    candidates.append((var_sort_key(v), _eq_key(p), v, p))
        if candidates:
            _, _, v, p = min(candidates)
            coeff = p.coefficient_of(v, 1).constant_value()
            expr = p.coefficient_of(v, 0) * Fraction(-1, 1) * (1 / coeff)
            eliminated.append((v, expr))
            eqs = check([q.subs({v: expr}) for q in eqs if q is not p])
            continue

        # 4. a pair of equations in two unknowns: the resultant in one of them
        #    must again have a single repeated root
        found = _resultant_root(eqs)
        if found is not None:
            v, value = found
            eqs = check(assign(v, value, eqs))
            continue

        # 5. few unknowns left: a lex basis exposes a univariate polynomial
        found = _groebner_root(eqs)
        if found is not None:
            v, value = found
            eqs = check(assign(v, value, eqs))
            continue

        raise Stuck(
            "no equation can be solved for a single unknown; residual system: "
            + "; ".join(f"{_named(p)} = 0" for p in eqs),
            eqs,
            level,
        )

    for v, expr in reversed(eliminated):
        expr = expr.subs(values)
        if not expr.is_constant():
            raise Stuck(f"{_var_name(v)} stays tied to {_named(expr)}", [expr], level)
        values[v] = expr.constant_value()
    free = [v for v in all_unknowns if v not in values]
    if free:
        raise Stuck(
            "undetermined unknowns: " + ", ".join(_var_name(v) for v in sorted(free, key=var_sort_key)),
            [],
            level,
        )
    bad = {v: c for v, c in values.items() if c.denominator != 1}
    if bad:
        raise Inconsistent(
            "non-integral solution: " + ", ".join(f"{_var_name(v)} = {_frac(c)}" for v, c in bad.items()),
            [],
            level,
        )
    return dict(sorted(values.items(), key=lambda kv: var_sort_key(kv[0])))


# ---------------------------------------------------------------------------
# induction over the action level

@dataclass
class SolvedFamilies:
    ansatz: Ansatz
    r_max: int
    values: dict  # var -> Fraction
    systems: list  # ConstraintSystem per level

    def _subs(self, template, r):
        t = template.at_level(r)
        return MapTemplate(template.shift, [[p.subs(self.values) for p in col] for col in t])

    def product_template(self, r):
        return None if self.ansatz.product is None else self._subs(self.ansatz.product, r)

    def seidel_template(self, r):
        return self._subs(self.ansatz.seidel, r)

    def product_at(self, r) -> GeneratorProduct:
        a = self.ansatz
        if a.product is None:
            return GeneratorProduct(a.basis, a.config, a.unit, None, r, None)
        L = self.product_template(r).instantiate(a.basis, a.config, r, levels=(r, r))
        return GeneratorProduct(a.basis, a.config, a.unit, L, r, a.generator)

    def seidel_at(self, r):
        a = self.ansatz
        return self.seidel_template(r).instantiate(a.basis, a.config, r, levels=(r, r + 1))

    def coefficients(self):
        """``{name: {level: value}}`` for every solved unknown."""
        out = {}
        for v, c in self.values.items():
            u = Unknown.from_var(v)
            out.setdefault(u.name, {})[u.level] = c
        return {k: dict(sorted(v.items())) for k, v in sorted(out.items())}

    def to_json(self):
        return {
            "space": self.ansatz.space_id,
            "r_max": self.r_max,
            "unknowns": list(self.ansatz.unknowns),
            "coefficients": {
                name: {str(r): _frac(c) for r, c in levels.items()}
                for name, levels in self.coefficients().items()
            },
        }

    def listing(self):
        lines = []
        for name, levels in self.coefficients().items():
            vals = ", ".join(f"{r}: {_frac(c)}" for r, c in levels.items())
            lines.append(f"{name}: {vals}")
        return "\n".join(lines)


def induct_over_r(spec, r_max: int, ansatz: Ansatz | None = None, inputs=None) -> SolvedFamilies:
    """Solve level by level, carrying solved values upward as seeds."""
    if ansatz is None:
        ansatz = ansatz_build(spec)
    values, systems = {}, []
    for r in range(r_max + 1):
        system = extract_constraints(ansatz, r, inputs=inputs, known=values)
        systems.append(system)
        try:
            values.update(solve_sequential(system))
        except (Stuck, Inconsistent) as exc:
            exc.level = r
            raise
    # unknowns seeded but never constrained still belong to the answer
    for r in range(r_max + 2):
        for v, c in seeds_at(ansatz.seeds, r, (r,)).items():
            values.setdefault(v, c)
    return SolvedFamilies(ansatz, r_max, dict(sorted(values.items(), key=lambda kv: var_sort_key(kv[0]))), systems)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
