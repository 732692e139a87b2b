"""Seeded randomized property suites.

Each suite draws its cases from ``random.Random(seed)`` so a failing run is
replayed exactly by passing the printed seed back in.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import builtin, builtin_ids, parse_space, render_space
from .errors import NotDivisible
from .module import check_grading
from .product import check_axioms
from .ring import CoeffDomain, RingConfig, RingElem


@dataclass
class SuiteResult:
    name: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.cases} cases, {len(self.failures)} failures (seed {self.seed})"


def random_config(rng):
    has_q = rng.random() < 0.7
    q_degree = 2 * rng.randint(1, 4) if has_q else 0
    domain = CoeffDomain.RATIONAL if rng.random() < 0.3 else CoeffDomain.INTEGER
    localized = domain is CoeffDomain.RATIONAL and rng.random() < 0.5
    return RingConfig(has_q, q_degree, domain, localized)


def random_element(rng, config, degree=None, max_terms=4):
    """A random homogeneous element (of ``degree`` when given)."""
    if degree is None:
        degree = 2 * rng.randint(-2, 4)
    triples = []
    for _ in range(rng.randint(0, max_terms)):
        a = rng.randint(-2, 2) if config.has_q else 0
        rest = degree - a * config.q_degree
        if rest % 2 or (rest < 0 and not config.u_localized):
            continue
        c = rng.randint(-5, 5)
        if config.rational and rng.random() < 0.3:
            c = Fraction(c, rng.randint(1, 4))
        triples.append((c, a, rest // 2))
    return RingElem.make(config, triples)


def ring_roundtrip(seed=0, cases=600):
    """``(x * y) / y == x`` and ``x * y == y * x`` for random nonzero y."""
    rng = random.Random(seed)
    res = SuiteResult("ring mul/div round-trip", seed)
    for _ in range(cases):
        config = random_config(rng)
        x = random_element(rng, config)
        y = random_element(rng, config)
        if not y:
            y = RingElem.one(config)
        res.cases += 1
        try:
            if (x * y).exact_div(y) != x:
                res.failures.append(f"({x})*({y}) / ({y}) != {x}")
            if x * y != y * x:
                res.failures.append(f"({x})*({y}) is not commutative")
            if x and y and (x * y).degree() != x.degree() + y.degree():
                res.failures.append(f"degree of ({x})*({y})")
        except NotDivisible as exc:
            res.failures.append(f"({x})*({y}) not divisible by ({y}): {exc}")
    return res


def product_axioms(seed=0, r_max=5, max_n=3):
    rng = random.Random(seed)
    res = SuiteResult("product axioms on builtins", seed)
    for sid in builtin_ids(max_n):
        spec = builtin(sid)
        for r in range(r_max + 1):
            res.cases += 1
            rep = check_axioms(spec.table_at(r), samples=4, seed=rng.randrange(2 ** 31))
            res.failures += [f"{sid} r={r}: {f}" for f in rep.failures]
    return res


def gradedness(seed=0, r_max=5, max_n=4):
    """Every instantiated map of every builtin, at randomly ordered levels."""
    rng = random.Random(seed)
    res = SuiteResult("gradedness of instantiated maps", seed)
    for sid in builtin_ids(max_n):
        spec = builtin(sid)
        levels = list(range(r_max + 1))
        rng.shuffle(levels)
        for r in levels:
            maps = [spec.seidel_family().instantiate(r)]
            if spec.product is not None:
                maps.append(spec.product_at(r).L)
            if spec.inverse is not None:
                maps.append(spec.inverse_family().instantiate(r))
            for M in maps:
                res.cases += 1
                rep = check_grading(M)
                res.failures += [f"{sid} r={r}: {f}" for f in rep.failures]
    return res


def _r_poly(rng):
    text = ""
    for e in range(rng.randint(0, 2) + 1):
        c = rng.randint(-3, 3)
        if not c:
            continue
        body = f"{abs(c)}*r^{e}" if e else str(abs(c))
        if text:
            text += f" - {body}" if c < 0 else f" + {body}"
        else:
            text = f"-{body}" if c < 0 else body
    return f"({text})" if text else ""


def random_space_text(rng):
    """A random well-graded definition with a product-free Seidel map."""
    n = rng.randint(0, 3)
    has_q = rng.random() < 0.7
    qd = 2 * rng.randint(1, 3) if has_q else 0
    degrees = [2 * k for k in range(n + 1)]
    shift = 2 * rng.randint(0, 2)
    lines = ["[space]", f"id = random_{rng.randrange(10 ** 6)}"]
    if has_q:
        lines.append(f"q_degree = {qd}")
    lines += ["basis = " + " ".join(f"e{k}:{d}" for k, d in enumerate(degrees)), "unit = e0", ""]
    lines += ["[seidel]", f"shift = {shift}"]
    for k in range(n + 1):
        terms = []
        for l in range(n + 1):
            deg = shift + degrees[k] - degrees[l]
            for a in ((-1, 0, 1) if has_q else (0,)):
                rest = deg - a * qd
                if rest < 0 or rest % 2 or rng.random() < 0.5:
                    continue
                coeff = _r_poly(rng)
                if not coeff:
                    continue
                factors = [coeff]
                if a:
                    factors.append("q" if a == 1 else f"q^{a}")
                if rest:
                    factors.append("u" if rest == 2 else f"u^{rest // 2}")
                factors.append(f"e{l}")
                terms.append("*".join(factors))
        if terms:
            lines.append(f"e{k} -> " + " + ".join(terms))
    if rng.random() < 0.5:
        lines += ["", "[limit]", "basis = " + ", ".join(f"e{k}" for k in range(n + 1))]
    return "\n".join(lines) + "\n"


def parse_render_fixpoint(seed=0, cases=300):
    rng = random.Random(seed)
    res = SuiteResult("parse/render fixpoint", seed)
    texts = [(sid, render_space(builtin(sid))) for sid in builtin_ids(4)]
    texts += [("random", random_space_text(rng)) for _ in range(cases)]
    for name, text in texts:
        res.cases += 1
        try:
            spec = parse_space(text)
            again = render_space(spec)
            if parse_space(again) != spec:
                res.failures.append(f"{name}: reparse differs\n{text}")
            elif render_space(parse_space(again)) != again:
                res.failures.append(f"{name}: rendering is not stable\n{again}")
        except Exception as exc:  # a generated spec must always be accepted
            res.failures.append(f"{name}: {type(exc).__name__}: {exc}\n{text}")
    return res


SUITES = (ring_roundtrip, product_axioms, gradedness, parse_render_fixpoint)


def run_all(seed=0):
    return [suite(seed=seed) for suite in SUITES]
