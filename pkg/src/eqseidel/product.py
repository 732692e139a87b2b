"""Equivariant quantum products generated by multiplication with a degree-2 class.

A product at action level ``r`` is specified by the operator ``L: x -> e1 * x``.
When ``e0, L e0, L^2 e0, ...`` is a unitriangular basis change, every ``e_j`` is
a polynomial ``P_j(L)`` applied to the unit, and ``e_i * e_j = P_i(L) e_j``.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field

from .errors import BasisMismatch, NotGenerated
from .module import BasisSpec, CheckReport, GradedMap, ModuleElem, map_apply
from .ring import RingConfig, RingElem


@dataclass(frozen=True)
class GeneratorProduct:
    basis: BasisSpec
    config: RingConfig
    unit_label: str
    L: GradedMap | None  # None for rank-one spaces with the trivial product
    r: int = 0
    generator_label: str | None = "e1"


@dataclass
class ProductTable:
    basis: BasisSpec
    config: RingConfig
    unit_label: str
    table: dict  # (label_i, label_j) -> ModuleElem
    r: int = 0
    generator_label: str | None = None
    expansions: dict = field(default_factory=dict)  # label -> coefficients of P_label

    def __getitem__(self, key):
        return self.table[key]

    def operator(self, label) -> GradedMap:
        """The map ``x -> e_label * x``."""
        cols = [self.table[(label, src)] for src in self.basis.labels]
        shift = self.basis.degree_of(label)
        return GradedMap.from_columns(
            self.basis, self.basis, shift, cols, self.config, checked=False
        )

    def rows(self):
        for a in self.basis.labels:
            for b in self.basis.labels:
                yield a, b, self.table[(a, b)]


def _unit_inverse(x):
    return x.inverse() if isinstance(x, RingElem) else x.unit_inverse()


def _is_unit(x):
    return bool(x) and x.is_unit()


def product_expand(G: GeneratorProduct) -> ProductTable:
    basis, config = G.basis, G.config
    n = len(basis)
    unit = ModuleElem.basis_vector(basis, config, G.unit_label)
    if G.L is None:
        if n != 1:
            raise NotGenerated("only a rank-one module can carry the trivial product")
        table = {(G.unit_label, G.unit_label): unit}
        return ProductTable(basis, config, G.unit_label, table, G.r, None, {G.unit_label: [1]})

    powers = [unit]
    for _ in range(1, n):
        powers.append(map_apply(G.L, powers[-1]))
    for i, v in enumerate(powers):
        if not _is_unit(v.coords[i]) or any(v.coords[j] for j in range(i + 1, n)):
            raise NotGenerated(
                f"L^{i}({G.unit_label}) = {v} does not have a unit leading coordinate at "
                f"{basis.labels[i]}"
            )

    expansions = {}
    for j, label in enumerate(basis.labels):
        rem = ModuleElem.basis_vector(basis, config, label)
        coeffs = [RingElem.zero(config)] * n
        for i in range(n - 1, -1, -1):
            c = rem.coords[i]
            if not c:
                continue
            c = c * _unit_inverse(powers[i].coords[i])
            coeffs[i] = c
            rem = rem - c * powers[i]
        if not rem.is_zero():
            raise NotGenerated(f"{label} is not a polynomial in L applied to the unit")
        expansions[label] = coeffs

    # L^m(e_j) for every j and m
    images = {}
    for label in basis.labels:
        v = ModuleElem.basis_vector(basis, config, label)
        seq = [v]
        for _ in range(1, n):
            seq.append(map_apply(G.L, seq[-1]))
        images[label] = seq

    table = {}
    for a in basis.labels:
        coeffs = expansions[a]
        for b in basis.labels:
            acc = ModuleElem.zero(basis, config)
            for m, c in enumerate(coeffs):
                if c:
                    acc = acc + c * images[b][m]
            table[(a, b)] = acc
    return ProductTable(basis, config, G.unit_label, table, G.r, G.generator_label, expansions)


def multiply(T: ProductTable, x: ModuleElem, y: ModuleElem) -> ModuleElem:
    if x.basis != T.basis or y.basis != T.basis:
        raise BasisMismatch("operands must live in the table's module")
    acc = ModuleElem.zero(T.basis, T.config)
    for a, xa in x.items():
        if not xa:
            continue
        for b, yb in y.items():
            if yb:
                acc = acc + (xa * yb) * T.table[(a, b)]
    return acc


def _random_element(rng, config, degree, max_terms=3):
    """A random homogeneous ring element of the given degree (may be zero)."""
    triples = []
    for _ in range(rng.randint(0, max_terms)):
        if config.has_q:
            a = rng.randint(-1, 2)
            rest = degree - a * config.q_degree
        else:
            a, rest = 0, degree
        if rest < 0 or rest % 2:
            continue
        triples.append((rng.randint(-4, 4), a, rest // 2))
    return RingElem.make(config, triples)


def check_axioms(T: ProductTable, samples=8, seed=0) -> CheckReport:
    report = CheckReport(f"product axioms (r={T.r})")
    labels = T.basis.labels
    e = {lab: ModuleElem.basis_vector(T.basis, T.config, lab) for lab in labels}

    for b in labels:
        if T.table[(T.unit_label, b)] != e[b] or T.table[(b, T.unit_label)] != e[b]:
            report.fail(f"unit: {T.unit_label}*{b} = {T.table[(T.unit_label, b)]}")
    for a in labels:
        for b in labels:
            prod = T.table[(a, b)]
            if prod != T.table[(b, a)]:
                report.fail(f"commutativity: {a}*{b} = {prod} but {b}*{a} = {T.table[(b, a)]}")
            want = T.basis.degree_of(a) + T.basis.degree_of(b)
            if prod and prod.degrees() != {want}:
                report.fail(f"grading: {a}*{b} = {prod} is not of degree {want}")
    for a in labels:
        for b in labels:
            ab = T.table[(a, b)]
            for c in labels:
                left = multiply(T, ab, e[c])
                right = multiply(T, e[a], T.table[(b, c)])
                if left != right:
                    report.fail(f"associativity at ({a}, {b}, {c}): {left} != {right}")

    rng = random.Random(seed)
    for _ in range(samples):
        a, b = rng.choice(labels), rng.choice(labels)
        lam = _random_element(rng, T.config, 2 * rng.randint(0, 2))
        x = lam * e[a]
        if multiply(T, x, e[b]) != lam * T.table[(a, b)]:
            report.fail(f"linearity: ({lam})*{a} times {b}")
    return report


def table_rows(T: ProductTable):
    return [(a, b, str(v)) for a, b, v in T.rows()]


def table_csv(T: ProductTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["left", "right", "product"])
    w.writerows(table_rows(T))
    return buf.getvalue()


def table_json(T: ProductTable) -> dict:
    return {
        "r": T.r,
        "unit": T.unit_label,
        "basis": list(T.basis.labels),
        "products": [{"left": a, "right": b, "product": s} for a, b, s in table_rows(T)],
    }
