"""Equivariant quantum Seidel map families, weighted maps and the intertwining residual."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EngineError, IllegalCoefficient, NonIntegralWeight
from .module import BasisSpec, CheckReport, GradedMap, ModuleElem, map_apply, map_compose, u_act
from .product import ProductTable, multiply
from .ring import RingConfig
from .template import MapTemplate


@dataclass(frozen=True)
class SeidelFamily:
    """Maps ``EQS_r`` from level ``r`` to level ``r + step``.

    ``step`` is +1 for the family of a circle action and -1 for the family of
    its inverse, whose instance at ``r`` runs from level ``r + 1`` back to ``r``.
    """

    space_id: str
    basis: BasisSpec
    config: RingConfig
    template: MapTemplate
    step: int = 1

    @property
    def maslov_shift(self):
        return self.template.shift

    def levels(self, r):
        return (r, r + 1) if self.step > 0 else (r + 1, r)

    def instantiate(self, r: int) -> GradedMap:
        if r < 0:
            raise ValueError("action levels are non-negative")
        return self.template.instantiate(self.basis, self.config, r, levels=self.levels(r))

    def nonequivariant(self) -> GradedMap:
        """The u = 0 specialization (checked to be independent of r)."""
        base = self.template.at_u_zero()
        if base.depends_on_r():
            raise EngineError(f"{self.space_id}: the u = 0 Seidel map depends on r")
        return base.instantiate(self.basis, self.config, 0)


def seidel_instantiate(F: SeidelFamily, r: int) -> GradedMap:
    return F.instantiate(r)


@dataclass(frozen=True)
class WeightRule:
    """Weight ``slope * a + offset`` for a section class carrying ``q^a``."""

    slope: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def __call__(self, a):
        return self.slope * a + self.offset

    def __add__(self, other):
        return WeightRule(self.slope + other.slope, self.offset + other.offset)


DEGREE_TWO_RULE = WeightRule(1, 0)


def weighted_seidel(M: GradedMap, w: WeightRule = DEGREE_TWO_RULE, alpha_degree=2) -> GradedMap:
    """Reweight every monomial ``c q^a u^b`` of ``M`` by ``w(a)``.

    The weighted map lands in degree ``shift + alpha_degree - 2``.
    """
    try:
        return M.map_entries(
            lambda e: e.map_terms(lambda a, b: w(a)), shift=M.shift + alpha_degree - 2
        )
    except IllegalCoefficient as exc:
        raise NonIntegralWeight(str(exc)) from exc


def intertwining_residual(
    seidel,
    P_r: ProductTable,
    P_next: ProductTable,
    x: ModuleElem,
    alpha_plus="e1",
    alpha_minus="e1",
    w: WeightRule = DEGREE_TWO_RULE,
    r: int | None = None,
) -> ModuleElem:
    """``EQS(x *_r a+) - EQS(x) *_(r+1) a- - u EQS_a(x)``; zero iff the relation holds at x.

    ``seidel`` is either an instantiated map or a family together with ``r``.
    """
    if isinstance(seidel, SeidelFamily):
        if r is None:
            raise ValueError("a Seidel family needs the level r")
        seidel = seidel.instantiate(r)
    basis = P_r.basis
    if P_next.basis != basis or seidel.source != basis:
        from .errors import BasisMismatch

        raise BasisMismatch("products and Seidel map must share one basis")
    for label in (alpha_plus, alpha_minus):
        if basis.degree_of(label) != 2:
            raise ValueError(f"{label} is not a degree-2 class")
    ap = ModuleElem.basis_vector(basis, P_r.config, alpha_plus)
    am = ModuleElem.basis_vector(basis, P_r.config, alpha_minus)
    W = weighted_seidel(seidel, w)
    first = map_apply(seidel, multiply(P_r, x, ap))
    second = multiply(P_next, map_apply(seidel, x), am)
    third = u_act(map_apply(W, x), 1)
    return first - second - third


def verify_inverse_pair(F: SeidelFamily, F_inv: SeidelFamily, r: int) -> CheckReport:
    """Both composites of ``EQS_r`` and the inverse family's map must be identities."""
    report = CheckReport(f"inverse pair (r={r})")
    try:
        S = F.instantiate(r)
        Sinv = F_inv.instantiate(r)
    except EngineError as exc:
        report.fail(f"rejected: not a legal map over the unlocalized ring ({exc})")
        return report
    if Sinv.shift != -S.shift:
        report.fail(f"inverse shift {Sinv.shift} does not cancel {S.shift}")
    for name, comp, level in (
        ("inverse after EQS", lambda: map_compose(Sinv, S), r),
        ("EQS after inverse", lambda: map_compose(S, Sinv), r + 1),
    ):
        try:
            C = comp()
        except EngineError as exc:
            report.fail(f"{name}: {exc}")
            continue
        ident = GradedMap.identity(F.basis, F.config, level)
        for l, row in enumerate(C.matrix):
            for k, e in enumerate(row):
                if e != ident.matrix[l][k]:
                    report.fail(
                        f"{name}: entry ({F.basis.labels[l]}, {F.basis.labels[k]}) = {e}, "
                        f"expected {ident.matrix[l][k]}"
                    )
    return report
