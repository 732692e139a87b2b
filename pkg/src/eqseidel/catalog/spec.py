"""The in-memory description of a space: ring, basis, product and Seidel templates."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SemanticError
from ..module import BasisSpec, ModuleElem
from ..poly import R, Poly
from ..product import GeneratorProduct, product_expand
from ..ring import RingConfig
from ..seidel import SeidelFamily
from ..template import MapTemplate


@dataclass(frozen=True)
class Seed:
    """``name = value`` for every level, or only at ``level`` when it is set."""

    name: str
    value: Poly  # a polynomial in r
    level: int | None = None

    def at(self, r):
        if self.level is not None and self.level != r:
            return None
        return self.value.subs({R: r}).constant_value()

    def applies(self, r):
        return self.level is None or self.level == r


@dataclass(frozen=True)
class SpaceSpec:
    id: str
    config: RingConfig
    basis: BasisSpec
    unit: str = "e0"
    generator: str | None = None
    product: MapTemplate | None = None  # columns of x -> generator * x
    seidel: MapTemplate | None = None
    inverse: MapTemplate | None = None
    ansatz_product: MapTemplate | None = None  # unknown u-corrections
    ansatz_seidel: MapTemplate | None = None
    seeds: tuple = ()
    limit_basis: tuple | None = None  # ordered basis vectors, tuples of Polys
    comment: str = field(default="", compare=False)

    # families -----------------------------------------------------------
    def product_at(self, r: int) -> GeneratorProduct:
        if self.product is None:
            return GeneratorProduct(self.basis, self.config, self.unit, None, r, None)
        L = self.product.instantiate(self.basis, self.config, r, levels=(r, r))
        return GeneratorProduct(self.basis, self.config, self.unit, L, r, self.generator)

    def table_at(self, r: int):
        return product_expand(self.product_at(r))

    def seidel_family(self) -> SeidelFamily:
        if self.seidel is None:
            raise SemanticError(f"{self.id} declares no Seidel map")
        return SeidelFamily(self.id, self.basis, self.config, self.seidel, 1)

    def inverse_family(self) -> SeidelFamily | None:
        if self.inverse is None:
            return None
        return SeidelFamily(self.id, self.basis, self.config, self.inverse, -1)

    def limit_vectors(self):
        """The ordered limit basis as ModuleElems (``None`` if not declared)."""
        if self.limit_basis is None:
            return None
        return [
            ModuleElem(self.basis, self.config, [p.to_ring(self.config) for p in vec])
            for vec in self.limit_basis
        ]

    def unknown_names(self):
        names = set()
        for t in (self.ansatz_product, self.ansatz_seidel):
            if t is not None:
                names |= {v[1:] for v in t.unknowns()}
        return names

    def has_ansatz(self):
        return self.ansatz_product is not None or self.ansatz_seidel is not None
