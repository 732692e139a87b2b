"""Matrix templates whose entries are polynomials in the level ``r``, ``q``, ``u``
and named unknowns.  Instantiating at a level substitutes ``r`` and attaches
the level to each unknown (``?alpha`` -> ``?alpha@r``)."""

from __future__ import annotations

from dataclasses import dataclass

from .module import GradedMap
from .poly import R, Poly, is_unknown, parse_unknown


def attach_level(poly: Poly, level: int) -> Poly:
    def rename(v):
        if is_unknown(v) and parse_unknown(v)[1] is None:
            return f"{v}@{level}"
        return v

    return poly.rename(rename)


@dataclass(frozen=True)
class MapTemplate:
    """``columns[k][l]`` is the ``e_l``-coefficient of the image of ``e_k``."""

    shift: int
    columns: tuple

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(c) for c in self.columns))

    @classmethod
    def from_images(cls, basis, shift, images):
        """``images`` maps source labels to ``{target label: Poly}`` dicts."""
        cols = []
        for src in basis.labels:
            img = images.get(src, {})
            cols.append(tuple(Poly.lift(img.get(tgt, 0)) for tgt in basis.labels))
        return cls(shift, tuple(cols))

    def unknowns(self):
        out = set()
        for col in self.columns:
            for p in col:
                out |= p.unknowns()
        return out

    def is_symbolic(self):
        return bool(self.unknowns())

    def entry(self, k, l):
        return self.columns[k][l]

    def at_level(self, r, level=None):
        """Substitute ``r`` and level the unknowns; returns Poly columns."""
        level = r if level is None else level
        return tuple(
            tuple(attach_level(p.subs({R: r}), level) for p in col) for col in self.columns
        )

    def instantiate(self, basis, config, r, levels=None, unknown_level=None):
        cols = self.at_level(r, unknown_level)
        matrix = [[cols[k][l] for k in range(len(basis))] for l in range(len(basis))]
        if any(p.unknowns() for col in cols for p in col):
            return GradedMap.unchecked(basis, basis, self.shift, matrix, config, levels)
        matrix = [[p.to_ring(config) for p in row] for row in matrix]
        return GradedMap(basis, basis, self.shift, matrix, config, levels)

    def map_entries(self, fn):
        return MapTemplate(self.shift, tuple(tuple(fn(p) for p in col) for col in self.columns))

    def at_u_zero(self):
        return self.map_entries(lambda p: p.at_u_zero())

    def depends_on_r(self):
        return any(R in p.variables() for col in self.columns for p in col)
