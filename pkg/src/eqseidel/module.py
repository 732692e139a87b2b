"""Graded free modules over the coefficient ring and graded maps between them."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import (
    BasisMismatch,
    ConfigMismatch,
    DegreeViolation,
    LevelMismatch,
    NotHomogeneous,
    NotInvertible,
    ZeroElement,
)
from .ring import RingConfig, RingElem


@dataclass(frozen=True)
class BasisSpec:
    labels: tuple
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate basis labels in {self.labels}")
        if len(self.labels) != len(self.degrees):
            raise ValueError("one degree per basis label")

    def __len__(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise BasisMismatch(f"no basis element {label!r} in {self.labels}") from None

    def degree_of(self, label):
        return self.degrees[self.index(label)]

    @classmethod
    def standard(cls, n, step=2):
        """``e0, ..., en`` with ``|e_k| = step * k``."""
        return cls(tuple(f"e{k}" for k in range(n + 1)), tuple(step * k for k in range(n + 1)))


class ModuleElem:
    """An element of a graded free module, stored as a coordinate tuple."""

    __slots__ = ("basis", "config", "coords")

    def __init__(self, basis: BasisSpec, config: RingConfig, coords):
        coords = tuple(coords)
        if len(coords) != len(basis):
            raise BasisMismatch(f"{len(coords)} coordinates for a rank-{len(basis)} module")
        self.basis = basis
        self.config = config
        self.coords = coords

    @classmethod
    def zero(cls, basis, config):
        z = RingElem.zero(config)
        return cls(basis, config, [z] * len(basis))

    @classmethod
    def basis_vector(cls, basis, config, label):
        i = basis.index(label)
        z, o = RingElem.zero(config), RingElem.one(config)
        return cls(basis, config, [o if j == i else z for j in range(len(basis))])

    @classmethod
    def from_dict(cls, basis, config, mapping):
        z = RingElem.zero(config)
        coords = [z] * len(basis)
        for label, c in mapping.items():
            coords[basis.index(label)] = coords[basis.index(label)] + c
        return cls(basis, config, coords)

    def __getitem__(self, label):
        return self.coords[self.basis.index(label)]

    def items(self):
        return zip(self.basis.labels, self.coords)

    def _check(self, other):
        if not isinstance(other, ModuleElem):
            return False
        if other.basis != self.basis:
            raise BasisMismatch(f"{self.basis.labels} vs {other.basis.labels}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return ModuleElem(self.basis, self.config, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return ModuleElem(self.basis, self.config, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return ModuleElem(self.basis, self.config, [-a for a in self.coords])

    def __rmul__(self, scalar):
        return ModuleElem(self.basis, self.config, [scalar * a for a in self.coords])

    def scale(self, scalar):
        return scalar * self

    def __eq__(self, other):
        if not isinstance(other, ModuleElem):
            return NotImplemented
        return self.basis == other.basis and all(a == b for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash((self.basis, self.coords))

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def map_coords(self, fn):
        return ModuleElem(self.basis, self.config, [fn(c) for c in self.coords])

    def with_config(self, config):
        return ModuleElem(self.basis, config, [c.with_config(config) for c in self.coords])

    def truncate_u(self, order):
        return self.map_coords(lambda c: c.truncate_u(order))

    def degrees(self):
        out = set()
        for c, d in zip(self.coords, self.basis.degrees):
            if c:
                out |= {x + d for x in c.degrees()}
        return out

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        degs = self.degrees()
        if len(degs) != 1:
            if not degs:
                raise ZeroElement("the zero vector has no degree")
            raise NotHomogeneous(f"{self} mixes degrees {sorted(degs)}")
        return degs.pop()

    def u_valuation(self):
        vals = [c.u_valuation() for c in self.coords if c]
        if not vals:
            raise ZeroElement("the zero vector has no u-valuation")
        return min(vals)

    def __str__(self):
        parts = []
        for label, c in self.items():
            if not c:
                continue
            text = str(c)
            if text == "1":
                parts.append((1, label))
            elif text == "-1":
                parts.append((-1, label))
            elif (len(getattr(c, "terms", {})) == 1) and not text.startswith("-"):
                parts.append((1, f"{text}*{label}"))
            elif len(getattr(c, "terms", {})) == 1:
                parts.append((-1, f"{text[1:]}*{label}"))
            else:
                parts.append((1, f"({text})*{label}"))
        if not parts:
            return "0"
        out = []
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                out.append(body if sign > 0 else f"-{body}")
            else:
                out.append(f" + {body}" if sign > 0 else f" - {body}")
        return "".join(out)

    def __repr__(self):
        return f"ModuleElem({self})"


@dataclass(frozen=True, eq=False)
class GradedMap:
    """A degree-``shift`` homomorphism; ``matrix[l][k]`` is the ``e_l``-coordinate of ``M(e_k)``.

    ``levels`` optionally records the action levels ``(source, target)`` so
    that compositions can be checked for consecutive levels.
    """

    source: BasisSpec
    target: BasisSpec
    shift: int
    matrix: tuple
    config: RingConfig
    levels: tuple | None = None
    checked: bool = field(default=True)

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if len(rows) != len(self.target) or any(len(r) != len(self.source) for r in rows):
            raise BasisMismatch("matrix shape does not match bases")
        if self.checked:
            report = check_grading(self)
            if not report.passed:
                raise DegreeViolation("; ".join(report.failures))

    @classmethod
    def unchecked(cls, source, target, shift, matrix, config, levels=None):
        """Skip the eager degree check (solver ansatz matrices)."""
        return cls(source, target, shift, matrix, config, levels, checked=False)

    @classmethod
    def from_columns(cls, source, target, shift, columns, config, levels=None, checked=True):
        """Build from images ``columns[k] = M(e_k)`` given as ModuleElems."""
        matrix = [[col.coords[l] for col in columns] for l in range(len(target))]
        return cls(source, target, shift, matrix, config, levels, checked)

    @classmethod
    def identity(cls, basis, config, level=None):
        one, z = RingElem.one(config), RingElem.zero(config)
        mat = [[one if i == j else z for j in range(len(basis))] for i in range(len(basis))]
        levels = None if level is None else (level, level)
        return cls(basis, basis, 0, mat, config, levels)

    @classmethod
    def zero_map(cls, source, target, shift, config):
        z = RingElem.zero(config)
        return cls(source, target, shift, [[z] * len(source) for _ in target.labels], config)

    def column(self, label):
        k = self.source.index(label)
        return ModuleElem(self.target, self.config, [row[k] for row in self.matrix])

    def columns(self):
        return [self.column(label) for label in self.source.labels]

    def entry(self, target_label, source_label):
        return self.matrix[self.target.index(target_label)][self.source.index(source_label)]

    def __call__(self, x):
        return map_apply(self, x)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.shift == other.shift
            and linalg.mat_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.source, self.target, self.shift, self.matrix))

    def map_entries(self, fn, shift=None, checked=None):
        mat = [[fn(e) for e in row] for row in self.matrix]
        return GradedMap(
            self.source,
            self.target,
            self.shift if shift is None else shift,
            mat,
            self.config,
            self.levels,
            self.checked if checked is None else checked,
        )

    def at_u_zero(self):
        return self.map_entries(lambda e: e.at_u_zero())

    def with_config(self, config):
        return GradedMap(
            self.source, self.target, self.shift,
            [[e.with_config(config) for e in row] for row in self.matrix],
            config, self.levels, self.checked,
        )

    def __str__(self):
        lines = []
        for label in self.source.labels:
            lines.append(f"{label} -> {self.column(label)}")
        return "\n".join(lines)


def map_apply(M: GradedMap, x: ModuleElem) -> ModuleElem:
    if x.basis != M.source:
        raise BasisMismatch(f"map expects {M.source.labels}, got {x.basis.labels}")
    if x.config != M.config:
        raise ConfigMismatch(f"{x.config} vs {M.config}")
    return ModuleElem(M.target, M.config, linalg.mat_apply(M.matrix, x.coords))


def map_compose(M2: GradedMap, M1: GradedMap) -> GradedMap:
    """``M2 after M1``; shifts add and action levels must chain."""
    if M1.target != M2.source:
        raise BasisMismatch(f"cannot compose: {M1.target.labels} vs {M2.source.labels}")
    levels = None
    if M1.levels is not None and M2.levels is not None:
        if M1.levels[1] != M2.levels[0]:
            raise LevelMismatch(
                f"map ending at level {M1.levels[1]} composed with one starting at {M2.levels[0]}"
            )
        levels = (M1.levels[0], M2.levels[1])
    mat = linalg.mat_mul(M2.matrix, M1.matrix)
    return GradedMap(
        M1.source, M2.target, M1.shift + M2.shift, mat, M1.config, levels,
        checked=M1.checked and M2.checked,
    )


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, message):
        self.passed = False
        self.failures.append(message)

    def merge(self, other):
        if not other.passed:
            self.passed = False
            self.failures.extend(f"{other.name}: {f}" for f in other.failures)
        return self

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}" + ("" if self.passed else f" ({len(self.failures)} failures)")


def check_grading(M: GradedMap) -> CheckReport:
    report = CheckReport("grading")
    for l, row in enumerate(M.matrix):
        for k, entry in enumerate(row):
            if not entry:
                continue
            want = M.shift + M.source.degrees[k] - M.target.degrees[l]
            found = entry.degrees()
            if found != {want}:
                report.fail(
                    f"entry ({M.target.labels[l]}, {M.source.labels[k]}) = {entry} "
                    f"has degrees {sorted(found)}, expected {want}"
                )
    return report


map_check_grading = check_grading


def basis_change_matrix(vectors):
    """Columns are the new basis vectors in old coordinates."""
    n = len(vectors)
    return [[vectors[k].coords[l] for k in range(n)] for l in range(n)]


def invert_matrix(P):
    """Inverse over the ring; requires a unit determinant."""
    d = linalg.det_berkowitz(P)
    if not d.is_unit():
        raise NotInvertible(f"basis change has non-unit determinant {d}")
    adj = linalg.adjugate(P)
    return linalg.mat_scale(d.inverse(), adj)


def change_basis(M: GradedMap, vectors, labels=None) -> GradedMap:
    """Rewrite an endomorphism-shaped map in the ordered basis ``vectors``.

    ``vectors`` are homogeneous ModuleElems over ``M.source`` (which must equal
    ``M.target``).  Returns ``P^-1 M P`` over a new basis named ``labels``.
    """
    if M.source != M.target:
        raise BasisMismatch("change_basis needs a map from a module to itself")
    vectors = list(vectors)
    if len(vectors) != len(M.source):
        raise NotInvertible("wrong number of basis vectors")
    for v in vectors:
        if v.basis != M.source:
            raise BasisMismatch("basis vectors must live in the map's module")
    if labels is None:
        labels = tuple(f"g{k}" for k in range(len(vectors)))
    new_basis = BasisSpec(tuple(labels), tuple(v.degree() for v in vectors))
    P = basis_change_matrix(vectors)
    Pinv = invert_matrix(P)
    mat = linalg.mat_mul(Pinv, linalg.mat_mul(M.matrix, P))
    return GradedMap(new_basis, new_basis, M.shift, mat, M.config, M.levels, M.checked)


def u_act(x: ModuleElem, k: int) -> ModuleElem:
    """The u-action, realized as multiplication of every coordinate by ``u^k``."""
    if k < 0:
        raise ValueError("u acts by non-negative powers")
    uk = RingElem.u(x.config, k) if k else RingElem.one(x.config)
    return x.map_coords(lambda c: uk * c)
