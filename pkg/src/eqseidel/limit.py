"""Direct limits of injective Seidel families.

For maps ``A_0, A_1, ...`` (written in an ordered basis ``g_0..g_n``) the image
of level ``p`` in the limit is spanned by ``x_k^p / D_p`` where
``x_k^p = adj(A_0) ... adj(A_{p-1}) g_k`` and ``D_p = det(A_0) ... det(A_{p-1})``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from . import linalg
from .errors import NotDivisible, RouteMismatch, UnexpectedFactor
from .module import BasisSpec, CheckReport, GradedMap, ModuleElem, change_basis, map_apply
from .poly import Q, Poly
from .ring import RingElem
from .upoly import from_laurent, poly_divmod, poly_gcd, to_poly


def det_division_free(M, method="bareiss"):
    """Exact determinant; ``bareiss`` (exact divisions only) or ``berkowitz``."""
    if method == "bareiss":
        return linalg.det_bareiss(M)
    if method == "berkowitz":
        return linalg.det_berkowitz(M)
    if method == "cofactor":
        return linalg.det_cofactor(M)
    raise ValueError(f"unknown determinant method {method!r}")


def adjugate(M, method=None):
    return linalg.adjugate(M, method)


def _matrix(M):
    return M.matrix if isinstance(M, GradedMap) else M


# ---------------------------------------------------------------------------

@dataclass
class GeneratorSequence:
    space_id: str
    basis: BasisSpec  # the ordered basis g_0..g_n
    vectors: list  # ordered basis vectors in the original module
    maps: list  # A_r in the ordered basis
    dets: list  # det(A_r)
    D: list  # D_p for p = 0..p_max
    x: list  # x[p][k], ModuleElem over ``basis``
    p_max: int = 0
    family: object = None

    def map_at(self, p):
        if p < len(self.maps):
            return self.maps[p]
        return family_in_basis(self.family, p, self.vectors)

    @property
    def config(self):
        return self.maps[0].config if self.maps else self.x[0][0].config


def _standard_vectors(F):
    return [ModuleElem.basis_vector(F.basis, F.config, lab) for lab in F.basis.labels]


def family_in_basis(F, r, vectors=None):
    M = F.instantiate(r)
    if vectors is None:
        return M
    return change_basis(M, vectors)


def generator_sequence(F, p_max: int, vectors=None) -> GeneratorSequence:
    """Build ``x_k^p`` for ``p <= p_max`` by two routes and insist they agree.

    The direct route multiplies the adjugates out; the recurrence route uses
    ``x_k^(p+1) = sum_j adj(A_p)[j][k] x_j^p``.
    """
    if vectors is None:
        vectors = _standard_vectors(F)
    maps = [family_in_basis(F, r, vectors) for r in range(p_max)]
    if maps:
        basis = maps[0].source
    else:
        basis = BasisSpec(tuple(f"g{k}" for k in range(len(vectors))), tuple(v.degree() for v in vectors))
    config = F.config
    n = len(basis)
    adjs = [adjugate(A.matrix) for A in maps]
    dets = []
    for A in maps:
        d1 = det_division_free(A.matrix, "bareiss")
        d2 = det_division_free(A.matrix, "berkowitz")
        if d1 != d2:
            raise RouteMismatch(f"determinant algorithms disagree: {d1} vs {d2}")
        if not d1:
            raise NotDivisible(f"{F.space_id}: the map at level {len(dets)} is not injective")
        dets.append(d1)
    D = [RingElem.one(config)]
    for d in dets:
        D.append(D[-1] * d)

    def elem(coords):
        return ModuleElem(basis, config, coords)

    # direct route: columns of the running product of adjugates
    direct = []
    prod = linalg.identity(n, RingElem.one(config))
    direct.append([elem([row[k] for row in prod]) for k in range(n)])
    for adj in adjs:
        prod = linalg.mat_mul(prod, adj)
        direct.append([elem([row[k] for row in prod]) for k in range(n)])

    # recurrence route
    rec = [direct[0]]
    for adj in adjs:
        prev = rec[-1]
        step = []
        for k in range(n):
            acc = ModuleElem.zero(basis, config)
            for j in range(n):
                if adj[j][k]:
                    acc = acc + adj[j][k] * prev[j]
            step.append(acc)
        rec.append(step)

    for p, (a, b) in enumerate(zip(direct, rec)):
        for k, (xa, xb) in enumerate(zip(a, b)):
            if xa != xb:
                raise RouteMismatch(f"x_{k}^{p}: direct {xa} but recurrence {xb}")
    return GeneratorSequence(F.space_id, basis, list(vectors), maps, dets, D, direct, p_max, F)


# ---------------------------------------------------------------------------

@dataclass
class Normalized:
    p: int
    raw: ModuleElem  # x_0^p
    scale: RingElem  # what x_0^p is divided by
    value: ModuleElem  # raw / scale in the localized ring


def _cancel_factor(A):
    """``lam`` with ``A g_0 = lam g_last``, or None."""
    col = [row[0] for row in A.matrix]
    if any(col[:-1]) or not col[-1]:
        return None
    return col[-1]


def normalized_generators(G: GeneratorSequence, index=0):
    """The designated generators ``x_index^p / (D_p * lam_p)`` in the localized ring.

    ``lam_p`` is the factor with ``A_p g_0 = lam_p g_last``.  One copy of it
    cancels: ``x_last^(p+1) = (det A_p / lam_p) x_0^p`` is checked exactly, so
    the quotient equals ``x_last^(p+1) / D_(p+1)``.  When ``A_p g_0`` has a
    different shape the scale is just ``D_p``.
    """
    loc = G.config.localized()
    out = []
    last = len(G.basis) - 1
    for p in range(G.p_max + 1):
        raw = G.x[p][index]
        scale = G.D[p]
        A = G.map_at(p) if G.family is not None or p < len(G.maps) else None
        lam = _cancel_factor(A) if (A is not None and index == 0) else None
        if lam is not None:
            det = G.dets[p] if p < len(G.dets) else det_division_free(A.matrix)
            cofactor = det.exact_div(lam)
            adj = adjugate(A.matrix)
            nxt = ModuleElem.zero(G.basis, G.config)
            for j in range(len(G.basis)):
                if adj[j][last]:
                    nxt = nxt + adj[j][last] * G.x[p][j]
            if nxt != cofactor * raw:
                raise NotDivisible(f"x_{last}^{p + 1} is not {cofactor} times x_0^{p}; no cancellation")
            scale = scale * lam
        s = scale.with_config(loc)
        if not s.is_unit():
            raise NotDivisible(f"{scale} is not invertible after localizing u")
        inv = s.inverse()
        value = raw.with_config(loc).map_coords(lambda c: c * inv)
        if value.map_coords(lambda c: c * s) != raw.with_config(loc):
            raise NotDivisible(f"normalizing x_{index}^{p} does not multiply back")
        out.append(Normalized(p, raw, scale, value))
    return out


def all_normalized(G: GeneratorSequence, p):
    """Every ``x_k^p / D_p`` in the localized ring."""
    loc = G.config.localized()
    inv = G.D[p].with_config(loc).inverse()
    return [x.with_config(loc).map_coords(lambda c: c * inv) for x in G.x[p]]


def paper_closed_form_n1(config, basis, p, order=2):
    """``q^(p-1) ((q + p(p+1) u) g_0 - u g_1)`` truncated at ``u^order``."""
    q, u = RingElem.q(config), RingElem.u(config)
    qp = RingElem.q(config, p - 1) if p >= 1 else RingElem.q(config, -1)
    v = ModuleElem(basis, config, [qp * (q + p * (p + 1) * u), -(qp * u)])
    return v.truncate_u(order)


# ---------------------------------------------------------------------------

def chain_strictness(G: GeneratorSequence, p_max=None) -> CheckReport:
    """Is ``N_p`` (span of ``x_k^p / D_p``) strictly smaller than ``N_(p+1)``?

    ``N_(p+1) = N_p`` exactly when ``A_p`` is invertible over the ring, i.e. when
    every column of ``adj(A_p)`` is divisible by ``det(A_p)``.  A column of
    smaller u-valuation than the determinant gives a level-(p+1) generator with
    a negative u-power relative to level p, which no ring combination reaches.
    """
    p_max = G.p_max if p_max is None else min(p_max, G.p_max)
    report = CheckReport(f"chain strictness ({G.space_id})")
    steps = []
    stable_at = None
    for p in range(p_max):
        det = G.dets[p]
        adj = adjugate(G.maps[p].matrix)
        witness = None
        for k in range(len(G.basis)):
            col = [row[k] for row in adj]
            nz = [c for c in col if c]
            val = min(c.u_valuation() for c in nz)
            if val < det.u_valuation():
                witness = (k, f"u-valuation {val} < {det.u_valuation()}")
                break
            if any(not det.divides(c) for c in nz):
                witness = (k, "not divisible by the determinant")
                break
        steps.append({"p": p, "strict": witness is not None, "witness": None if witness is None else {
            "generator": f"x_{witness[0]}^{p + 1}", "reason": witness[1]}})
        if witness is None and stable_at is None:
            stable_at = p
    report.details["steps"] = steps
    report.details["stable_at"] = stable_at
    if stable_at is not None:
        report.fail(f"chain stabilizes at p = {stable_at}")
    return report


def trajectory(F, label, p_max, vectors=None):
    """Forward images ``EQS_(p-1) ... EQS_0 (label)`` with their u-valuations."""
    x = ModuleElem.basis_vector(F.basis, F.config, label)
    out = [(0, x, x.u_valuation())]
    for r in range(p_max):
        x = map_apply(F.instantiate(r), x)
        out.append((r + 1, x, x.u_valuation() if x else None))
    return out


def trajectory_report(F, label, p_max) -> CheckReport:
    report = CheckReport(f"{label} never becomes divisible by u ({F.space_id})")
    rows = []
    for p, x, val in trajectory(F, label, p_max):
        rows.append({"p": p, "image": str(x), "u_valuation": val, "at_u_zero": str(x.map_coords(lambda c: c.at_u_zero()))})
        if val is None or val > 0:
            report.fail(f"image at p = {p} is divisible by u: {x}")
    report.details["images"] = rows
    return report


# ---------------------------------------------------------------------------
# u = 0

def _primitive(vec):
    """Divide a vector of Laurent polynomials in q by their common factor."""
    g = None
    for p in vec:
        if p:
            coeffs, _ = from_laurent(p, Q)
            g = coeffs if g is None else poly_gcd(g, coeffs)
    if g is None:
        return vec
    out = []
    for p in vec:
        if not p:
            out.append(p)
            continue
        coeffs, shift = from_laurent(p, Q)
        quo, rem = poly_divmod(coeffs, g)
        assert not rem
        out.append(to_poly(quo, Q, shift))
    low = min(from_laurent(p, Q)[1] for p in out if p)
    out = [p * Poly.var(Q, -low) for p in out]
    # clear denominators, then the integer content
    den = 1
    for p in out:
        for c in p.terms.values():
            den = lcm(den, c.denominator)
    num = 0
    for p in out:
        for c in p.terms.values():
            num = gcd(num, int(c * den))
    return [p * Fraction(den, num) for p in out]


def kernel(matrix):
    """A basis of the kernel of a matrix of Laurent polynomials in q over Q(q).

    Fraction-free elimination, then each basis vector made primitive.
    """
    rows = [[Poly.lift(e) for e in row] for row in matrix]
    nrows, ncols = len(rows), len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        cand = [i for i in range(r, nrows) if rows[i][c]]
        if not cand:
            continue
        best = min(cand, key=lambda i: (len(rows[i][c].terms), i))
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        for i in range(nrows):
            if i != r and rows[i][c]:
                a = rows[i][c]
                rows[i] = [piv * x - a * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    pivot_cols = {c: i for i, c in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        # each pivot row reads piv*x_c + a_f*x_f = 0 after full elimination
        scale = Poly.const(1)
        for i, c in pivots:
            scale = scale * rows[i][c]
        vec = [Poly() for _ in range(ncols)]
        vec[f] = scale
        for i, c in pivots:
            piv = rows[i][c]
            others = Poly.const(1)
            for i2, c2 in pivots:
                if i2 != i:
                    others = others * rows[i2][c2]
            vec[c] = -(rows[i][f] * others)
        basis.append(_normalize_vector(_primitive(vec)))
    return basis


def _normalize_vector(vec):
    """Scale by a unit ``+-q^a`` so that the last unit coordinate is exactly 1."""
    for p in reversed(vec):
        if p and p.is_unit():
            inv = p.unit_inverse()
            return [x * inv for x in vec]
    for p in reversed(vec):
        if p:
            lead = p.sorted_terms()[-1][1]
            return [x * (1 if lead > 0 else -1) for x in vec]
    return vec


@dataclass
class LimitStage:
    basis: tuple  # labels kept at this stage
    matrix: list  # induced map on the quotient (Polys)
    kernel: list  # kernel vectors (Polys over ``basis``)
    dropped: list  # labels quotiented out


@dataclass
class NonEquivariantLimit:
    space_id: str
    stages: list = field(default_factory=list)
    rank: int = 0
    isomorphism: bool = False
    determinant: str = ""
    note: str = ""

    def first_kernel(self):
        return self.stages[0].kernel if self.stages else []

    def to_json(self, labels):
        return {
            "space": self.space_id,
            "kernel": [vector_text(labels, v) for v in self.first_kernel()],
            "quotient_basis": list(self.stages[-1].basis) if self.stages else [],
            "rank": self.rank,
            "isomorphism": self.isomorphism,
            "determinant": self.determinant,
            "note": self.note,
        }


def vector_text(labels, vec):
    from .catalog.render import vector_text as vt

    return vt(labels, vec)


def nonequivariant_limit(M0, space_id="") -> NonEquivariantLimit:
    """Limit of ``F -> F -> ...`` under a fixed u = 0 map.

    Quotient by the kernel, recompute the induced map, and repeat until it is
    injective; then the limit is the remaining free module when the induced
    map has a unit determinant.
    """
    labels = tuple(M0.source.labels)
    matrix = [[Poly.lift(e) for e in row] for row in M0.matrix]
    result = NonEquivariantLimit(space_id)
    while True:
        ker = kernel(matrix) if labels else []
        stage = LimitStage(labels, matrix, ker, [])
        result.stages.append(stage)
        if not ker:
            break
        if len(ker) == len(labels):
            stage.dropped = list(labels)
            labels, matrix = (), []
            result.stages.append(LimitStage((), [], [], []))
            break
        # drop, for each kernel vector, its highest-index unit coordinate
        drop = []
        for v in ker:
            idx = next((i for i in range(len(v) - 1, -1, -1) if v[i] and v[i].is_unit() and i not in drop), None)
            if idx is None:
                result.note = "kernel has no unit coordinate; quotient is not free on a basis subset"
                result.rank = None
                return result
            drop.append(idx)
        stage.dropped = [labels[i] for i in drop]
        keep = [i for i in range(len(labels)) if i not in drop]

        def reduce(vec):
            vec = list(vec)
            for v, i in zip(ker, drop):
                if vec[i]:
                    f = vec[i] * v[i].unit_inverse()
                    vec = [a - f * b for a, b in zip(vec, v)]
            return vec

        cols = []
        for k in keep:
            image = reduce([matrix[l][k] for l in range(len(labels))])
            cols.append([image[l] for l in keep])
        matrix = [[cols[j][i] for j in range(len(keep))] for i in range(len(keep))]
        labels = tuple(labels[i] for i in keep)
    result.rank = len(labels)
    if labels:
        det = linalg.det_berkowitz(matrix)
        result.determinant = str(det)
        result.isomorphism = bool(det) and det.is_unit()
    else:
        result.determinant = "1"
        result.isomorphism = True
    return result


# ---------------------------------------------------------------------------
# rank-one limits

def _primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def recognize_rank_one(factors):
    """Name the limit of ``Z[u] -> Z[u] -> ...`` with maps ``c_s u^m_s``.

    Only finitely many factors are seen, so this is a pattern match: every
    prime up to the number of factors must divide some ``c_s`` before the
    answer is ``Q[u, u^-1]``.  Otherwise the primes seen are inverted.
    """
    ints, upow = [], []
    for f in factors:
        if not f:
            return "0"
        if len(f.terms) != 1:
            raise UnexpectedFactor(f"{f} is not a single monomial")
        ((a, b), c), = f.terms.items()
        if a != 0 or Fraction(c).denominator != 1:
            raise UnexpectedFactor(f"{f} is not an integer multiple of a power of u")
        ints.append(abs(int(c)))
        upow.append(b)
    if not ints:
        raise UnexpectedFactor("no factors given")
    var = "u, u^-1" if any(b > 0 for b in upow) else "u"
    seen = sorted({p for c in ints for p in _primes_upto(c) if c % p == 0})
    if not seen:
        return f"Z[{var}]"
    if set(_primes_upto(len(ints))) <= set(seen):
        return f"Q[{var}]"
    inv = ", ".join(f"1/{p}" for p in seen)
    return f"Z[{inv}][{var}]"


# ---------------------------------------------------------------------------
# export

def generator_rows(G: GeneratorSequence, truncate_u=None):
    rows = []
    for p in range(G.p_max + 1):
        for k, x in enumerate(G.x[p]):
            shown = x if truncate_u is None else x.truncate_u(truncate_u)
            rows.append({
                "p": p,
                "k": k,
                "determinant": str(G.D[p]),
                "generator": str(shown) + ("" if truncate_u is None else f" + o(u^{truncate_u})"),
            })
    return rows


def generator_csv(G: GeneratorSequence, truncate_u=None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["p", "k", "determinant", "generator"], lineterminator="\n")
    w.writeheader()
    w.writerows(generator_rows(G, truncate_u))
    return buf.getvalue()
