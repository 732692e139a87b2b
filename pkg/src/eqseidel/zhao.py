"""The explicit equivariant Floer cochain complex of the complex plane.

Generators are pairs ``(c_k, x_j)`` with ``0 <= k <= K`` and ``0 <= j <= 2s``
in degree ``2k - j``; ``c_k`` stands for ``u^k``.  The differential is

    d(c_k, x_(2j-1)) = (c_k, x_(2j-2)) - j (c_(k+1), x_(2j)),   d(c_k, x_(2j)) = 0,

with terms beyond ``k = K`` dropped.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from . import snf
from .errors import TruncationTooSmall, UnexpectedFactor
from .module import CheckReport
from .ring import RingConfig, RingElem


@dataclass
class ZhaoComplex:
    s: int
    K: int
    generators: list  # (k, j)
    differential: dict  # (k, j) -> {(k', j'): coefficient}
    fault: object = field(default=None, repr=False)

    @staticmethod
    def degree_of(gen):
        k, j = gen
        return 2 * k - j

    def degrees(self):
        return sorted({self.degree_of(g) for g in self.generators})

    def in_degree(self, D):
        return [g for g in self.generators if self.degree_of(g) == D]

    def d(self, gen):
        return self.differential.get(gen, {})

    def matrix(self, D):
        """Integer matrix of ``d : C^D -> C^(D+1)`` (rows: targets, columns: sources)."""
        src, tgt = self.in_degree(D), self.in_degree(D + 1)
        index = {g: i for i, g in enumerate(tgt)}
        M = [[0] * len(src) for _ in tgt]
        for col, g in enumerate(src):
            for h, c in self.d(g).items():
                M[index[h]][col] += c
        return M

    def max_valid_degree(self):
        """Largest degree whose generators all have ``k + 1 < K``."""
        return 2 * (self.K - 2) - 2 * self.s + 1

    def to_json(self):
        return {
            "s": self.s,
            "K": self.K,
            "generators": [{"c": k, "x": j, "degree": 2 * k - j} for k, j in self.generators],
            "differential": [
                {"source": _gen_text(g), "image": {_gen_text(h): c for h, c in sorted(img.items())}}
                for g, img in sorted(self.differential.items()) if img
            ],
        }


def _gen_text(gen):
    return f"(c_{gen[0]}, x_{gen[1]})"


def build_complex(s: int, K: int, fault=None) -> ZhaoComplex:
    """The complex at slope index ``s`` truncated at ``c_K``.

    ``fault(gen, image)`` may rewrite the image of a generator; it exists so
    that tests can check the verifier catches a broken differential.
    """
    if s < 0:
        raise ValueError("slope index must be non-negative")
    if K < 1:
        raise ValueError("truncation bound must be at least 1")
    gens = [(k, j) for k in range(K + 1) for j in range(2 * s + 1)]
    d = {}
    for k, j in gens:
        image = {}
        if j % 2:
            half = (j + 1) // 2
            image[(k, j - 1)] = 1
            if k + 1 <= K:
                image[(k + 1, j + 1)] = -half
        if fault is not None:
            image = fault((k, j), dict(image))
        d[(k, j)] = {h: c for h, c in image.items() if c}
    return ZhaoComplex(s, K, gens, d, fault)


def flip_sign_fault(target_j, target_k=None):
    """Negate the ``(c_(k+1), x_(j+1))`` term in the image of ``(c_k, x_target_j)``.

    Every even generator is closed, so this leaves ``d^2 = 0`` intact; the
    mistake shows up as a sign change in the continuation factor instead.
    """

    def fault(gen, image):
        k, j = gen
        if j != target_j or (target_k is not None and k != target_k):
            return image
        return {h: (-c if h[1] == j + 1 else c) for h, c in image.items()}

    return fault


def unclosed_fault(target_j, target_k=None):
    """Give the even generator ``(c_k, x_target_j)`` the image ``(c_k, x_(target_j - 1))``."""
    if target_j < 2 or target_j % 2:
        raise ValueError("target must be an even index j >= 2")

    def fault(gen, image):
        k, j = gen
        if j != target_j or (target_k is not None and k != target_k):
            return image
        return {(k, j - 1): 1}

    return fault


def verify_d_squared(C: ZhaoComplex) -> CheckReport:
    """``d(d(g)) = 0`` for every generator with ``k + 1 < K``."""
    report = CheckReport(f"d^2 = 0 (s={C.s}, K={C.K})")
    checked = 0
    for g in C.generators:
        if g[0] + 1 >= C.K:
            continue
        checked += 1
        acc = {}
        for h, c in C.d(g).items():
            for h2, c2 in C.d(h).items():
                acc[h2] = acc.get(h2, 0) + c * c2
        acc = {h: c for h, c in acc.items() if c}
        if acc:
            report.fail(f"d^2 {_gen_text(g)} = " + " + ".join(f"{c}*{_gen_text(h)}" for h, c in sorted(acc.items())))
    report.details["checked"] = checked
    return report


# ---------------------------------------------------------------------------

@dataclass
class DegreeCohomology:
    degree: int
    rank: int
    torsion: list
    generators: list  # free generators, as coordinate dicts over C^D


def _require_valid(C, D):
    if D > C.max_valid_degree():
        raise TruncationTooSmall(
            f"degree {D} reaches c_{(D + 2 * C.s) // 2}; need K > {(D + 2 * C.s) // 2 + 1}, got {C.K}"
        )


def cohomology_in_degree(C: ZhaoComplex, D: int) -> DegreeCohomology:
    _require_valid(C, D)
    gens = C.in_degree(D)
    if not gens:
        return DegreeCohomology(D, 0, [], [])
    outgoing = C.matrix(D)
    incoming = C.matrix(D - 1)
    m = len(gens)
    # kernel of the outgoing map: columns of V beyond the rank
    if outgoing and outgoing[0]:
        _, S, V = snf.smith(outgoing)
        r = sum(1 for i in range(min(len(S), m)) if S[i][i])
        kernel = [[V[i][c] for i in range(m)] for c in range(r, m)]
    else:
        kernel = [[int(i == c) for i in range(m)] for c in range(m)]
    # image of the incoming map, written in kernel coordinates
    if incoming and incoming[0]:
        image_cols = [list(col) for col in zip(*incoming)]
    else:
        image_cols = []
    coords = [_solve_in_span(kernel, col) for col in image_cols]
    if not kernel:
        return DegreeCohomology(D, 0, [], [])
    rel = [list(row) for row in zip(*coords)] if coords else [[0] for _ in kernel]
    U, S, _ = snf.smith(rel)
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    torsion = [d for d in diag if d > 1]
    nonzero = sum(1 for d in diag if d)
    free_rows = list(range(nonzero, len(kernel)))
    Uinv = _unimodular_inverse(U)
    free = []
    for row in free_rows:
        kc = [Uinv[i][row] for i in range(len(kernel))]
        vec = [sum(kc[a] * kernel[a][i] for a in range(len(kernel))) for i in range(m)]
        free.append({gens[i]: v for i, v in enumerate(vec) if v})
    return DegreeCohomology(D, len(free_rows), torsion, free)


def _solve_in_span(basis, target):
    """Integer coordinates of ``target`` in the span of the ``basis`` vectors."""
    if not basis:
        if any(target):
            raise ArithmeticError("vector outside the zero span")
        return []
    A = [list(row) for row in zip(*basis)]
    U, S, V = snf.smith(A)
    b = [sum(u * t for u, t in zip(row, target)) for row in U]
    y = []
    for i in range(len(basis)):
        d = S[i][i] if i < len(S) else 0
        if d == 0:
            if i < len(b) and b[i]:
                raise ArithmeticError("vector outside the span")
            y.append(0)
        else:
            if b[i] % d:
                raise ArithmeticError("vector outside the integer span")
            y.append(b[i] // d)
    if any(b[len(basis):]):
        raise ArithmeticError("vector outside the span")
    return [sum(V[i][j] * y[j] for j in range(len(y))) for i in range(len(basis))]


def _unimodular_inverse(U):
    from fractions import Fraction

    n = len(U)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c])
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [[int(x) for x in row[n:]] for row in M]


def cohomology(C: ZhaoComplex, degrees=None):
    """``{degree: DegreeCohomology}``; default is every valid degree from ``-2s``."""
    if degrees is None:
        degrees = range(-2 * C.s, C.max_valid_degree() + 1)
    return {D: cohomology_in_degree(C, D) for D in degrees}


def cohomology_csv(table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "rank", "torsion", "generator"])
    for D, h in sorted(table.items()):
        gen = " + ".join(f"{c}*{_gen_text(g)}" for g, c in sorted(h.generators[0].items())) if h.generators else ""
        w.writerow([D, h.rank, " ".join(map(str, h.torsion)), gen])
    return buf.getvalue()


# ---------------------------------------------------------------------------

def class_coordinate(C: ZhaoComplex, D: int, vector):
    """Coordinate of ``vector`` (a dict over C^D) on the rank-one cohomology in degree D."""
    h = cohomology_in_degree(C, D)
    if h.rank != 1 or h.torsion:
        raise UnexpectedFactor(f"degree {D} cohomology is not free of rank one")
    gens = C.in_degree(D)
    base = [h.generators[0].get(g, 0) for g in gens]
    v = [vector.get(g, 0) for g in gens]
    # v = t * base + (a boundary)
    incoming = C.matrix(D - 1)
    cols = [list(col) for col in zip(*incoming)] if incoming and incoming[0] else []
    span = cols + [base]
    coords = _solve_in_span(span, v)
    return coords[-1]


def continuation_action(s: int, K=None, k=0, fault=None):
    """The factor ``c u^m`` with ``(c_k, x_2s) -> c (c_(k+m), x_(2s+2))`` in cohomology.

    The continuation map is the inclusion of the slope-``s`` complex into the
    slope-``(s+1)`` complex; the class of ``(c_k, x_2s)`` is compared with
    the generator class in the same degree of the larger complex.  ``fault``
    is passed to the larger complex.
    """
    if K is None:
        K = k + 4
    small, big = build_complex(s, K), build_complex(s + 1, K, fault)
    D = 2 * k - 2 * s
    src = cohomology_in_degree(small, D)
    if src.rank != 1:
        raise UnexpectedFactor(f"slope {s}: degree {D} is not rank one")
    target_gen = (k + 1, 2 * s + 2)
    # the class of the image, measured against (c_(k+1), x_(2s+2))
    coeff_image = class_coordinate(big, D, {(k, 2 * s): 1})
    coeff_target = class_coordinate(big, D, {target_gen: 1})
    if coeff_target == 0 or coeff_image % coeff_target:
        raise UnexpectedFactor(
            f"class of (c_{k}, x_{2 * s}) is not an integer multiple of (c_{k + 1}, x_{2 * s + 2})"
        )
    c = coeff_image // coeff_target
    if c == 0:
        raise UnexpectedFactor("continuation map kills the generator")
    return RingElem.monomial(RingConfig(), c, 0, 1)


def continuation_factors(s_max: int):
    return [continuation_action(s) for s in range(s_max + 1)]
