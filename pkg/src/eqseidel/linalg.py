"""Dense exact matrices over a commutative ring.

Matrices are lists of rows.  Entries only need ``+``, ``-``, ``*`` and
truthiness; Bareiss elimination additionally needs ``exact_div``.
"""

from __future__ import annotations

from .errors import VerificationFailed


def zero_like(x):
    return x * 0


def one_like(x):
    return x * 0 + 1


def _sample(A):
    return A[0][0]


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def identity(n, sample):
    z, o = zero_like(sample), one_like(sample)
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, m = shape(A)
    m2, p = shape(B)
    if m != m2:
        raise ValueError(f"cannot multiply {n}x{m} by {m2}x{p}")
    z = zero_like(_sample(A))
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = z
            for k in range(m):
                a = A[i][k]
                if a:
                    b = B[k][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def mat_apply(A, v):
    z = zero_like(_sample(A))
    out = []
    for row in A:
        acc = z
        for a, x in zip(row, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_equal(A, B):
    return shape(A) == shape(B) and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def _minor(A, i, j):
    return [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]


def det_cofactor(A):
    """Laplace expansion along the first row (tiny matrices only)."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    acc = zero_like(A[0][0])
    for j, a in enumerate(A[0]):
        if a:
            term = a * det_cofactor(_minor(A, 0, j))
            acc = acc + term if j % 2 == 0 else acc - term
    return acc


def det_bareiss(A):
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    M = [list(row) for row in A]
    sign = 1
    prev = one_like(M[0][0])
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return zero_like(M[0][0])
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def charpoly_berkowitz(A):
    """Coefficients ``[1, c1, ..., cn]`` of ``det(x I - A)``, division free."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    z = zero_like(A[0][0])
    o = one_like(A[0][0])
    p = [o]
    for r in range(1, n + 1):
        # leading r x r block split as [[B, C], [R, a]]
        a = A[r - 1][r - 1]
        C = [A[i][r - 1] for i in range(r - 1)]
        Rw = [A[r - 1][j] for j in range(r - 1)]
        B = [row[: r - 1] for row in A[: r - 1]]
        t = [o, -a]
        vec = C
        for _ in range(2, r + 1):
            s = z
            for x, y in zip(Rw, vec):
                if x and y:
                    s = s + x * y
            t.append(-s)
            vec = mat_apply(B, vec) if B else vec
        new = []
        for i in range(r + 1):
            acc = z
            for j in range(r):
                if 0 <= i - j < len(t) and p[j] and t[i - j]:
                    acc = acc + t[i - j] * p[j]
            new.append(acc)
        p = new
    return p


def det_berkowitz(A):
    c = charpoly_berkowitz(A)
    n = len(A)
    return c[n] if n % 2 == 0 else -c[n]


def adjugate_cofactor(A):
    n = len(A)
    if n == 1:
        return [[one_like(A[0][0])]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            m = det_cofactor(_minor(A, j, i))
            out[i][j] = m if (i + j) % 2 == 0 else -m
    return out


def adjugate_charpoly(A):
    """adj(A) = (-1)^(n-1) (A^(n-1) + c1 A^(n-2) + ... + c_(n-1) I)."""
    n = len(A)
    c = charpoly_berkowitz(A)
    sample = A[0][0]
    acc = identity(n, sample)
    for k in range(1, n):
        acc = mat_add(mat_mul(acc, A), mat_scale(c[k], identity(n, sample)))
    return acc if (n - 1) % 2 == 0 else mat_scale(-one_like(sample), acc)


def adjugate(A, method=None):
    """Adjugate with an internal ``A adj(A) = adj(A) A = det(A) I`` check."""
    n = len(A)
    if method is None:
        method = "cofactor" if n <= 6 else "charpoly"
    adj = adjugate_cofactor(A) if method == "cofactor" else adjugate_charpoly(A)
    d = det_berkowitz(A)
    target = mat_scale(d, identity(n, A[0][0]))
    if not (mat_equal(mat_mul(A, adj), target) and mat_equal(mat_mul(adj, A), target)):
        raise VerificationFailed("adjugate identity A*adj(A) = det(A)*Id failed")
    return adj
