"""Exact integer and rational matrix algorithms.

Matrices are lists of row lists.  Integer matrices hold Python ints,
rational matrices hold ``fractions.Fraction``.  Everything here is exact;
there is no floating point anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction

Mat = list  # list of row lists; alias used in signatures for readability


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g = x*a + y*b."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def mat_copy(m: Mat) -> Mat:
    return [row[:] for row in m]


def mat_identity(n: int, one=1) -> Mat:
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def mat_transpose(m: Mat) -> Mat:
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a: Mat, b: Mat) -> Mat:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m: Mat, v: list) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v: list, m: Mat) -> list:
    if not m:
        return []
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def mat_eq(a: Mat, b: Mat) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def mat_det(m: Mat) -> Fraction:
    """Determinant by exact fraction elimination (empty matrix has det 1)."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = [a[i][j] - f * a[k][j] for j in range(n)]
    return det


def mat_rank(m: Mat) -> int:
    """Rank over the rationals."""
    if not m or not m[0]:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c] * inv
                a[i] = [a[i][j] - f * a[r][j] for j in range(cols)]
        r += 1
        if r == rows:
            break
    return r


def qmat_inv(m: Mat) -> Mat:
    """Exact inverse of a square rational matrix (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [a[i][j] - f * a[k][j] for j in range(2 * n)]
    return [row[n:] for row in a]


def solve_left(a: Mat, b: list) -> list | None:
    """Solve x * a = b exactly over the rationals; None if inconsistent.

    ``a`` has full row rank in all internal uses; among solutions an
    arbitrary (pivot-based) one is returned.
    """
    if not a:
        return [] if all(x == 0 for x in b) else None
    at = [[Fraction(x) for x in col] for col in zip(*a)]  # cols x rows
    rhs = [Fraction(x) for x in b]
    rows, cols = len(at), len(at[0])
    aug = [at[i] + [rhs[i]] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [aug[i][j] - f * aug[r][j] for j in range(cols + 1)]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return x


def matrix_hnf(m: Mat) -> tuple[Mat, Mat]:
    """Row Hermite normal form: returns (H, U) with H = U*m, U unimodular.

    Pivots are positive, entries below a pivot are zero and entries above it
    are reduced into [0, pivot).  Zero rows sink to the bottom.
    """
    a = mat_copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = mat_identity(rows)
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, rows):
            if a[i][c] == 0:
                continue
            g, x, y = xgcd(a[r][c], a[i][c])
            pr, pi = a[r][c] // g, a[i][c] // g
            a[r], a[i] = ([x * a[r][j] + y * a[i][j] for j in range(cols)],
                          [-pi * a[r][j] + pr * a[i][j] for j in range(cols)])
            u[r], u[i] = ([x * u[r][j] + y * u[i][j] for j in range(rows)],
                          [-pi * u[r][j] + pr * u[i][j] for j in range(rows)])
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [a[i][j] - q * a[r][j] for j in range(cols)]
                u[i] = [u[i][j] - q * u[r][j] for j in range(rows)]
        r += 1
        if r == rows:
            break
    return a, u


def matrix_snf(m: Mat) -> tuple[Mat, Mat, Mat]:
    """Smith normal form: returns (U, D, V) with D = U*m*V diagonal,
    nonnegative, and d1 | d2 | ... ; U and V unimodular.

    When the pivot divides an entry it is cleared by plain subtraction,
    which leaves the pivot row/column untouched; an xgcd combination is
    used otherwise and strictly shrinks the pivot, so the sweep terminates.
    """
    a = mat_copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = mat_identity(rows)
    v = mat_identity(cols)

    def row_combine(i, x, y, pi, pr, t):
        a[t], a[i] = ([x * a[t][j] + y * a[i][j] for j in range(cols)],
                      [-pi * a[t][j] + pr * a[i][j] for j in range(cols)])
        u[t], u[i] = ([x * u[t][j] + y * u[i][j] for j in range(rows)],
                      [-pi * u[t][j] + pr * u[i][j] for j in range(rows)])

    def col_combine(j, x, y, pj, pc, t):
        for rr in a:
            rr[t], rr[j] = x * rr[t] + y * rr[j], -pj * rr[t] + pc * rr[j]
        for rr in v:
            rr[t], rr[j] = x * rr[t] + y * rr[j], -pj * rr[t] + pc * rr[j]

    for t in range(min(rows, cols)):
        while True:
            piv = None
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = abs(a[i][j])
                    if x and (best is None or x < best):
                        best, piv = x, (i, j)
            if piv is None:
                break
            pi, pj = piv
            if pi != t:
                a[t], a[pi] = a[pi], a[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                for rr in a:
                    rr[t], rr[pj] = rr[pj], rr[t]
                for rr in v:
                    rr[t], rr[pj] = rr[pj], rr[t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    if a[i][t] % a[t][t] == 0:
                        q = a[i][t] // a[t][t]
                        a[i] = [a[i][j] - q * a[t][j] for j in range(cols)]
                        u[i] = [u[i][j] - q * u[t][j] for j in range(rows)]
                    else:
                        g, x, y = xgcd(a[t][t], a[i][t])
                        row_combine(i, x, y, a[i][t] // g, a[t][t] // g, t)
            for j in range(t + 1, cols):
                if a[t][j]:
                    if a[t][j] % a[t][t] == 0:
                        q = a[t][j] // a[t][t]
                        for rr in a:
                            rr[j] -= q * rr[t]
                        for rr in v:
                            rr[j] -= q * rr[t]
                    else:
                        g, x, y = xgcd(a[t][t], a[t][j])
                        col_combine(j, x, y, a[t][j] // g, a[t][t] // g, t)
            if any(a[i][t] for i in range(t + 1, rows)) or \
               any(a[t][j] for j in range(t + 1, cols)):
                continue
            # force divisibility of the trailing block by the pivot
            bad = next(((i, j) for i in range(t + 1, rows)
                        for j in range(t + 1, cols)
                        if a[i][j] % a[t][t] != 0), None)
            if bad is None:
                break
            bi = bad[0]
            a[t] = [a[t][j] + a[bi][j] for j in range(cols)]
            u[t] = [u[t][j] + u[bi][j] for j in range(rows)]
        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def snf_diagonal(m: Mat) -> list[int]:
    """Elementary divisors d1 | d2 | ... (including 1s and trailing 0s)."""
    _, d, _ = matrix_snf(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def rational_ldl(g: Mat) -> tuple[Mat, Mat]:
    """Exact LDL^T decomposition of a symmetric rational matrix.

    Returns (L, D) with L lower unitriangular and D diagonal such that
    g = L * D * L^T.  Raises ValueError on a zero leading principal minor;
    the caller must permute or perturb the basis in that case.
    """
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    lw = mat_identity(n, Fraction(1))
    d = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        dk = a[k][k]
        if dk == 0:
            raise ValueError(f"zero leading principal minor at index {k}")
        d[k][k] = dk
        for i in range(k + 1, n):
            lw[i][k] = a[i][k] / dk
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] -= lw[i][k] * dk * lw[j][k]
    return lw, d


def left_kernel(m: Mat) -> Mat:
    """Basis of the integer left kernel {x : x*m = 0} (saturated)."""
    h, u = matrix_hnf(m)
    return [u[i] for i in range(len(h)) if all(x == 0 for x in h[i])]


def saturate(m: Mat) -> Mat:
    """Saturation of the row span of an integer matrix in Z^n.

    Rows must be linearly independent.  Returns a basis of span_Q(m) ∩ Z^n
    in row HNF.
    """
    k = len(m)
    if k == 0:
        return []
    _, d, v = matrix_snf(m)
    vinv = qmat_inv(v)
    basis = [[int(x) for x in vinv[i]] for i in range(k)]
    h, _ = matrix_hnf(basis)
    return h


def hnf_intersection(a: Mat, b: Mat) -> Mat:
    """Basis (row HNF) of the intersection of two integer row lattices."""
    if not a or not b:
        return []
    stack = [row[:] for row in a] + [row[:] for row in b]
    ker = left_kernel(stack)
    ka = len(a)
    rows = [vec_mat(x[:ka], a) for x in ker]
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    h, _ = matrix_hnf(rows)
    return [row for row in h if any(row)]
