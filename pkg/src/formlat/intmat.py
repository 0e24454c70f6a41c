"""Exact integer and rational matrix utilities.

Everything here works on plain lists/tuples of Python ints or Fractions, so
results are exact at any size.  Smith normal form (with transforms) is
delegated to sympy's DomainMatrix routines; the row-style Hermite form used
for canonical subgroup comparison is implemented directly because its exact
normalization (positive pivots, entries above a pivot reduced into [0, pivot))
is part of this package's contract.
"""

from fractions import Fraction

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mul(a, b) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(a) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def snf_with_transforms(a):
    """Return (S, U, V) with S = U @ a @ V in Smith normal form, all integer."""
    dm = DomainMatrix([[ZZ(x) for x in row] for row in a], (len(a), len(a[0])), ZZ)
    s, u, v = smith_normal_decomp(dm)
    to_rows = lambda d: [[int(x) for x in row] for row in d.to_Matrix().tolist()]
    return to_rows(s), to_rows(u), to_rows(v)


def invariant_factors(a) -> list[int]:
    """Nonzero diagonal of the Smith form, made positive, divisibility order."""
    s, _, _ = snf_with_transforms(a)
    k = min(len(s), len(s[0]))
    return [abs(s[i][i]) for i in range(k) if s[i][i] != 0]


def integer_kernel(a) -> Matrix:
    """Basis (rows) of the saturated kernel {x : a @ x = 0} over the integers.

    The basis extends to a basis of the ambient Z^n (columns of a unimodular
    transform), i.e. the kernel is returned as a primitive sublattice.
    """
    s, _, v = snf_with_transforms(a)
    rows, cols = len(a), len(a[0])
    ker_cols = [j for j in range(cols) if j >= min(rows, cols) or s[j][j] == 0]
    return [[v[i][j] for i in range(cols)] for j in ker_cols]


def row_hnf(a) -> tuple[tuple[int, ...], ...]:
    """Canonical row Hermite form of the row span; zero rows dropped.

    Pivots are positive, entries above each pivot lie in [0, pivot).  Two
    integer matrices span the same subgroup of Z^n iff their row_hnf agree.
    """
    m = [list(row) for row in a]
    if not m:
        return ()
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(m[i][c]), i))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, nrows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if any(m[i][c] != 0 for i in range(r, nrows)):
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
    return tuple(tuple(row) for row in m[:r])


def same_row_span(a, b) -> bool:
    return row_hnf(a) == row_hnf(b)


def is_primitive_rows(a) -> bool:
    """True iff the rows span a saturated (primitive) full-rank-k subgroup."""
    facs = invariant_factors(a)
    return len(facs) == len(a) and all(f == 1 for f in facs)


def quotient_generators(rows, n: int) -> list[tuple[list[int], int]]:
    """Generators of Z^n modulo the subgroup spanned by ``rows``.

    Returns [(vector, order)] with order > 1 for the finite part; requires the
    row span to have full rank n (finite quotient).
    """
    st = transpose(rows)  # n x k, columns generate the subgroup
    s, u, _ = snf_with_transforms(st)
    uinv = invert_unimodular(u)
    gens = []
    for i in range(n):
        d = abs(s[i][i]) if i < min(len(s), len(s[0])) else 0
        if d == 0:
            raise ValueError("quotient is infinite: row span not full rank")
        if d > 1:
            gens.append(([uinv[r][i] for r in range(n)], d))
    return gens


def invert_unimodular(u) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    inv = solve_matrix([[Fraction(x) for x in row] for row in u],
                       [[Fraction(int(i == j)) for j in range(len(u))] for i in range(len(u))])
    out = []
    for row in inv:
        assert all(x.denominator == 1 for x in row)
        out.append([int(x) for x in row])
    return out


def solve_matrix(a, b):
    """Solve a @ x = b for square nonsingular a over the rationals."""
    n = len(a)
    m = [[Fraction(x) for x in row_a] + [Fraction(x) for x in row_b]
         for row_a, row_b in zip(a, b)]
    w = len(m[0])
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        inv = 1 / m[k][k]
        m[k] = [x * inv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [row[n:w] for row in m]


def frac_inverse(a):
    n = len(a)
    return solve_matrix(a, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])


def inertia(gram) -> tuple[int, int]:
    """Signature (positives, negatives) of a nondegenerate symmetric matrix.

    Symmetric congruence diagonalization over the rationals; zero diagonal
    entries are repaired by adding a row/column that pairs nontrivially.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    raise ValueError("degenerate form")
                for col in range(n):
                    a[k][col] += a[j][col]
                for row in a:
                    row[k] += row[j]
        d = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for col in range(n):
                    a[i][col] -= f * a[k][col]
                for row in range(n):
                    a[row][i] -= f * a[row][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg
