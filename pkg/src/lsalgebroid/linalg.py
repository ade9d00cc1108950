"""Gaussian elimination over the fraction field of Scalars.

Matrices are plain lists of rows.  Pivots are chosen by smallest total degree
(then position) to keep intermediate expressions small; every step is exact.
"""

from .errors import Degenerate, ShapeMismatch


def _pivot(rows, col, start):
    best = None
    for i in range(start, len(rows)):
        entry = rows[i][col]
        if entry.is_zero:
            continue
        key = (entry.total_degree, i)
        if best is None or key < best[0]:
            best = (key, i)
    return None if best is None else best[1]


def row_echelon(matrix):
    """Return (echelon rows, pivot columns, sign of the row permutation)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return rows, [], 1
    ncols = len(rows[0])
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = _pivot(rows, c, r)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        inv = rows[r][c].inverse()
        for i in range(r + 1, len(rows)):
            if rows[i][c].is_zero:
                continue
            factor = rows[i][c] * inv
            rows[i] = [a - factor * b if k >= c else a for k, (a, b) in enumerate(zip(rows[i], rows[r]))]
        pivots.append(c)
        r += 1
    return rows, pivots, sign


def rank(matrix):
    return len(row_echelon(matrix)[1])


def det(matrix):
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ShapeMismatch("determinant of a non-square matrix")
    if n == 0:
        raise ShapeMismatch("determinant of an empty matrix")
    rows, pivots, sign = row_echelon(matrix)
    if len(pivots) < n:
        return matrix[0][0].base.zero
    result = rows[0][0] if sign > 0 else -rows[0][0]
    for i in range(1, n):
        result = result * rows[i][i]
    return result


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` for one solution, or return None if inconsistent.

    Free variables are set to zero.  ``rhs`` is a list of Scalars.
    """
    if len(matrix) != len(rhs):
        raise ShapeMismatch("right-hand side length does not match row count")
    ncols = len(matrix[0]) if matrix else 0
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots, _ = row_echelon(augmented)
    if ncols in pivots:
        return None
    zero = rhs[0].base.zero if rhs else None
    x = [zero] * ncols
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        acc = rows[i][ncols]
        for k in range(c + 1, ncols):
            if not rows[i][k].is_zero and not x[k].is_zero:
                acc = acc - rows[i][k] * x[k]
        x[c] = acc / rows[i][c]
    return x


def inverse(matrix):
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ShapeMismatch("inverse of a non-square matrix")
    if rank(matrix) < n:
        raise Degenerate("matrix is singular over the fraction field")
    base = matrix[0][0].base
    columns = []
    for j in range(n):
        e = [base.one if i == j else base.zero for i in range(n)]
        columns.append(solve(matrix, e))
    return [[columns[j][i] for j in range(n)] for i in range(n)]


def transpose(matrix):
    return [list(col) for col in zip(*matrix)]


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x.is_zero or y.is_zero:
                    continue
                acc = x * y if acc is None else acc + x * y
            new.append(row[0].base.zero if acc is None else acc)
        out.append(new)
    return out
