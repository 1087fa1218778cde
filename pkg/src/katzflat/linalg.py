"""Small exact linear algebra over the rationals (lists of lists)."""

from ._rational import ONE, ZERO, to_rational


class SingularMatrixError(ValueError):
    pass


def _copy(rows):
    return [[to_rational(v) for v in r] for r in rows]


def row_reduce(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    a = _copy(rows)
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = ONE / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def rank(rows):
    if not rows:
        return 0
    return len(row_reduce(rows)[1])


def inverse(rows):
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(_copy(rows))]
    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [r[n:] for r in red]


def solve_columns(columns, target):
    """Coefficients c with sum_k c_k * columns[k] == target, or None.

    ``columns`` must be linearly independent.
    """
    n_rows = len(target)
    aug = [[columns[k][i] for k in range(len(columns))] + [target[i]] for i in range(n_rows)]
    red, pivots = row_reduce(aug)
    l = len(columns)
    if l in pivots:
        return None
    if pivots != list(range(l)):
        raise SingularMatrixError("columns are linearly dependent")
    return [red[k][l] for k in range(l)]


def matvec(rows, vec):
    return [sum((a * b for a, b in zip(r, vec)), ZERO) for r in rows]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
