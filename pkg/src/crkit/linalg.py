"""Exact dense linear algebra over Gaussian rationals.

Matrices are lists of lists of GaussRational. Everything here is plain
fraction-free-of-surprises Gaussian elimination with the first nonzero
pivot, so results are deterministic.
"""

from __future__ import annotations

from .rational import GaussRational, ONE, ZERO


def _copy(matrix):
    return [list(row) for row in matrix]


def rank_and_pivots(matrix) -> tuple[int, list[int], list[int]]:
    """Rank plus the row and column indices where pivots were found."""
    if not matrix:
        return 0, [], []
    work = _copy(matrix)
    nrows, ncols = len(work), len(work[0])
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    row_order = list(range(nrows))
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not work[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        row_order[r], row_order[pivot] = row_order[pivot], row_order[r]
        inv = ONE / work[r][col]
        for i in range(r + 1, nrows):
            if work[i][col].is_zero():
                continue
            factor = work[i][col] * inv
            for j in range(col, ncols):
                work[i][j] = work[i][j] - factor * work[r][j]
        pivot_rows.append(row_order[r])
        pivot_cols.append(col)
        r += 1
        if r == nrows:
            break
    return r, sorted(pivot_rows), pivot_cols


def determinant(matrix) -> GaussRational:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return ONE
    work = _copy(matrix)
    det = ONE
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if not work[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            return ZERO
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col]
        inv = ONE / work[col][col]
        for i in range(col + 1, n):
            if work[i][col].is_zero():
                continue
            factor = work[i][col] * inv
            for j in range(col, n):
                work[i][j] = work[i][j] - factor * work[col][j]
    return det


def inverse(matrix) -> list[list[GaussRational]]:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("inverse needs a square matrix")
    work = _copy(matrix)
    out = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if not work[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            raise ValueError("matrix is singular")
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            out[col], out[pivot] = out[pivot], out[col]
        inv = ONE / work[col][col]
        work[col] = [v * inv for v in work[col]]
        out[col] = [v * inv for v in out[col]]
        for i in range(n):
            if i == col or work[i][col].is_zero():
                continue
            factor = work[i][col]
            work[i] = [a - factor * b for a, b in zip(work[i], work[col])]
            out[i] = [a - factor * b for a, b in zip(out[i], out[col])]
    return out


def solve(matrix, rhs) -> tuple[str, list[GaussRational] | None]:
    """Solve matrix @ x = rhs exactly.

    Returns one of ("unique", x), ("inconsistent", None) or
    ("underdetermined", None).
    """
    if not matrix:
        status = "unique" if all(v.is_zero() for v in rhs) else "inconsistent"
        return (status, []) if status == "unique" else (status, None)
    nrows, ncols = len(matrix), len(matrix[0])
    if len(rhs) != nrows:
        raise ValueError("right-hand side length mismatch")
    work = [list(row) + [value] for row, value in zip(matrix, rhs)]
    pivot_cols: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not work[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = ONE / work[r][col]
        work[r] = [v * inv for v in work[r]]
        for i in range(nrows):
            if i == r or work[i][col].is_zero():
                continue
            factor = work[i][col]
            work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivot_cols.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not work[i][ncols].is_zero():
            return "inconsistent", None
    if r < ncols:
        return "underdetermined", None
    x = [ZERO] * ncols
    for row, col in enumerate(pivot_cols):
        x[col] = work[row][ncols]
    return "unique", x
