"""Formal solvers on the truncated series kernel.

Three operations live here: solving one scalar equation for one variable
(implicit function), inverting an origin-preserving map with invertible
linear part, and extending a truncated solution of a square polynomial
system degree by degree.
"""

from __future__ import annotations

from . import linalg
from .rational import ONE, ZERO
from .series import SeriesMap, TruncatedSeries, compose, unit_exponent


def implicit_solve(rho: TruncatedSeries, var: int) -> TruncatedSeries:
    """Solve rho = 0 for the variable at index ``var``.

    Requires rho(0) = 0 and a nonzero linear coefficient on the solved
    variable. Returns the unique series S in the remaining variables, in
    their original order, with S(0) = 0 and rho(..., S, ...) = 0 through
    degree rho.order. Each fixed-point pass below is exact one degree
    further than the last, so rho.order passes settle every coefficient.
    """
    m = rho.nvars
    if not 0 <= var < m:
        raise ValueError(f"variable index {var} out of range")
    if m < 2:
        raise ValueError("need at least one remaining variable")
    if not rho.constant_term().is_zero():
        raise ValueError("constant term must vanish")
    c = rho.coefficient(unit_exponent(m, var))
    if c.is_zero():
        raise ValueError(
            "the solved variable must appear with a nonzero linear coefficient"
        )
    order = rho.order
    inv_c = ONE / c

    def substitution(current: TruncatedSeries) -> SeriesMap:
        components = []
        for i in range(m):
            if i == var:
                components.append(current)
            else:
                position = i if i < var else i - 1
                components.append(TruncatedSeries.variable(m - 1, order, position))
        return SeriesMap(components)

    solution = TruncatedSeries.zero(m - 1, order)
    for _ in range(order):
        residual = compose(rho, substitution(solution))
        if residual.is_zero():
            break
        solution = solution - residual.scale(inv_c)
    final = compose(rho, substitution(solution))
    if not final.is_zero():
        raise AssertionError("implicit solve failed to converge; this is a bug")
    return solution


def invert_map(fmap: SeriesMap) -> SeriesMap:
    """Compositional inverse of an origin-preserving map, to fmap.order.

    The linear part must be invertible. Verified by back-substitution
    before returning.
    """
    n = fmap.source_nvars
    if fmap.target_nvars != n:
        raise ValueError("only square maps can be inverted")
    if not fmap.is_origin_preserving():
        raise ValueError("inversion requires an origin-preserving map")
    order = fmap.order
    if order < 1:
        raise ValueError("inversion needs order >= 1")
    matrix = fmap.linear_matrix()
    try:
        inv = linalg.inverse(matrix)
    except ValueError:
        raise ValueError("linear part is singular, map is not invertible") from None

    def linear_combination(coeffs, series_list):
        total = TruncatedSeries.zero(n, order)
        for coeff, series in zip(coeffs, series_list):
            if not coeff.is_zero():
                total = total + series.scale(coeff)
        return total

    variables = [TruncatedSeries.variable(n, order, j) for j in range(n)]
    linear_parts = [linear_combination(matrix[i], variables) for i in range(n)]
    tail = [fmap.components[i] - linear_parts[i] for i in range(n)]

    current = SeriesMap(linear_combination(inv[i], variables) for i in range(n))
    for _ in range(order):
        shifted = [compose(t, current) for t in tail]
        adjusted = [variables[j] - shifted[j] for j in range(n)]
        current = SeriesMap(linear_combination(inv[i], adjusted) for i in range(n))
    check = fmap.compose(current)
    if check != SeriesMap.identity(n, order):
        raise AssertionError("map inversion failed to converge; this is a bug")
    return current


def _poly_substitute(
    series: TruncatedSeries, nparams: int, values: SeriesMap, out_order: int
) -> TruncatedSeries:
    """Substitute values for the trailing variables of ``series``.

    The first ``nparams`` variables stay as themselves; the stored terms of
    ``series`` are taken as an exact polynomial, which is what makes the
    substitution safe even though the values may have nonzero constant
    terms.
    """
    q = nparams
    total = TruncatedSeries.zero(q, out_order)
    caches: list[list[TruncatedSeries]] = [
        [TruncatedSeries.constant(ONE, q, out_order)] for _ in range(values.target_nvars)
    ]

    def power(j: int, k: int) -> TruncatedSeries:
        cache = caches[j]
        while len(cache) <= k:
            cache.append(cache[-1] * values.components[j].truncate(out_order))
        return cache[k]

    for exponents, coeff in series.sorted_terms():
        xpart, ypart = exponents[:q], exponents[q:]
        if sum(xpart) > out_order:
            continue
        term = TruncatedSeries.monomial(q, out_order, xpart, coeff)
        for j, k in enumerate(ypart):
            if k:
                term = term * power(j, k)
        total = total + term
    return total


def newton_extend(system: SeriesMap, solution: SeriesMap, target_order: int) -> SeriesMap:
    """Extend a truncated solution of a square system to ``target_order``.

    ``system`` has r components over q + r variables: the first q are
    parameters x, the last r are unknowns y. ``solution`` maps x to y and
    must satisfy the system through degree solution.order. The stored
    terms of ``system`` are treated as an exact polynomial description.

    The extension is computed degree by degree: at each new degree the
    unknown homogeneous coefficients enter linearly through the Jacobian
    in y at the origin, and each monomial's r-by-r system is solved by
    exact Gaussian elimination. Output is independent of how the degrees
    are scheduled, extending to 4 and then 6 equals extending to 6.
    """
    r = system.target_nvars
    q = system.source_nvars - r
    if q < 1:
        raise ValueError("system must have at least one parameter variable")
    if solution.target_nvars != r or solution.source_nvars != q:
        raise ValueError(
            f"solution must map {q} parameters to {r} unknowns, got "
            f"{solution.source_nvars} -> {solution.target_nvars}"
        )
    if target_order < solution.order:
        raise ValueError("target order is below the solution's current order")

    residuals = [
        _poly_substitute(c, q, solution, solution.order) for c in system.components
    ]
    defect = next((res for res in residuals if not res.is_zero()), None)
    if defect is not None:
        raise ValueError(
            "input does not solve the system through its stated order, first "
            f"defect at {defect.least_term()[0]}"
        )

    partials = [
        [system.components[i].derive(q + j) for j in range(r)] for i in range(r)
    ]
    along = [
        [_poly_substitute(partials[i][j], q, solution, solution.order) for j in range(r)]
        for i in range(r)
    ]
    det = _series_det(along)
    if det.is_zero():
        raise ValueError(
            "Jacobian determinant vanishes along the solution at every degree "
            f"through {solution.order}; the system is degenerate there"
        )
    origin = [ZERO] * q + [c.constant_term() for c in solution.components]
    j0 = [[partials[i][j].evaluate(origin) for j in range(r)] for i in range(r)]
    if linalg.determinant(j0).is_zero():
        raise ValueError(
            "Jacobian is singular at the origin along the solution; the "
            "degree-by-degree extension is not uniquely determined"
        )
    j0_inv = linalg.inverse(j0)

    current = [dict(c.terms) for c in solution.components]
    for degree in range(solution.order + 1, target_order + 1):
        padded = SeriesMap(
            TruncatedSeries(q, degree, terms) for terms in current
        )
        residuals = [_poly_substitute(c, q, padded, degree) for c in system.components]
        monomials = sorted(
            {
                e
                for res in residuals
                for e in res.terms
                if sum(e) == degree
            }
        )
        for e in monomials:
            rhs = [-res.coefficient(e) for res in residuals]
            for i in range(r):
                value = ZERO
                for j in range(r):
                    value = value + j0_inv[i][j] * rhs[j]
                if not value.is_zero():
                    current[i][e] = value
    return SeriesMap(TruncatedSeries(q, target_order, terms) for terms in current)


def _series_det(matrix: list[list[TruncatedSeries]]) -> TruncatedSeries:
    """Determinant of a square matrix of series, by cofactor expansion."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return matrix[0][0]

    def minor_det(row: int, cols: tuple[int, ...]) -> TruncatedSeries:
        if len(cols) == 1:
            return matrix[row][cols[0]]
        total = None
        sign = 1
        for k, col in enumerate(cols):
            entry = matrix[row][col]
            if not entry.is_zero():
                rest = cols[:k] + cols[k + 1 :]
                piece = entry * minor_det(row + 1, rest)
                if sign < 0:
                    piece = -piece
                total = piece if total is None else total + piece
            sign = -sign
        if total is None:
            example = matrix[row][cols[0]]
            return TruncatedSeries.zero(example.nvars, example.order)
        return total

    return minor_det(0, tuple(range(n)))
