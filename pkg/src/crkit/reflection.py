"""Analysis of formal maps between hypersurfaces via reflection.

Given an origin-preserving formal map f between two hypersurface germs of
the same dimension, this module checks whether f formally sends the source
into the target, builds the reflection series R(z, lambda) obtained by
substituting f into the target's conjugated graph, restricts it to the
first Segre parametrization, and extracts the coefficient family whose
growth controls convergence questions. The exact layer never touches
floats; the evidence fit at the end is an explicitly labeled diagnostic.

Variable conventions: maps live over (z_1..z_n); the reflection series
lives over (z_1..z_n, lambda_1..lambda_{n-1}); restricted families live
over (zp_1..zp_{n-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PrerequisiteError, GeometryError
from .hypersurface import (
    Hypersurface,
    degeneracy,
    is_minimal,
    phi_family,
    segre_maps,
)
from .rank import CERTIFIED, DEFAULT_SEED, generic_rank
from .rational import GaussRational, ONE
from .series import (
    SeriesMap,
    TruncatedSeries,
    compose,
    multi_factorial,
    multi_indices,
)
from . import linalg


def exp_of(series: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with vanishing constant term, exact to order.

    Powers of the argument gain valuation, so the truncated sum through
    order-many terms is the exact truncation of the exponential.
    """
    if not series.constant_term().is_zero():
        raise ValueError("exponential needs a vanishing constant term")
    total = TruncatedSeries.constant(ONE, series.nvars, series.order)
    term = total
    for k in range(1, series.order + 1):
        term = (term * series).scale(Fraction(1, k))
        total = total + term
    return total


class FormalMap:
    """An origin-preserving formal map between two hypersurface germs."""

    __slots__ = ("f", "source", "target")

    def __init__(self, f: SeriesMap, source: Hypersurface, target: Hypersurface):
        if source.n != target.n:
            raise ValueError("source and target must share the dimension")
        if f.source_nvars != source.n or f.target_nvars != target.n:
            raise ValueError(
                f"map must send {source.n} variables to {target.n}, got "
                f"{f.source_nvars} -> {f.target_nvars}"
            )
        if not f.is_origin_preserving():
            raise ValueError("map must preserve the origin")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)

    def __setattr__(self, name, value):
        raise AttributeError("FormalMap is immutable")

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def jacobian_det_at_origin(self) -> GaussRational:
        return linalg.determinant(self.f.linear_matrix())

    @property
    def is_biholomorphism(self) -> bool:
        """Invertible linear part; the formal inverse then exists."""
        return not self.jacobian_det_at_origin.is_zero()

    def guaranteed_order(self) -> int:
        return min(self.f.order, self.source.order, self.target.order)

    def __repr__(self):
        return f"FormalMap(n={self.n}, order={self.f.order})"


# ---------------------------------------------------------------------------
# the mapping check


@dataclass(frozen=True)
class MapVerdict:
    """Outcome of substituting the map into the target's defining series.

    The residual lives over (z_1..z_n, w_1..w_{n-1}) after the source
    graph has been substituted for w_n. ``offending`` is the graded-lex
    least nonzero term when the check fails.
    """

    passed: bool
    order_checked: int
    residual: TruncatedSeries
    offending: tuple | None


def check_maps_into(fm: FormalMap, order: int | None = None) -> MapVerdict:
    """Does f send the source into the target, through the given order?

    Defaults to the largest order the inputs guarantee. Asking beyond that
    is an error rather than a silently weaker check.
    """
    n = fm.n
    cap = fm.guaranteed_order()
    if order is None:
        order = cap
    elif order > cap:
        raise ValueError(f"inputs only guarantee order {cap}, not {order}")
    elif order < 0:
        raise ValueError("order must be nonnegative")
    m = 2 * n - 1
    common = min(fm.f.order, fm.source.order)
    # w_n := source graph, substituted into the conjugated map components
    wmap = SeriesMap(
        [TruncatedSeries.variable(m, fm.source.order, n + j) for j in range(n - 1)]
        + [fm.source.phibar]
    )
    fbar = fm.f.conjugate()
    tail = [compose(c, wmap).truncate(common) for c in fbar.components]
    head = [c.remap_vars(m, range(n)).truncate(common) for c in fm.f.components]
    substitution = SeriesMap(head + tail)
    residual = compose(fm.target.rho, substitution).truncate(order)
    return MapVerdict(
        passed=residual.is_zero(),
        order_checked=order,
        residual=residual,
        offending=residual.least_term(),
    )


# ---------------------------------------------------------------------------
# the reflection series and its Segre restriction


def reflection_function(fm: FormalMap) -> TruncatedSeries:
    """The target's conjugated graph with f substituted for the base point.

    A series over (z_1..z_n, lambda_1..lambda_{n-1}); its coefficients in
    lambda are the composed family whose growth is studied below. Two maps
    that agree as maps give byte-identical reflection series.
    """
    n = fm.n
    m = 2 * n - 1
    common = min(fm.f.order, fm.target.order)
    components = [
        c.remap_vars(m, range(n)).truncate(common) for c in fm.f.components
    ] + [TruncatedSeries.variable(m, common, n + k) for k in range(n - 1)]
    return compose(fm.target.phibar, SeriesMap(components))


def reflection_at_lambda_zero(fm: FormalMap) -> TruncatedSeries:
    """The lambda = 0 slice of the reflection series, over z only.

    When the target is in normal coordinates this equals the last
    component of f.
    """
    n = fm.n
    r = reflection_function(fm)
    family = r.coefficient_family(range(n, 2 * n - 1))
    zero = (0,) * (n - 1)
    return family.get(zero, TruncatedSeries.zero(n, r.order))


def reflection_on_segre(
    fm: FormalMap,
    gamma: tuple[int, ...] | None = None,
    cutoff: int | None = None,
) -> list[tuple[tuple[int, ...], TruncatedSeries]]:
    """Coefficient family of a z-derivative of the reflection series,
    restricted to the first Segre parametrization of the source.

    Returns (alpha, series over zp) pairs for |alpha| <= cutoff, graded-lex
    ascending, zero entries included. Entry alpha is exact only to
    order - |gamma| - |alpha|.
    """
    n = fm.n
    if not fm.source.normal:
        raise PrerequisiteError(
            "the Segre restriction needs the source in normal coordinates"
        )
    if gamma is None:
        gamma = (0,) * n
    if len(gamma) != n or any(g < 0 for g in gamma):
        raise ValueError(f"gamma must be {n} nonnegative integers")
    r = reflection_function(fm)
    weight = sum(gamma)
    if weight > r.order:
        raise ValueError(
            f"derivative order {weight} exhausts the guaranteed order {r.order}"
        )
    for index, count in enumerate(gamma):
        for _ in range(count):
            r = r.derive(index)
    # restrict z := (zp, 0), keep lambda
    src = 2 * (n - 1)
    restriction = SeriesMap(
        [TruncatedSeries.variable(src, r.order, i) for i in range(n - 1)]
        + [TruncatedSeries.zero(src, r.order)]
        + [TruncatedSeries.variable(src, r.order, n - 1 + k) for k in range(n - 1)]
    )
    restricted = compose(r, restriction)
    cap = restricted.order if cutoff is None else min(cutoff, restricted.order)
    family = restricted.coefficient_family(range(n - 1, 2 * (n - 1)))
    out = []
    for alpha in multi_indices(n - 1, cap):
        series = family.get(alpha)
        if series is None:
            series = TruncatedSeries.zero(n - 1, restricted.order - sum(alpha))
        out.append((alpha, series))
    return out


def u_family(
    fm: FormalMap, cutoff: int | None = None
) -> list[tuple[tuple[int, ...], TruncatedSeries]]:
    """The factorial-scaled Segre coefficient family u_alpha.

    u_alpha = alpha! times the lambda^alpha coefficient of the restricted
    reflection series. Equivalently, alpha! times the alpha-th composed
    graph coefficient along the map, which is the identity the acceptance
    tests verify by computing both routes.
    """
    return [
        (alpha, series.scale(multi_factorial(alpha)))
        for alpha, series in reflection_on_segre(fm, None, cutoff)
    ]


# ---------------------------------------------------------------------------
# the identity along the third Segre parametrization


@dataclass(frozen=True)
class SegreIdentityVerdict:
    passed: bool
    order: int
    lhs: TruncatedSeries
    rhs: TruncatedSeries
    residual: TruncatedSeries


def segre_reflection_identity(fm: FormalMap, *, seed: int = DEFAULT_SEED) -> SegreIdentityVerdict:
    """Check the reflection series against the map along the second and
    third Segre parametrizations.

    Both sides are series over (zp, xi, eta). Prerequisites: the mapping
    check must pass, and the source must be normal and minimal with a
    certified rank; these are re-verified here and raise PrerequisiteError
    when absent.
    """
    verdict = check_maps_into(fm)
    if not verdict.passed:
        raise PrerequisiteError(
            "mapping check failed; the identity is only meaningful for maps "
            "that send the source into the target"
        )
    if not fm.source.normal:
        raise PrerequisiteError("source must be in normal coordinates")
    minimality = is_minimal(fm.source, seed=seed)
    if not minimality.minimal or minimality.certificate.status != CERTIFIED:
        raise PrerequisiteError(
            "source must be minimal with a certified rank at this order"
        )
    n = fm.n
    m = n - 1
    src = 3 * m
    triple = segre_maps(fm.source)
    r = reflection_function(fm)
    v2bar = triple.v2.conjugate()  # read its source as (xi, eta)
    fbar = fm.f.conjugate()
    along = [compose(c, v2bar) for c in fbar.components]
    lifted = [s.remap_vars(src, range(m, 3 * m)) for s in along]
    common = min(r.order, triple.v3.order, lifted[0].order)
    arguments = [c.truncate(common) for c in triple.v3.components] + [
        s.truncate(common) for s in lifted[:m]
    ]
    lhs = compose(r, SeriesMap(arguments))
    rhs = lifted[n - 1].truncate(lhs.order)
    residual = lhs - rhs
    return SegreIdentityVerdict(
        passed=residual.is_zero(),
        order=lhs.order,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# growth diagnostics (floats allowed here, and only here)


@dataclass(frozen=True)
class ConvergenceEvidence:
    """Float diagnostic: least r0 with majorant(u_alpha) <= alpha! r0^(|alpha|+1).

    ``majorant`` bounds the sup of |u_alpha| on the polydisc of the given
    radius by the sum of coefficient moduli times radius^degree. Exact
    content never depends on anything in this class. ``polynomial`` is set
    when the family dies out strictly before the cutoff, which makes the
    growth question trivial.
    """

    radius: Fraction
    r0: float
    polynomial: bool
    rows: tuple  # (alpha, majorant, fitted base) for nonzero entries


def convergence_evidence(
    family: list[tuple[tuple[int, ...], TruncatedSeries]], radius: Fraction
) -> ConvergenceEvidence:
    if radius <= 0:
        raise ValueError("radius must be positive")
    scale = float(radius)
    cutoff = max((sum(alpha) for alpha, _ in family), default=0)
    rows = []
    r0 = 0.0
    top_alive = False
    for alpha, series in family:
        if series.is_zero():
            continue
        if sum(alpha) == cutoff:
            top_alive = True
        majorant = sum(
            coeff.modulus_float() * scale ** sum(exponents)
            for exponents, coeff in series.terms.items()
        )
        fitted = (majorant / multi_factorial(alpha)) ** (1.0 / (sum(alpha) + 1))
        rows.append((alpha, majorant, fitted))
        r0 = max(r0, fitted)
    return ConvergenceEvidence(
        radius=radius, r0=r0, polynomial=not top_alive, rows=tuple(rows)
    )


# ---------------------------------------------------------------------------
# partial convergence and containment


@dataclass(frozen=True)
class PartialConvergenceResult:
    """A maximal family of composed-graph coefficients, pulled back along f.

    ``g`` collects phi-family entries for the degeneracy witnesses, ordered
    by the target coordinate each one controls; ``gf`` is g composed with
    f, exact. ``bound`` is the target's degeneracy, which also bounds the
    transcendence degree of the map's graph over the generators below.
    ``generators`` live over (z_1..z_n, om_1..om_n) and vanish on the graph
    of f by construction.
    """

    degeneracy: object
    witnesses_ordered: tuple[tuple[int, ...], ...]
    g: SeriesMap
    gf: SeriesMap
    generators: tuple[TruncatedSeries, ...]
    bound: int


def partial_convergence(
    fm: FormalMap, cutoff: int | None = None, *, seed: int = DEFAULT_SEED
) -> PartialConvergenceResult:
    if not fm.is_biholomorphism:
        raise PrerequisiteError("map must have an invertible linear part")
    if not fm.source.normal:
        raise PrerequisiteError("source must be in normal coordinates")
    minimality = is_minimal(fm.source, seed=seed)
    if not minimality.minimal or minimality.certificate.status != CERTIFIED:
        raise PrerequisiteError(
            "source must be minimal with a certified rank at this order"
        )
    deg = degeneracy(fm.target, cutoff, seed=seed)
    if deg.certificate.status != CERTIFIED:
        raise PrerequisiteError("target degeneracy rank is not certified")
    if not deg.stabilized:
        raise PrerequisiteError(
            "target degeneracy has not stabilized at cutoff "
            f"{deg.cutoff_effective}; raise the truncation order"
        )
    n = fm.n
    family = dict(phi_family(fm.target, deg.cutoff_effective))
    cols = deg.certificate.cols
    rows = [
        [family[beta].derive(j) for j in cols] for beta in deg.witnesses
    ]
    ordering = _pivot_order(rows, cols)
    ordered = [deg.witnesses[i] for i in ordering]
    common = min(family[beta].order for beta in ordered)
    g = SeriesMap(family[beta].truncate(common) for beta in ordered)
    check = generic_rank(g, seed=seed)
    if check.rank != n - deg.degeneracy:
        raise GeometryError(
            "witness family lost rank when assembled; this is a bug"
        )
    gf = SeriesMap(compose(c, fm.f) for c in g.components)
    generators = tuple(
        g.components[i].remap_vars(2 * n, range(n, 2 * n))
        - gf.components[i].remap_vars(2 * n, range(n)).truncate(common)
        for i in range(len(ordered))
    )
    return PartialConvergenceResult(
        degeneracy=deg,
        witnesses_ordered=tuple(ordered),
        g=g,
        gf=gf,
        generators=generators,
        bound=deg.degeneracy,
    )


def _pivot_order(rows, cols) -> list[int]:
    """Order witness rows by the column each one pivots on.

    Scans permutations in lexicographic order for the first with every
    diagonal entry a nonzero series; a nonzero minor guarantees one
    exists. Returns row indices sorted by their pivot column.
    """
    from itertools import permutations

    size = len(rows)
    for sigma in permutations(range(size)):
        if all(not rows[i][sigma[i]].is_zero() for i in range(size)):
            return sorted(range(size), key=lambda i: cols[sigma[i]])
    raise AssertionError("certified minor has no nonzero diagonal; this is a bug")


@dataclass(frozen=True)
class ContainmentResult:
    contained: bool
    order: int
    residuals: tuple[TruncatedSeries, ...]


def formal_containment(
    f: SeriesMap, generators: list[TruncatedSeries]
) -> ContainmentResult:
    """Is the graph of f formally contained in the zero set of the generators?

    Generators live over (source variables, target variables); each one is
    composed with (z, f(z)) and must vanish through the guaranteed order.
    """
    n = f.source_nvars
    p = f.target_nvars
    graph = SeriesMap(
        [TruncatedSeries.variable(n, f.order, i) for i in range(n)]
        + list(f.components)
    )
    residuals = []
    for b in generators:
        if b.nvars != n + p:
            raise ValueError(
                f"generator must live over {n + p} variables, got {b.nvars}"
            )
        residuals.append(compose(b, graph))
    return ContainmentResult(
        contained=all(r.is_zero() for r in residuals),
        order=min((r.order for r in residuals), default=f.order),
        residuals=tuple(residuals),
    )


# ---------------------------------------------------------------------------
# the aggregate report


@dataclass(frozen=True)
class ReflectionReport:
    """Everything the reflect command writes: the reflection series, the
    factorial-scaled coefficient family, and the growth diagnostic. Exact
    content and float diagnostics are kept in separate fields, and the
    serialization keeps them in separate sections."""

    n: int
    order: int
    cutoff: int
    reflection: TruncatedSeries
    family: tuple  # (alpha, u_alpha series over zp)
    evidence: ConvergenceEvidence


def build_reflection_report(
    fm: FormalMap, cutoff: int | None = None, radius: Fraction = Fraction(1, 2)
) -> ReflectionReport:
    r = reflection_function(fm)
    family = u_family(fm, cutoff)
    top = max(sum(alpha) for alpha, _ in family)
    return ReflectionReport(
        n=fm.n,
        order=r.order,
        cutoff=top,
        reflection=r,
        family=tuple(family),
        evidence=convergence_evidence(family, radius),
    )
