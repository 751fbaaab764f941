"""Real hypersurface models in graph form, with exact geometric invariants.

Variable conventions used throughout this module and its consumers:

* A defining series rho lives in 2n variables ordered (z_1..z_n, w_1..w_n).
  The second block stands for the conjugated coordinates, treated as
  independent variables. rho is "real" when conjugating every coefficient
  and swapping the two blocks reproduces rho.
* The graph series phi lives in 2n-1 variables ordered
  (w_1..w_n, zp_1..zp_{n-1}), where zp denotes the first n-1 of the z.
  On the complexified hypersurface, z_n = phi(w, z').
* Conjugation acts on coefficients only; variable slots keep their places.

Degrees of guarantee: every derived object records the truncation order it
is exact to, and identity checks are asserted exactly at that order.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import GeometryError, PrerequisiteError
from .rank import DEFAULT_SEED, generic_rank, matrix_generic_rank
from .series import (
    SeriesMap,
    TruncatedSeries,
    compose,
    format_monomial,
    grlex_key,
    multi_indices,
    unit_exponent,
)
from .solvers import implicit_solve


def defining_names(n: int) -> list[str]:
    return [f"z{i + 1}" for i in range(n)] + [f"w{i + 1}" for i in range(n)]


def graph_names(n: int) -> list[str]:
    return [f"w{i + 1}" for i in range(n)] + [f"zp{i + 1}" for i in range(n - 1)]


def reality_defect(rho: TruncatedSeries, n: int):
    """First place where rho fails to be real, or None.

    Reality means: conjugate the coefficients and swap the z and w blocks,
    and you must get rho back. Returns (exponents, coefficient, mirrored)
    for the graded-lex-least offending exponent tuple.
    """
    seen = sorted(set(rho.terms), key=grlex_key)
    for exponents in seen:
        mirror = exponents[n:] + exponents[:n]
        expected = rho.coefficient(mirror).conjugate()
        actual = rho.coefficient(exponents)
        if actual != expected:
            return exponents, actual, expected
    return None


class Hypersurface:
    """A germ of a real hypersurface through the origin, held exactly.

    Built by from_defining, which solves the defining series for z_n and
    verifies the facts the rest of the toolkit relies on. ``normal`` says
    whether the graph series fixes both distinguished axes, see
    from_defining for the exact identities.
    """

    __slots__ = ("n", "rho", "phi", "normal", "provenance")

    def __init__(self, n, rho, phi, normal, provenance):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "provenance", tuple(provenance))

    def __setattr__(self, name, value):
        raise AttributeError("Hypersurface is immutable")

    @property
    def order(self) -> int:
        return self.rho.order

    @property
    def phibar(self) -> TruncatedSeries:
        return self.phi.conjugate()

    def __eq__(self, other):
        if not isinstance(other, Hypersurface):
            return NotImplemented
        # provenance is commentary, not identity
        return self.n == other.n and self.rho == other.rho

    __hash__ = None

    def __repr__(self):
        tag = "normal" if self.normal else "not normal"
        return f"Hypersurface(n={self.n}, order={self.order}, {tag})"

    def truncate(self, order: int) -> "Hypersurface":
        if order == self.order:
            return self
        return from_defining(
            self.rho.truncate(order),
            self.n,
            provenance=self.provenance + (f"truncated to order {order}",),
        )


def from_defining(rho: TruncatedSeries, n: int, provenance=("defining series",)) -> Hypersurface:
    """Build a hypersurface from its defining series.

    Checks, in this order: arity, vanishing at the origin, reality, a
    nonzero linear coefficient on z_n. Then solves for z_n, re-checks the
    solved graph against the defining series through the full order, and
    records whether the graph is in normal form, meaning
    phi(w', w_n, 0) = w_n and phi(0, w_n, z') = w_n hold exactly at order.
    """
    if n < 2:
        raise GeometryError("need n >= 2 complex dimensions")
    if rho.nvars != 2 * n:
        raise GeometryError(
            f"defining series must have {2 * n} variables, got {rho.nvars}"
        )
    if rho.order < 2:
        raise GeometryError("defining series needs order >= 2")
    if not rho.constant_term().is_zero():
        raise GeometryError("defining series must vanish at the origin")
    defect = reality_defect(rho, n)
    if defect is not None:
        exponents, actual, expected = defect
        names = defining_names(n)
        raise GeometryError(
            "defining series is not real: coefficient of "
            f"{format_monomial(exponents, names)} is {actual}, but the "
            f"mirrored term forces {expected}"
        )
    if rho.coefficient(unit_exponent(2 * n, n - 1)).is_zero():
        raise GeometryError(
            "degenerate normal direction: no linear term on the graph variable"
        )
    solved = implicit_solve(rho, n - 1)
    # solved is over (z_1..z_{n-1}, w_1..w_n); rearrange to (w, z')
    positions = [n + i for i in range(n - 1)] + list(range(n))
    phi = solved.remap_vars(2 * n - 1, positions)
    residual = graph_residual(phi, n)
    if not residual.is_zero():
        raise GeometryError(
            "graph identity failed, the defining series is inconsistent: "
            f"first residual term {residual.least_term()}"
        )
    axis = TruncatedSeries.monomial(2 * n - 1, phi.order, unit_exponent(2 * n - 1, n - 1))
    zp = list(range(n, 2 * n - 1))
    wp = list(range(n - 1))
    normal = (
        phi.set_vars_to_zero(zp) == axis and phi.set_vars_to_zero(wp) == axis
    )
    return Hypersurface(n, rho, phi, normal, provenance)


def graph_residual(phi: TruncatedSeries, n: int) -> TruncatedSeries:
    """Substitute the conjugated graph back into the graph.

    Over the variables (z_1..z_n, w'_1..w'_{n-1}) this computes
    phi(w', phibar(z, w'), z') - z_n, which must vanish identically for a
    genuine real hypersurface. The residual is exact to phi.order.
    """
    m = 2 * n - 1
    order = phi.order
    phibar = phi.conjugate()  # slots read as (z, w') here, same arity
    components = []
    for j in range(n - 1):
        components.append(TruncatedSeries.variable(m, order, n + j))
    components.append(phibar)
    for k in range(n - 1):
        components.append(TruncatedSeries.variable(m, order, k))
    inner = SeriesMap(components)
    lhs = compose(phi, inner)
    return lhs - TruncatedSeries.variable(m, lhs.order, n - 1)


# ---------------------------------------------------------------------------
# normal coordinates


def normalize(H: Hypersurface) -> tuple[Hypersurface, SeriesMap]:
    """Pass to coordinates in which the graph fixes both distinguished axes.

    Fixes z' and replaces z_n by the solution t of z_n = phi(0, t, z').
    Idempotent: a hypersurface already in normal form comes back unchanged
    with the identity change. The result is re-verified from scratch; if
    the single substitution does not produce normal form, this raises
    instead of returning something unverified.
    """
    n, order = H.n, H.order
    if H.normal:
        return H, SeriesMap.identity(n, order)
    # psi over (z'_1..z'_{n-1}, z_n, y): phi(0, y, z') - z_n
    m = n + 1
    components = []
    for j in range(n - 1):
        components.append(TruncatedSeries.zero(m, order))
    components.append(TruncatedSeries.variable(m, order, n))
    for k in range(n - 1):
        components.append(TruncatedSeries.variable(m, order, k))
    psi = compose(H.phi, SeriesMap(components)) - TruncatedSeries.variable(
        m, order, n - 1
    )
    if psi.coefficient(unit_exponent(m, n)).is_zero():
        raise GeometryError(
            "cannot establish normal coordinates: graph series has a "
            "degenerate linear part in the graph variable"
        )
    t = implicit_solve(psi, n)  # over (z'_1..z'_{n-1}, z_n), preserves origin
    change = SeriesMap(
        [TruncatedSeries.variable(n, order, i) for i in range(n - 1)] + [t]
    )
    if linalg.determinant(change.linear_matrix()).is_zero():
        raise AssertionError("normalizing change lost invertibility; this is a bug")

    # substitute z_n := phi(0, z_n, z') and its conjugate on the w side
    big = 2 * n
    fill = []
    for j in range(n - 1):
        fill.append(TruncatedSeries.zero(big, order))
    fill.append(TruncatedSeries.variable(big, order, n - 1))
    for k in range(n - 1):
        fill.append(TruncatedSeries.variable(big, order, k))
    p = compose(H.phi, SeriesMap(fill))
    swap = list(range(n, 2 * n)) + list(range(n))
    pbar = p.conjugate().remap_vars(big, swap)
    outer = (
        [TruncatedSeries.variable(big, order, i) for i in range(n - 1)]
        + [p]
        + [TruncatedSeries.variable(big, order, n + i) for i in range(n - 1)]
        + [pbar]
    )
    rho2 = compose(H.rho, SeriesMap(outer))
    H2 = from_defining(
        rho2, n, provenance=H.provenance + ("normalized by graph substitution",)
    )
    if not H2.normal:
        raise GeometryError(
            "the graph substitution did not yield normal coordinates for "
            "this input; its normal form needs more than one step"
        )
    return H2, change


# ---------------------------------------------------------------------------
# Segre maps and minimality


@dataclass(frozen=True)
class SegreTriple:
    """The first three iterated Segre parametrizations of a hypersurface.

    v1 sends z' to (z', 0); v2 and v3 substitute the graph into itself once
    and twice more. Sources have n-1, 2(n-1) and 3(n-1) variables.
    """

    n: int
    v1: SeriesMap
    v2: SeriesMap
    v3: SeriesMap


def segre_maps(H: Hypersurface) -> SegreTriple:
    if not H.normal:
        raise PrerequisiteError("Segre maps need normal coordinates, normalize first")
    n, order = H.n, H.order
    m = n - 1
    phi, phibar = H.phi, H.phibar

    v1 = SeriesMap(
        [TruncatedSeries.variable(m, order, i) for i in range(m)]
        + [TruncatedSeries.zero(m, order)]
    )

    # v2 over (z', xi)
    src2 = 2 * m
    fill2 = (
        [TruncatedSeries.variable(src2, order, m + j) for j in range(m)]
        + [TruncatedSeries.zero(src2, order)]
        + [TruncatedSeries.variable(src2, order, k) for k in range(m)]
    )
    v2_last = compose(phi, SeriesMap(fill2))
    v2 = SeriesMap(
        [TruncatedSeries.variable(src2, order, i) for i in range(m)] + [v2_last]
    )

    # v3 over (z', xi, eta)
    src3 = 3 * m
    fill_inner = (
        [TruncatedSeries.variable(src3, order, 2 * m + j) for j in range(m)]
        + [TruncatedSeries.zero(src3, order)]
        + [TruncatedSeries.variable(src3, order, m + k) for k in range(m)]
    )
    inner = compose(phibar, SeriesMap(fill_inner))
    fill_outer = (
        [TruncatedSeries.variable(src3, order, m + j) for j in range(m)]
        + [inner]
        + [TruncatedSeries.variable(src3, order, k) for k in range(m)]
    )
    v3_last = compose(phi, SeriesMap(fill_outer))
    v3 = SeriesMap(
        [TruncatedSeries.variable(src3, order, i) for i in range(m)] + [v3_last]
    )
    return SegreTriple(n, v1, v2, v3)


def segre_closure_residual(triple: SegreTriple) -> SeriesMap:
    """v3(eta, xi, eta) - v1(eta), componentwise; zero for a genuine triple."""
    m = triple.n - 1
    order = triple.v3.order
    diagonal = SeriesMap(
        [TruncatedSeries.variable(2 * m, order, i) for i in range(2 * m)]
        + [TruncatedSeries.variable(2 * m, order, i) for i in range(m)]
    )
    folded = triple.v3.compose(diagonal)
    # v1 read over (eta, xi): embed its source into the first m slots
    lifted = SeriesMap(
        c.remap_vars(2 * m, list(range(m))) for c in triple.v1.components
    )
    return SeriesMap(
        a - b for a, b in zip(folded.components, lifted.components)
    )


@dataclass(frozen=True)
class MinimalityVerdict:
    """Whether the second Segre map attains full generic rank at this order."""

    minimal: bool
    rank: int
    n: int
    order: int
    certificate: object


def is_minimal(H: Hypersurface, *, seed: int = DEFAULT_SEED) -> MinimalityVerdict:
    triple = segre_maps(H)
    result = generic_rank(triple.v2, seed=seed)
    return MinimalityVerdict(
        minimal=result.rank == H.n,
        rank=result.rank,
        n=H.n,
        order=H.order,
        certificate=result.certificate,
    )


# ---------------------------------------------------------------------------
# the phi family and degeneracy


def phi_family(H: Hypersurface, cutoff: int) -> list[tuple[tuple[int, ...], TruncatedSeries]]:
    """Coefficient series of the conjugated graph in its z'-slot variables.

    Returns every (alpha, series over the n w-slots) for |alpha| <= cutoff,
    graded-lex ascending, zero entries included. Each extracted series is
    exact to order - |alpha| only.
    """
    if not 0 <= cutoff <= H.order:
        raise ValueError(f"cutoff must lie in [0, {H.order}]")
    n = H.n
    buckets = H.phibar.coefficient_family(range(n, 2 * n - 1))
    out = []
    for alpha in multi_indices(n - 1, cutoff):
        series = buckets.get(alpha)
        if series is None:
            series = TruncatedSeries.zero(n, H.order - sum(alpha))
        out.append((alpha, series))
    return out


@dataclass(frozen=True)
class DegeneracyResult:
    """Generic rank of the stacked gradients of the phi family.

    ``degeneracy`` is n minus that rank; zero means holomorphically
    nondegenerate. ``witnesses`` are the graded-lex-least multi-indices
    whose gradients realize the rank. ``cutoff_effective`` can sit one
    below the request because gradients of the |alpha| = order slice carry
    no information at truncation. ``stabilized`` compares against the next
    lower cutoff; when False the verdict may still move, and strict
    consumers refuse to build on it.
    """

    n: int
    degeneracy: int
    rank: int
    cutoff_requested: int
    cutoff_effective: int
    stabilized: bool
    witnesses: tuple[tuple[int, ...], ...]
    certificate: object
    order: int

    @property
    def holomorphically_nondegenerate(self) -> bool:
        return self.degeneracy == 0


def degeneracy(H: Hypersurface, cutoff: int | None = None, *, seed: int = DEFAULT_SEED) -> DegeneracyResult:
    if cutoff is None:
        cutoff = H.order
    if cutoff < 1:
        raise ValueError("degeneracy needs cutoff >= 1")
    if cutoff > H.order:
        raise ValueError(f"cutoff must lie in [1, {H.order}]")
    n = H.n
    effective = min(cutoff, H.order - 1)
    family = phi_family(H, effective)
    rows = [[series.derive(j) for j in range(n)] for _, series in family]
    result = matrix_generic_rank(rows, seed=seed, prefer_least=True)
    witnesses = tuple(family[i][0] for i in result.certificate.rows)
    if effective >= 1:
        keep = [i for i, (alpha, _) in enumerate(family) if sum(alpha) <= effective - 1]
        prev = matrix_generic_rank([rows[i] for i in keep], seed=seed)
        stabilized = prev.rank == result.rank
    else:
        stabilized = False
    return DegeneracyResult(
        n=n,
        degeneracy=n - result.rank,
        rank=result.rank,
        cutoff_requested=cutoff,
        cutoff_effective=effective,
        stabilized=stabilized,
        witnesses=witnesses,
        certificate=result.certificate,
        order=H.order,
    )


# ---------------------------------------------------------------------------
# tangent fields


@dataclass(frozen=True)
class TangentField:
    """The j-th antiholomorphic tangent combination along the hypersurface.

    Acts on series over the defining variables as
    (d rho/d w_n) d/dw_j - (d rho/d w_j) d/dw_n, so it annihilates the
    defining series exactly.
    """

    n: int
    j: int  # 1-based, ranges over 1..n-1
    coef_dwj: TruncatedSeries
    coef_dwn: TruncatedSeries

    def apply(self, series: TruncatedSeries) -> TruncatedSeries:
        if series.nvars != 2 * self.n:
            raise ValueError(f"expected a series in {2 * self.n} variables")
        wj = self.n - 1 + self.j
        wn = 2 * self.n - 1
        return self.coef_dwj * series.derive(wj) + self.coef_dwn * series.derive(wn)


def tangent_fields(H: Hypersurface) -> tuple[TangentField, ...]:
    n = H.n
    wn = 2 * n - 1
    d_wn = H.rho.derive(wn)
    fields = []
    for j in range(1, n):
        fields.append(
            TangentField(
                n=n,
                j=j,
                coef_dwj=d_wn,
                coef_dwn=-H.rho.derive(n - 1 + j),
            )
        )
    return tuple(fields)
