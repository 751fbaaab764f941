"""Sparse truncated multivariate power series with exact coefficients.

A TruncatedSeries stores finitely many coefficients of a formal power
series and remembers through which total degree those coefficients are
guaranteed exact (the ``order``). Every operation combines orders by
minimum, and differentiation costs one order, so no coefficient is ever
reported beyond what the inputs actually determine.

Exponent vectors are plain integer tuples. The canonical term order is
graded lexicographic: sort by total degree first, then lexicographically
on the exponent tuple. All iteration that can affect output follows this
order, which makes serialization and reporting bit-reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Sequence

from .rational import GaussRational, ONE, ZERO


# ---------------------------------------------------------------------------
# multi-index helpers


def grlex_key(exponents: tuple[int, ...]):
    """Sort key realizing the graded-lexicographic order."""
    return (sum(exponents), exponents)


def add_exponents(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def unit_exponent(nvars: int, index: int) -> tuple[int, ...]:
    if not 0 <= index < nvars:
        raise ValueError(f"variable index {index} out of range for {nvars} variables")
    return tuple(1 if i == index else 0 for i in range(nvars))


def multi_factorial(alpha: tuple[int, ...]) -> int:
    """Product of the factorials of the entries."""
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def multi_indices(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= max_degree, graded-lex ascending."""
    if nvars == 0:
        return [()] if max_degree >= 0 else []
    out = []
    for degree in range(max_degree + 1):
        out.extend(_fixed_degree(nvars, degree))
    return out


def _fixed_degree(nvars, degree):
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _fixed_degree(nvars - 1, degree - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------


class TruncatedSeries:
    """A formal power series known exactly through total degree ``order``.

    ``terms`` maps exponent tuples to nonzero GaussRational coefficients;
    zero coefficients are never stored. Instances are immutable.
    """

    __slots__ = ("nvars", "order", "_terms")

    def __init__(self, nvars: int, order: int, terms=()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        data = {}
        items = terms.items() if hasattr(terms, "items") else terms
        for exponents, coeff in items:
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != nvars:
                raise ValueError(
                    f"exponent tuple {exponents} has arity {len(exponents)}, expected {nvars}"
                )
            if any(e < 0 for e in exponents):
                raise ValueError(f"negative exponent in {exponents}")
            if sum(exponents) > order:
                raise ValueError(
                    f"term of degree {sum(exponents)} exceeds truncation order {order}"
                )
            coeff = GaussRational.coerce(coeff)
            if coeff.is_zero():
                continue
            if exponents in data:
                raise ValueError(f"duplicate exponent tuple {exponents}")
            data[exponents] = coeff
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors

    @classmethod
    def zero(cls, nvars: int, order: int) -> "TruncatedSeries":
        return cls(nvars, order)

    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "TruncatedSeries":
        return cls(nvars, order, [((0,) * nvars, GaussRational.coerce(value))])

    @classmethod
    def monomial(cls, nvars, order, exponents, coeff=ONE) -> "TruncatedSeries":
        return cls(nvars, order, [(tuple(exponents), coeff)])

    @classmethod
    def variable(cls, nvars, order, index) -> "TruncatedSeries":
        if order < 1:
            raise ValueError("a variable monomial needs order >= 1")
        return cls(nvars, order, [(unit_exponent(nvars, index), ONE)])

    # -- inspection

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], GaussRational]]:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def coefficient(self, exponents) -> GaussRational:
        return self._terms.get(tuple(exponents), ZERO)

    def constant_term(self) -> GaussRational:
        return self._terms.get((0,) * self.nvars, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self):
        """Smallest total degree of a stored term, or None for the zero series."""
        if not self._terms:
            return None
        return min(sum(e) for e in self._terms)

    def least_term(self):
        """Graded-lex-least stored term as (exponents, coefficient), or None."""
        if not self._terms:
            return None
        exponents = min(self._terms, key=grlex_key)
        return exponents, self._terms[exponents]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.order == other.order
            and self._terms == other._terms
        )

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries(nvars={self.nvars}, order={self.order}, {len(self._terms)} terms)"

    def __str__(self):
        return format_series(self)

    # -- arithmetic

    def _compatible(self, other: "TruncatedSeries"):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = TruncatedSeries.constant(other, self.nvars, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._compatible(other)
        order = min(self.order, other.order)
        out = {}
        for source in (self._terms, other._terms):
            for exponents, coeff in source.items():
                if sum(exponents) > order:
                    continue
                out[exponents] = out.get(exponents, ZERO) + coeff
        return TruncatedSeries(self.nvars, order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(
            self.nvars, self.order, {e: -c for e, c in self._terms.items()}
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = TruncatedSeries.constant(other, self.nvars, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "TruncatedSeries":
        value = GaussRational.coerce(value)
        if value.is_zero():
            return TruncatedSeries(self.nvars, self.order)
        return TruncatedSeries(
            self.nvars, self.order, {e: c * value for e, c in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._compatible(other)
        order = min(self.order, other.order)
        left = sorted(self._terms.items(), key=lambda kv: sum(kv[0]))
        right = sorted(other._terms.items(), key=lambda kv: sum(kv[0]))
        out = {}
        for e1, c1 in left:
            d1 = sum(e1)
            if d1 > order:
                break
            for e2, c2 in right:
                if d1 + sum(e2) > order:
                    break
                e = add_exponents(e1, e2)
                out[e] = out.get(e, ZERO) + c1 * c2
        return TruncatedSeries(self.nvars, order, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are defined")
        result = TruncatedSeries.constant(ONE, self.nvars, self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def truncate(self, order: int) -> "TruncatedSeries":
        """Forget coefficients above ``order``. Cannot raise the order."""
        if order > self.order:
            raise ValueError(
                f"cannot extend guaranteed order {self.order} to {order}"
            )
        if order == self.order:
            return self
        kept = {e: c for e, c in self._terms.items() if sum(e) <= order}
        return TruncatedSeries(self.nvars, order, kept)

    def derive(self, index: int) -> "TruncatedSeries":
        """Exact partial derivative. Costs one order of truncation."""
        if self.order < 1:
            raise ValueError("cannot differentiate a series of order 0")
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range")
        out = {}
        for exponents, coeff in self._terms.items():
            k = exponents[index]
            if k == 0:
                continue
            lowered = list(exponents)
            lowered[index] = k - 1
            out[tuple(lowered)] = coeff * k
        return TruncatedSeries(self.nvars, self.order - 1, out)

    def conjugate(self) -> "TruncatedSeries":
        """Conjugate every coefficient. Exponents are untouched."""
        return TruncatedSeries(
            self.nvars, self.order, {e: c.conjugate() for e, c in self._terms.items()}
        )

    def evaluate(self, point: Sequence) -> GaussRational:
        """Exact value of the stored polynomial part at a rational point."""
        values = [GaussRational.coerce(p) for p in point]
        if len(values) != self.nvars:
            raise ValueError("point arity mismatch")
        total = ZERO
        for exponents, coeff in self._terms.items():
            factor = coeff
            for value, e in zip(values, exponents):
                if e:
                    factor = factor * value**e
            total = total + factor
        return total

    def compose(self, vmap: "SeriesMap") -> "TruncatedSeries":
        return compose(self, vmap)

    # -- variable bookkeeping

    def remap_vars(self, new_nvars: int, positions: Sequence[int]) -> "TruncatedSeries":
        """Send variable i to slot positions[i] of a new variable list.

        Pure exponent reshuffling, no arithmetic, so the order is unchanged.
        ``positions`` must be injective.
        """
        positions = list(positions)
        if len(positions) != self.nvars:
            raise ValueError("positions must name a slot for every variable")
        if len(set(positions)) != len(positions):
            raise ValueError("positions must be injective")
        if any(not 0 <= p < new_nvars for p in positions):
            raise ValueError("target slot out of range")
        out = {}
        for exponents, coeff in self._terms.items():
            e = [0] * new_nvars
            for i, k in enumerate(exponents):
                e[positions[i]] = k
            out[tuple(e)] = coeff
        return TruncatedSeries(new_nvars, self.order, out)

    def set_vars_to_zero(self, indices: Iterable[int]) -> "TruncatedSeries":
        """Substitute 0 for the named variables, keeping the ambient arity."""
        indices = set(indices)
        kept = {
            e: c
            for e, c in self._terms.items()
            if all(e[i] == 0 for i in indices)
        }
        return TruncatedSeries(self.nvars, self.order, kept)

    def coefficient_family(self, group: Sequence[int]) -> dict:
        """Collect coefficients with respect to the variable group ``group``.

        Returns {alpha: series in the remaining variables}, where alpha runs
        over the group exponents that actually occur. Each extracted series
        is guaranteed only to order - |alpha|.
        """
        group = list(group)
        group_set = set(group)
        if len(group_set) != len(group):
            raise ValueError("group indices must be distinct")
        rest = [i for i in range(self.nvars) if i not in group_set]
        buckets: dict[tuple[int, ...], dict] = {}
        for exponents, coeff in self._terms.items():
            alpha = tuple(exponents[i] for i in group)
            e = tuple(exponents[i] for i in rest)
            buckets.setdefault(alpha, {})[e] = coeff
        return {
            alpha: TruncatedSeries(len(rest), self.order - sum(alpha), data)
            for alpha, data in buckets.items()
        }


class SeriesMap:
    """A tuple of TruncatedSeries sharing one source variable list and order."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[TruncatedSeries]):
        components = tuple(components)
        if not components:
            raise ValueError("a map needs at least one component")
        nvars = components[0].nvars
        order = components[0].order
        for c in components:
            if c.nvars != nvars:
                raise ValueError("components must share the source variables")
            if c.order != order:
                raise ValueError("components must share the truncation order")
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesMap is immutable")

    @classmethod
    def identity(cls, nvars: int, order: int) -> "SeriesMap":
        return cls(TruncatedSeries.variable(nvars, order, i) for i in range(nvars))

    @property
    def source_nvars(self) -> int:
        return self.components[0].nvars

    @property
    def target_nvars(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        return self.components[0].order

    def is_origin_preserving(self) -> bool:
        return all(c.constant_term().is_zero() for c in self.components)

    def conjugate(self) -> "SeriesMap":
        return SeriesMap(c.conjugate() for c in self.components)

    def truncate(self, order: int) -> "SeriesMap":
        return SeriesMap(c.truncate(order) for c in self.components)

    def evaluate(self, point) -> tuple:
        return tuple(c.evaluate(point) for c in self.components)

    def compose(self, inner: "SeriesMap") -> "SeriesMap":
        """Componentwise substitution, self after inner."""
        return SeriesMap(compose(c, inner) for c in self.components)

    def jacobian(self) -> list[list[TruncatedSeries]]:
        """Matrix of partials, rows by component, columns by source variable.

        Entries carry order - 1, one order spent on differentiation.
        """
        return [
            [c.derive(j) for j in range(self.source_nvars)] for c in self.components
        ]

    def linear_matrix(self) -> list[list[GaussRational]]:
        """Coefficients of the linear part, readable at any order >= 1."""
        if self.order < 1:
            raise ValueError("order 0 does not determine the linear part")
        return [
            [c.coefficient(unit_exponent(self.source_nvars, j)) for j in range(self.source_nvars)]
            for c in self.components
        ]

    def __eq__(self, other):
        if not isinstance(other, SeriesMap):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __repr__(self):
        return (
            f"SeriesMap({self.source_nvars} -> {self.target_nvars}, order={self.order})"
        )


def compose(outer: TruncatedSeries, vmap: SeriesMap) -> TruncatedSeries:
    """Substitute the components of ``vmap`` for the variables of ``outer``.

    The map must preserve the origin; otherwise low-degree output
    coefficients would depend on input coefficients beyond the truncation,
    and the result could not be guaranteed exact. The result order is the
    minimum of both orders.
    """
    if vmap.target_nvars != outer.nvars:
        raise ValueError(
            f"map produces {vmap.target_nvars} values, series expects {outer.nvars}"
        )
    if not vmap.is_origin_preserving():
        raise ValueError("composition requires an origin-preserving map")
    order = min(outer.order, vmap.order)
    src = vmap.source_nvars
    one = TruncatedSeries.constant(ONE, src, order)
    powers: list[list[TruncatedSeries]] = [[one] for _ in range(outer.nvars)]

    def power(i: int, k: int) -> TruncatedSeries:
        cache = powers[i]
        while len(cache) <= k:
            cache.append(cache[-1] * vmap.components[i].truncate(order))
        return cache[k]

    out: dict[tuple[int, ...], GaussRational] = {}
    for exponents, coeff in outer.sorted_terms():
        if sum(exponents) > order:
            continue
        product = None
        for i, k in enumerate(exponents):
            if k == 0:
                continue
            factor = power(i, k)
            product = factor if product is None else product * factor
        if product is None:
            product = one
        for e, c in product._terms.items():
            value = out.get(e, ZERO) + coeff * c
            if value.is_zero():
                out.pop(e, None)
            else:
                out[e] = value
    return TruncatedSeries(src, order, out)


# ---------------------------------------------------------------------------
# display helpers


def default_names(nvars: int) -> list[str]:
    return [f"x{i + 1}" for i in range(nvars)]


def format_monomial(exponents: tuple[int, ...], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"

def format_series(series: TruncatedSeries, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = default_names(series.nvars)
    if series.is_zero():
        return "0"
    chunks = []
    for exponents, coeff in series.sorted_terms():
        mono = format_monomial(exponents, names)
        if mono == "1":
            chunks.append(str(coeff))
        elif coeff == ONE:
            chunks.append(mono)
        elif coeff == -ONE:
            chunks.append(f"-{mono}")
        else:
            chunks.append(f"{coeff}*{mono}")
    text = " + ".join(chunks)
    return text.replace("+ -", "- ")
