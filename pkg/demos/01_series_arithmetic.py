"""Tour of the exact series kernel.

Truncated multivariate power series over the Gaussian rationals: every
coefficient is a pair of exact fractions, every operation tracks the
guaranteed truncation order, and nothing is ever rounded.
"""

from fractions import Fraction

from crkit import (
    GaussRational,
    I,
    SeriesMap,
    TruncatedSeries,
    compose,
    format_series,
    invert_map,
)


def main():
    # two variables, guaranteed through total degree 6
    x = TruncatedSeries.variable(2, 6, 0)
    y = TruncatedSeries.variable(2, 6, 1)

    print("== arithmetic is exact ==")
    s = (x + y.scale(Fraction(1, 3))) ** 3
    print("(x + y/3)^3 =", format_series(s, ["x", "y"]))

    third = s.coefficient((2, 1))
    print("coefficient of x^2 y:", third)
    assert third == GaussRational(1)

    print()
    print("== complex coefficients ==")
    rotated = x.scale(I) * y
    print("i x y =", format_series(rotated, ["x", "y"]))
    print("conjugated:", format_series(rotated.conjugate(), ["x", "y"]))

    print()
    print("== orders shrink, never lie ==")
    d = s.derive(0)
    print("d/dx drops the order to", d.order)
    capped = s.truncate(3)
    print("truncated copy keeps", len(capped.terms), "terms at order", capped.order)

    print()
    print("== composition and inversion ==")
    f = SeriesMap([x + y**2, y - x**2])
    g = invert_map(f)
    round_trip = f.compose(g)
    print("f o f^{-1} first component:",
          format_series(round_trip.components[0], ["x", "y"]))
    assert round_trip == SeriesMap.identity(2, round_trip.order)

    u = compose(x * y, f)
    print("(x y) o f =", format_series(u, ["x", "y"]))


if __name__ == "__main__":
    main()
