"""From text to series and back.

Two text formats live in this package: a small expression grammar for
humans writing defining functions, and the crkit-series/1 document format
for storing series, maps, and hypersurfaces canonically on disk.
"""

from crkit import (
    format_series,
    from_defining,
    parse_document,
    parse_expr,
    serialize,
)


EXPRESSION = "-(i/2)*(z2 - w2) - z1*w1"


def main():
    print("== parsing an expression ==")
    print("input:", EXPRESSION)
    rho = parse_expr(EXPRESSION, "z:2,w:2", 8)
    print("series:", format_series(rho, ["z1", "z2", "w1", "w2"]))

    print()
    print("== the canonical document ==")
    surface = from_defining(rho, 2, provenance=("demo",))
    text = serialize(surface)
    print(text, end="")

    print()
    print("== round trip ==")
    parsed = parse_document(text)
    print("equal after round trip:", parsed.rho == surface.rho)
    print("re-serialization is byte-stable:", serialize(parsed) == text)

    print()
    print("== everything wrong, reported at once ==")
    broken = "\n".join(
        [
            "crkit-series/1",
            "kind series",
            "vars z:1",
            "order 2",
            "terms 2",
            "term 1 2/4 0/1",
            "term 3 1/1 0/1",
            "end",
        ]
    ) + "\n"
    try:
        parse_document(broken)
    except Exception as exc:
        print(exc)


if __name__ == "__main__":
    main()
