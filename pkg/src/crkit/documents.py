"""Canonical text documents for series, maps, and hypersurfaces.

The interchange format is deliberately rigid so that equal values have
equal bytes: LF line endings, single-space separation, graded-lex term
order, fractions in lowest terms with the sign on the numerator and an
explicit denominator. Parsing validates everything it reads and collects
all problems into one DocumentError instead of stopping at the first.

A series document:

    crkit-series/1
    kind series
    vars z:2 w:2
    order 8
    terms 3
    term 0 0 0 1 0/1 1/2
    term 0 1 0 0 0/1 -1/2
    term 1 0 1 0 -1/1 0/1
    end

Each term line is the exponent vector followed by the real and imaginary
parts. Map documents insert "components k" and per-component term blocks;
hypersurface documents carry "n" and a "normal" flag and always declare
variables as z:n w:n. Reflection reports are written, never parsed.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DocumentError
from .rational import GaussRational
from .series import SeriesMap, TruncatedSeries, grlex_key

FORMAT_VERSION = "crkit-series/1"

_KINDS = ("series", "map", "hypersurface")
_GROUP_RE = re.compile(r"([A-Za-z_]+):([0-9]+)\Z")


# ---------------------------------------------------------------------------
# serialization


def _fraction_token(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _term_line(exponents, coeff: GaussRational) -> str:
    parts = ["term"]
    parts.extend(str(e) for e in exponents)
    parts.append(_fraction_token(coeff.re))
    parts.append(_fraction_token(coeff.im))
    return " ".join(parts)


def _vars_line(groups) -> str:
    return "vars " + " ".join(f"{name}:{arity}" for name, arity in groups)


def _series_block(series: TruncatedSeries, groups) -> list[str]:
    total = sum(arity for _, arity in groups)
    if total != series.nvars:
        raise ValueError(
            f"variable groups declare {total} slots, series has {series.nvars}"
        )
    lines = [_vars_line(groups), f"order {series.order}"]
    terms = series.sorted_terms()
    lines.append(f"terms {len(terms)}")
    lines.extend(_term_line(e, c) for e, c in terms)
    return lines


def _default_groups(nvars: int):
    return (("x", nvars),)


def serialize(obj, variables=None) -> str:
    """Canonical document text for a series, map, or hypersurface.

    ``variables`` optionally names the variable groups for series and
    maps, as ((name, arity), ...) summing to the variable count; the
    default is a single group x:nvars. Hypersurfaces always use z:n w:n.
    Equal values produce identical bytes.
    """
    lines = [FORMAT_VERSION]
    if isinstance(obj, TruncatedSeries):
        groups = variables or _default_groups(obj.nvars)
        lines.append("kind series")
        lines.extend(_series_block(obj, groups))
    elif isinstance(obj, SeriesMap):
        groups = variables or _default_groups(obj.source_nvars)
        lines.append("kind map")
        lines.append(_vars_line(groups))
        total = sum(arity for _, arity in groups)
        if total != obj.source_nvars:
            raise ValueError(
                f"variable groups declare {total} slots, map reads {obj.source_nvars}"
            )
        lines.append(f"order {obj.order}")
        lines.append(f"components {obj.target_nvars}")
        for index, component in enumerate(obj.components, start=1):
            lines.append(f"component {index}")
            terms = component.sorted_terms()
            lines.append(f"terms {len(terms)}")
            lines.extend(_term_line(e, c) for e, c in terms)
    else:
        # duck-typed hypersurface: n, rho, normal
        try:
            n, rho, normal = obj.n, obj.rho, obj.normal
        except AttributeError:
            raise TypeError(f"cannot serialize {type(obj).__name__}") from None
        if variables is not None:
            raise ValueError("hypersurface documents fix their variable names")
        lines.append("kind hypersurface")
        lines.append(f"n {n}")
        lines.extend(_series_block(rho, (("z", n), ("w", n))))
        lines.append(f"normal {'true' if normal else 'false'}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def serialize_report(report) -> str:
    """Canonical text for a ReflectionReport.

    Exact content (the reflection series and the u_alpha family) comes
    first; the float diagnostic is a clearly separated trailer. Floats are
    formatted with %.12e and appear nowhere else in the format.
    """
    n = report.n
    lines = [FORMAT_VERSION, "kind reflection-report"]
    lines.append(f"n {n}")
    lines.append(f"order {report.order}")
    lines.append(f"cutoff {report.cutoff}")
    lines.append(f"radius {_fraction_token(report.evidence.radius)}")
    lines.append("reflection")
    lines.extend(_series_block(report.reflection, (("z", n), ("lambda", n - 1))))
    lines.append(f"family {len(report.family)}")
    for alpha, series in report.family:
        lines.append("entry " + " ".join(str(a) for a in alpha))
        lines.extend(_series_block(series, (("zp", n - 1),)))
    lines.append(f"r0 {report.evidence.r0:.12e}")
    lines.append(f"polynomial {'true' if report.evidence.polynomial else 'false'}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing


class _Reader:
    """Line cursor plus problem collector; parsing never raises until the
    end, so one pass reports every defect it can reach."""

    def __init__(self, text: str):
        self.problems: list[str] = []
        self.dead = False
        if "\r" in text:
            self.problems.append("document must use LF line endings")
            text = text.replace("\r\n", "\n").replace("\r", "\n")
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        else:
            self.problems.append("document must end with a newline")
        self.pos = 0

    def report(self, message: str):
        self.problems.append(f"line {self.pos + 1}: {message}")

    def abort(self, message: str):
        """Structural failure; nothing past this point can be trusted."""
        self.report(message)
        self.dead = True

    def next_line(self) -> str | None:
        if self.dead or self.pos >= len(self.lines):
            return None
        line = self.lines[self.pos]
        return line

    def advance(self):
        self.pos += 1

    def take_kv(self, key: str) -> str | None:
        """Consume a line of the form '<key> <value>'."""
        line = self.next_line()
        if line is None:
            if not self.dead:
                self.abort(f"unexpected end of document, expected {key!r}")
            return None
        prefix = key + " "
        if not line.startswith(prefix) or line == prefix:
            self.abort(f"expected {key!r} line, found {line!r}")
            return None
        self.advance()
        return line[len(prefix):]


_INT_RE = re.compile(r"(0|-?[1-9][0-9]*)\Z")


def _canonical_int(token: str, reader: _Reader, what: str) -> int | None:
    if not _INT_RE.fullmatch(token):
        reader.report(f"{what} {token!r} is not a canonical integer")
        return None
    return int(token)


def _canonical_nat(token: str, reader: _Reader, what: str) -> int | None:
    value = _canonical_int(token, reader, what)
    if value is not None and value < 0:
        reader.report(f"{what} must be nonnegative, got {value}")
        return None
    return value


def _canonical_fraction(token: str, reader: _Reader, what: str) -> Fraction | None:
    head, sep, tail = token.partition("/")
    if not sep:
        reader.report(f"{what} {token!r} must be written p/q")
        return None
    try:
        value = Fraction(int(head), int(tail))
    except (ValueError, ZeroDivisionError):
        reader.report(f"{what} {token!r} is not a valid fraction")
        return None
    if _fraction_token(value) != token:
        reader.report(f"{what} {token!r} is not in canonical lowest terms")
        return None
    return value


def _parse_vars(reader: _Reader):
    value = reader.take_kv("vars")
    if value is None:
        return None
    groups = []
    seen = set()
    for piece in value.split(" "):
        match = _GROUP_RE.fullmatch(piece)
        if match is None:
            reader.report(f"variable group {piece!r} is not name:arity")
            continue
        name, arity = match.group(1), int(match.group(2))
        if name in seen or name == "i" or arity < 1:
            reader.report(f"bad variable group {piece!r}")
            continue
        seen.add(name)
        groups.append((name, arity))
    if not groups:
        reader.abort("no usable variable groups")
        return None
    return tuple(groups)


def _parse_count(reader: _Reader, key: str) -> int | None:
    value = reader.take_kv(key)
    if value is None:
        return None
    return _canonical_nat(value, reader, key)


def _parse_terms(reader: _Reader, nvars: int, order: int, count: int):
    """Parse `count` term lines, enforcing every canonical-form rule."""
    terms = []
    previous_key = None
    for _ in range(count):
        line = reader.next_line()
        if line is None or not line.startswith("term "):
            reader.abort("expected a 'term' line")
            return None
        tokens = line.split(" ")[1:]
        reader_ok = True
        if len(tokens) != nvars + 2:
            reader.report(
                f"term line has {len(tokens)} fields, expected {nvars} exponents "
                "plus two coefficients"
            )
            reader.advance()
            continue
        exponents = []
        for token in tokens[:nvars]:
            e = _canonical_nat(token, reader, "exponent")
            if e is None:
                reader_ok = False
            else:
                exponents.append(e)
        re_part = _canonical_fraction(tokens[nvars], reader, "real part")
        im_part = _canonical_fraction(tokens[nvars + 1], reader, "imaginary part")
        if not reader_ok or re_part is None or im_part is None:
            reader.advance()
            continue
        exponents = tuple(exponents)
        if sum(exponents) > order:
            reader.report(
                f"term degree {sum(exponents)} exceeds the declared order {order}"
            )
        coeff = GaussRational(re_part, im_part)
        if coeff.is_zero():
            reader.report("zero coefficients must be omitted")
        key = grlex_key(exponents)
        if previous_key is not None and key <= previous_key:
            reader.report(
                "terms must be strictly ascending in graded-lex order"
            )
        previous_key = key
        terms.append((exponents, coeff))
        reader.advance()
    return terms


def _parse_series_block(reader: _Reader):
    groups = _parse_vars(reader)
    order = _parse_count(reader, "order")
    count = _parse_count(reader, "terms")
    if groups is None or order is None or count is None or reader.dead:
        return None
    nvars = sum(arity for _, arity in groups)
    terms = _parse_terms(reader, nvars, order, count)
    if terms is None or reader.problems:
        return None
    return groups, TruncatedSeries(nvars, order, terms)


def _expect_end(reader: _Reader):
    line = reader.next_line()
    if line is None:
        if not reader.dead:
            reader.abort("missing 'end' line")
        return
    if line != "end":
        reader.abort(f"expected 'end', found {line!r}")
        return
    reader.advance()
    trailing = len(reader.lines) - reader.pos
    if trailing:
        reader.report(f"{trailing} unexpected line(s) after 'end'")


def parse_document(text: str):
    """Parse a canonical document into its exact value.

    Returns a TruncatedSeries, SeriesMap, or Hypersurface according to the
    document's kind line. Raises DocumentError carrying every problem
    found, not just the first.
    """
    from .hypersurface import from_defining  # local import, avoids a cycle

    reader = _Reader(text)
    if not reader.lines or reader.lines[0] != FORMAT_VERSION:
        found = reader.lines[0] if reader.lines else ""
        raise DocumentError(
            [f"unsupported format version {found!r}, expected {FORMAT_VERSION!r}"]
        )
    reader.advance()
    kind = reader.take_kv("kind")
    if kind is None:
        raise DocumentError(reader.problems)
    if kind not in _KINDS:
        raise DocumentError([f"unsupported kind {kind!r}"])

    result = None
    if kind == "series":
        block = _parse_series_block(reader)
        _expect_end(reader)
        if block is not None and not reader.problems:
            result = block[1]
    elif kind == "map":
        groups = _parse_vars(reader)
        order = _parse_count(reader, "order")
        ncomp = _parse_count(reader, "components")
        components = []
        if groups is not None and order is not None and ncomp is not None:
            nvars = sum(arity for _, arity in groups)
            if ncomp < 1:
                reader.abort("a map needs at least one component")
            for index in range(1, (ncomp or 0) + 1):
                label = reader.take_kv("component")
                if label is None:
                    break
                if label != str(index):
                    reader.report(f"component label {label!r}, expected {index}")
                count = _parse_count(reader, "terms")
                if count is None:
                    break
                terms = _parse_terms(reader, nvars, order, count)
                if terms is None:
                    break
                components.append(terms)
        _expect_end(reader)
        if not reader.problems and groups is not None:
            nvars = sum(arity for _, arity in groups)
            result = SeriesMap(
                TruncatedSeries(nvars, order, terms) for terms in components
            )
    else:  # hypersurface
        n_token = reader.take_kv("n")
        n = None
        if n_token is not None:
            n = _canonical_nat(n_token, reader, "n")
            if n is not None and n < 2:
                reader.report(f"n must be at least 2, got {n}")
                n = None
        block = _parse_series_block(reader)
        normal_token = reader.take_kv("normal")
        if normal_token is not None and normal_token not in ("true", "false"):
            reader.report(f"normal flag must be true or false, got {normal_token!r}")
            normal_token = None
        _expect_end(reader)
        if block is not None and n is not None and not reader.problems:
            groups, rho = block
            if groups != (("z", n), ("w", n)):
                reader.report(
                    "hypersurface documents must declare variables z:n w:n"
                )
            else:
                surface = from_defining(rho, n, provenance=("document",))
                if normal_token is not None:
                    declared = normal_token == "true"
                    if declared != surface.normal:
                        reader.report(
                            "declared normal flag contradicts the series"
                        )
                    else:
                        result = surface

    if reader.problems:
        raise DocumentError(reader.problems)
    assert result is not None
    return result


def write_document(path, obj, variables=None):
    """Serialize to a file with exact canonical bytes (UTF-8, LF)."""
    data = serialize(obj, variables)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(data)


def read_document(path):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return parse_document(handle.read())
