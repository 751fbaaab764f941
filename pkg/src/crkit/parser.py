"""Expression parser for polynomial input.

Turns human-readable polynomial text like ``-(i/2)*(z2 - w2) - z1*w1``
into an exact TruncatedSeries. The grammar:

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := base ('^' nat)?
    base     := nat | 'i' | ident | '(' expr ')' | '-' base

Division is only defined when the divisor is a nonzero constant, so
``i/2`` and ``z1/3`` parse while ``1/z1`` is rejected. There is no
implicit multiplication: ``2z1`` is a syntax error. Identifiers are an
ASCII group name followed by a 1-based index (``z1``, ``w2``,
``lambda3``) and must resolve against the declared variable list; ``i``
is reserved for the imaginary unit. Unary minus binds tighter than the
power operator, so ``-z1^2`` means ``(-z1)^2``.

Expansion is exact over Gaussian rationals. Terms above the requested
truncation order are dropped with a TruncationWarning rather than
silently discarded.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ParseError
from .rational import GaussRational, I, ONE
from .series import TruncatedSeries, add_exponents


class TruncationWarning(UserWarning):
    """A parsed polynomial had terms above the requested order."""


# ---------------------------------------------------------------------------
# variable declarations

Declaration = Union[str, Sequence[tuple[str, int]]]

_NAME_RE = re.compile(r"[A-Za-z_]+\Z")
_IDENT_RE = re.compile(r"([A-Za-z_]+)([0-9]+)\Z")


def normalize_declaration(decl: Declaration) -> tuple[tuple[str, int], ...]:
    """Validate a variable declaration and return ((name, arity), ...).

    Accepts either the compact string form "z:2,w:2" or a sequence of
    (name, arity) pairs. Group names are ASCII letters and underscores,
    pairwise distinct, and never the reserved 'i'; arities are positive.
    """
    if isinstance(decl, str):
        pairs = []
        for piece in decl.split(","):
            piece = piece.strip()
            name, sep, count = piece.partition(":")
            if not sep:
                raise ParseError(f"variable group {piece!r} is not name:arity")
            try:
                arity = int(count)
            except ValueError:
                raise ParseError(f"arity {count!r} is not an integer") from None
            pairs.append((name.strip(), arity))
    else:
        pairs = [(name, int(count)) for name, count in decl]
    seen = set()
    for name, arity in pairs:
        if not _NAME_RE.fullmatch(name):
            raise ParseError(
                f"group name {name!r} must be ASCII letters or underscores"
            )
        if name == "i":
            raise ParseError("group name 'i' is reserved for the imaginary unit")
        if name in seen:
            raise ParseError(f"duplicate group name {name!r}")
        if arity < 1:
            raise ParseError(f"group {name!r} needs a positive arity")
        seen.add(name)
    if not pairs:
        raise ParseError("at least one variable group is required")
    return tuple(pairs)


class _Layout:
    __slots__ = ("groups", "offsets", "nvars")

    def __init__(self, groups):
        self.groups = groups
        self.offsets = {}
        total = 0
        for name, arity in groups:
            self.offsets[name] = total
            total += arity
        self.nvars = total

    def resolve(self, name: str, index: int) -> int | None:
        for gname, arity in self.groups:
            if gname == name:
                if 1 <= index <= arity:
                    return self.offsets[name] + index - 1
                return None
        return None


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class RationalLit:
    value: Fraction


@dataclass(frozen=True)
class ImaginaryUnit:
    pass


@dataclass(frozen=True)
class VarRef:
    name: str
    slot: int


@dataclass(frozen=True)
class Negate:
    child: object


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


@dataclass(frozen=True)
class Difference:
    left: object
    right: object


@dataclass(frozen=True)
class Product:
    left: object
    right: object


@dataclass(frozen=True)
class Quotient:
    left: object
    right: object
    line: int
    column: int


@dataclass(frozen=True)
class Power:
    child: object
    exponent: int


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(r"[0-9]+|[A-Za-z_][A-Za-z_0-9]*|[-+*/^()]")


@dataclass(frozen=True)
class _Token:
    kind: str  # number | name | op | end
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    start = 0  # index where the current line begins
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            start = pos
            continue
        if ch in " \t\r":
            pos += 1
            continue
        if not ch.isascii():
            raise ParseError(
                f"non-ASCII character {ch!r}", line, pos - start + 1
            )
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(
                f"unexpected character {ch!r}", line, pos - start + 1
            )
        piece = match.group()
        if piece[0].isdigit():
            kind = "number"
        elif piece[0].isalpha() or piece[0] == "_":
            kind = "name"
        else:
            kind = "op"
        tokens.append(_Token(kind, piece, line, pos - start + 1))
        pos = match.end()
    tokens.append(_Token("end", "", line, len(text) - start + 1))
    return tokens


# ---------------------------------------------------------------------------
# recursive descent

class _Parser:
    def __init__(self, tokens: list[_Token], layout: _Layout):
        self.tokens = tokens
        self.pos = 0
        self.layout = layout

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str, token: _Token | None = None):
        token = token or self.peek()
        raise ParseError(message, token.line, token.column)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r} after the expression")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            right = self.term()
            node = Sum(node, right) if op == "+" else Difference(node, right)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            token = self.advance()
            right = self.factor()
            if token.text == "*":
                node = Product(node, right)
            else:
                node = Quotient(node, right, token.line, token.column)
        return node

    def factor(self):
        node = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            token = self.peek()
            if token.kind != "number":
                self.fail("exponent must be a nonnegative integer literal", token)
            self.advance()
            node = Power(node, int(token.text))
        return node

    def base(self):
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return RationalLit(Fraction(int(token.text)))
        if token.kind == "name":
            self.advance()
            if token.text == "i":
                return ImaginaryUnit()
            return self.resolve(token)
        if token.kind == "op" and token.text == "-":
            self.advance()
            return Negate(self.base())
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            closing = self.peek()
            if not (closing.kind == "op" and closing.text == ")"):
                self.fail("expected ')'", closing)
            self.advance()
            return node
        if token.kind == "end":
            self.fail("unexpected end of expression", token)
        self.fail(f"unexpected {token.text!r}", token)

    def resolve(self, token: _Token) -> VarRef:
        match = _IDENT_RE.fullmatch(token.text)
        if match is None:
            self.fail(f"undeclared identifier {token.text!r}", token)
        name, index = match.group(1), int(match.group(2))
        slot = self.layout.resolve(name, index)
        if slot is None:
            self.fail(f"undeclared identifier {token.text!r}", token)
        return VarRef(token.text, slot)


# ---------------------------------------------------------------------------
# exact polynomial evaluation

def _padd(a, b):
    out = dict(a)
    for exponents, coeff in b.items():
        total = out.get(exponents)
        total = coeff if total is None else total + coeff
        if total.is_zero():
            out.pop(exponents, None)
        else:
            out[exponents] = total
    return out


def _pmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = add_exponents(ea, eb)
            product = ca * cb
            total = out.get(key)
            total = product if total is None else total + product
            if total.is_zero():
                out.pop(key, None)
            else:
                out[key] = total
    return out


def _pscale(a, factor: GaussRational):
    if factor.is_zero():
        return {}
    return {e: c * factor for e, c in a.items()}


def _evaluate(node, nvars: int):
    zero_key = (0,) * nvars
    if isinstance(node, RationalLit):
        value = GaussRational(node.value)
        return {zero_key: value} if not value.is_zero() else {}
    if isinstance(node, ImaginaryUnit):
        return {zero_key: I}
    if isinstance(node, VarRef):
        key = tuple(1 if i == node.slot else 0 for i in range(nvars))
        return {key: ONE}
    if isinstance(node, Negate):
        return _pscale(_evaluate(node.child, nvars), GaussRational(-1))
    if isinstance(node, Sum):
        return _padd(_evaluate(node.left, nvars), _evaluate(node.right, nvars))
    if isinstance(node, Difference):
        right = _pscale(_evaluate(node.right, nvars), GaussRational(-1))
        return _padd(_evaluate(node.left, nvars), right)
    if isinstance(node, Product):
        return _pmul(_evaluate(node.left, nvars), _evaluate(node.right, nvars))
    if isinstance(node, Quotient):
        divisor = _evaluate(node.right, nvars)
        if len(divisor) != 1 or zero_key not in divisor:
            raise ParseError(
                "division is only defined by a nonzero constant",
                node.line,
                node.column,
            )
        inverse = ONE / divisor[zero_key]
        return _pscale(_evaluate(node.left, nvars), inverse)
    if isinstance(node, Power):
        result = {zero_key: ONE}
        square = _evaluate(node.child, nvars)
        k = node.exponent
        while k:
            if k & 1:
                result = _pmul(result, square)
            k >>= 1
            if k:
                square = _pmul(square, square)
        return result
    raise AssertionError(f"unhandled node {node!r}")


# ---------------------------------------------------------------------------
# entry point

def parse_expr(text: str, variables: Declaration, order: int) -> TruncatedSeries:
    """Parse polynomial text over the declared variables, exactly.

    ``variables`` is "z:2,w:2" or ((name, arity), ...); slots are laid out
    group by group in declaration order. The expansion is exact; terms of
    total degree above ``order`` raise a TruncationWarning and are dropped.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    groups = normalize_declaration(variables)
    layout = _Layout(groups)
    tokens = _tokenize(text)
    if tokens[0].kind == "end":
        raise ParseError("empty expression", tokens[0].line, tokens[0].column)
    ast = _Parser(tokens, layout).parse()
    poly = _evaluate(ast, layout.nvars)
    kept = [(e, c) for e, c in poly.items() if sum(e) <= order]
    dropped = len(poly) - len(kept)
    if dropped:
        warnings.warn(
            f"{dropped} term(s) above order {order} were dropped",
            TruncationWarning,
            stacklevel=2,
        )
    return TruncatedSeries(layout.nvars, order, kept)
