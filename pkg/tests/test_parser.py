import warnings
from fractions import Fraction

import pytest

from crkit.errors import ParseError
from crkit.parser import TruncationWarning, normalize_declaration, parse_expr
from crkit.rational import GaussRational, I, ONE


# frozen expected coefficients of the sphere defining series, verified by
# hand expansion of -(i/2)(z2 - w2) - z1 w1 over (z1, z2, w1, w2)
SPHERE_TERMS = {
    (0, 1, 0, 0): GaussRational(0, Fraction(-1, 2)),
    (0, 0, 0, 1): GaussRational(0, Fraction(1, 2)),
    (1, 0, 1, 0): GaussRational(-1),
}


def test_sphere_expression():
    series = parse_expr("-(i/2)*(z2 - w2) - z1*w1", "z:2,w:2", 8)
    assert series.nvars == 4
    assert series.order == 8
    assert dict(series.terms) == SPHERE_TERMS


def test_declaration_forms_agree():
    text = "-(i/2)*(z2 - w2) - z1*w1"
    a = parse_expr(text, "z:2,w:2", 8)
    b = parse_expr(text, (("z", 2), ("w", 2)), 8)
    assert a == b


def test_truncation_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        series = parse_expr("z1^2", "z:2,w:2", 1)
    assert series.is_zero()
    assert len(caught) == 1
    assert issubclass(caught[0].category, TruncationWarning)


def test_no_warning_when_everything_fits():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        parse_expr("z1^2", "z:2,w:2", 2)
    assert not caught


def test_undeclared_identifier():
    with pytest.raises(ParseError, match="undeclared identifier 'q'"):
        parse_expr("z1 + q", "z:2,w:2", 4)
    with pytest.raises(ParseError, match="undeclared identifier 'z3'"):
        parse_expr("z3", "z:2,w:2", 4)
    with pytest.raises(ParseError, match="undeclared identifier"):
        parse_expr("z0", "z:2,w:2", 4)  # indices are 1-based


def test_error_positions():
    with pytest.raises(ParseError) as info:
        parse_expr("z1 +\n  q*z2", "z:2,w:2", 4)
    assert info.value.line == 2
    assert info.value.column == 3


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse_expr("2z1", "z:2,w:2", 4)


def test_division_restrictions():
    assert parse_expr("z1/2", "z:2,w:2", 4).coefficient((1, 0, 0, 0)) == \
        GaussRational(Fraction(1, 2))
    with pytest.raises(ParseError, match="nonzero constant"):
        parse_expr("1/z1", "z:2,w:2", 4)
    with pytest.raises(ParseError, match="nonzero constant"):
        parse_expr("i/0", "z:2,w:2", 4)
    with pytest.raises(ParseError, match="nonzero constant"):
        parse_expr("z1/(1 - 1)", "z:2,w:2", 4)


def test_exponent_restrictions():
    with pytest.raises(ParseError, match="nonnegative integer"):
        parse_expr("z1^-2", "z:2,w:2", 4)
    with pytest.raises(ParseError, match="nonnegative integer"):
        parse_expr("z1^z2", "z:2,w:2", 4)
    assert parse_expr("z1^0", "z:2,w:2", 4).constant_term() == ONE


def test_unary_minus_binds_before_power():
    # documented grammar consequence: -z1^2 means (-z1)^2
    assert parse_expr("-z1^2", "z:1", 4) == parse_expr("z1^2", "z:1", 4)
    assert parse_expr("-(z1^2)", "z:1", 4) == parse_expr("z1^2", "z:1", 4).scale(-1)


def test_imaginary_unit():
    assert parse_expr("i*i", "z:1", 2).constant_term() == GaussRational(-1)
    assert parse_expr("i^4", "z:1", 2).constant_term() == ONE
    assert parse_expr("2*i", "z:1", 2).constant_term() == GaussRational(0, 2)


def test_syntax_errors():
    for text in ["", "z1 +", "(z1", "z1)", "*z1", "z1 ** z2", "z1 @ z2"]:
        with pytest.raises(ParseError):
            parse_expr(text, "z:2,w:2", 4)


def test_non_ascii_rejected():
    with pytest.raises(ParseError, match="non-ASCII"):
        parse_expr("z1 + α", "z:2,w:2", 4)


def test_multi_letter_groups_and_indices():
    series = parse_expr("zp1*lambda2", "zp:2,lambda:2", 4)
    assert series.coefficient((1, 0, 0, 1)) == ONE


def test_declaration_validation():
    assert normalize_declaration("z:2, w:3") == (("z", 2), ("w", 3))
    with pytest.raises(ParseError):
        normalize_declaration("i:2")  # reserved
    with pytest.raises(ParseError):
        normalize_declaration("z:0")
    with pytest.raises(ParseError):
        normalize_declaration("z:2,z:3")
    with pytest.raises(ParseError):
        normalize_declaration("z2:1")  # digits belong to the index
    with pytest.raises(ParseError):
        normalize_declaration("")


def test_exact_fractions_no_floats():
    series = parse_expr("1/3*z1 + 1/3*z1 + 1/3*z1", "z:1", 2)
    assert series.coefficient((1,)) == ONE


def test_big_expansion_is_exact():
    series = parse_expr("(z1 + w1)^6", "z:1,w:1", 6)
    assert series.coefficient((3, 3)) == GaussRational(20)
    assert series.coefficient((6, 0)) == ONE
