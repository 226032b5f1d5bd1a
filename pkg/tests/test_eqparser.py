from fractions import Fraction as F

import pytest

from libraries.eqparser import (
    format_coefficient,
    format_document,
    format_jet,
    parse,
    parse_document,
    read_document,
)
from libraries.errors import DimensionMismatch, EquationSyntaxError, RealnessViolation
from libraries.polycore import GaussRational, MonomialKey


def test_parse_coefficients():
    jet = parse('(1/2)*z1^2*zb2 + (1/2)*zb1^2*z2 - 3*u*z1*zb1', 2)
    assert jet.coeff(MonomialKey((2, 0), (0, 1), 0)) == F(1, 2)
    assert jet.coeff(MonomialKey((1, 0), (1, 0), 1)) == -3
    assert jet.trunc == 6


def test_parse_gaussian_literals():
    jet = parse('(1/2+2/3*i)*z1^2*zb1 + (1/2-2/3*i)*z1*zb1^2', 1)
    assert jet.coeff(MonomialKey((2,), (1,), 0)) == GaussRational(F(1, 2), F(2, 3))


def test_parse_bare_i():
    jet = parse('i*z1^2 - i*zb1^2', 1)
    assert jet.coeff(MonomialKey((2,), (0,), 0)) == GaussRational(0, 1)


def test_parse_errors():
    with pytest.raises(DimensionMismatch):
        parse('z3*zb3', 2)
    with pytest.raises(EquationSyntaxError):
        parse('x1*zb1', 1)
    with pytest.raises(EquationSyntaxError):
        parse('z1 zb1', 1)
    with pytest.raises(EquationSyntaxError):
        parse('(1/0)*z1*zb1', 1)
    with pytest.raises(RealnessViolation):
        parse('z1^2*zb1', 1)


def test_syntax_error_position(fixtures_dir):
    with pytest.raises(EquationSyntaxError) as error:
        read_document(fixtures_dir / 'broken.eq').jet()
    assert (error.value.line, error.value.column) == (2, 12)


def test_document_options_and_continuation(fixtures_dir):
    document = read_document(fixtures_dir / 'staircase.eq')
    assert document.n == 2
    assert document.option('trunc') == '12'
    jet = document.jet()
    assert jet.trunc == 12
    assert len(jet) == 4


@pytest.mark.parametrize(
    'text, message',
    [
        ('v = z1*zb1\n', 'Missing n'),
        ('n=1\n', 'Missing v'),
        ('n=x\nv = z1*zb1\n', 'Bad dimension'),
        ('n=1\nv = z1*zb1\nv = z1*zb1\n', 'Second equation'),
    ],
)
def test_document_errors(text, message):
    with pytest.raises(EquationSyntaxError, match=message):
        parse_document(text)


def test_format_coefficient():
    assert format_coefficient(GaussRational(3)) == '3'
    assert format_coefficient(GaussRational(F(-1, 2))) == '(-1/2)'
    assert format_coefficient(GaussRational(0, -1)) == '(-1*i)'
    assert format_coefficient(GaussRational(F(1, 2), F(-2, 3))) == '(1/2-2/3*i)'


def test_printer_output_parses_back(staircase):
    assert format_jet(staircase) == (
        'z1^2*zb1^2 - z1^2*zb2^3 - z2^3*zb1^2 + z2^3*zb2^3'
    )
    gaussian = parse('(1+i)*z1^2*zb1 + (1-i)*z1*zb1^2 - (5/3)*u*z1*zb1', 1)
    assert parse(format_jet(gaussian), 1) == gaussian
    document = parse_document(format_document(staircase, {'trunc': 12}))
    assert document.jet() == staircase
