# Equation files and polynomial expressions in z1..zn, zb1..zbn and u.
#
#   # comment
#   n=2
#   trunc=16
#   v = z1^2*zb1^2 - (1/2)*z1^2*zb2^3 - (1/2)*zb1^2*z2^3 + z2^3*zb2^3
#
# Coefficients are exact: integers, fractions and Gaussian literals such
# as (3/2) or (1/2+2/3*i). The printer emits the same grammar in a fixed
# term order, so printing and parsing again gives back the same jet.

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from libraries.errors import DimensionMismatch, EquationSyntaxError
from libraries.polycore import ONE, ZERO, GaussRational, I_UNIT, Jet, assert_real

TOKEN_RE = re.compile(r'\s*(?:(\d+)|([A-Za-z]+\d*)|(.))')
VARIABLE_RE = re.compile(r'^(zb|z)(\d+)$')
OPTION_RE = re.compile(r'^([a-z_]+)\s*=\s*(.+)$')


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        start = match.start(match.lastindex)
        number, name, symbol = match.groups()
        if number is not None:
            kind = 'number'
        elif name is not None:
            kind = 'name'
        elif symbol in '+-*/^()':
            kind = symbol
        else:
            raise EquationSyntaxError(f'Unexpected character {symbol!r}', line, column + start)
        tokens.append(Token(kind, match.group(match.lastindex), line, column + start))
        pos = match.end()
    tokens.append(Token('end', '', line, column + len(text)))
    return tokens


class ExpressionParser:
    '''Recursive descent over the token list; one instance per expression.'''

    def __init__(self, tokens: list, n: int, variables: dict):
        self.tokens = tokens
        self.pos = 0
        self.n = n
        self.variables = variables

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, message: str):
        token = self.current
        raise EquationSyntaxError(message, token.line, token.column)

    def take(self, kind: str) -> Token:
        if self.current.kind != kind:
            shown = self.current.text or 'end of input'
            self.fail(f'Expected {kind!r}, found {shown!r}')
        token = self.current
        self.pos += 1
        return token

    def expression(self) -> dict:
        terms = {}
        sign = ONE
        if self.current.kind in ('+', '-'):
            sign = -ONE if self.take(self.current.kind).kind == '-' else ONE
        while True:
            coeff, exps = self.term()
            terms[exps] = terms.get(exps, ZERO) + sign * coeff
            if self.current.kind == 'end':
                return terms
            if self.current.kind not in ('+', '-'):
                self.fail(f'Expected + or -, found {self.current.text!r}')
            sign = -ONE if self.take(self.current.kind).kind == '-' else ONE

    def term(self) -> tuple:
        coeff = ONE
        exps = [0] * (2 * self.n + 1)
        while True:
            factor, slot, power = self.factor()
            if slot is None:
                coeff = coeff * factor
            else:
                exps[slot] += power
            if self.current.kind != '*':
                return coeff, tuple(exps)
            self.take('*')

    def factor(self) -> tuple:
        token = self.current
        if token.kind == 'number':
            return self.rational(), None, 0
        if token.kind == '(':
            self.take('(')
            value = self.gaussian()
            self.take(')')
            return value, None, 0
        if token.kind == 'name':
            self.take('name')
            if token.text == 'i':
                return I_UNIT, None, 0
            if token.text not in self.variables:
                raise self.unknown(token)
            power = 1
            if self.current.kind == '^':
                self.take('^')
                power = int(self.take('number').text)
            return None, self.variables[token.text], power
        self.fail(f'Unexpected {token.text or "end of input"!r}')

    def unknown(self, token: Token):
        match = VARIABLE_RE.match(token.text)
        if match and int(match.group(2)) > self.n:
            return DimensionMismatch(
                f'Variable {token.text} exceeds n={self.n} '
                f'(line {token.line}, column {token.column})'
            )
        return EquationSyntaxError(f'Unknown name {token.text!r}', token.line, token.column)

    def rational(self) -> Fraction:
        numerator = int(self.take('number').text)
        if self.current.kind == '/':
            self.take('/')
            denominator = int(self.take('number').text)
            if not denominator:
                self.fail('Zero denominator')
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def gaussian(self) -> GaussRational:
        '''Sum of signed rationals, each optionally times i, inside parentheses.'''
        value = ZERO
        sign = 1
        if self.current.kind in ('+', '-'):
            sign = -1 if self.take(self.current.kind).kind == '-' else 1
        while True:
            if self.current.kind == 'name' and self.current.text == 'i':
                self.take('name')
                part = I_UNIT
            else:
                part = GaussRational(self.rational())
                if self.current.kind == '*':
                    self.take('*')
                    token = self.take('name')
                    if token.text != 'i':
                        raise EquationSyntaxError('Only i may follow * in a literal', token.line, token.column)
                    part = part * I_UNIT
            value = value + part * sign
            if self.current.kind not in ('+', '-'):
                return value
            sign = -1 if self.take(self.current.kind).kind == '-' else 1


def variable_slots(n: int, last: str = 'u') -> dict:
    slots = {f'z{k}': k - 1 for k in range(1, n + 1)}
    slots.update({f'zb{k}': n + k - 1 for k in range(1, n + 1)})
    slots[last] = 2 * n
    return slots


def parse_terms(text: str, n: int, line: int = 1, column: int = 1, last: str = 'u') -> dict:
    parser = ExpressionParser(tokenize(text, line, column), n, variable_slots(n, last))
    return parser.expression()


def parse(text: str, n: int, trunc: int = None, line: int = 1, column: int = 1) -> Jet:
    '''Exact jet of a real defining function; asymmetric input is rejected.'''
    terms = parse_terms(text, n, line, column)
    degree = max((sum(e) for e, c in terms.items() if c), default=1)
    jet = Jet.build(n, trunc or max(2, 2 * degree), terms)
    assert_real(jet)
    return jet


def format_rational(value: Fraction) -> str:
    return str(value)


def format_coefficient(value: GaussRational) -> str:
    if value.is_real:
        text = format_rational(value.re)
        return text if value.re.denominator == 1 else f'({text})'
    imag = f'{format_rational(abs(value.im))}*i'
    if not value.re:
        return f'({"-" if value.im < 0 else ""}{imag})'
    return f'({format_rational(value.re)}{"-" if value.im < 0 else "+"}{imag})'


def _monomial_text(exps: tuple, names: list) -> list:
    factors = []
    for name, power in zip(names, exps):
        if power == 1:
            factors.append(name)
        elif power:
            factors.append(f'{name}^{power}')
    return factors


def format_terms(jet: Jet, last: str = 'u') -> str:
    n = jet.n
    names = [f'z{k}' for k in range(1, n + 1)] + [f'zb{k}' for k in range(1, n + 1)] + [last]
    if not jet:
        return '0'
    parts = []
    for exps in sorted(jet.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
        coeff = jet.terms[exps]
        negative = coeff.is_real and coeff.re < 0
        if negative:
            coeff = -coeff
        factors = _monomial_text(exps, names)
        if coeff != ONE or not factors:
            factors.insert(0, format_coefficient(coeff))
        body = '*'.join(factors)
        if not parts:
            parts.append(f'-{body}' if negative else body)
        else:
            parts.append(f'{"-" if negative else "+"} {body}')
    return ' '.join(parts)


def format_jet(jet: Jet) -> str:
    return format_terms(jet, 'u')


def format_holomorphic(jet: Jet) -> str:
    return format_terms(jet, 'w')


@dataclass
class InputDocument:
    n: int
    equation: str
    options: dict = field(default_factory=dict)
    line: int = 1
    column: int = 1

    def option(self, name: str, default=None):
        return self.options.get(name, default)

    def jet(self, trunc: int = None) -> Jet:
        trunc = trunc or self.option('trunc')
        return parse(self.equation, self.n, trunc and int(trunc), self.line, self.column)


def parse_document(text: str) -> InputDocument:
    n = None
    options = {}
    equation, eq_line, eq_column = None, 1, 1
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        if not line.strip():
            continue
        if equation is not None and '=' not in line:
            equation += ' ' + line.strip()
            continue
        match = OPTION_RE.match(line.strip())
        if not match:
            raise EquationSyntaxError('Expected name = value', number, 1)
        name, value = match.groups()
        if name == 'v':
            if equation is not None:
                raise EquationSyntaxError('Second equation line', number, 1)
            equation = value
            eq_line, eq_column = number, line.index(value) + 1
        elif name == 'n':
            if not value.strip().isdigit() or not int(value):
                raise EquationSyntaxError(f'Bad dimension {value!r}', number, line.index(value) + 1)
            n = int(value)
        else:
            options[name] = value.strip()
    if n is None:
        raise EquationSyntaxError('Missing n=<int> line', 1, 1)
    if equation is None:
        raise EquationSyntaxError('Missing v = <expr> line', 1, 1)
    return InputDocument(n, equation, options, eq_line, eq_column)


def read_document(path) -> InputDocument:
    return parse_document(Path(path).read_text(encoding='utf-8'))


def format_document(jet: Jet, options: dict = None) -> str:
    lines = [f'n={jet.n}']
    for name, value in sorted((options or {}).items()):
        lines.append(f'{name}={value}')
    lines.append(f'v = {format_jet(jet)}')
    return '\n'.join(lines) + '\n'
