from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from libraries.errors import InfiniteType
from libraries.polycore import MonomialKey
from libraries.weights import (
    Weight,
    enumerate_values,
    generating_sequence,
    homogeneous_part,
    is_adapted,
    lex_compare,
    occurring_degrees,
    parse_fraction_list,
    validate_weight,
    weighted_degree,
)


def weight(*values) -> Weight:
    return Weight(tuple(F(v) for v in values))


def test_valid_weights():
    assert validate_weight([F(1, 2), F(1, 4)])[0] == weight('1/2', '1/4')
    assert validate_weight([F(1, 2), F(1, 2), F(1, 8)])[0] is not None
    assert validate_weight([F(1, 4), F(1, 6)])[0] is not None
    assert validate_weight([F(1, 2), 0])[0] is not None


@pytest.mark.parametrize(
    'values, fragment',
    [
        ((F(1, 2), F(2, 5)), 'entry 2'),
        ((F(1, 4), F(1, 2)), 'nonincreasing'),
        ((F(3, 4),), 'outside'),
        ((F(-1, 4),), 'outside'),
        ((F(2, 5),), 'entry 1'),
    ],
)
def test_invalid_weights(values, fragment):
    result, reason = validate_weight(values)
    assert result is None
    assert fragment in reason


def test_lex_compare():
    assert lex_compare(weight('1/2', '1/4'), weight('1/2', '1/6')) == 1
    assert lex_compare(weight('1/4', '1/4'), weight('1/2', '1/6')) == -1
    assert lex_compare(weight('1/3', '1/3'), weight('1/3', '1/3')) == 0
    assert weight('1/4', '1/6') < weight('1/4', '1/4')


def test_weighted_degree():
    assert weighted_degree(MonomialKey((2,), (2,), 0), weight('1/4')) == 1
    assert weighted_degree(MonomialKey((1,), (1,), 1), weight('1/4')) == F(3, 2)
    key = MonomialKey((1, 1), (1, 2), 0)
    assert weighted_degree(key, weight('1/4', '1/6')) == 1


def test_homogeneous_part(jet_of):
    jet = jet_of('z1^2*zb1^2 + z1^3*zb1^3', 1)
    assert homogeneous_part(jet, weight('1/4'), 1) == jet_of('z1^2*zb1^2', 1)
    assert not homogeneous_part(jet, weight('1/4'), 7)


def test_homogeneous_part_keeps_every_group(staircase):
    assert homogeneous_part(staircase, weight('1/4', '1/6'), 1) == staircase
    assert occurring_degrees(staircase, weight('1/4', '1/6')) == [1]


def test_is_adapted(diagonal, jet_of):
    report = is_adapted(diagonal, weight('1/4', '1/6'))
    assert report.adapted and report.model == diagonal

    report = is_adapted(diagonal, weight('1/2', '1/6'))
    assert report.adapted
    assert report.model == jet_of('z2^3*zb2^3', 2)

    report = is_adapted(jet_of('z1*zb1 + z1^2*zb1^2', 1), weight('1/4'))
    assert not report.adapted
    assert report.offending == [MonomialKey((1,), (1,), 0)]


def test_is_adapted_rejects_pluriharmonic_model(jet_of):
    report = is_adapted(jet_of('(1/2)*z1^4 + (1/2)*zb1^4 + z1^2*zb1^2', 1), weight('1/4'))
    assert not report.adapted
    assert 'pluriharmonic' in report.reason


def test_enumerate_values():
    assert enumerate_values([F(1, 2)], F(1, 7)) == [F(1, k) for k in (6, 5, 4, 3, 2)]
    assert enumerate_values([], F(1, 3)) == [F(1, 2)]
    assert enumerate_values([F(1, 4)], F(1, 4)) == []


@given(st.integers(min_value=3, max_value=9), st.integers(min_value=1, max_value=4))
def test_enumerated_values_extend_to_valid_weights(denominator, head):
    prefix = [F(1, 2 * head)]
    for value in enumerate_values(prefix, F(1, denominator)):
        assert validate_weight(prefix + [value])[0] is not None


def test_generating_sequence():
    sequence = generating_sequence(weight('1/4', '1/6'))
    assert sequence.weights == (weight('1/4', '1/4'), weight('1/4', '1/6'))
    assert sequence.nus == (1, 1)

    assert generating_sequence(weight('1/3', '1/3')).t == 1

    sequence = generating_sequence(weight('1/2', '1/2', '1/8'))
    assert sequence.t == 2
    assert sequence.weights[0] == weight('1/2', '1/2', '1/2')
    assert sequence.ks[0] == 2


def test_generating_sequence_needs_finite_entries():
    with pytest.raises(InfiniteType):
        generating_sequence(weight('1/2', 0))


def test_parse_fraction_list():
    assert parse_fraction_list('1/4, 1/6') == (F(1, 4), F(1, 6))


weights_2d = st.sampled_from(
    [weight('1/2', '1/2'), weight('1/2', '1/4'), weight('1/4', '1/6'), weight('1/3', '1/6'), weight('1/4', '1/4')]
)


@given(weights_2d, weights_2d, weights_2d)
def test_lex_compare_is_a_total_order(a, b, c):
    assert lex_compare(a, b) == -lex_compare(b, a)
    if lex_compare(a, b) <= 0 and lex_compare(b, c) <= 0:
        assert lex_compare(a, c) <= 0


exponents = st.tuples(st.integers(0, 4), st.integers(0, 4))


@given(weights_2d, exponents, exponents, exponents, exponents)
def test_weighted_degree_is_additive(w, a1, b1, a2, b2):
    first, second = MonomialKey(a1, b1, 0), MonomialKey(a2, b2, 1)
    product = MonomialKey(
        tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)), 1
    )
    assert weighted_degree(product, w) == weighted_degree(first, w) + weighted_degree(second, w)


def test_homogeneous_parts_reassemble(staircase, jet_of):
    jet = staircase + jet_of('z1^3*zb1^3 + u*z1*zb1', 2)
    w = weight('1/4', '1/6')
    parts = [homogeneous_part(jet, w, kappa) for kappa in occurring_degrees(jet, w)]
    assert sum(parts[1:], parts[0]) == jet
