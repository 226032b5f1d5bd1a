from fractions import Fraction as F

import pytest

from libraries.errors import NoTerm
from libraries.normalize import (
    is_regular,
    leading_term,
    make_regular,
    normalize_model,
    rational_root,
    shear_monomials,
    solve_scaling,
    verbatim_targets,
)
from libraries.polycore import I_UNIT, ONE, GaussRational, MonomialKey
from libraries.transforms import MapClass, apply, classify
from libraries.weights import Weight

QUARTER = Weight((F(1, 4), F(1, 4)))
DIAGONAL = Weight((F(1, 4), F(1, 6)))


def test_regularity(diagonal, jet_of):
    assert is_regular(diagonal)
    check = is_regular(jet_of('z1*z2*zb1*zb2', 2))
    assert not check
    assert check.failing == 1


def test_make_regular(jet_of):
    model = jet_of('z1*z2*zb1*zb2', 2)
    forward = make_regular(model, QUARTER, seed=3)
    assert not forward.is_identity()
    assert is_regular(apply(model, forward))
    assert forward == make_regular(model, QUARTER, seed=3)


def test_make_regular_keeps_regular_models(diagonal):
    assert make_regular(diagonal, DIAGONAL).is_identity()


def test_leading_terms(diagonal, staircase, jet_of):
    lead = leading_term(jet_of('z1^2*zb1^2', 1), 1)
    assert (lead.gamma, lead.gamma_hat) == ((2,), (2,))
    lead = leading_term(diagonal, 2)
    assert (lead.gamma, lead.gamma_hat) == ((0, 3), (0, 3))
    # (0, 3, 0, 3) sorts before (0, 3, 2, 0) and (2, 0, 0, 3)
    assert leading_term(staircase, 2).key == MonomialKey((0, 3), (0, 3), 0)
    with pytest.raises(NoTerm):
        leading_term(jet_of('z1*z2*zb1*zb2', 2), 1)


def test_shear_monomials():
    assert shear_monomials(Weight((F(1, 2), F(1, 4))), 1) == [(0, 2)]
    assert shear_monomials(DIAGONAL, 1) == []
    assert shear_monomials(DIAGONAL, 2) == []


def test_solve_scaling():
    c = solve_scaling(GaussRational(16), 2, 2)
    assert c == F(1, 2)
    assert solve_scaling(GaussRational(-1), 3, 1) == I_UNIT
    assert solve_scaling(GaussRational(4), 2, 2) is None


def test_irrational_scaling_is_reported(jet_of):
    maps, model, report = normalize_model(jet_of('4*z1^2*zb1^2', 1), Weight((F(1, 4),)))
    assert not maps
    assert model == jet_of('4*z1^2*zb1^2', 1)
    [residual] = report.residual_scalings
    assert (residual.k, residual.coefficient, residual.p, residual.q) == (1, 4, 2, 2)
    assert not report.clean


def test_rational_scaling_is_applied(jet_of):
    maps, model, report = normalize_model(jet_of('16*z1^2*zb1^2', 1), Weight((F(1, 4),)))
    assert len(maps) == 1
    assert model == jet_of('z1^2*zb1^2', 1)
    assert report.clean


def test_shear_clears_targets(jet_of):
    model = jet_of('z1^2*zb1^2 + z1^2*zb1*zb2 + zb1^2*z1*z2 + z2^2*zb2^2', 2)
    maps, normal, report = normalize_model(model, QUARTER)
    target = MonomialKey((2, 0), (1, 1), 0)
    assert model.coeff(target) == ONE
    assert not normal.coeff(target)
    assert normal.coeff(MonomialKey((2, 0), (2, 0), 0)) == ONE
    assert not report.leftover_targets
    assert (report.leading[0].gamma, report.leading[0].gamma_hat) == ((2, 0), (2, 0))
    assert maps
    assert all(classify(hmap, QUARTER) is MapClass.HOMOGENEOUS for hmap in maps)


def test_normal_model_is_fixed(diagonal):
    maps, model, report = normalize_model(diagonal, DIAGONAL)
    assert maps == []
    assert model == diagonal
    assert report.clean


def test_rational_root():
    assert rational_root(F(16, 81), 4) == F(2, 3)
    assert rational_root(F(2), 2) is None
    assert rational_root(F(0), 3) is None
    assert rational_root(F(-8), 3) is None


@pytest.mark.parametrize(
    'text, n, weight',
    [
        ('z1^2*zb1^2 + z2^3*zb2^3', 2, DIAGONAL),
        ('z1^2*zb1^2 - z1^2*zb2^3 - zb1^2*z2^3 + z2^3*zb2^3', 2, DIAGONAL),
        ('z1^2*zb1^2 + z1^2*zb1*zb2 + zb1^2*z1*z2 + z2^2*zb2^2', 2, QUARTER),
        ('16*z1^2*zb1^2 + 3*z2^2*zb2^2', 2, QUARTER),
        ('4*z1^2*zb1^2', 1, Weight((F(1, 4),))),
    ],
)
def test_normalization_is_idempotent(jet_of, text, n, weight):
    _, normal, report = normalize_model(jet_of(text, n), weight)
    maps, again, second = normalize_model(normal, weight)
    assert maps == []
    assert again == normal
    assert second.residual_scalings == report.residual_scalings
    assert second.leftover_targets == report.leftover_targets == []


EIGHTH = Weight((F(1, 4), F(1, 8)))


def test_leading_term_with_unequal_exponents(jet_of):
    # z1 zb1^3 + z1^3 zb1 + |z2|^8 leads with z1 zb1^3 on the first axis
    model = jet_of('z1*zb1^3 + z1^3*zb1 + z2^4*zb2^4', 2)
    maps, normal, report = normalize_model(model, EIGHTH)
    first = report.leading[0]
    assert (first.gamma, first.gamma_hat) == ((1, 0), (3, 0))
    assert first.gamma[0] != first.gamma_hat[0]
    assert maps == []
    assert normal == model
    assert report.verbatim_nonzero == []
    assert report.clean


def test_verbatim_keys_vanish_after_normalization(jet_of):
    model = jet_of('z1*zb1^3 + z1^3*zb1 + z2^4*zb2^4', 2)
    _, normal, report = normalize_model(model, EIGHTH)
    for lead in report.leading:
        assert not any(normal.coeff(key) for key in verbatim_targets(normal, lead, EIGHTH))


def test_surviving_verbatim_key_is_reported(jet_of):
    # z1 zb2^6 has alpha = gamma^1, alpha_hat_1 = gamma^1_1 - 1 = 0 and the
    # weighted length of gamma_hat^1; no shear in z2^2 reaches it linearly
    model = jet_of('z1*zb1^3 + z1^3*zb1 + z2^4*zb2^4 + z1*zb2^6 + zb1*z2^6', 2)
    _, normal, report = normalize_model(model, EIGHTH)
    assert report.verbatim_nonzero == [(1, MonomialKey((1, 0), (0, 6), 0))]
    assert normal.coeff(MonomialKey((1, 0), (0, 6), 0)) == ONE
    assert not report.clean
