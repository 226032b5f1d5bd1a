from fractions import Fraction as F

import pytest

from libraries.engine import compute_multitype
from libraries.eqparser import parse
from libraries.errors import IdentityFails, NotFoundWithinBudget
from libraries.models import (
    apply_model,
    check_superhomogeneous,
    equivalence_map,
    gaussian_roots,
    model_of,
    norm_representations,
    verify_model_map,
)
from libraries.polycore import ONE, GaussRational, Jet
from libraries.transforms import Group, HoloMap, invert_to_order, random_element
from libraries.weights import Weight

DIAGONAL = Weight((F(1, 4), F(1, 6)))
QUARTER = Weight((F(1, 4), F(1, 4)))


def scaling_map(n: int, trunc: int, z_scales: list, c) -> HoloMap:
    '''z_i* = t_i z_i, w* = c w.'''
    fs = tuple(Jet.variable(n, trunc, i).scale(GaussRational.of(t) - 1) for i, t in enumerate(z_scales))
    return HoloMap(n, fs, Jet.variable(n, trunc, 2 * n).scale(GaussRational.of(c) - 1))


def test_model_of(diagonal, staircase, jet_of):
    assert model_of(compute_multitype(diagonal)) == diagonal
    assert model_of(compute_multitype(staircase)) == staircase
    tail = jet_of('z1^2*zb1^2 + z2^3*zb2^3 + z1^3*zb1^3', 2)
    assert model_of(compute_multitype(tail)) == diagonal


def test_check_superhomogeneous():
    weight = Weight((F(1, 2),))
    assert check_superhomogeneous(HoloMap.identity(1, 6), weight)
    square = HoloMap(1, (Jet.build(1, 6, {(2, 0, 0): ONE}),), Jet.zero(1, 6))
    assert check_superhomogeneous(square, weight)
    lifted = HoloMap(1, (Jet.zero(1, 6),), Jet.build(1, 6, {(1, 0, 0): ONE}))
    assert not check_superhomogeneous(lifted, weight)


def test_verify_scaling(jet_of):
    model = jet_of('z1^2*zb1^2', 1)
    assert verify_model_map(scaling_map(1, 8, [2], 16), model, model).ok
    report = verify_model_map(scaling_map(1, 8, [2], -16), model, model)
    assert not report.ok
    assert report.keys
    with pytest.raises(IdentityFails):
        report.raise_for_failure()


def test_verify_rejects_maps_with_w_in_z(jet_of):
    model = jet_of('z1^2*zb1^2', 1)
    bent = HoloMap(1, (Jet.build(1, 8, {(0, 0, 1): ONE}),), Jet.zero(1, 8))
    assert not verify_model_map(bent, model, model).ok


def test_apply_model_matches_verification(diagonal, jet_of):
    hmap = scaling_map(2, 12, [2, 1], 1)
    target = apply_model(hmap, diagonal)
    assert target == jet_of('(1/16)*z1^2*zb1^2 + z2^3*zb2^3', 2)
    assert verify_model_map(hmap, diagonal, target).ok


def test_norm_representations():
    found = norm_representations(F(5, 4), 4)
    assert GaussRational(F(1, 2), 1) in found
    assert all(t.norm2() == F(5, 4) for t in found)
    assert not norm_representations(F(3), 3)


def test_gaussian_roots():
    roots = gaussian_roots(GaussRational(16), 2, 2, 4)
    assert GaussRational(2) in roots
    assert GaussRational(0, 2) in roots
    assert gaussian_roots(GaussRational(2), 2, 2, 8) == []


def test_equivalence_identity(diagonal):
    assert equivalence_map(diagonal, diagonal, DIAGONAL).is_identity()


def test_equivalence_of_scaled_models(diagonal, jet_of):
    target = jet_of('(1/16)*z1^2*zb1^2 + z2^3*zb2^3', 2)
    hmap = equivalence_map(diagonal, target, DIAGONAL)
    assert verify_model_map(hmap, diagonal, target).ok


ROUND_TRIP_MODELS = [
    ('z1^2*zb1^2 + z2^3*zb2^3', DIAGONAL),
    ('z1^2*zb1^2 - z1^2*zb2^3 - zb1^2*z2^3 + z2^3*zb2^3', DIAGONAL),
    ('z1^2*zb1^2 + z2^2*zb2^2', QUARTER),
]


@pytest.mark.parametrize('text, weight', ROUND_TRIP_MODELS)
@pytest.mark.parametrize('seed', range(20))
def test_equivalence_round_trip(text, weight, seed):
    model = parse(text, 2)
    hmap = random_element(Group.H, weight, seed, trunc=model.trunc, height=2)
    target = apply_model(hmap, model)
    found = equivalence_map(model, target, weight)
    assert verify_model_map(found, model, target).ok


@pytest.mark.parametrize('seed', range(4))
def test_equivalence_of_linearly_mixed_blocks(seed):
    model = parse('z1^2*zb1^2 + z2^2*zb2^2', 2)
    hmap = random_element(Group.L, QUARTER, seed, trunc=model.trunc, height=2)
    target = apply_model(hmap, model)
    found = equivalence_map(model, target, QUARTER)
    assert verify_model_map(found, model, target).ok


def test_equivalence_not_found(diagonal, jet_of):
    with pytest.raises(NotFoundWithinBudget):
        equivalence_map(diagonal, jet_of('z1^2*zb1^2 - z2^3*zb2^3', 2), DIAGONAL, budget=3)


def test_equivalence_needs_models(diagonal, jet_of):
    with pytest.raises(NotFoundWithinBudget):
        equivalence_map(diagonal, jet_of('z1*zb1 + z2^3*zb2^3', 2), DIAGONAL)


def test_verification_agrees_with_the_inverse(jet_of):
    model = jet_of('z1^2*zb1^2', 1)
    hmap = scaling_map(1, 8, [2], 16)
    inverse = invert_to_order(hmap, 8)
    assert verify_model_map(inverse, model, model).ok
    wrong = scaling_map(1, 8, [2], 8)
    assert not verify_model_map(invert_to_order(wrong, 8), model, model).ok
