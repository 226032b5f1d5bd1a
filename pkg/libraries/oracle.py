# Brute force cross-check for the multitype: walk the valid weights in
# increasing lexicographic order and return the first one for which some
# map from a small fixed family produces adapted coordinates.

from __future__ import annotations

import itertools
from fractions import Fraction

from loguru import logger

from libraries.errors import BudgetExceeded
from libraries.polycore import GaussRational, Jet, strip_pluriharmonic
from libraries.transforms import HoloMap, apply, compose
from libraries.weights import Weight, enumerate_values, is_adapted, validate_weight

SHEAR_COEFFICIENTS = (
    GaussRational(1),
    GaussRational(-1),
    GaussRational(2),
    GaussRational(-2),
    GaussRational(Fraction(1, 2)),
    GaussRational(Fraction(-1, 2)),
    GaussRational(0, 1),
    GaussRational(0, -1),
)


def candidate_weights(n: int, denominator_bound: int) -> list:
    '''Valid weights with every entry above 1/(B+1), lexicographically ascending.'''
    delta = Fraction(1, denominator_bound + 1)
    found = []

    def extend(prefix: tuple):
        if len(prefix) == n:
            weight, _ = validate_weight(prefix)
            if weight is not None:
                found.append(weight)
            return
        for value in enumerate_values(prefix, delta):
            extend(prefix + (value,))

    extend(())
    return sorted(found)


def _shear(n: int, trunc: int, i: int, j: int, power: int, coeff: GaussRational) -> HoloMap:
    exps = [0] * (2 * n + 1)
    exps[j] = power
    fs = [Jet.zero(n, trunc) for _ in range(n)]
    fs[i] = Jet.build(n, trunc, {tuple(exps): coeff})
    return HoloMap(n, tuple(fs), Jet.zero(n, trunc))


def map_family(n: int, trunc: int, budget: int) -> list:
    '''Identity, permutations, then shears z_i + c z_j^e (e <= 3), each optionally permuted.'''
    permutations = [HoloMap.permutation(list(order), trunc) for order in itertools.permutations(range(n))]
    shears = [
        _shear(n, trunc, i, j, power, coeff)
        for power in (1, 2, 3)
        for coeff in SHEAR_COEFFICIENTS
        for i in range(n)
        for j in range(n)
        if i != j
    ]
    family = list(permutations)
    for shear in shears:
        for permutation in permutations:
            family.append(shear if permutation.is_identity() else compose(shear, permutation))
            if len(family) >= budget:
                return family
    return family


def oracle_multitype(jet: Jet, denominator_bound: int = 12, map_budget: int = 2000) -> Weight:
    n = jet.n
    images = []
    for hmap in map_family(n, jet.trunc, map_budget):
        images.append(strip_pluriharmonic(apply(jet, hmap))[1])
    logger.debug(f'Oracle prepared {len(images)} coordinate systems')
    for weight in candidate_weights(n, denominator_bound):
        if any(is_adapted(image, weight).adapted for image in images):
            return weight
    raise BudgetExceeded(
        f'No adapted weight with entries above 1/{denominator_bound + 1} '
        f'in {len(images)} coordinate systems'
    )
