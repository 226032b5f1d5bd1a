# Polynomial holomorphic coordinate changes z* = z + f(z, w), w* = w + g(z, w):
# weighted classification, re-graphing of defining functions, composition,
# truncated inversion and seeded generators for the homogeneous groups.

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from loguru import logger

from libraries import linalg
from libraries.errors import DimensionMismatch, SingularMap
from libraries.polycore import (
    I_UNIT,
    ONE,
    ZERO,
    GaussRational,
    Jet,
    identity_images,
)
from libraries.weights import Weight, weight_blocks, weighted_length


class MapClass(Enum):
    HOMOGENEOUS = 'homogeneous'
    SUBHOMOGENEOUS = 'subhomogeneous'
    SUPERHOMOGENEOUS = 'superhomogeneous'
    NONE = 'none'


class Group(Enum):
    H = 'H'  # weighted homogeneous maps
    HZ = 'HZ'  # homogeneous maps preserving w
    L = 'L'  # linear maps preserving w


class Direction(Enum):
    FORWARD = 'forward'
    INVERSE = 'inverse'


def _unit(n: int, slot: int) -> tuple:
    exps = [0] * (2 * n + 1)
    exps[slot] = 1
    return tuple(exps)


def holomorphic_slots(n: int) -> list:
    '''Slots of z_1..z_n and w in the holomorphic representation.'''
    return list(range(n)) + [2 * n]


@dataclass(frozen=True)
class HoloMap:
    '''
    Holomorphic polynomial map (z, w) -> (z + f(z, w), w + g(z, w)).

    Components are jets whose zb slots are zero and whose last slot counts
    powers of w.
    '''

    n: int
    fs: tuple
    g: Jet

    def __post_init__(self):
        if len(self.fs) != self.n:
            raise DimensionMismatch(f'Expected {self.n} z components, got {len(self.fs)}')
        for part in list(self.fs) + [self.g]:
            if part.n != self.n:
                raise DimensionMismatch('Map component has the wrong dimension')
            if any(any(e[self.n : 2 * self.n]) for e in part.terms):
                raise ValueError('Map components must be holomorphic')

    @property
    def trunc(self) -> int:
        return min([f.trunc for f in self.fs] + [self.g.trunc])

    @classmethod
    def identity(cls, n: int, trunc: int) -> HoloMap:
        return cls(n, tuple(Jet.zero(n, trunc) for _ in range(n)), Jet.zero(n, trunc))

    @classmethod
    def from_components(cls, components: list) -> HoloMap:
        '''Build from the full images z_1*, ..., z_n*, w*.'''
        n = components[0].n
        trunc = min(c.trunc for c in components)
        fs = tuple(
            components[i] - Jet.variable(n, trunc, i) for i in range(n)
        )
        g = components[n] - Jet.variable(n, trunc, 2 * n)
        return cls(n, fs, g)

    @classmethod
    def linear(cls, matrix: list, trunc: int) -> HoloMap:
        '''z* = matrix * z, w* = w.'''
        n = len(matrix)
        components = []
        for i in range(n):
            comp = Jet.zero(n, trunc)
            for j in range(n):
                comp = comp + Jet.variable(n, trunc, j).scale(matrix[i][j])
            components.append(comp)
        components.append(Jet.variable(n, trunc, 2 * n))
        return cls.from_components(components)

    @classmethod
    def permutation(cls, order: list, trunc: int) -> HoloMap:
        '''New variable z*_i is the old z_{order[i]} (0-based).'''
        n = len(order)
        matrix = [[ONE if j == order[i] else ZERO for j in range(n)] for i in range(n)]
        return cls.linear(matrix, trunc)

    def components(self) -> list:
        n, trunc = self.n, self.trunc
        comps = [Jet.variable(n, trunc, i) + self.fs[i] for i in range(n)]
        comps.append(Jet.variable(n, trunc, 2 * n) + self.g)
        return comps

    def linear_matrix(self) -> list:
        slots = holomorphic_slots(self.n)
        return [
            [comp.terms.get(_unit(self.n, s), ZERO) for s in slots]
            for comp in self.components()
        ]

    def is_nonsingular(self) -> bool:
        return linalg.rank(self.linear_matrix(), self.n + 1) == self.n + 1

    def is_identity(self) -> bool:
        return not any(self.fs) and not self.g

    def is_w_free(self) -> bool:
        return not any(e[-1] for part in list(self.fs) + [self.g] for e in part.terms)

    def scaling(self) -> GaussRational:
        '''Coefficient of w in w*.'''
        return ONE + self.g.terms.get(_unit(self.n, 2 * self.n), ZERO)

    def with_trunc(self, trunc: int) -> HoloMap:
        return HoloMap(
            self.n, tuple(f.with_trunc(trunc) for f in self.fs), self.g.with_trunc(trunc)
        )


def _term_weight(exps: tuple, weight: Weight) -> Fraction:
    n = weight.n
    return weighted_length(exps[:n], weight) + exps[2 * n]


def classify(hmap: HoloMap, weight: Weight) -> MapClass:
    '''w carries weight one; f_i is measured against lambda_i and g against one.'''
    sub = sup = True
    targets = list(weight) + [Fraction(1)]
    for part, target in zip(list(hmap.fs) + [hmap.g], targets):
        for exps in part.terms:
            degree = _term_weight(exps, weight)
            if degree > target:
                sub = False
            if degree < target:
                sup = False
    if sub and sup:
        return MapClass.HOMOGENEOUS
    if sup:
        return MapClass.SUPERHOMOGENEOUS
    if sub:
        return MapClass.SUBHOMOGENEOUS
    return MapClass.NONE


def invert_series(components: list, slots: list, trunc: int) -> list:
    '''
    Formal inverse of the map sending variable slots[j] to components[j].

    Solves x = L^-1 (y - N(x)) one ordinary degree per round: after the
    round at degree d the iterate is exact up to d, so every round only
    carries jets truncated at its own degree.
    '''
    n = components[0].n
    units = [_unit(n, s) for s in slots]
    lin = [[comp.terms.get(u, ZERO) for u in units] for comp in components]
    lin_inv = linalg.inverse(lin)
    nonlinear = []
    for comp in components:
        if comp.terms.get((0,) * (2 * n + 1)):
            raise SingularMap('Map does not fix the origin')
        nonlinear.append(comp.with_trunc(trunc).filter(lambda key: key.degree > 1))
    ys = [Jet.variable(n, trunc, s) for s in slots]

    def combine(row: list, vectors: list, degree: int) -> Jet:
        out = Jet.zero(n, degree)
        for coeff, vec in zip(row, vectors):
            if coeff:
                out = out + vec.scale(coeff)
        return out

    xs = [combine(row, ys, trunc) for row in lin_inv]
    if not any(nonlinear):
        return xs
    for degree in range(2, trunc + 1):
        images = identity_images(n, degree)
        for s, x in zip(slots, xs):
            images[s] = x.with_trunc(degree)
        residual = [
            y.with_trunc(degree) - nl.with_trunc(degree).substitute(images)
            for y, nl in zip(ys, nonlinear)
        ]
        xs = [combine(row, residual, degree) for row in lin_inv]
    logger.debug(f'Series inverse of {len(slots)} components to degree {trunc}')
    return [x.with_trunc(trunc) for x in xs]


def invert_to_order(hmap: HoloMap, order: int = None) -> HoloMap:
    order = hmap.trunc if order is None else order
    comps = [c.with_trunc(order) for c in hmap.components()]
    return HoloMap.from_components(invert_series(comps, holomorphic_slots(hmap.n), order))


def compose(first: HoloMap, second: HoloMap) -> HoloMap:
    '''The map applying `first`, then `second`.'''
    if first.n != second.n:
        raise DimensionMismatch('Cannot compose maps of different dimensions')
    n = first.n
    trunc = min(first.trunc, second.trunc)
    images = identity_images(n, trunc)
    for s, comp in zip(holomorphic_slots(n), first.with_trunc(trunc).components()):
        images[s] = comp
    return HoloMap.from_components(
        [comp.substitute(images) for comp in second.with_trunc(trunc).components()]
    )


def compose_all(maps: list, n: int, trunc: int) -> HoloMap:
    total = HoloMap.identity(n, trunc)
    for hmap in maps:
        total = hmap.with_trunc(trunc) if total.is_identity() else compose(total, hmap)
    return total


def _holomorphic_images(n: int, trunc: int, w_image: Jet) -> list:
    '''Images feeding a holomorphic polynomial: z -> z, w -> w_image.'''
    images = identity_images(n, trunc)
    for s in range(n, 2 * n):
        images[s] = Jet.zero(n, trunc)
    images[2 * n] = w_image
    return images


def _slot_coefficient(jet: Jet, slot: int) -> GaussRational:
    return jet.terms.get(_unit(jet.n, slot), ZERO)


@dataclass(frozen=True)
class _Regraph:
    '''
    The inverse map (z, w) = (A(z*, w*), B(z*, w*)) read on the image
    graph w* = u* + i v*, where v* solves

        Re(b) v* = F(A, conj A, Re B) - Im(B - b w*) - Im(b) u*

    with b the coefficient of w* in B. The part of the right side that is
    linear in v* is moved to the left (`denominator`), so what remains
    depends on v* only through products and gains a degree per round.
    '''

    jet: Jet
    zs: tuple
    w: Jet
    b: GaussRational
    v_linear: GaussRational

    @classmethod
    def of(cls, jet: Jet, inverse: HoloMap) -> _Regraph:
        n = jet.n
        comps = inverse.components()
        b = _slot_coefficient(comps[n], 2 * n)
        v_linear = -_slot_coefficient(jet, 2 * n) * b.im
        for i in range(n):
            a = _slot_coefficient(comps[i], 2 * n)
            v_linear = v_linear + _slot_coefficient(jet, i) * I_UNIT * a
            v_linear = v_linear - _slot_coefficient(jet, n + i) * I_UNIT * a.conjugate()
        return cls(jet, tuple(comps[:n]), comps[n], b, v_linear)

    @property
    def denominator(self) -> GaussRational:
        return GaussRational(self.b.re) - self.v_linear

    def is_static(self) -> bool:
        '''True when the right side does not see v* at all.'''
        rest = self.w - Jet.variable(self.jet.n, self.w.trunc, 2 * self.jet.n).scale(self.b)
        if any(z.depends_on_u() for z in self.zs) or rest.depends_on_u():
            return False
        return not self.jet.depends_on_u() or not self.b.im

    def solve_round(self, v: Jet, degree: int) -> Jet:
        '''Next iterate of v*, exact up to `degree` when v is exact below it.'''
        n = self.jet.n
        u = Jet.variable(n, degree, 2 * n)
        images = _holomorphic_images(n, degree, u + v.with_trunc(degree).scale(I_UNIT))
        zs = [z.with_trunc(degree).substitute(images) for z in self.zs]
        w = self.w.with_trunc(degree).substitute(images)
        real_images = zs + [z.conjugate() for z in zs] + [w.real_part()]
        rest = w - (u + v.with_trunc(degree).scale(I_UNIT)).scale(self.b)
        right = (
            self.jet.with_trunc(degree).substitute(real_images)
            - rest.imag_part()
            - u.scale(self.b.im)
            - v.with_trunc(degree).scale(self.v_linear)
        )
        return right.scale(self.denominator.inverse())


def apply(jet: Jet, hmap: HoloMap, direction: Direction = Direction.FORWARD) -> Jet:
    '''
    Defining function F* of the image of the graph v = F under the map.

    F* is the unique jet with v* = F*(z*, zb*, u*) on the image. It is
    found as the fixed point of the graph equation written in the target
    coordinates, one ordinary degree per round. Exact up to the jet's
    truncation bound.
    '''
    if jet.n != hmap.n:
        raise DimensionMismatch('Jet and map have different dimensions')
    trunc = jet.trunc
    hmap = hmap.with_trunc(trunc)
    if hmap.is_identity():
        return jet
    if not hmap.is_nonsingular():
        raise SingularMap('Map has a singular linear part at the origin')
    # the graph equation needs the map back to the source coordinates
    inverse = hmap if direction is Direction.INVERSE else invert_to_order(hmap, trunc)

    regraph = _Regraph.of(jet, inverse)
    if not regraph.denominator:
        raise SingularMap('Image is not a graph over the u* axis')
    v = Jet.zero(jet.n, trunc)
    degrees = [trunc] if regraph.is_static() else range(1, trunc + 1)
    for degree in degrees:
        v = regraph.solve_round(v, degree)
    return v.with_trunc(trunc)


def _random_fraction(rng: random.Random, height: int, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if value or not nonzero:
            return value


def _random_gauss(rng: random.Random, height: int, nonzero: bool = False) -> GaussRational:
    while True:
        value = GaussRational(_random_fraction(rng, height), _random_fraction(rng, height))
        if value or not nonzero:
            return value


def monomials_of_length(weight: Weight, target: Fraction, max_degree: int) -> list:
    '''Multiindices alpha with |alpha|_weight == target and |alpha| <= max_degree.'''
    found = []
    for alpha in itertools.product(range(max_degree + 1), repeat=weight.n):
        if 0 < sum(alpha) <= max_degree and weighted_length(alpha, weight) == target:
            found.append(alpha)
    return found


def _monomial(n: int, trunc: int, alpha: tuple, w_power: int = 0) -> Jet:
    return Jet.build(n, trunc, {tuple(alpha) + (0,) * n + (w_power,): ONE})


def _random_block_matrix(weight: Weight, rng: random.Random, height: int) -> list:
    n = weight.n
    matrix = [[ZERO] * n for _ in range(n)]
    for block in weight_blocks(weight):
        while True:
            sub = [[_random_gauss(rng, height) for _ in block] for _ in block]
            if linalg.rank(sub, len(block)) == len(block):
                break
        for a, i in enumerate(block):
            for b, j in enumerate(block):
                matrix[i][j] = sub[a][b]
    return matrix


def random_element(
    group: Group, weight: Weight, seed: int, trunc: int = 12, height: int = 5
) -> HoloMap:
    '''Seeded member of H, HZ or L for a weight with positive entries.'''
    rng = random.Random(seed)
    n = weight.n
    matrix = _random_block_matrix(weight, rng, height)
    base = HoloMap.linear(matrix, trunc)
    if group is Group.L:
        return base
    fs = list(base.fs)
    max_degree = max(1, int(1 / weight[-1]))
    for i in range(n):
        for alpha in monomials_of_length(weight, weight[i], max_degree):
            if sum(alpha) > 1 and rng.random() < 0.7:
                fs[i] = fs[i] + _monomial(n, trunc, alpha).scale(_random_gauss(rng, height))
    g = Jet.zero(n, trunc)
    if group is Group.H:
        c = _random_fraction(rng, height, nonzero=True)
        g = _monomial(n, trunc, (0,) * n, 1).scale(c - 1)
        for alpha in monomials_of_length(weight, Fraction(1), max_degree):
            if rng.random() < 0.3:
                g = g + _monomial(n, trunc, alpha).scale(_random_gauss(rng, height))
    return HoloMap(n, tuple(fs), g)


def random_superhomogeneous(
    weight: Weight,
    degree_budget: int,
    seed: int,
    trunc: int = 12,
    height: int = 5,
    include_w: bool = False,
) -> HoloMap:
    '''
    Seeded map whose components only carry terms of weighted degree at
    least their target (lambda_i for f_i, one for g).
    '''
    rng = random.Random(seed)
    n = weight.n
    matrix = _random_block_matrix(weight, rng, height)
    for i in range(n):
        for j in range(n):
            if weight[j] > weight[i] and rng.random() < 0.5:
                matrix[i][j] = _random_gauss(rng, height)
    base = HoloMap.linear(matrix, trunc)
    fs = list(base.fs)
    nonlinear = [
        alpha
        for alpha in itertools.product(range(degree_budget + 1), repeat=n)
        if 1 < sum(alpha) <= degree_budget
    ]
    for i in range(n):
        for alpha in rng.sample(nonlinear, min(3, len(nonlinear))):
            if weighted_length(alpha, weight) >= weight[i]:
                fs[i] = fs[i] + _monomial(n, trunc, alpha).scale(_random_gauss(rng, height))
        if include_w and rng.random() < 0.5:
            fs[i] = fs[i] + _monomial(n, trunc, (0,) * n, 1).scale(_random_gauss(rng, height))
    g = Jet.zero(n, trunc)
    for alpha in rng.sample(nonlinear, min(2, len(nonlinear))):
        if weighted_length(alpha, weight) >= 1:
            g = g + _monomial(n, trunc, alpha).scale(_random_gauss(rng, height))
    if include_w:
        c = _random_fraction(rng, height, nonzero=True)
        g = g + _monomial(n, trunc, (0,) * n, 1).scale(c - 1)
        j = rng.randrange(n)
        unit = tuple(1 if k == j else 0 for k in range(n))
        g = g + _monomial(n, trunc, unit, 1).scale(_random_gauss(rng, height))
    return HoloMap(n, tuple(fs), g)
