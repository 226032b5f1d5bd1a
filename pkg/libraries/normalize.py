# Regular coordinates, leading terms and the normalization of a
# homogeneous model by triangular shears and axis scalings.

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from loguru import logger
from sympy import integer_nthroot

from libraries import linalg
from libraries.errors import NoTerm, RegularityNotAchieved
from libraries.polycore import I_UNIT, ONE, GaussRational, Jet, LeadingTermIndex, MonomialKey
from libraries.transforms import HoloMap, apply
from libraries.weights import Weight, weight_blocks, weighted_length

UNITS = (ONE, -ONE, I_UNIT, -I_UNIT)


@dataclass(frozen=True)
class RegularityCheck:
    regular: bool
    failing: int = None

    def __bool__(self):
        return self.regular


@dataclass(frozen=True)
class ResidualScaling:
    '''Unsolved scaling A * c^p * conj(c)^q = 1 on the axis z_k.'''

    k: int
    coefficient: GaussRational
    p: int
    q: int


@dataclass
class NormalizationReport:
    leading: list = field(default_factory=list)
    residual_scalings: list = field(default_factory=list)
    skipped_axes: list = field(default_factory=list)
    leftover_targets: list = field(default_factory=list)
    verbatim_nonzero: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (
            self.residual_scalings
            or self.skipped_axes
            or self.leftover_targets
            or self.verbatim_nonzero
        )


def is_regular(model: Jet, weight: Weight = None) -> RegularityCheck:
    for k in range(1, model.n + 1):
        if not model.restrict_first_k(k).partial_z(k):
            return RegularityCheck(False, k)
    return RegularityCheck(True)


def make_regular(model: Jet, weight: Weight, seed: int = 0, budget: int = 32) -> HoloMap:
    '''
    Random unit lower-triangular change inside each equal-weight block,
    z_j = z_j* + sum_{i<j} r_ij z_i*, retried until the model is regular.
    '''
    n, trunc = model.n, model.trunc
    if is_regular(model):
        return HoloMap.identity(n, trunc)
    rng = random.Random(seed)
    blocks = weight_blocks(weight)
    for attempt in range(budget):
        old_in_new = [[GaussRational(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for block in blocks:
            for a, j in enumerate(block):
                for i in block[:a]:
                    old_in_new[j][i] = GaussRational(rng.randint(-2, 2) or 1)
        forward = HoloMap.linear(linalg.inverse(old_in_new), trunc)
        if is_regular(apply(model, forward)):
            logger.debug(f'Regular coordinates found after {attempt + 1} attempts')
            return forward
    raise RegularityNotAchieved(f'No regular coordinates within {budget} attempts')


def leading_term(model: Jet, k: int) -> LeadingTermIndex:
    '''Lexicographically smallest (gamma, gamma_hat) on z_1..z_k involving z_k.'''
    candidates = [
        key
        for key in model.keys()
        if key.l == 0
        and not any(key.alpha[k:])
        and not any(key.alpha_hat[k:])
        and key.alpha[k - 1] + key.alpha_hat[k - 1]
    ]
    if not candidates:
        raise NoTerm(f'No term of the model involves z_{k} on the first {k} axes')
    best = min(candidates, key=lambda key: key.alpha + key.alpha_hat)
    return LeadingTermIndex(k, best.alpha, best.alpha_hat)


def shear_monomials(weight: Weight, k: int) -> list:
    '''alpha in z_{k+1}..z_n with |alpha| = mu_k, by ordinary degree.'''
    n = weight.n
    tail = [j for j in range(k, n) if weight[j]]
    if not tail or not weight[k - 1]:
        return []
    top = int(weight[k - 1] / weight[tail[-1]])
    found = []
    for exps in itertools.product(range(top + 1), repeat=len(tail)):
        alpha = [0] * n
        for j, e in zip(tail, exps):
            alpha[j] = e
        if sum(alpha) and weighted_length(alpha, weight) == weight[k - 1]:
            found.append(tuple(alpha))
    return sorted(found, key=lambda alpha: (sum(alpha), alpha))


def _shear_target(lead: LeadingTermIndex, alpha: tuple) -> MonomialKey:
    hat = list(lead.gamma_hat)
    hat[lead.k - 1] -= 1
    return MonomialKey(lead.gamma, tuple(h + a for h, a in zip(hat, alpha)), 0)


def verbatim_targets(model: Jet, lead: LeadingTermIndex, weight: Weight) -> list:
    '''
    Keys (gamma, alpha_hat) with alpha_hat agreeing with gamma_hat below k,
    alpha_hat_k = gamma_k - 1 and the same weighted length as gamma_hat.
    '''
    k = lead.k
    length = weighted_length(lead.gamma_hat, weight)
    found = []
    for key in model.keys():
        if key.l or key.alpha != lead.gamma or key == lead.key:
            continue
        hat = key.alpha_hat
        if hat[: k - 1] != lead.gamma_hat[: k - 1] or hat[k - 1] != lead.gamma[k - 1] - 1:
            continue
        if weighted_length(hat, weight) == length:
            found.append(key)
    return sorted(found)


def rational_root(value: Fraction, degree: int):
    if value <= 0:
        return None
    num, num_exact = integer_nthroot(value.numerator, degree)
    den, den_exact = integer_nthroot(value.denominator, degree)
    if num_exact and den_exact:
        return Fraction(num, den)
    return None


def solve_scaling(coefficient: GaussRational, p: int, q: int):
    '''Gaussian rational c with coefficient * c^p * conj(c)^q == 1, or None.'''
    for unit in UNITS:
        s = coefficient * unit ** (p - q)
        if not s.is_real or s.re <= 0:
            continue
        r = rational_root(1 / s.re, p + q)
        if r is not None:
            return unit * r
    return None


def _axis_map(n: int, trunc: int, k: int, poly: Jet) -> HoloMap:
    fs = [Jet.zero(n, trunc) for _ in range(n)]
    fs[k - 1] = poly
    return HoloMap(n, tuple(fs), Jet.zero(n, trunc))


def _kill_targets(model: Jet, lead: LeadingTermIndex, weight: Weight, maps: list, rounds: int) -> Jet:
    n, trunc, k = model.n, model.trunc, lead.k
    pivot = model.coeff(lead.key) * lead.gamma_hat[k - 1]
    alphas = shear_monomials(weight, k)
    for _ in range(rounds):
        changed = False
        for alpha in alphas:
            target = model.coeff(_shear_target(lead, alpha))
            if not target:
                continue
            c = (-target / pivot).conjugate()
            # z_k = z_k* + c z*^alpha, so z_k* = z_k - c z^alpha
            monomial = Jet.build(n, trunc, {alpha + (0,) * n + (0,): -c})
            shear = _axis_map(n, trunc, k, monomial)
            model = apply(model, shear)
            maps.append(shear)
            changed = True
        if not changed:
            break
    return model


def normalize_model(model: Jet, weight: Weight, passes: int = 4) -> tuple:
    '''
    Bring a regular model to normal form axis by axis.

    Condition (ii) is enforced by shears; condition (i) only when the
    scaling equation has a Gaussian rational root, otherwise the residual
    is recorded in the report.
    '''
    n, trunc = model.n, model.trunc
    maps = []
    for _ in range(passes):
        before = len(maps)
        for k in range(1, n + 1):
            lead = leading_term(model, k)
            if lead.gamma_hat[k - 1]:
                model = _kill_targets(model, lead, weight, maps, rounds=passes)
        if len(maps) == before:
            break

    report = NormalizationReport()
    for k in range(1, n + 1):
        lead = leading_term(model, k)
        report.leading.append(lead)
        if not lead.gamma_hat[k - 1]:
            report.skipped_axes.append(k)
        else:
            for alpha in shear_monomials(weight, k):
                key = _shear_target(lead, alpha)
                if model.coeff(key):
                    report.leftover_targets.append((k, key))
        report.verbatim_nonzero.extend((k, key) for key in verbatim_targets(model, lead, weight))
        coefficient = model.coeff(lead.key)
        if coefficient == ONE:
            continue
        p, q = lead.gamma[k - 1], lead.gamma_hat[k - 1]
        c = solve_scaling(coefficient, p, q)
        if c is None:
            report.residual_scalings.append(ResidualScaling(k, coefficient, p, q))
            continue
        # z_k = c z_k*
        linear = Jet.variable(n, trunc, k - 1).scale(1 / c - 1)
        scaling = _axis_map(n, trunc, k, linear)
        model = apply(model, scaling)
        maps.append(scaling)
    logger.debug(
        f'Normalized model with {len(maps)} maps; '
        f'{len(report.residual_scalings)} residual scalings'
    )
    return maps, model, report
