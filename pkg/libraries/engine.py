# Stage-by-stage multitype computation: Bloom-Graham start, elimination of
# trailing variables from the leading polynomial, and weight updates from
# the terms that still see the eliminated variables.

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor

from loguru import logger

from libraries import linalg
from libraries.errors import (
    EmptyTheta,
    InfiniteType,
    SearchInconclusive,
    TruncationInsufficient,
)
from libraries.polycore import I_UNIT, ZERO, GaussRational, Jet, assert_real, strip_pluriharmonic
from libraries.transforms import HoloMap, apply, compose_all
from libraries.weights import (
    GeneratingSequence,
    Weight,
    generating_sequence,
    homogeneous_part,
    is_adapted,
    validate_weight,
    weighted_pair_length,
)


class Strategy(Enum):
    LINEAR = 'linear'  # exact kernel only
    LADDER = 'ladder'  # kernel, then triangular shears


@dataclass(frozen=True)
class ThetaEntry:
    key: tuple
    coefficient: GaussRational
    value: Fraction


@dataclass
class StageTrace:
    index: int
    weight: Weight
    eliminated_before: int
    eliminated: int
    maps: list = field(default_factory=list)
    theta: list = field(default_factory=list)
    w_max: Fraction = None
    fixed: tuple = ()
    complete: bool = True


@dataclass
class MultitypeResult:
    multitype: tuple
    weight: Weight
    generating: GeneratingSequence
    total_map: HoloMap
    maps: list
    model: Jet
    jet: Jet
    traces: list
    truncated: bool = False
    complete: bool = True


@dataclass
class EngineOptions:
    trunc: int = None
    strategy: Strategy = Strategy.LADDER
    max_stages: int = None


@dataclass
class BloomGraham:
    m: int
    weight: Weight
    hmap: HoloMap
    jet: Jet


@dataclass
class Elimination:
    maps: list
    eliminated: int
    complete: bool
    model: Jet


def working_trunc(jet: Jet, requested: int = None) -> int:
    '''Requested bound, never above what a truncated jet still knows.'''
    if not requested:
        return jet.trunc
    return min(requested, jet.trunc) if jet.truncated else requested


def leading_polynomial(jet: Jet, weight: Weight) -> Jet:
    return homogeneous_part(jet, weight, 1).filter(lambda key: key.l == 0)


def _stripped(jet: Jet, maps: list) -> Jet:
    g, stripped = strip_pluriharmonic(jet)
    if g:
        maps.append(HoloMap(jet.n, tuple(Jet.zero(jet.n, jet.trunc) for _ in range(jet.n)), g))
    return stripped


def bloom_graham_stage(jet: Jet) -> BloomGraham:
    '''Strip pluriharmonic terms, then read off the lowest degree of a z-only key.'''
    maps = []
    stripped = _stripped(jet, maps)
    degrees = [key.degree for key in stripped.keys() if key.l == 0]
    if not degrees:
        raise InfiniteType(
            f'No non-pluriharmonic term in z alone up to degree {jet.trunc}'
        )
    m = min(degrees)
    hmap = maps[0] if maps else HoloMap.identity(jet.n, jet.trunc)
    logger.debug(f'Bloom-Graham type {m}')
    return BloomGraham(m, Weight.constant(Fraction(1, m), jet.n), hmap, stripped)


def _unit_vector(size: int, index: int) -> list:
    return [GaussRational(1 if i == index else 0) for i in range(size)]


def _linear_elimination(model: Jet, block: list) -> tuple:
    '''
    Change of the block variables after which the model is independent of
    as many trailing block variables as the holomorphic kernel allows.
    '''
    n, size = model.n, len(block)
    derivatives = [model.partial_z(i + 1) for i in block]
    keys = sorted(set().union(*(d.terms for d in derivatives)))
    rows = [[d.terms.get(key, ZERO) for d in derivatives] for key in keys]
    basis = linalg.kernel(rows, size)
    if not basis:
        return None, 0
    columns = []
    for index in range(size):
        candidate = columns + [_unit_vector(size, index)] + basis
        if linalg.rank(candidate, size) == len(candidate):
            columns.append(_unit_vector(size, index))
        if len(columns) + len(basis) == size:
            break
    columns += basis
    old_in_new = [_unit_vector(n, i) for i in range(n)]
    for a, i in enumerate(block):
        for b, j in enumerate(block):
            old_in_new[i][j] = columns[b][a]
    if old_in_new == [_unit_vector(n, i) for i in range(n)]:
        return None, len(basis)
    return HoloMap.linear(linalg.inverse(old_in_new), model.trunc), len(basis)


def _z_degree(key, slot: int) -> int:
    return key.alpha[slot] + key.alpha_hat[slot]


def _shear_unknowns(weight: Weight, heavy: list, present: list, r: int, delta: int) -> list:
    mu = weight[r]
    others = [j for j in present if j != r]
    unknowns = []
    for i in heavy:
        ratio = weight[i] / mu
        if ratio.denominator != 1 or ratio < delta:
            continue
        rest = int(ratio) - delta
        for exps in _compositions(rest, len(others)):
            alpha = [0] * weight.n
            alpha[r] = delta
            for j, e in zip(others, exps):
                alpha[j] = e
            unknowns.append((i, tuple(alpha)))
    return unknowns


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _shear_peel(model: Jet, weight: Weight, heavy: list, present: list, r: int) -> tuple:
    '''
    Remove z_r from the model by shears z_i = z_i* + t_i(z*) of heavier
    variables, clearing the lowest (z_r, zb_r)-degree part each round.

    Returns (maps, model, unique) or (None, None, unique) when some round
    has no solution.
    '''
    n, trunc = model.n, model.trunc
    maps = []
    unique = True
    while r in model.variables_present():
        delta = min(_z_degree(key, r) for key in model.keys() if _z_degree(key, r))
        base = model.filter(lambda key: not _z_degree(key, r))
        target = model.filter(lambda key: _z_degree(key, r) == delta)
        unknowns = _shear_unknowns(weight, heavy, present, r, delta)
        if not unknowns:
            return None, None, unique
        columns = []
        for i, alpha in unknowns:
            monomial = Jet.build(n, trunc, {alpha + (0,) * n + (0,): 1})
            h = monomial * base.partial_z(i + 1)
            columns.append(h + h.conjugate())
            columns.append((h - h.conjugate()).scale(I_UNIT))
        keys = sorted(set(target.terms).union(*(c.terms for c in columns)))
        rows, rhs = [], []
        for key in keys:
            values = [c.terms.get(key, ZERO) for c in columns]
            rows.append([GaussRational(v.re) for v in values])
            rows.append([GaussRational(v.im) for v in values])
            wanted = -target.terms.get(key, ZERO)
            rhs.extend([GaussRational(wanted.re), GaussRational(wanted.im)])
        solution, kernel_dim = linalg.solve(rows, rhs, len(columns))
        if solution is None:
            return None, None, unique
        unique = unique and kernel_dim == 0
        fs = [Jet.zero(n, trunc) for _ in range(n)]
        for index, (i, alpha) in enumerate(unknowns):
            c = GaussRational(solution[2 * index].re, solution[2 * index + 1].re)
            fs[i] = fs[i] - Jet.build(n, trunc, {alpha + (0,) * n + (0,): c})
        shear = HoloMap(n, tuple(fs), Jet.zero(n, trunc))
        model = apply(model, shear)
        maps.append(shear)
        if len(maps) > trunc:
            return None, None, unique
    return maps, model, unique


def _move_to_end(n: int, trunc: int, present: list, r: int, tail: list) -> HoloMap:
    order = [i for i in range(n) if i not in present and i not in tail]
    order += [i for i in present if i != r] + [r] + tail
    return HoloMap.permutation(order, trunc)


def elimination_search(
    model: Jet, weight: Weight, fixed: int = 0, stage: int = 1, strategy: Strategy = Strategy.LADDER
) -> Elimination:
    '''
    Holomorphic change making the leading polynomial independent of the
    largest found number of trailing variables, which end up last.
    '''
    n = model.n
    block = list(range(fixed, n))
    maps = []
    hmap, eliminated = _linear_elimination(model, block)
    if hmap is not None:
        model = apply(model, hmap)
        maps.append(hmap)
    complete = True
    if strategy is Strategy.LINEAR or stage == 1 or not fixed:
        return Elimination(maps, eliminated, complete, model)

    heavy = list(range(fixed))
    progress = True
    while progress:
        progress = False
        present = block[: len(block) - eliminated]
        for r in reversed(present):
            shears, shorn, unique = _shear_peel(model, weight, heavy, present, r)
            if shears is None:
                complete = complete and unique
                continue
            tail = block[len(block) - eliminated :]
            permutation = _move_to_end(n, model.trunc, present, r, tail)
            model = apply(shorn, permutation)
            maps.extend(shears)
            maps.append(permutation)
            eliminated += 1
            complete = complete and unique
            progress = True
            logger.debug(f'Sheared z_{r + 1} out of the leading polynomial')
            break
    return Elimination(maps, eliminated, complete, model)


def next_weight(jet: Jet, weight: Weight, eliminated: int) -> tuple:
    '''
    New common value for the last `eliminated` entries: the largest
    (1 - fixed weighted length) / trailing degree over the keys that still
    involve trailing variables and sit below one on the fixed ones.
    '''
    n = jet.n
    split = n - eliminated
    theta = []
    for key, coeff in sorted(jet.items()):
        if key.l or key.is_pluriharmonic:
            continue
        trailing = sum(key.alpha[split:]) + sum(key.alpha_hat[split:])
        if not trailing:
            continue
        fixed_part = weighted_pair_length(key.alpha[:split], key.alpha_hat[:split], weight)
        if fixed_part >= 1:
            continue
        theta.append(ThetaEntry(key, coeff, (1 - fixed_part) / trailing))
    if not theta:
        raise EmptyTheta(
            f'Trailing {eliminated} variables never enter a term below weight one: '
            f'infinite multitype entries',
            fixed=tuple(weight[:split]),
        )
    top = max(entry.value for entry in theta)
    return theta, Weight(tuple(weight[:split]) + (top,) * eliminated)


def _required_trunc(weight: Weight, eliminated: int, w_max: Fraction, trunc: int):
    '''Smallest bound at which dropped keys cannot raise w_max, or None if trunc suffices.'''
    split = weight.n - eliminated
    lightest_fixed = weight[split - 1] if split else None
    required, a = None, 0
    while True:
        remainder = 1 - a * lightest_fixed if a else Fraction(1)
        if remainder <= 0:
            break
        if remainder / max(trunc + 1 - a, 1) >= w_max:
            needed = floor(remainder / w_max) + a
            required = needed if required is None else max(required, needed)
        if lightest_fixed is None:
            break
        a += 1
    return required


def _raise_if_truncated(jet: Jet, trunc: int, error: InfiniteType):
    # Dropped keys may hold the missing terms, so infinity is not proven
    if jet.truncated:
        raise TruncationInsufficient(
            f'{error} Keys above degree {trunc} were dropped.', trunc + 1
        ) from error


def _assemble(n: int, trunc: int, maps: list) -> HoloMap:
    return compose_all(maps, n, trunc) if maps else HoloMap.identity(n, trunc)


def compute_multitype(jet: Jet, options: EngineOptions = None) -> MultitypeResult:
    options = options or EngineOptions()
    assert_real(jet)
    n = jet.n
    if jet.terms.get((0,) * (2 * n + 1)):
        raise ValueError('Defining function must vanish at the origin')
    trunc = working_trunc(jet, options.trunc)
    current = jet.with_trunc(trunc)
    try:
        start = bloom_graham_stage(current)
    except InfiniteType as error:
        _raise_if_truncated(current, trunc, error)
        raise
    maps = [] if start.hmap.is_identity() else [start.hmap]
    current, weight = start.jet, start.weight
    logger.info(f'Stage 1 weight {weight}')

    fixed, previous = 0, n
    traces = []
    complete = True
    max_stages = options.max_stages or n + trunc
    for stage in range(1, max_stages + 1):
        model = leading_polynomial(current, weight)
        elimination = elimination_search(model, weight, fixed, stage, options.strategy)
        current = _apply_chain(current, elimination.maps, maps)
        complete = complete and elimination.complete
        eliminated = elimination.eliminated
        trace = StageTrace(
            stage, weight, previous, eliminated, elimination.maps, complete=elimination.complete
        )
        if eliminated < previous:
            trace.fixed = tuple(weight[n - previous : n - eliminated])
            fixed = n - eliminated
        traces.append(trace)
        if not eliminated:
            break
        try:
            theta, candidate = next_weight(current, weight, eliminated)
        except EmptyTheta as error:
            _raise_if_truncated(current, trunc, error)
            raise
        trace.theta, trace.w_max = theta, candidate[-1]
        if current.truncated:
            required = _required_trunc(candidate, eliminated, candidate[-1], trunc)
            if required is not None:
                raise TruncationInsufficient(
                    f'Terms beyond degree {trunc} may change the weight {candidate}.', required
                )
        if candidate[-1] >= weight[-1]:
            raise SearchInconclusive(
                f'Weight failed to decrease at stage {stage}', best_weight=weight
            )
        weight = candidate
        previous = eliminated
        logger.info(f'Stage {stage + 1} weight {weight}')
    else:
        raise SearchInconclusive(f'No multitype after {max_stages} stages', best_weight=weight)

    final, reason = validate_weight(weight)
    if final is None:
        raise SearchInconclusive(f'Computed weight {weight} is not valid: {reason}', best_weight=weight)
    if current.truncated and (trunc + 1) * final[-1] <= 1:
        raise TruncationInsufficient(
            f'Dropped terms could sit below weighted degree one for {final}.',
            floor(1 / final[-1]),
        )
    report = is_adapted(current, final)
    if not report.adapted:
        raise SearchInconclusive(
            f'Coordinates are not adapted to {final}: {report.reason}', best_weight=final
        )
    return MultitypeResult(
        multitype=final.multitype(),
        weight=final,
        generating=generating_sequence(final),
        total_map=_assemble(n, trunc, maps),
        maps=maps,
        model=report.model,
        jet=current,
        traces=traces,
        truncated=current.truncated,
        complete=complete,
    )


def _apply_chain(jet: Jet, chain: list, maps: list) -> Jet:
    for hmap in chain:
        maps.append(hmap)
        jet = _stripped(apply(jet, hmap), maps)
    return jet
