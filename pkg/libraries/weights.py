# Rational weights: validity, lexicographic order, weighted degrees,
# homogeneous parts, adaptedness and the generating sequence.

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import groupby
from typing import Sequence

from libraries.errors import InfiniteTypeEntry
from libraries.polycore import Jet, MonomialKey

HALF = Fraction(1, 2)


def parse_fraction_list(text: str) -> tuple:
    return tuple(Fraction(part.strip()) for part in text.split(',') if part.strip())


def format_fraction(value: Fraction) -> str:
    return str(Fraction(value))


@total_ordering
@dataclass(frozen=True)
class Weight:
    '''
    Weight (lambda_1, ..., lambda_n); z variables get lambda_i, w and u get 1.

    Ordered lexicographically. Construct through validate_weight to get the
    validity clauses checked.
    '''

    lambdas: tuple

    def __post_init__(self):
        object.__setattr__(
            self, 'lambdas', tuple(Fraction(x) for x in self.lambdas)
        )

    def __lt__(self, other: Weight):
        return self.lambdas < other.lambdas

    def __len__(self):
        return len(self.lambdas)

    def __getitem__(self, index):
        return self.lambdas[index]

    def __iter__(self):
        return iter(self.lambdas)

    def __str__(self):
        return '(' + ', '.join(format_fraction(x) for x in self.lambdas) + ')'

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @classmethod
    def constant(cls, value, n: int) -> Weight:
        return cls((Fraction(value),) * n)

    def multitype(self) -> tuple:
        '''Reciprocal entries; None marks an infinite entry.'''
        return tuple(1 / x if x else None for x in self.lambdas)


def _combination_exists(prefix: Sequence[Fraction], value: Fraction) -> bool:
    '''Nonnegative integers a_1..a_k, a_k > 0, with sum a_j lambda_j = 1.'''
    entries = list(prefix) + [value]

    def search(index: int, remainder: Fraction) -> bool:
        lam = entries[index]
        if index == len(entries) - 1:
            if remainder <= 0:
                return False
            q = remainder / lam
            return q.denominator == 1
        top = int(remainder / lam) if lam else 0
        for a in range(top, -1, -1):
            if search(index + 1, remainder - a * lam):
                return True
        return False

    return search(0, Fraction(1))


def validate_weight(lambdas: Sequence) -> tuple:
    '''
    Returns (Weight, None) when every validity clause holds, otherwise
    (None, reason) naming the failing clause and 1-based index.
    '''
    values = [Fraction(x) for x in lambdas]
    for k, lam in enumerate(values, start=1):
        if lam < 0 or lam > HALF:
            return None, f'entry {k} = {lam} is outside [0, 1/2]'
        if k > 1 and lam > values[k - 2]:
            return None, f'entry {k} = {lam} exceeds entry {k - 1}: not nonincreasing'
    for k, lam in enumerate(values, start=1):
        if lam == 0:
            continue
        if not _combination_exists(values[: k - 1], lam):
            return None, (
                f'entry {k} = {lam}: no nonnegative integers a_1..a_{k} '
                f'with a_{k} > 0 and sum a_j lambda_j = 1'
            )
    return Weight(tuple(values)), None


def lex_compare(first: Weight, second: Weight) -> int:
    '''-1, 0 or 1 as first is lexicographically less, equal or greater.'''
    if len(first) != len(second):
        raise ValueError('Weights of different length are not comparable')
    for a, b in zip(first, second):
        if a != b:
            return -1 if a < b else 1
    return 0


def weight_blocks(weight: Weight) -> list:
    '''Index lists of the runs of equal entries, in order.'''
    return [
        [index for index, _ in group]
        for _, group in groupby(enumerate(weight), key=lambda item: item[1])
    ]


def weighted_length(alpha: Sequence[int], weight: Weight) -> Fraction:
    return sum((a * lam for a, lam in zip(alpha, weight)), Fraction(0))


def weighted_pair_length(alpha, alpha_hat, weight: Weight) -> Fraction:
    return weighted_length(alpha, weight) + weighted_length(alpha_hat, weight)


def weighted_degree(key: MonomialKey, weight: Weight) -> Fraction:
    return key.l + weighted_pair_length(key.alpha, key.alpha_hat, weight)


def homogeneous_part(jet: Jet, weight: Weight, kappa) -> Jet:
    kappa = Fraction(kappa)
    return jet.filter(lambda key: weighted_degree(key, weight) == kappa)


def occurring_degrees(jet: Jet, weight: Weight) -> list:
    return sorted({weighted_degree(key, weight) for key in jet.keys()})


@dataclass
class AdaptednessReport:
    adapted: bool
    model: Jet = None
    offending: list = field(default_factory=list)
    reason: str = ''


def is_adapted(jet: Jet, weight: Weight) -> AdaptednessReport:
    '''
    Polynomial rendering of v = P + o(1): every key has weighted degree at
    least one and the degree-one part is nonzero and pluriharmonic-free.
    '''
    low = sorted(key for key in jet.keys() if weighted_degree(key, weight) < 1)
    if low:
        return AdaptednessReport(False, offending=low, reason='weighted degree below one')
    model = homogeneous_part(jet, weight, 1)
    if not model:
        return AdaptednessReport(False, reason='no terms of weighted degree one')
    harmonic = sorted(key for key in model.keys() if key.is_pluriharmonic)
    if harmonic:
        return AdaptednessReport(
            False, model=model, offending=harmonic, reason='pluriharmonic terms in the model'
        )
    return AdaptednessReport(True, model=model)


def enumerate_values(prefix: Sequence, delta) -> list:
    '''
    Every admissible next entry (1 - sum_{j<k} a_j lambda_j) / a_k lying in
    (delta, lambda_{k-1}], with 1/2 as the cap for an empty prefix.
    '''
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError('delta must be positive for the value set to be finite')
    prefix = [Fraction(x) for x in prefix]
    cap = prefix[-1] if prefix else HALF
    if delta >= cap:
        return []
    remainders = set()

    def spend(index: int, remainder: Fraction):
        if index == len(prefix):
            if remainder > 0:
                remainders.add(remainder)
            return
        lam = prefix[index]
        if not lam:
            spend(index + 1, remainder)
            return
        a = 0
        while a * lam < remainder:
            spend(index + 1, remainder - a * lam)
            a += 1

    spend(0, Fraction(1))
    values = set()
    for remainder in remainders:
        a_k = 1
        while remainder / a_k > delta:
            value = remainder / a_k
            if value <= cap:
                values.add(value)
            a_k += 1
    return sorted(values)


@dataclass(frozen=True)
class GeneratingSequence:
    weights: tuple
    nus: tuple
    ks: tuple

    @property
    def t(self) -> int:
        return len(self.weights)


def generating_sequence(final: Weight) -> GeneratingSequence:
    if any(x == 0 for x in final):
        raise InfiniteTypeEntry(
            f'Weight {final} has an infinite multitype entry; no generating sequence'
        )
    nus = tuple(len(list(block)) for _, block in groupby(final.lambdas))
    ks = tuple(sum(nus[: j + 1]) for j in range(len(nus)))
    weights = []
    for j in range(len(nus)):
        fixed = ks[j - 1] if j else 0
        tail = final[fixed]
        weights.append(Weight(final.lambdas[:fixed] + (tail,) * (final.n - fixed)))
    return GeneratingSequence(tuple(weights), nus, ks)
