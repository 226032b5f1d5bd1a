# Exact sparse jets in z, zb (conjugates) and u over the Gaussian rationals.
#
# A jet is stored as a mapping from flat exponent tuples
# (a_1..a_n, b_1..b_n, l) to coefficients. The same class also holds
# holomorphic polynomials in (z, w): the zb slots stay zero and the last
# slot counts powers of w instead of u.

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from loguru import logger

from libraries.errors import DimensionMismatch, RealnessViolation


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class GaussRational:
    '''
    Exact complex number re + im*i with rational parts.

    Fraction keeps both parts in lowest terms with a positive denominator,
    so equality is structural.
    '''

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 're', _fraction(self.re))
        object.__setattr__(self, 'im', _fraction(self.im))

    @classmethod
    def of(cls, value) -> GaussRational:
        if isinstance(value, GaussRational):
            return value
        if isinstance(value, complex):
            raise TypeError('Floating point complex values are not exact')
        return cls(_fraction(value), Fraction(0))

    def __eq__(self, other):
        try:
            other = GaussRational.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f'GaussRational({self.re}, {self.im})'

    def __add__(self, other):
        other = GaussRational.of(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRational.of(other))

    def __rsub__(self, other):
        return GaussRational.of(other) - self

    def __mul__(self, other):
        other = GaussRational.of(other)
        if not self.im and not other.im:
            return GaussRational(self.re * other.re)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussRational:
        n = self.norm2()
        if not n:
            raise ZeroDivisionError('GaussRational division by zero')
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussRational.of(other).inverse()

    def __rtruediv__(self, other):
        return GaussRational.of(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return not self.im


ZERO = GaussRational(0)
ONE = GaussRational(1)
I_UNIT = GaussRational(0, 1)


class MonomialKey(NamedTuple):
    '''Exponents of z^alpha * zb^alpha_hat * u^l.'''

    alpha: tuple
    alpha_hat: tuple
    l: int

    @property
    def degree(self) -> int:
        return sum(self.alpha) + sum(self.alpha_hat) + self.l

    def flat(self) -> tuple:
        return tuple(self.alpha) + tuple(self.alpha_hat) + (self.l,)

    @classmethod
    def from_flat(cls, exps: Sequence[int], n: int) -> MonomialKey:
        return cls(tuple(exps[:n]), tuple(exps[n : 2 * n]), exps[2 * n])

    def conjugate(self) -> MonomialKey:
        return MonomialKey(self.alpha_hat, self.alpha, self.l)

    @property
    def is_pluriharmonic(self) -> bool:
        # Holomorphic or antiholomorphic in z with no u factor
        return self.l == 0 and (not any(self.alpha_hat) or not any(self.alpha))


@dataclass(frozen=True)
class LeadingTermIndex:
    '''Leading term (gamma, gamma_hat) of the model in the variable z_k.'''

    k: int
    gamma: tuple
    gamma_hat: tuple

    def __post_init__(self):
        if any(self.gamma[self.k :]) or any(self.gamma_hat[self.k :]):
            raise ValueError('Leading term is supported beyond its axis')
        if not self.gamma[self.k - 1] + self.gamma_hat[self.k - 1]:
            raise ValueError('Leading term does not involve its own variable')

    @property
    def epsilon(self) -> tuple:
        return tuple(1 if j == self.k - 1 else 0 for j in range(len(self.gamma)))

    @property
    def key(self) -> MonomialKey:
        return MonomialKey(tuple(self.gamma), tuple(self.gamma_hat), 0)


@dataclass(frozen=True, eq=False)
class Jet:
    '''
    Truncated polynomial in z, zb and u with Gaussian rational coefficients.

    Keys of ordinary degree above `trunc` are never stored; dropping a
    nonzero key during arithmetic sets `truncated`. Zero coefficients are
    purged so that comparing two jets compares the polynomials.
    '''

    n: int
    trunc: int
    terms: dict = field(default_factory=dict)
    truncated: bool = False

    @classmethod
    def build(
        cls, n: int, trunc: int, terms: dict, truncated: bool = False
    ) -> Jet:
        clean = {}
        for exps, coeff in terms.items():
            if not coeff:
                continue
            if len(exps) != 2 * n + 1:
                raise DimensionMismatch(
                    f'Key {exps} does not fit dimension n={n}'
                )
            if sum(exps) > trunc:
                truncated = True
                continue
            clean[tuple(exps)] = GaussRational.of(coeff)
        return cls(n, trunc, clean, truncated)

    @classmethod
    def zero(cls, n: int, trunc: int) -> Jet:
        return cls(n, trunc, {})

    @classmethod
    def constant(cls, n: int, trunc: int, value) -> Jet:
        return cls.build(n, trunc, {(0,) * (2 * n + 1): GaussRational.of(value)})

    @classmethod
    def variable(cls, n: int, trunc: int, slot: int) -> Jet:
        '''Slot 0..n-1 is z_i, n..2n-1 is zb_i, 2n is u (or w).'''
        exps = [0] * (2 * n + 1)
        exps[slot] = 1
        return cls.build(n, trunc, {tuple(exps): ONE})

    @classmethod
    def monomial(cls, n: int, trunc: int, key: MonomialKey, coeff=ONE) -> Jet:
        return cls.build(n, trunc, {key.flat(): GaussRational.of(coeff)})

    @classmethod
    def from_keys(cls, n: int, trunc: int, items: Iterable) -> Jet:
        terms = {}
        for key, coeff in items:
            exps = key.flat()
            terms[exps] = terms.get(exps, ZERO) + GaussRational.of(coeff)
        return cls.build(n, trunc, terms)

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f'Jet(n={self.n}, trunc={self.trunc}, terms={len(self.terms)})'

    def keys(self) -> Iterator[MonomialKey]:
        for exps in self.terms:
            yield MonomialKey.from_flat(exps, self.n)

    def items(self) -> Iterator[tuple]:
        for exps, coeff in self.terms.items():
            yield MonomialKey.from_flat(exps, self.n), coeff

    def coeff(self, key: MonomialKey) -> GaussRational:
        return self.terms.get(key.flat(), ZERO)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def low_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=0)

    def _check(self, other: Jet):
        if self.n != other.n:
            raise DimensionMismatch(
                f'Jets of dimension {self.n} and {other.n} cannot be combined'
            )

    def with_trunc(self, trunc: int) -> Jet:
        return Jet.build(self.n, trunc, dict(self.terms), self.truncated)

    def filter(self, keep: Callable[[MonomialKey], bool]) -> Jet:
        return Jet(
            self.n,
            self.trunc,
            {
                e: c
                for e, c in self.terms.items()
                if keep(MonomialKey.from_flat(e, self.n))
            },
            self.truncated,
        )

    def __add__(self, other):
        if not isinstance(other, Jet):
            return self + Jet.constant(self.n, self.trunc, other)
        self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, ZERO) + coeff
        return Jet.build(
            self.n,
            min(self.trunc, other.trunc),
            terms,
            self.truncated or other.truncated,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.n, self.trunc, {e: -c for e, c in self.terms.items()}, self.truncated)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> Jet:
        value = GaussRational.of(value)
        if not value:
            return Jet(self.n, self.trunc, {}, self.truncated)
        return Jet(
            self.n,
            self.trunc,
            {e: c * value for e, c in self.terms.items()},
            self.truncated,
        )

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        right = sorted(
            ((sum(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0]
        )
        out = {}
        dropped = False
        for ea, ca in self.terms.items():
            da = sum(ea)
            for db, eb, cb in right:
                if da + db > trunc:
                    dropped = True
                    break
                exps = tuple(x + y for x, y in zip(ea, eb))
                out[exps] = out.get(exps, ZERO) + ca * cb
        return Jet.build(
            self.n, trunc, out, self.truncated or other.truncated or dropped
        )

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, exponent: int) -> Jet:
        if exponent < 0:
            raise ValueError('Negative powers of jets are not defined')
        result = Jet.constant(self.n, self.trunc, ONE)
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> Jet:
        n = self.n
        return Jet(
            n,
            self.trunc,
            {
                e[n : 2 * n] + e[:n] + e[2 * n :]: c.conjugate()
                for e, c in self.terms.items()
            },
            self.truncated,
        )

    def real_part(self) -> Jet:
        return (self + self.conjugate()).scale(Fraction(1, 2))

    def imag_part(self) -> Jet:
        return (self - self.conjugate()).scale(GaussRational(0, Fraction(-1, 2)))

    def is_real(self) -> bool:
        return not realness_violations(self)

    def depends_on_u(self) -> bool:
        return any(e[-1] for e in self.terms)

    def restrict_first_k(self, k: int) -> Jet:
        '''Set z_{k+1}..z_n (and their conjugates) to zero.'''
        if not 1 <= k <= self.n:
            raise ValueError(f'Axis count {k} outside 1..{self.n}')
        n = self.n
        return Jet(
            n,
            self.trunc,
            {
                e: c
                for e, c in self.terms.items()
                if not any(e[k:n]) and not any(e[n + k : 2 * n])
            },
            self.truncated,
        )

    def drop_variables(self, slots: Iterable[int]) -> Jet:
        '''Set the listed z variables (0-based) and their conjugates to zero.'''
        slots = set(slots)
        n = self.n
        return Jet(
            n,
            self.trunc,
            {
                e: c
                for e, c in self.terms.items()
                if not any(e[s] or e[n + s] for s in slots)
            },
            self.truncated,
        )

    def partial_z(self, k: int) -> Jet:
        '''Formal derivative with respect to z_k (1-based).'''
        slot = k - 1
        out = {}
        for exps, coeff in self.terms.items():
            if not exps[slot]:
                continue
            lowered = list(exps)
            lowered[slot] -= 1
            out[tuple(lowered)] = coeff * exps[slot]
        return Jet(self.n, self.trunc, out, self.truncated)

    def partial_zb(self, k: int) -> Jet:
        return self.conjugate().partial_z(k).conjugate()

    def variables_present(self) -> set:
        '''0-based z indices appearing in any key, holomorphically or not.'''
        n = self.n
        return {
            s for e in self.terms for s in range(n) if e[s] or e[n + s]
        }

    def substitute(self, images: Sequence[Jet]) -> Jet:
        '''
        Compose with the 2n+1 images of (z, zb, u), truncating at the
        images' bound. Images must share one dimension.
        '''
        if len(images) != 2 * self.n + 1:
            raise DimensionMismatch(
                f'Expected {2 * self.n + 1} images, got {len(images)}'
            )
        target = images[0]
        for image in images[1:]:
            target._check(image)
        trunc = min(min(image.trunc for image in images), target.trunc)
        powers = {}

        def power(slot: int, exponent: int) -> Jet:
            if (slot, exponent) not in powers:
                if exponent == 1:
                    powers[(slot, 1)] = images[slot].with_trunc(trunc)
                else:
                    powers[(slot, exponent)] = power(slot, exponent - 1) * images[slot]
            return powers[(slot, exponent)]

        # partial products keyed by their (slot, exponent) prefix
        products = {}
        acc = {}
        truncated = self.truncated
        for exps, coeff in sorted(self.terms.items()):
            term = None
            prefix = ()
            for slot, exponent in enumerate(exps):
                if not exponent:
                    continue
                prefix += ((slot, exponent),)
                if prefix not in products:
                    factor = power(slot, exponent)
                    products[prefix] = factor if term is None else term * factor
                term = products[prefix]
            if term is None:
                term = Jet.constant(target.n, trunc, ONE)
            truncated = truncated or term.truncated
            for e, c in term.terms.items():
                acc[e] = acc.get(e, ZERO) + c * coeff
        return Jet.build(target.n, trunc, acc, truncated)


def realness_violations(jet: Jet) -> list:
    n = jet.n
    bad = []
    for exps, coeff in jet.terms.items():
        mirror = exps[n : 2 * n] + exps[:n] + exps[2 * n :]
        if jet.terms.get(mirror, ZERO) != coeff.conjugate():
            bad.append(MonomialKey.from_flat(exps, n))
    return sorted(bad)


def assert_real(jet: Jet) -> None:
    bad = realness_violations(jet)
    if bad:
        raise RealnessViolation(bad)


def identity_images(n: int, trunc: int) -> list:
    return [Jet.variable(n, trunc, slot) for slot in range(2 * n + 1)]


def holomorphic_part(jet: Jet) -> Jet:
    '''Keys with no zb and no u, excluding the constant term.'''
    return jet.filter(
        lambda key: key.l == 0 and not any(key.alpha_hat) and any(key.alpha)
    )


def strip_pluriharmonic(jet: Jet) -> tuple:
    '''
    Absorb the pluriharmonic terms of `jet` into w.

    Returns (g, stripped) where g is a holomorphic polynomial in z and
    w* = w + g turns v = jet into v* = stripped. A term h(z) + conj(h(z))
    is removed by g = -2i*h, since Im(-2i*h) = -(h + conj(h)). The
    accompanying shift u = u* - Re(g) is substituted into u-dependent
    terms, which can produce new holomorphic terms of higher degree, so
    the absorption repeats until none remain.
    '''
    n, trunc = jet.n, jet.trunc
    g_total = Jet.zero(n, trunc)
    current = jet
    while True:
        h = holomorphic_part(current)
        if not h:
            break
        g = h.scale(GaussRational(0, -2))
        rest = current - h - h.conjugate()
        if rest.depends_on_u():
            images = identity_images(n, trunc)
            images[2 * n] = images[2 * n] - g.real_part()
            rest = rest.substitute(images)
        g_total = g_total + g
        current = rest
        logger.debug(f'Absorbed {len(h)} holomorphic terms into w')
    return g_total, current
