# Model hypersurfaces v = P(z, zb): extraction, superhomogeneity checks,
# exact verification of model-to-model maps and a bounded search for them.

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from loguru import logger
from sympy.solvers.diophantine.diophantine import sum_of_squares

from libraries.engine import MultitypeResult
from libraries.errors import IdentityFails, NotFoundWithinBudget
from libraries.normalize import leading_term, make_regular, normalize_model, rational_root
from libraries.polycore import (
    ONE,
    GaussRational,
    Jet,
    holomorphic_part,
    identity_images,
    strip_pluriharmonic,
)
from libraries.transforms import (
    HoloMap,
    MapClass,
    apply,
    classify,
    compose,
    compose_all,
    invert_to_order,
    monomials_of_length,
)
from libraries.weights import Weight, homogeneous_part, weight_blocks


def model_of(result: MultitypeResult) -> Jet:
    return result.model


def check_superhomogeneous(hmap: HoloMap, weight: Weight) -> bool:
    return classify(hmap, weight) in (MapClass.HOMOGENEOUS, MapClass.SUPERHOMOGENEOUS)


@dataclass
class VerificationReport:
    ok: bool
    keys: list = field(default_factory=list)
    reason: str = ''

    def raise_for_failure(self):
        if not self.ok:
            raise IdentityFails(self.keys)


def model_map_parts(hmap: HoloMap) -> tuple:
    '''
    Split a map of the form z* = z + f(z), w* = c*w + D(z) into (c, D).
    Returns None when the map has any other shape.
    '''
    if any(e[-1] for f in hmap.fs for e in f.terms):
        return None
    w_terms = hmap.g.filter(lambda key: key.l > 0)
    if any(key.l != 1 or any(key.alpha) for key in w_terms.keys()):
        return None
    c = hmap.scaling()
    if not c.is_real or not c:
        return None
    return c.re, hmap.g.filter(lambda key: key.l == 0)


def _pushed_forward(model: Jet, hmap: HoloMap, trunc: int) -> Jet:
    '''model(z + f(z), conj(z + f(z))).'''
    n = model.n
    images = identity_images(n, trunc)
    comps = hmap.with_trunc(trunc).components()
    for i in range(n):
        images[i] = comps[i]
        images[n + i] = comps[i].conjugate()
    return model.with_trunc(trunc).substitute(images)


def _working_trunc(*jets: Jet) -> int:
    return max([2 * jet.degree() for jet in jets] + [jet.trunc for jet in jets])


def verify_model_map(hmap: HoloMap, model: Jet, target: Jet) -> VerificationReport:
    '''Exact check of c*P + Im D = P~(z + f, conj(z + f)).'''
    parts = model_map_parts(hmap)
    if parts is None:
        return VerificationReport(False, reason='map is not of the form (z + f(z), c w + D(z)) with real c')
    c, d = parts
    trunc = _working_trunc(model, target)
    left = model.with_trunc(trunc).scale(c) + d.with_trunc(trunc).imag_part()
    right = _pushed_forward(target, hmap, trunc)
    difference = left - right
    keys = sorted(difference.keys())
    if keys:
        return VerificationReport(False, keys, reason=f'{len(keys)} coefficients differ')
    return VerificationReport(True)


def apply_model(hmap: HoloMap, model: Jet) -> Jet:
    '''Model of the image of v = P under a model map, pluriharmonic terms removed.'''
    parts = model_map_parts(hmap)
    if parts is None:
        raise ValueError('Map is not of the form (z + f(z), c w + D(z)) with real c')
    c, d = parts
    n, trunc = model.n, model.trunc
    z_part = HoloMap(n, hmap.fs, Jet.zero(n, trunc))
    inverse = invert_to_order(z_part, trunc).components()
    images = identity_images(n, trunc)
    for i in range(n):
        images[i] = inverse[i]
        images[n + i] = inverse[i].conjugate()
    value = (model.scale(c) + d.with_trunc(trunc).imag_part()).substitute(images)
    return strip_pluriharmonic(value)[1]


def _is_model(jet: Jet, weight: Weight) -> bool:
    return bool(jet) and homogeneous_part(jet, weight, 1) == jet and not jet.depends_on_u()


@functools.lru_cache(maxsize=4096)
def norm_representations(norm: Fraction, max_denominator: int) -> tuple:
    '''Gaussian rationals t with |t|^2 == norm and denominator up to the bound.'''
    found = set()
    for d in range(1, max_denominator + 1):
        scaled = norm * d * d
        if scaled.denominator != 1:
            continue
        for a, b in sum_of_squares(int(scaled), 2, zeros=True):
            for x, y in ((a, b), (b, a)):
                for sx, sy in itertools.product((1, -1), repeat=2):
                    found.add(GaussRational(Fraction(sx * x, d), Fraction(sy * y, d)))
    return tuple(sorted(found, key=lambda t: (t.re.denominator, t.re, t.im)))


def gaussian_roots(value: GaussRational, p: int, q: int, max_denominator: int) -> list:
    '''Gaussian rationals t with t^p * conj(t)^q == value.'''
    if not value:
        return []
    modulus = rational_root(value.norm2(), p + q)
    if modulus is None:
        return []
    return [
        t
        for t in norm_representations(modulus, max_denominator)
        if t ** p * t.conjugate() ** q == value
    ]


def _diagonal_factor(key, scales: list) -> GaussRational:
    factor = ONE
    for j, t in enumerate(scales):
        factor = factor * t ** key.alpha[j] * t.conjugate() ** key.alpha_hat[j]
    return factor


def _consistent(source: Jet, target: Jet, c: Fraction, scales: list) -> bool:
    '''Every key on the first len(scales) axes matches under z* = t z, w* = c w.'''
    k = len(scales)
    for jet in (source, target):
        for key in jet.keys():
            if any(key.alpha[k:]) or any(key.alpha_hat[k:]):
                continue
            scaled = target.coeff(key) * _diagonal_factor(key, scales)
            if scaled != source.coeff(key) * c:
                return False
    return True


def _c_candidates(height: int) -> list:
    values = {Fraction(p, q) for p in range(1, height + 1) for q in range(1, height + 1)}
    ordered = sorted(values, key=lambda v: (max(v.numerator, v.denominator), v))
    return [sign * v for v in ordered for sign in (1, -1)]


def _diagonal_search(source: Jet, target: Jet, budget: int, max_tries: int) -> tuple:
    '''
    Real c and scalings t_k with c * source(z) == target(t z), found axis by
    axis from the leading terms and pruned on the keys already determined.
    '''
    n = source.n
    leads = [leading_term(source, k) for k in range(1, n + 1)]
    tries = 0

    def extend(c: Fraction, scales: list):
        nonlocal tries
        k = len(scales)
        if k == n:
            return scales
        lead = leads[k]
        known = _diagonal_factor(lead.key, scales + [ONE])
        denominator = target.coeff(lead.key) * known
        if not denominator:
            return None
        wanted = source.coeff(lead.key) * c / denominator
        for t in gaussian_roots(wanted, lead.gamma[k], lead.gamma_hat[k], budget * budget):
            tries += 1
            if tries > max_tries:
                raise NotFoundWithinBudget(f'No model map within {max_tries} trials')
            if _consistent(source, target, c, scales + [t]):
                found = extend(c, scales + [t])
                if found is not None:
                    return found
        return None

    for c in _c_candidates(budget):
        scales = extend(c, [])
        if scales is not None:
            return c, scales
    return None, None


def _diagonal_map(n: int, trunc: int, c: Fraction, scales: list) -> HoloMap:
    fs = tuple(Jet.variable(n, trunc, i).scale(t - 1) for i, t in enumerate(scales))
    g = Jet.variable(n, trunc, 2 * n).scale(c - 1)
    return HoloMap(n, fs, g)


def _to_normal_form(model: Jet, weight: Weight, seed: int) -> tuple:
    regular = make_regular(model, weight, seed)
    current = apply(model, regular)
    maps, normal, report = normalize_model(current, weight)
    return [regular] + maps, normal, report


# Block search: z* = phi(z) with one unit pivot per column inside each
# equal-weight block, unknown Gaussian entries elsewhere in the block and
# unknown coefficients on the homogeneous shear monomials. target(phi)
# must vanish outside the support of the source (pluriharmonic terms
# aside); the diagonal search then supplies c and the axis scalings.


def _sym(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _pivot_patterns(weight: Weight):
    '''Row of the unit entry of every column, identity pattern first.'''
    blocks = weight_blocks(weight)
    for choice in itertools.product(*[itertools.permutations(block) for block in blocks]):
        pivots = {}
        for block, rows in zip(blocks, choice):
            pivots.update(zip(block, rows))
        yield pivots


@dataclass
class _Ansatz:
    rows: list  # per component: (alpha, sympy coefficient)
    symbols: list

    @classmethod
    def build(cls, weight: Weight, pivots: dict) -> _Ansatz:
        n = weight.n
        symbols = []

        def unknown():
            x, y = sympy.symbols(f'x{len(symbols) // 2} y{len(symbols) // 2}', real=True)
            symbols.extend((x, y))
            return x + sympy.I * y

        block_of = {j: block for block in weight_blocks(weight) for j in block}
        max_degree = max(1, int(1 / weight[-1]))
        rows = []
        for i in range(n):
            terms = []
            for j in block_of[i]:
                unit = tuple(int(k == j) for k in range(n))
                terms.append((unit, sympy.Integer(1) if pivots[j] == i else unknown()))
            for alpha in monomials_of_length(weight, weight[i], max_degree):
                if sum(alpha) > 1:
                    terms.append((alpha, unknown()))
            rows.append(terms)
        return cls(rows, symbols)

    def composed_coefficients(self, target: Jet) -> dict:
        '''Coefficients of target(phi(z), conj(phi(z))), keyed by (alpha + alpha_hat).'''
        n = target.n
        zs = sympy.symbols(f'z1:{n + 1}')
        zbs = sympy.symbols(f'zb1:{n + 1}')

        def image(terms, variables, conjugate):
            return sympy.Add(
                *[
                    (sympy.conjugate(coeff) if conjugate else coeff)
                    * sympy.Mul(*[v ** a for v, a in zip(variables, alpha)])
                    for alpha, coeff in terms
                ]
            )

        images = [image(terms, zs, False) for terms in self.rows]
        conjugates = [image(terms, zbs, True) for terms in self.rows]
        expr = 0
        for key, coeff in target.items():
            term = _sym(coeff.re) + sympy.I * _sym(coeff.im)
            for j in range(n):
                term *= images[j] ** key.alpha[j] * conjugates[j] ** key.alpha_hat[j]
            expr += term
        return dict(sympy.Poly(sympy.expand(expr), *zs, *zbs).terms())

    def realize(self, values: dict, n: int, trunc: int) -> HoloMap:
        fs = []
        for i, terms in enumerate(self.rows):
            data = {}
            for alpha, coeff in terms:
                re, im = sympy.expand(coeff.subs(values)).as_real_imag()
                data[tuple(alpha) + (0,) * (n + 1)] = GaussRational(_fraction(re), _fraction(im))
            fs.append(Jet.build(n, trunc, data) - Jet.variable(n, trunc, i))
        return HoloMap(n, tuple(fs), Jet.zero(n, trunc))


def _support_equations(coefficients: dict, source: Jet) -> list:
    '''Real equations for every non-pluriharmonic key outside the source support.'''
    n = source.n
    support = {key.flat()[: 2 * n] for key in source.keys()}
    equations = []
    for monom, coeff in coefficients.items():
        alpha, alpha_hat = monom[:n], monom[n:]
        # keys come in conjugate pairs; one of each pair is enough
        if not any(alpha) or not any(alpha_hat) or monom in support or alpha < alpha_hat:
            continue
        for part in sympy.expand(coeff).as_real_imag():
            part = sympy.expand(part)
            if part != 0:
                equations.append(part)
    return equations


def _solve(equations: list, symbols: list, depth: int = 0) -> list:
    '''Exact solutions; positive-dimensional systems are cut by fixing unknowns to 0 or 1.'''
    if not equations:
        return [{}]
    try:
        return sympy.solve(equations, symbols, dict=True)
    except NotImplementedError:
        if not symbols or depth >= 2:
            return []
    head, rest = symbols[0], symbols[1:]
    found = []
    for value in (sympy.Integer(0), sympy.Integer(1)):
        fixed = [eq.subs(head, value) for eq in equations]
        if any(eq.is_number and eq != 0 for eq in fixed):
            continue
        fixed = [eq for eq in fixed if not (eq.is_number and eq == 0)]
        for solution in _solve(fixed, rest, depth + 1):
            found.append({**solution, head: value})
    return found


def _rational_points(solution: dict, symbols: list, limit: int = 27):
    '''Rational assignments of every unknown, free ones tried at 0, 1 and -1.'''
    free = [s for s in symbols if s not in solution]
    trials = itertools.product((0, 1, -1), repeat=len(free))
    for trial in itertools.islice(trials, limit):
        assign = {s: sympy.Integer(v) for s, v in zip(free, trial)}
        values = dict(assign)
        for s in symbols:
            if s in assign:
                continue
            value = sympy.nsimplify(solution[s].subs(assign)) if solution[s].free_symbols else solution[s]
            if not value.is_Rational:
                break
            values[s] = value
        else:
            yield values


def _block_search(source: Jet, target: Jet, weight: Weight, budget: int, max_tries: int):
    '''
    (c, map) with target(map(z)) == c * source(z) modulo pluriharmonic terms,
    where the map is phi(t z) for a block frame phi and axis scalings t.
    '''
    n, trunc = source.n, target.trunc
    for pivots in _pivot_patterns(weight):
        ansatz = _Ansatz.build(weight, pivots)
        equations = _support_equations(ansatz.composed_coefficients(target), source)
        solutions = _solve(equations, ansatz.symbols)
        logger.debug(
            f'Block frame {pivots}: {len(ansatz.symbols)} unknowns, '
            f'{len(equations)} equations, {len(solutions)} solutions'
        )
        for solution in solutions:
            for values in _rational_points(solution, ansatz.symbols):
                frame = ansatz.realize(values, n, trunc)
                if not frame.is_nonsingular():
                    continue
                framed = strip_pluriharmonic(_pushed_forward(target, frame, trunc))[1]
                try:
                    c, scales = _diagonal_search(source, framed, budget, max_tries)
                except NotFoundWithinBudget:
                    continue
                if scales is not None:
                    return c, compose(_diagonal_map(n, trunc, c, scales), frame)
    return None


def equivalence_map(
    model: Jet, target: Jet, weight: Weight, budget: int = 12, seed: int = 0, max_tries: int = 20000
) -> HoloMap:
    '''
    Homogeneous map taking v = model onto v = target.

    Two searches, each ending in exact verification:
    - diagonal: both sides normalized, then a diagonal scaling and a real
      factor on w with coefficient heights up to `budget`;
    - block: the block-linear and shear part solved exactly against the
      unnormalized target, then the same diagonal search on the result.
    Weights with equal-weight blocks try the block search first. Raises
    NotFoundWithinBudget, which is no proof of inequivalence.
    '''
    n = model.n
    trunc = _working_trunc(model, target)
    model, target = model.with_trunc(trunc), target.with_trunc(trunc)
    if model == target:
        return HoloMap.identity(n, trunc)
    for side in (model, target):
        if not _is_model(side, weight):
            raise NotFoundWithinBudget(
                f'Not homogeneous of weighted degree one for {weight}; no search attempted'
            )
    source_maps, source_normal, _ = _to_normal_form(model, weight, seed)
    into_source = compose_all(source_maps, n, trunc)

    def diagonal():
        target_maps, target_normal, _ = _to_normal_form(target, weight, seed)
        try:
            c, scales = _diagonal_search(source_normal, target_normal, budget, max_tries)
        except NotFoundWithinBudget:
            return None
        if scales is None:
            return None
        total = compose(
            compose(into_source, _diagonal_map(n, trunc, c, scales)),
            invert_to_order(compose_all(target_maps, n, trunc), trunc),
        )
        return c, total

    def block():
        found = _block_search(source_normal, target, weight, budget, max_tries)
        if found is None:
            return None
        c, framed = found
        return c, compose(into_source, framed)

    # normalization leaves the block-linear freedom open, so blocks go first
    has_blocks = any(len(b) > 1 for b in weight_blocks(weight))
    for search in (block, diagonal) if has_blocks else (diagonal, block):
        found = search()
        if found is None:
            continue
        _, total = found
        parts = model_map_parts(total)
        if parts is None:
            continue
        c = parts[0]
        residual = _pushed_forward(target, total, trunc) - model.scale(c) - parts[1].imag_part()
        d = holomorphic_part(residual).scale(GaussRational(0, 2))
        total = HoloMap(n, total.fs, total.g + d)
        report = verify_model_map(total, model, target)
        if report.ok:
            logger.debug(f'Model map found by the {search.__name__} search with c = {c}')
            return total
        logger.debug(f'{search.__name__} candidate failed verification: {report.reason}')
    raise NotFoundWithinBudget(f'No block or diagonal match with coefficient height {budget}')
