# Exact linear algebra over Q and Q(i), delegated to sympy's DomainMatrix.
# Matrices come in and go out as lists of rows of GaussRational.

from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from libraries.errors import SingularMap
from libraries.polycore import GaussRational


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _to_domain(value: GaussRational, domain):
    value = GaussRational.of(value)
    if domain == QQ:
        return _to_qq(value.re)
    return QQ_I(_to_qq(value.re), _to_qq(value.im))


def _from_domain(element, domain) -> GaussRational:
    if domain == QQ:
        return GaussRational(_from_qq(element))
    return GaussRational(_from_qq(element.x), _from_qq(element.y))


def _matrix(rows: list, ncols: int, domain) -> DomainMatrix:
    return DomainMatrix(
        [[_to_domain(v, domain) for v in row] for row in rows],
        (len(rows), ncols),
        domain,
    )


def _rows(dm: DomainMatrix, domain) -> list:
    nrows, ncols = dm.shape
    return [
        [_from_domain(dm[i, j].element, domain) for j in range(ncols)]
        for i in range(nrows)
    ]


def _domain_for(rows: list):
    if all(GaussRational.of(v).is_real for row in rows for v in row):
        return QQ
    return QQ_I


def kernel(rows: list, ncols: int) -> list:
    '''Basis (list of vectors) of the right kernel of the matrix.'''
    if not rows:
        return [
            [GaussRational(1 if i == j else 0) for j in range(ncols)]
            for i in range(ncols)
        ]
    domain = _domain_for(rows)
    basis = _matrix(rows, ncols, domain).nullspace()
    if basis.shape[0] == 0:
        return []
    return _rows(basis, domain)


def rank(rows: list, ncols: int) -> int:
    if not rows:
        return 0
    domain = _domain_for(rows)
    return _matrix(rows, ncols, domain).rank()


def solve(rows: list, rhs: list, ncols: int) -> tuple:
    '''
    Solve rows * x = rhs exactly.

    Returns (solution or None, kernel dimension). Free variables of a
    consistent system are set to zero.
    '''
    if not rows:
        return [GaussRational(0)] * ncols, ncols
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    domain = _domain_for(augmented)
    reduced, pivots = _matrix(augmented, ncols + 1, domain).rref()
    if ncols in pivots:
        return None, ncols - len(pivots) + 1
    values = _rows(reduced, domain)
    solution = [GaussRational(0)] * ncols
    for row, col in enumerate(pivots):
        solution[col] = values[row][ncols]
    return solution, ncols - len(pivots)


def inverse(rows: list) -> list:
    size = len(rows)
    domain = _domain_for(rows)
    dm = _matrix(rows, size, domain)
    if dm.rank() < size:
        raise SingularMap('Linear part is singular at the origin')
    return _rows(dm.inv(), domain)
