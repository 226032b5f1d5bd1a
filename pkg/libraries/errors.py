# Exceptions raised across the multitype libraries.
# Every error carries the process exit code the CLI reports for it.


class MultitypeError(Exception):
    exit_code = 1


class EquationSyntaxError(MultitypeError):
    exit_code = 2

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f'{message} (line {line}, column {column})')


class DimensionMismatch(MultitypeError):
    exit_code = 2


class RealnessViolation(MultitypeError):
    exit_code = 3

    def __init__(self, keys: list):
        self.keys = list(keys)
        shown = ', '.join(str(tuple(k)) for k in self.keys[:8])
        more = '' if len(self.keys) <= 8 else f' and {len(self.keys) - 8} more'
        super().__init__(
            f'Defining function is not real-valued at keys: {shown}{more}'
        )


class InfiniteType(MultitypeError):
    exit_code = 4

    def __init__(self, message: str, fixed: tuple = ()):
        self.fixed = tuple(fixed)
        super().__init__(message)


class InfiniteTypeEntry(InfiniteType):
    pass


class EmptyTheta(InfiniteType):
    pass


class TruncationInsufficient(MultitypeError):
    exit_code = 5

    def __init__(self, message: str, required: int = None):
        self.required = required
        if required is not None:
            message += f' Rerun with a truncation bound of at least {required}.'
        super().__init__(message)


class SearchInconclusive(MultitypeError):
    exit_code = 6

    def __init__(self, message: str, best_weight=None):
        self.best_weight = best_weight
        super().__init__(message)


class BudgetExceeded(MultitypeError):
    exit_code = 6


class NotFoundWithinBudget(MultitypeError):
    exit_code = 6


class SingularMap(MultitypeError):
    pass


class RegularityNotAchieved(MultitypeError):
    pass


class NoTerm(MultitypeError):
    pass


class IdentityFails(MultitypeError):
    def __init__(self, keys: list):
        self.keys = list(keys)
        super().__init__(f'Model identity fails at {len(self.keys)} keys')
