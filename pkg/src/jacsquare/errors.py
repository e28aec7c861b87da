"""Exception types shared across the package; the CLI maps them to exit codes."""


class JacSquareError(Exception):
    exit_code = 1


class SingularInputError(JacSquareError):
    """The quartic is singular (its discriminant vanishes)."""

    exit_code = 2

    def __init__(self, message, discriminant=None):
        super().__init__(message)
        self.discriminant = discriminant


class PrecisionError(JacSquareError):
    """The requested precision is insufficient; retry with more digits."""

    exit_code = 3


class ConsistencyError(JacSquareError):
    """An internal identity (modularity, sphere relation, Riemann relations...) failed."""

    exit_code = 4
