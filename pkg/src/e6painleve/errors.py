class BasisMismatch(ValueError):
    """Lattice objects over different bases were combined."""


class NotATranslation(ValueError):
    """A lattice map does not act on the symmetry roots by a translation."""


class ExceptionalLocus(ZeroDivisionError):
    """A birational generator was applied where one of its denominators vanishes."""

    def __init__(self, generator: str, denominator: str, index: int | None = None):
        self.generator = generator
        self.denominator = denominator
        self.index = index
        where = f" (word position {index})" if index is not None else ""
        super().__init__(f"{generator}: {denominator} = 0{where}")


class Singular(ZeroDivisionError):
    """A map of the applied problem hit one of its singular loci."""

    def __init__(self, condition: str, n=None):
        self.condition = condition
        self.n = n
        suffix = f" at n={n}" if n is not None else ""
        super().__init__(f"singular: {condition}{suffix}")


class NonConverged(ArithmeticError):
    """Quadrature did not meet its error target."""


class PrecisionExhausted(ArithmeticError):
    """Cancellation consumed the working precision."""

    def __init__(self, message: str, losses=None):
        self.losses = list(losses or [])
        super().__init__(message)
