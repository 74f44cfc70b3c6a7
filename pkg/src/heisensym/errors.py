"""Exception hierarchy shared by all heisensym modules."""


class HeisensymError(Exception):
    """Base class for every error raised by this package."""


class NotAUnit(HeisensymError, ValueError):
    pass


class OrderMismatch(HeisensymError, ValueError):
    pass


class DimensionMismatch(HeisensymError, ValueError):
    pass


class SignatureMismatch(HeisensymError, ValueError):
    pass


class IndexOutOfRange(HeisensymError, IndexError):
    pass


class NotHeisenberg(HeisensymError, ValueError):
    """A matrix is not (a scalar multiple of) a Heisenberg group element."""


class StructureViolation(HeisensymError, ValueError):
    """Block entries break the divisibility pattern of the monoid."""


class NotASymmetry(HeisensymError, ValueError):
    pass


class NotInNormalizer(HeisensymError, ValueError):
    pass


class NotSL2(HeisensymError, ValueError):
    pass


class ParseError(HeisensymError, ValueError):
    pass


class BudgetExceeded(HeisensymError, RuntimeError):
    pass


class LiftNotFound(BudgetExceeded):
    """Closure search ran out of budget before reaching the target."""
