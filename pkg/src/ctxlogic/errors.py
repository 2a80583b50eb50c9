"""Exception hierarchy shared across the package."""


class InvalidInput(ValueError):
    """Raised when an argument violates an operation's precondition."""


class DimensionMismatch(InvalidInput):
    pass


class InvalidDecomposition(InvalidInput):
    """A family of projectors is not an orthogonal decomposition of the identity."""


class NotInPoset(InvalidInput, KeyError):
    """A context (or id) is not a member of the poset being queried."""

    def __str__(self):
        return ValueError.__str__(self)
