class UBKitError(ValueError):
    """Invalid input to a construction or certification."""


class ShapeMismatchError(UBKitError):
    pass


class PreconditionError(UBKitError):
    """A construction's parameters violate its defining condition."""


class NotABasisError(UBKitError):
    pass


class DependentMembersError(UBKitError):
    pass
