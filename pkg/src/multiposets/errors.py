"""Exception types shared across the package."""


class MultiposetError(ValueError):
    """Malformed input: bad relation, wrong slot count, failed precondition."""


class BoundExceeded(RuntimeError):
    """A search or enumeration was asked to go past its configured size bound."""
