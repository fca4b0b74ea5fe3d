"""Exceptions shared across the toolkit."""


class GuardError(RuntimeError):
    """A resource guard or numerical-domain precondition was violated.

    Raised when a computation is refused because it would exceed a
    documented size/memory guard (e.g. transfer matrix beyond the qudit
    limit) or because a closed form is outside its domain of validity.
    """


class NotReachedError(RuntimeError):
    """A threshold search exhausted its budget without crossing."""

    def __init__(self, message, s_max=None, last_ratio=None):
        super().__init__(message)
        self.s_max = s_max
        self.last_ratio = last_ratio
