"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent user input (bad indices, non-bases, parse errors)."""


class ResourceLimitError(RuntimeError):
    """A brute-force or enumeration routine was asked to exceed its size cap."""


class ConsistencyError(AssertionError):
    """An internal invariant that the theory guarantees did not hold.

    Raising this always indicates a bug (or a counterexample), never bad input.
    """


class RepairFailed(RuntimeError):
    """A matching repair could not be completed on this instance.

    Attributes:
        stage: which repair was running (``"zero-deficit"`` or ``"improve"``).
        flat: the flat being saturated when the repair gave up, if any.
    """

    def __init__(self, message, stage="improve", flat=None):
        super().__init__(message)
        self.stage = stage
        self.flat = flat
