"""Error taxonomy shared across the package.

Input errors cover malformed arguments and files, capacity errors cover
exceeded enumeration guards, incompleteness errors cover lookups that a
finite representative table cannot answer, and invariant errors signal
bugs in the reduction machinery itself.
"""


class InputError(ValueError):
    pass


class CapacityError(RuntimeError):
    pass


class IncompletenessError(RuntimeError):
    """A signature class is not covered by the representative table."""
    pass


class ReplacementRefused(RuntimeError):
    """A replacement was skipped because it would not shrink the graph."""
    pass


class InvariantError(AssertionError):
    """An internal consistency check failed; indicates a bug."""
    pass
