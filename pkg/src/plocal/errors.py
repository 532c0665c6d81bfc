"""Error taxonomy shared by the library and the CLI.

Every bound violation and every failed precondition raises a typed error
carrying a stable ``code`` so the CLI can map it to an exit status without
string matching.  Negative mathematical verdicts (a system that is not
saturated, an axiom that fails) are never errors; they are reported values.
"""

from __future__ import annotations


class PlocalError(Exception):
    """Base class; ``code`` is the CLI exit status."""

    code = 1


class InputError(PlocalError):
    """Malformed or inconsistent input data (bad JSON, invalid table,
    generators outside the claimed parent, non-prime p, ...)."""

    code = 3


class BoundExceeded(PlocalError):
    """A configured enumeration or linear-algebra bound would be violated.

    Always names the bound so the caller knows which knob to turn.
    """

    code = 4

    def __init__(self, bound_name: str, needed, limit) -> None:
        self.bound_name = bound_name
        self.needed = needed
        self.limit = limit
        super().__init__(
            f"bound '{bound_name}' exceeded: needed {needed}, limit {limit}"
        )


class InternalCheckError(PlocalError):
    """A redundant internal cross-check failed.  Indicates a bug in this
    package, not in the caller's data."""

    code = 5


class DecompositionFailure(PlocalError):
    """Morphism factorization search exhausted its depth budget."""

    code = 1


class ImpossibleSylowChain(PlocalError):
    """No compatible chain of Sylow p-subgroups exists along a tower,
    so the tower has no weakly Sylow p-subgroup among the candidates tried."""

    code = 1
