"""Exception hierarchy shared by every p5lab module."""

from __future__ import annotations


class P5LabError(Exception):
    """Base class for all errors raised by p5lab."""


class CapabilityError(P5LabError):
    """An operation refused because the input exceeds a configured size cap."""

    def __init__(self, what: str, limit: int, got: int):
        self.what = what
        self.limit = limit
        self.got = got
        super().__init__(f"{what}: size {got} exceeds cap {limit}")


class Graph6Error(P5LabError, ValueError):
    """Malformed graph6 text; ``offset`` is the 0-based byte position of the fault."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class NotP5FreeError(P5LabError, ValueError):
    """Input was required to be P5-free but contains an induced P5."""

    def __init__(self, witness: tuple[int, ...]):
        self.witness = witness
        super().__init__(f"graph contains an induced P5 on vertices {list(witness)}")


class InvariantViolation(P5LabError, RuntimeError):
    """A theorem-backed runtime check failed.

    For a correct implementation on valid input this never happens; the
    ``witness`` payload is whatever evidence the failing check collected.
    """

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class PartitionError(InvariantViolation):
    """A decomposition partition failed validation; ``prop`` names the property."""

    def __init__(self, prop: str, detail: str = ""):
        self.prop = prop
        msg = f"partition property violated: {prop}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg, witness=prop)
