"""Exception types shared across the package."""


class TabletopError(Exception):
    """Base class for all domain errors."""


class UnknownObject(TabletopError):
    """An object name is not declared in the current state or view."""


class UnknownEntity(TabletopError):
    """An entity (cell or object) is not declared."""


class UnknownShape(TabletopError):
    """A shape identifier is not declared in the catalog."""


class UnknownPreset(TabletopError):
    """The camera/occlusion preset name is not recognized."""


class CellOutOfRange(TabletopError):
    """A cell lies outside the configured grid."""


class InvalidState(TabletopError):
    """A state violates occupancy, acyclicity, or grounding invariants."""


class InadmissibleAction(TabletopError):
    """An action fails a built-in precondition in the given state."""


class AssociationFailure(TabletopError):
    """Fewer physical objects than task targets during data association."""


class HorizonExhausted(TabletopError):
    """No plan exists within the configured maximum plan length."""


class ParseError(TabletopError):
    """A located syntax or semantic error in an input file."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message
