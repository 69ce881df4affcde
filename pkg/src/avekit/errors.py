"""Exception types shared across the package."""


class AvekitError(Exception):
    """Base class for avekit-specific failures."""


class SingularSystem(AvekitError):
    """A linear system was singular to the configured rank tolerance."""


class DimensionTooLarge(AvekitError):
    """The enumeration oracle was asked for a dimension above its hard cap."""


class AlphaOutOfRange(AvekitError):
    """A solution-family parameter violated the admissibility bound."""


class ParseError(AvekitError):
    """A problem file could not be parsed."""


class SchemaError(AvekitError):
    """A problem file parsed but violated the schema (dimensions, values)."""
