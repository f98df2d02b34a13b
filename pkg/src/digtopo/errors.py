"""Exception types shared across the library."""


class DigitalTopologyError(Exception):
    """Base class for all errors raised by this library."""


class BudgetExceeded(DigitalTopologyError):
    """A construction, enumeration, or search budget was exhausted."""


class BadAdjacency(DigitalTopologyError):
    """Adjacency parameter out of range for the image dimension or factor count."""


class BadCycleLength(DigitalTopologyError):
    """Cycle length is too short or has no realization of the requested kind."""


class BadEdge(DigitalTopologyError):
    """An explicit edge references a vertex out of range or is a self-loop."""


class NotEmbedded(DigitalTopologyError):
    """Operation requires a grid-embedded image."""


class Disconnected(DigitalTopologyError):
    """Operation requires a connected image or same-component vertices."""


class DomainMismatch(DigitalTopologyError):
    """Maps do not share the images required for the operation."""


class NotACycle(DigitalTopologyError):
    """Image is not a cycle (connected, every vertex of degree 2, length >= 4)."""


class Unclassifiable(DigitalTopologyError):
    """A cycle self-map fits none of the expected classes."""


class NotAValidTriple(DigitalTopologyError):
    """Cycle positions do not determine unique shorter arcs covering the cycle."""


class NotAProduct(DigitalTopologyError):
    """Image does not carry the product structure required for the operation."""


class NotAnMMap(DigitalTopologyError):
    """Map is not continuous with displacement bounded by the stated value."""


class EmptySubset(DigitalTopologyError):
    """Operation requires a nonempty subset."""


class InputFileError(DigitalTopologyError):
    """An input file is malformed; the message names the file and field."""
