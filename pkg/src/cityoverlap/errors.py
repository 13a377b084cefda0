"""Exception hierarchy shared by all cityoverlap modules."""


class CityNetError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CityNetError, ValueError):
    """Input violates a documented precondition."""


class SelfLoopError(ValidationError):
    """An edge would connect a node to itself."""


class FormatError(ValidationError):
    """A file does not follow its expected layout."""


class NodeLookupError(CityNetError, KeyError):
    """A node label or id is not registered."""

    def __str__(self):
        # KeyError repr-quotes its message; keep it readable.
        return str(self.args[0]) if self.args else ""


class SnapshotStateError(CityNetError):
    """Snapshot mutated after freeze, or read by a metric before freeze."""
