"""Exception types shared across the engine."""


class NbBookError(Exception):
    """Base class for all engine errors."""


class MalformedJson(NbBookError):
    """Input bytes are not a JSON document."""


class UnsupportedFormat(NbBookError):
    """Notebook format major version is not 4."""


class MalformedConfig(NbBookError):
    """A catalog or pattern config file is structurally invalid."""


class InvalidCategoryCode(MalformedConfig):
    """A config entry names a category code outside the valid set."""


class DuplicatePurpose(MalformedConfig):
    """Two pattern entries share a purpose name."""


class AnchorOutOfBounds(NbBookError):
    """Annotation anchor offsets fall outside the cell text."""


class UnknownCell(NbBookError):
    """Annotation refers to a cell the notebook does not have."""


class MalformedStoreFile(NbBookError):
    """Annotation sidecar file cannot be read."""


class InvalidTiling(NbBookError):
    """Chapter ranges do not partition the notebook's cells."""


class InvalidViewState(NbBookError):
    """View state references chapters or sections the overlay lacks."""


class UnknownFormat(NbBookError):
    """Requested export format is not supported."""


class MalformedSnapshot(NbBookError):
    """Snapshot bytes cannot be parsed back into a view state."""


class VersionMismatch(NbBookError):
    """Snapshot was produced by a newer generator than this reader."""
