"""Exception types shared across the package."""


class GridloomError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(GridloomError):
    """Malformed input file (bad PNG, ragged text grid, empty input)."""


class UnknownTileError(GridloomError):
    """A tile/color is not present in a sealed shared palette."""


class RenderError(GridloomError):
    """A palette entry cannot be rendered in the requested output format."""


class ConfigError(GridloomError):
    """Invalid configuration (pattern size too large, bad dimensions, ...)."""


class BoundsError(GridloomError):
    """A coordinate or rectangle falls outside the grid."""


class CatalogError(GridloomError):
    """A pattern identifier is not valid for the catalog."""


class TrainingError(GridloomError):
    """Training was requested on a session with no positive examples."""


class StaleModelError(GridloomError):
    """Generation was requested but the trained model is out of date."""


class ExampleSizeError(GridloomError):
    """An example grid is too small for its role (negatives must show
    at least one adjacency)."""
