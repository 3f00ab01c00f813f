"""gridloom: example-driven tile grid generation with teachable adjacency rules.

Train a pattern catalog and an adjacency whitelist from labeled example
images (positive and negative), then generate new grids by observe-and-
propagate constraint solving.  The teaching loop: generate a portfolio,
crop what is wrong into negative examples, retrain, regenerate.
"""

from .adjacency import (
    DIR_NAMES,
    DOWN,
    LEFT,
    OPPOSITE,
    RIGHT,
    UP,
    AdjacencySets,
    LearningStrategy,
    ValiditySet,
    agrees,
    compute_legal,
    compute_negative,
    compute_observed,
    diff_validity,
    export_validity,
    learn,
)
from .catalog import (
    PatternCatalog,
    PatternConfig,
    canonical_form,
    classify,
    digest,
    export_catalog,
    extract,
    import_catalog,
    render,
    window,
)
from .errors import (
    BoundsError,
    CatalogError,
    ConfigError,
    ExampleSizeError,
    FormatError,
    GridloomError,
    RenderError,
    StaleModelError,
    TrainingError,
    UnknownTileError,
)
from .grid import (
    Palette,
    TileGrid,
    crop,
    emit_image,
    emit_text,
    ingest_image,
    ingest_text,
)
from .kernel import kernel_backend, select_kernel
from .session import Example, Portfolio, TeachingSession
from .solver import (
    SolveResult,
    SolverConfig,
    Wave,
    check_soundness,
    grid_document,
    initialize,
    render_result,
    solve,
    stats_text,
)

__version__ = "0.1.0"
