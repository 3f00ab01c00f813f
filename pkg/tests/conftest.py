import hypothesis
import pytest

from gridloom import PatternCatalog, PatternConfig, extract, ingest_text
from gridloom.grid import Palette

# compiled-kernel warmup and brute-force oracles make per-example deadlines
# noisy; determinism is what matters here
hypothesis.settings.register_profile("gridloom", deadline=None)
hypothesis.settings.load_profile("gridloom")


def text_grid(text: str, palette: Palette | None = None):
    return ingest_text(text, shared=palette if palette is not None else Palette(), allow_new=True)


def catalog_from_text(text: str, n: int = 2, wrap: bool = True):
    grid = text_grid(text)
    cfg = PatternConfig(n=n, wrap_input=wrap)
    catalog = extract(grid, cfg, into=PatternCatalog(n), count_weights=True)
    return grid, catalog


@pytest.fixture
def checker():
    """2x2 checkerboard grid and its pattern catalog (two patterns)."""
    return catalog_from_text("AB\nBA\n")
