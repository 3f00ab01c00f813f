"""N-by-N pattern extraction, classification, and rendering.

The catalog is a bidirectional map between small tile neighborhoods and
dense integer ids, with occurrence weights collected from positive example
grids.  Classification is an exact lookup: a neighborhood never seen during
extraction has no id, which is what makes unseen arrangements impossible to
place later.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import BoundsError, CatalogError, ConfigError
from .grid import Palette, TileGrid

ROTATIONS = "rotations"
REFLECTIONS = "reflections"


@dataclass(frozen=True)
class PatternConfig:
    """How neighborhoods are read off example grids."""

    n: int = 3
    wrap_input: bool = True
    symmetry: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"pattern size must be >= 1, got {self.n}")
        bad = set(self.symmetry) - {ROTATIONS, REFLECTIONS}
        if bad:
            raise ConfigError(f"unknown symmetry options: {sorted(bad)}")
        object.__setattr__(self, "symmetry", frozenset(self.symmetry))


def _rotate(tiles: tuple, n: int) -> tuple:
    # 90 degrees clockwise: out[y][x] = in[n-1-x][y]
    return tuple(tiles[(n - 1 - x) * n + y] for y in range(n) for x in range(n))


def _reflect(tiles: tuple, n: int) -> tuple:
    # horizontal mirror: out[y][x] = in[y][n-1-x]
    return tuple(tiles[y * n + (n - 1 - x)] for y in range(n) for x in range(n))


def symmetry_variants(tiles: tuple, n: int, symmetry: frozenset) -> list:
    """All symmetry images of a neighborhood under the configured subgroup,
    identity first.  Coinciding images are kept (each occurrence of each
    image counts toward weight, so symmetric patterns weigh more)."""
    variants = [tiles]
    if ROTATIONS in symmetry:
        cur = tiles
        for _ in range(3):
            cur = _rotate(cur, n)
            variants.append(cur)
    if REFLECTIONS in symmetry:
        variants.extend(_reflect(v, n) for v in list(variants))
    return variants


class PatternCatalog:
    """Pattern <-> id map plus per-pattern occurrence weights."""

    def __init__(self, n: int):
        self.n = n
        self.patterns: list[tuple] = []
        self.weights: list[int] = []
        self.index: dict = {}

    def __len__(self) -> int:
        return len(self.patterns)

    def id_of(self, tiles: tuple) -> int | None:
        return self.index.get(tiles)

    def add(self, tiles: tuple, weight: int) -> int:
        pid = self.index.get(tiles)
        if pid is None:
            pid = len(self.patterns)
            self.patterns.append(tiles)
            self.weights.append(0)
            self.index[tiles] = pid
        self.weights[pid] += weight
        return pid

    def tiles_of(self, pid: int) -> tuple:
        if not 0 <= pid < len(self.patterns):
            raise CatalogError(f"pattern id {pid} not in catalog of size {len(self.patterns)}")
        return self.patterns[pid]

    def center_tile(self, pid: int) -> int:
        c = self.n // 2
        return self.tiles_of(pid)[c * self.n + c]


def window(grid: TileGrid, x: int, y: int, n: int, wrap: bool) -> tuple:
    """The n x n neighborhood whose top-left corner is (x, y)."""
    w, h, cells = grid.width, grid.height, grid.cells
    if wrap:
        return tuple(
            cells[((y + dy) % h) * w + ((x + dx) % w)] for dy in range(n) for dx in range(n)
        )
    if x < 0 or y < 0 or x + n > w or y + n > h:
        raise BoundsError(f"window at ({x},{y}) size {n} exceeds grid {w}x{h}")
    return tuple(cells[(y + dy) * w + (x + dx)] for dy in range(n) for dx in range(n))


def window_positions(grid: TileGrid, n: int, wrap: bool) -> list:
    """Top-left corners of every window read during extraction."""
    if wrap:
        return [(x, y) for y in range(grid.height) for x in range(grid.width)]
    return [(x, y) for y in range(grid.height - n + 1) for x in range(grid.width - n + 1)]


def extract(
    grid: TileGrid,
    cfg: PatternConfig,
    into: PatternCatalog | None = None,
    count_weights: bool = True,
) -> PatternCatalog:
    """Collect every window of ``grid`` into a catalog.

    Passing ``into`` extends an existing catalog in place without disturbing
    ids already assigned (how multiple examples share one pattern space).
    ``count_weights=False`` registers patterns without granting them any
    generation weight; that is how negative-only neighborhoods become
    expressible without ever being placed by the generator.
    """
    n = cfg.n
    if n > grid.width or n > grid.height:
        raise ConfigError(
            f"pattern size {n} too large for {grid.width}x{grid.height} grid"
        )
    catalog = into if into is not None else PatternCatalog(n)
    if catalog.n != n:
        raise ConfigError(f"catalog holds {catalog.n}-patterns, config asks for {n}")
    inc = 1 if count_weights else 0
    for x, y in window_positions(grid, n, cfg.wrap_input):
        tiles = window(grid, x, y, n, cfg.wrap_input)
        for variant in symmetry_variants(tiles, n, cfg.symmetry):
            catalog.add(variant, inc)
    return catalog


def classify(
    grid: TileGrid, pos: tuple, cfg: PatternConfig, catalog: PatternCatalog
) -> int | None:
    """Id of the window at ``pos``, or None when the arrangement was never
    extracted (exact-lookup classification)."""
    x, y = pos
    return catalog.id_of(window(grid, x, y, cfg.n, cfg.wrap_input))


def render(pattern_grid: list, catalog: PatternCatalog, palette: Palette) -> TileGrid:
    """Turn a 2D grid of pattern ids into tiles via the center-tile rule.

    ``pattern_grid`` is a list of rows of ids; the output has the same
    dimensions, each cell the center tile (index n//2, n//2) of its pattern.
    """
    height = len(pattern_grid)
    if height == 0:
        raise ConfigError("pattern grid is empty")
    width = len(pattern_grid[0])
    cells = []
    for row in pattern_grid:
        if len(row) != width:
            raise ConfigError("pattern grid rows have unequal lengths")
        for pid in row:
            cells.append(catalog.center_tile(pid))
    return TileGrid(width, height, tuple(cells), palette)


# -- canonical export -------------------------------------------------------
#
# Runtime ids depend on extraction order.  Exports re-number patterns into a
# canonical order (palette sorted by entry value, patterns sorted by their
# re-numbered tiles) so that training on the same example set in any order
# produces byte-identical files.


def _canonical_palette(palette: Palette) -> tuple[list, dict]:
    order = sorted(range(len(palette.entries)), key=lambda i: palette.entries[i])
    remap = {old: new for new, old in enumerate(order)}
    entries = [palette.entries[i] for i in order]
    return entries, remap


def canonical_form(catalog: PatternCatalog, palette: Palette):
    """(palette entries, patterns, weights, id remap) in canonical order."""
    entries, tile_remap = _canonical_palette(palette)
    keyed = sorted(
        (tuple(tile_remap[t] for t in catalog.patterns[pid]), pid)
        for pid in range(len(catalog.patterns))
    )
    patterns = [k for k, _ in keyed]
    weights = [catalog.weights[pid] for _, pid in keyed]
    id_remap = {pid: new for new, (_, pid) in enumerate(keyed)}
    return entries, patterns, weights, id_remap


def _palette_json(entries: list) -> dict:
    if entries and isinstance(entries[0], tuple):
        return {"kind": "color", "entries": [list(e) for e in entries]}
    return {"kind": "symbol", "entries": list(entries)}


def export_catalog(catalog: PatternCatalog, palette: Palette) -> dict:
    entries, patterns, weights, _ = canonical_form(catalog, palette)
    return {
        "version": 1,
        "n": catalog.n,
        "palette": _palette_json(entries),
        "patterns": [
            {"tiles": list(tiles), "weight": w} for tiles, w in zip(patterns, weights)
        ],
    }


def canonical_bytes(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def digest(doc: dict) -> str:
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()


def import_catalog(doc: dict) -> tuple[PatternCatalog, Palette]:
    if doc.get("version") != 1:
        raise ConfigError(f"unsupported catalog export version: {doc.get('version')}")
    pal = Palette()
    for e in doc["palette"]["entries"]:
        pal.add(tuple(e) if doc["palette"]["kind"] == "color" else e)
    catalog = PatternCatalog(doc["n"])
    for p in doc["patterns"]:
        catalog.add(tuple(p["tiles"]), p["weight"])
    return catalog, pal
