"""Tile grids, palettes, and the image/text codecs.

Coordinate convention used by the whole package: x grows right, y grows
down, origin at the top left, row-major storage (``cells[y * width + x]``).
One pixel is one tile; a pixel's RGBA value (alpha included) is its tile
identity.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import BoundsError, FormatError, RenderError, UnknownTileError

ColorEntry = tuple[int, int, int, int]


class Palette:
    """Ordered set of distinct renderable tiles.

    Entries are either RGBA 4-tuples (color palettes) or single-character
    strings (text palettes).  Order is first-seen ingestion order and ids
    never change once assigned, so multiple example images can share one
    palette safely.
    """

    def __init__(self, entries=()):
        self.entries: list = []
        self._index: dict = {}
        for e in entries:
            self.add(e)

    def add(self, entry) -> int:
        """Return the id of ``entry``, appending it if new."""
        existing = self._index.get(entry)
        if existing is not None:
            return existing
        tid = len(self.entries)
        self.entries.append(entry)
        self._index[entry] = tid
        return tid

    def lookup(self, entry) -> int | None:
        return self._index.get(entry)

    @property
    def kind(self) -> str:
        """'color', 'symbol', or 'empty' before any entry exists."""
        if not self.entries:
            return "empty"
        return "color" if isinstance(self.entries[0], tuple) else "symbol"

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Palette) and self.entries == other.entries

    def __repr__(self) -> str:
        return f"Palette({len(self.entries)} {self.kind} entries)"


@dataclass(frozen=True, eq=True)
class TileGrid:
    """2D grid of palette ids. Immutable after construction."""

    width: int
    height: int
    cells: tuple
    palette: Palette

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise FormatError(f"grid dimensions must be >= 1, got {self.width}x{self.height}")
        if len(self.cells) != self.width * self.height:
            raise FormatError(
                f"cell count {len(self.cells)} does not match {self.width}x{self.height}"
            )

    def at(self, x: int, y: int) -> int:
        return self.cells[y * self.width + x]

    def rows(self):
        w = self.width
        for y in range(self.height):
            yield self.cells[y * w : (y + 1) * w]

    def content_key(self) -> tuple:
        """Palette-independent content identity (resolved entries)."""
        return (self.width, self.height, tuple(self.palette.entries[c] for c in self.cells))


def crop(grid: TileGrid, x: int, y: int, w: int, h: int) -> TileGrid:
    """Copy a sub-rectangle, sharing the source palette."""
    if w < 1 or h < 1:
        raise BoundsError(f"crop rectangle must be at least 1x1, got {w}x{h}")
    if x < 0 or y < 0 or x + w > grid.width or y + h > grid.height:
        raise BoundsError(
            f"crop rectangle ({x},{y},{w},{h}) exceeds grid {grid.width}x{grid.height}"
        )
    cells = []
    for yy in range(y, y + h):
        cells.extend(grid.cells[yy * grid.width + x : yy * grid.width + x + w])
    return TileGrid(w, h, tuple(cells), grid.palette)


def ingest_image(data: bytes, shared: Palette | None = None, allow_new: bool = True) -> TileGrid:
    """Decode a PNG byte stream into a TileGrid, one tile per pixel.

    With a ``shared`` palette, ids already assigned stay stable; new colors
    are appended unless ``allow_new`` is false, in which case an unseen
    color raises UnknownTileError naming the offending pixel.
    """
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise FormatError(f"cannot decode image: {exc}") from None
    rgba = np.asarray(img.convert("RGBA"), dtype=np.uint8)
    h, w = rgba.shape[:2]

    palette = shared if shared is not None else Palette()
    if palette.entries and palette.kind != "color":
        raise UnknownTileError("shared palette holds symbols, not colors")

    # row-major scan keeps first-seen palette order deterministic
    cells = []
    local: dict = {}
    flat = rgba.reshape(-1, 4)
    for i in range(flat.shape[0]):
        color = (int(flat[i, 0]), int(flat[i, 1]), int(flat[i, 2]), int(flat[i, 3]))
        tid = local.get(color)
        if tid is None:
            tid = palette.lookup(color)
            if tid is None:
                if not allow_new:
                    raise UnknownTileError(
                        f"color {color} at pixel ({i % w},{i // w}) is not in the shared palette"
                    )
                tid = palette.add(color)
            local[color] = tid
        cells.append(tid)
    return TileGrid(w, h, tuple(cells), palette)


def ingest_text(text: str, shared: Palette | None = None, allow_new: bool = True) -> TileGrid:
    """Parse a character grid (UTF-8 lines), one tile per character."""
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        raise FormatError("empty text grid")
    lines = text.split("\n")
    width = len(lines[0])
    for i, line in enumerate(lines):
        if len(line) != width:
            raise FormatError(f"ragged text grid: line {i + 1} has length {len(line)}, expected {width}")
    if width == 0:
        raise FormatError("empty text grid")

    palette = shared if shared is not None else Palette()
    if palette.entries and palette.kind != "symbol":
        raise UnknownTileError("shared palette holds colors, not symbols")

    cells = []
    for y, line in enumerate(lines):
        for x, ch in enumerate(line):
            tid = palette.lookup(ch)
            if tid is None:
                if not allow_new:
                    raise UnknownTileError(f"symbol {ch!r} at ({x},{y}) is not in the shared palette")
                tid = palette.add(ch)
            cells.append(tid)
    return TileGrid(width, len(lines), tuple(cells), palette)


def emit_text(grid: TileGrid) -> str:
    """Encode a symbol-palette grid as newline-separated lines."""
    if grid.palette.kind != "symbol":
        raise RenderError("palette entries are not symbols; cannot render as text")
    entries = grid.palette.entries
    return "\n".join("".join(entries[c] for c in row) for row in grid.rows()) + "\n"


def emit_image(grid: TileGrid) -> bytes:
    """Encode a color-palette grid as an 8-bit RGBA PNG.

    Round-trip law: ``ingest_image(emit_image(g), g.palette) == g``.
    """
    if grid.palette.kind != "color":
        raise RenderError("palette entries are not colors; cannot render as PNG")
    lut = np.asarray(grid.palette.entries, dtype=np.uint8)
    idx = np.asarray(grid.cells, dtype=np.int64).reshape(grid.height, grid.width)
    rgba = lut[idx]
    img = Image.fromarray(rgba, mode="RGBA")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()
