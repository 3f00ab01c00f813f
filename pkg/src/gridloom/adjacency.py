"""Adjacency rule learning: overlap legality, observed/negative sets, and
the whitelist strategies.

An adjacency rule is a triple ``(a, direction, b)``: pattern ``b`` may sit
one cell away from pattern ``a`` in one of the four cardinal directions.
Every set built here is closed under inversion: ``(a, d, b)`` is stored iff
``(b, -d, a)`` is.

Three whitelist strategies are supported:

* ``mgg`` -- allow every overlap-compatible pair (the most general choice);
* ``lgg`` -- allow only pairs demonstrated in positive examples (the least
  general choice; outputs can only rearrange what the sources literally show);
* ``mgg-neg`` -- most general minus the pairs demonstrated by negative
  examples and not endorsed by any positive one.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .catalog import PatternCatalog, _palette_json, canonical_form, window, window_positions
from .errors import CatalogError, ConfigError
from .grid import Palette, TileGrid

log = logging.getLogger(__name__)

# direction indices; y grows downward
RIGHT, DOWN, LEFT, UP = 0, 1, 2, 3
DX = (1, 0, -1, 0)
DY = (0, 1, 0, -1)
OPPOSITE = (2, 3, 0, 1)
DIR_NAMES = ("right", "down", "left", "up")
DIR_INDEX = {name: i for i, name in enumerate(DIR_NAMES)}


class LearningStrategy(str, Enum):
    MGG = "mgg"
    LGG = "lgg"
    MGG_MINUS_NEGATIVES = "mgg-neg"


def agrees(a: tuple, b: tuple, n: int, direction: int) -> bool:
    """True iff patterns ``a`` and ``b`` match on their overlap region when
    ``b`` is displaced one cell in ``direction`` from ``a``:
    ``a[x+dx, y+dy] == b[x, y]`` for every in-range (x, y)."""
    if len(a) != n * n or len(b) != n * n:
        raise ConfigError("pattern size mismatch in overlap test")
    dx, dy = DX[direction], DY[direction]
    for y in range(n):
        sy = y + dy
        if not 0 <= sy < n:
            continue
        for x in range(n):
            sx = x + dx
            if not 0 <= sx < n:
                continue
            if a[sy * n + sx] != b[y * n + x]:
                return False
    return True


def compute_legal(catalog: PatternCatalog) -> frozenset:
    """All overlap-compatible triples over the catalog (vectorized; the
    scalar reference is ``agrees``)."""
    count = len(catalog)
    if count == 0:
        raise ConfigError("cannot compute adjacencies of an empty catalog")
    n = catalog.n
    pats = np.asarray(catalog.patterns, dtype=np.int32).reshape(count, n, n)
    triples = set()
    if n == 1:
        # no overlap to test: every pair is compatible in every direction
        for a in range(count):
            for b in range(count):
                for d in range(4):
                    triples.add((a, d, b))
        return frozenset(triples)
    # b one step right of a: a's right n-1 columns equal b's left n-1 columns
    a_part = pats[:, :, 1:].reshape(count, -1)
    b_part = pats[:, :, :-1].reshape(count, -1)
    match_r = (a_part[:, None, :] == b_part[None, :, :]).all(axis=2)
    # b one step down from a: a's bottom n-1 rows equal b's top n-1 rows
    a_part = pats[:, 1:, :].reshape(count, -1)
    b_part = pats[:, :-1, :].reshape(count, -1)
    match_d = (a_part[:, None, :] == b_part[None, :, :]).all(axis=2)
    for a, b in zip(*np.nonzero(match_r)):
        a, b = int(a), int(b)
        triples.add((a, RIGHT, b))
        triples.add((b, LEFT, a))
    for a, b in zip(*np.nonzero(match_d)):
        a, b = int(a), int(b)
        triples.add((a, DOWN, b))
        triples.add((b, UP, a))
    return frozenset(triples)


def _classify_grid(grid: TileGrid, n: int, wrap: bool, catalog: PatternCatalog):
    """Pattern ids for every window position; raises if any window is
    missing from the catalog (cannot happen for grids that were extracted)."""
    ids = {}
    for x, y in window_positions(grid, n, wrap):
        pid = catalog.id_of(window(grid, x, y, n, wrap))
        if pid is None:
            raise CatalogError(f"internal: window at ({x},{y}) missing from catalog")
        ids[(x, y)] = pid
    return ids


def observed_in(grid: TileGrid, n: int, wrap: bool, catalog: PatternCatalog) -> set:
    """Triples demonstrated by one grid (inversion-closed)."""
    if n > grid.width or n > grid.height:
        raise ConfigError(f"pattern size {n} too large for {grid.width}x{grid.height} example")
    if not wrap and grid.width == n and grid.height == n:
        # a single window demonstrates no adjacency
        return set()
    ids = _classify_grid(grid, n, wrap, catalog)
    triples = set()
    if wrap:
        w, h = grid.width, grid.height
        for (x, y), a in ids.items():
            b = ids[((x + 1) % w, y)]
            triples.add((a, RIGHT, b))
            triples.add((b, LEFT, a))
            b = ids[(x, (y + 1) % h)]
            triples.add((a, DOWN, b))
            triples.add((b, UP, a))
    else:
        for (x, y), a in ids.items():
            if (x + 1, y) in ids:
                b = ids[(x + 1, y)]
                triples.add((a, RIGHT, b))
                triples.add((b, LEFT, a))
            if (x, y + 1) in ids:
                b = ids[(x, y + 1)]
                triples.add((a, DOWN, b))
                triples.add((b, UP, a))
    return triples


def compute_observed(examples, catalog: PatternCatalog, n: int) -> frozenset:
    """Union of demonstrated triples over ``(grid, wrap)`` example pairs."""
    triples = set()
    for grid, wrap in examples:
        triples |= observed_in(grid, n, wrap, catalog)
    return frozenset(triples)


def compute_negative(
    negatives, positives_observed: frozenset, catalog: PatternCatalog, n: int
) -> frozenset:
    """Triples demonstrated by negative examples minus those any positive
    example endorses.  The subtraction keeps a negative crop of an otherwise
    fine work sample from poisoning adjacencies the positives vouch for."""
    for grid, wrap in negatives:
        too_small = grid.width < n or grid.height < n
        if too_small or (not wrap and grid.width == n and grid.height == n):
            raise ConfigError(
                f"negative example {grid.width}x{grid.height} cannot demonstrate "
                f"an adjacency; a {n}x{n + 1} region is the minimum"
            )
    demonstrated = compute_observed(negatives, catalog, n)
    return frozenset(demonstrated - positives_observed)


@dataclass(frozen=True)
class AdjacencySets:
    """The four learned relations; ``valid`` is what the solver enforces."""

    legal: frozenset
    observed: frozenset
    negative: frozenset
    valid: frozenset


@dataclass(frozen=True)
class ValiditySet:
    strategy: LearningStrategy
    triples: frozenset

    def allows(self, a: int, direction: int, b: int) -> bool:
        return (a, direction, b) in self.triples


def learn(
    legal: frozenset,
    observed: frozenset,
    negative: frozenset,
    strategy: LearningStrategy,
    catalog: PatternCatalog,
) -> tuple[AdjacencySets, list]:
    """Produce the whitelist for ``strategy`` plus starvation diagnostics.

    A pattern is starved when it has generation weight but no allowed
    neighbor in some direction; generation can still run (the solver
    handles the fallout), so this is a warning, not an error.
    """
    strategy = LearningStrategy(strategy)
    if strategy is LearningStrategy.MGG:
        valid = legal
    elif strategy is LearningStrategy.LGG:
        valid = observed
    else:
        valid = frozenset(legal - negative)

    starved = []
    eligible = {pid for pid, wt in enumerate(catalog.weights) if wt > 0}
    allowed_any = {
        (a, d) for (a, d, b) in valid if b in eligible
    }
    for pid in sorted(eligible):
        for d in range(4):
            if (pid, d) not in allowed_any:
                starved.append((pid, DIR_NAMES[d]))
    if starved:
        log.warning(
            "%d pattern/direction pairs have no allowed neighbor: %s",
            len(starved),
            starved[:10],
        )
    sets = AdjacencySets(legal=legal, observed=observed, negative=negative, valid=valid)
    return sets, starved


# -- export / diff -----------------------------------------------------------


def export_validity(
    valid: ValiditySet, catalog: PatternCatalog, palette: Palette
) -> dict:
    """Canonical JSON document: strategy plus the sorted triple list, with
    the pattern table inline so the file stands on its own."""
    entries, patterns, _, id_remap = canonical_form(catalog, palette)
    triples = sorted(
        (id_remap[a], d, id_remap[b]) for a, d, b in valid.triples
    )
    return {
        "version": 1,
        "strategy": valid.strategy.value,
        "n": catalog.n,
        "palette": _palette_json(entries),
        "patterns": [list(p) for p in patterns],
        "triples": [[a, DIR_NAMES[d], b] for a, d, b in triples],
    }


def content_triples(doc: dict) -> set:
    """Triples of a validity export resolved to palette-entry content, so
    exports from different training runs (different id spaces) compare."""
    pal = doc["palette"]["entries"]
    resolve = lambda tiles: tuple(
        tuple(pal[t]) if isinstance(pal[t], list) else pal[t] for t in tiles
    )
    pats = [resolve(p) for p in doc["patterns"]]
    return {(pats[a], d, pats[b]) for a, d, b in doc["triples"]}


def pattern_label(content: tuple) -> str:
    """Short stable digest of one pattern's resolved content."""
    return hashlib.sha256(json.dumps(list(content)).encode()).hexdigest()[:12]


def diff_validity(doc_a: dict, doc_b: dict) -> dict:
    """Content-level triple diff between two validity exports."""
    if doc_a.get("n") != doc_b.get("n"):
        raise ConfigError("cannot diff validity exports with different pattern sizes")
    ta, tb = content_triples(doc_a), content_triples(doc_b)
    added = sorted(tb - ta)
    removed = sorted(ta - tb)
    to_json = lambda trip: {
        "a": [list(t) if isinstance(t, tuple) else t for t in trip[0]],
        "direction": trip[1],
        "b": [list(t) if isinstance(t, tuple) else t for t in trip[2]],
    }
    return {
        "n": doc_a["n"],
        "added": [to_json(t) for t in added],
        "removed": [to_json(t) for t in removed],
    }


def format_diff_text(diff: dict) -> str:
    """Stable plain-text rendering of a diff (CI snapshot friendly)."""
    lines = [f"added {len(diff['added'])}", f"removed {len(diff['removed'])}"]
    legend = {}

    def line(prefix, item):
        a = tuple(tuple(t) if isinstance(t, list) else t for t in item["a"])
        b = tuple(tuple(t) if isinstance(t, list) else t for t in item["b"])
        la, lb = pattern_label(a), pattern_label(b)
        legend[la], legend[lb] = a, b
        return f"{prefix} {la} {item['direction']} {lb}"

    lines.extend(line("+", item) for item in diff["added"])
    lines.extend(line("-", item) for item in diff["removed"])
    if legend:
        lines.append("legend:")
        for label in sorted(legend):
            lines.append(f"{label} = {json.dumps([list(t) if isinstance(t, tuple) else t for t in legend[label]])}")
    return "\n".join(lines) + "\n"
