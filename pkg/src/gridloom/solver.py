"""Observe-and-propagate generation over a whitelist of adjacency triples.

The solver places catalog patterns on an out_width x out_height cell grid so
that every horizontally or vertically adjacent pair of patterns is allowed
by the validity whitelist.  Cells start with every positive-weight pattern
possible; the loop repeatedly collapses the lowest-entropy undecided cell to
a weighted random pattern and restores arc consistency by support counting.
A contradiction (some cell losing its last pattern) aborts the attempt and
the solve restarts with a derived seed, up to ``max_restarts`` extra tries.

The hot loop lives in a kernel (compiled extension with a pure-Python
fallback, see ``gridloom.kernel``); this module builds kernel inputs from a
catalog plus validity set, wraps the restart policy, and offers the
inspection hooks the property tests rely on (support recounts, stepping).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .catalog import canonical_form, digest, export_catalog
from .errors import ConfigError
from .kernel import STATUS_SOLVED, select_kernel
from .rng import mix

SOLVED = "solved"
CONTRADICTION = "contradiction"


@dataclass(frozen=True)
class SolverConfig:
    """Output-grid shape and run parameters.

    ``out_width``/``out_height`` are pattern-grid cells; the rendered image
    has the same dimensions because each cell contributes its pattern's
    center tile.  ``wrap_output`` makes the output toroidal (the default:
    edge cells constrain across the seam instead of being under-constrained).
    Attempt i of a solve uses the derived seed mix(seed, i).
    """

    out_width: int
    out_height: int
    wrap_output: bool = True
    seed: int = 0
    max_restarts: int = 9

    def __post_init__(self):
        if self.out_width < 1 or self.out_height < 1:
            raise ConfigError("output dimensions must be at least 1x1")
        if self.max_restarts < 0:
            raise ConfigError("max_restarts must be non-negative")


@dataclass(frozen=True)
class SolveStats:
    observations: int
    propagations: int
    restarts: int
    attempts: int
    wall_time: float
    backend: str


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solve: a decided pattern grid, or a contradiction report
    after the restart budget ran out."""

    status: str
    width: int
    height: int
    wrap: bool
    seed: int
    pattern_ids: Optional[tuple]
    failing_cell: Optional[int]
    stats: SolveStats

    @property
    def solved(self):
        return self.status == SOLVED

    def rows(self):
        ids = self.pattern_ids
        return [
            list(ids[y * self.width : (y + 1) * self.width])
            for y in range(self.height)
        ]


def _compat_csr(catalog, valid, weights):
    """CSR adjacency lists over eligible (positive-weight) patterns only.

    compat[p*4+d] lists every eligible q with (p, d, q) in the whitelist;
    zero-weight patterns take no part in solving.
    """
    P = len(catalog.patterns)
    lists = [[] for _ in range(P * 4)]
    for a, d, b in valid.triples:
        if weights[a] > 0 and weights[b] > 0:
            lists[a * 4 + d].append(b)
    flat = []
    off = [0]
    for entry in lists:
        entry.sort()
        flat.extend(entry)
        off.append(len(flat))
    return flat, off


class Wave:
    """Per-cell domains plus support counters, bound to one kernel instance.

    Construction performs the initial arc-consistency sweep for attempt 0
    (seed mix(cfg.seed, 0)), so domains and supports are inspectable right
    away.  ``observe``/``propagate`` step the solve manually; ``reset``
    rewinds to a fresh attempt with a new derived seed.
    """

    def __init__(self, catalog, valid, cfg, backend=None):
        if not catalog.patterns:
            raise ConfigError("cannot solve from an empty catalog")
        weights = list(catalog.weights)
        if not any(w > 0 for w in weights):
            raise ConfigError("catalog has no patterns with positive weight")
        self.catalog = catalog
        self.valid = valid
        self.cfg = cfg
        flat, off = _compat_csr(catalog, valid, weights)
        kernel_cls = select_kernel(backend)
        self.kernel = kernel_cls(
            cfg.out_width, cfg.out_height, cfg.wrap_output, weights, flat, off
        )
        self.kernel.reset(mix(cfg.seed, 0))

    @property
    def backend(self):
        return self.kernel.backend

    @property
    def contradiction(self):
        return self.kernel.contradiction

    @property
    def contradiction_cell(self):
        return self.kernel.contradiction_cell

    def eligible(self):
        return [p for p, w in enumerate(self.catalog.weights) if w > 0]

    def reset(self, attempt_seed):
        return self.kernel.reset(attempt_seed)

    def observe(self):
        return self.kernel.observe()

    def propagate(self):
        return self.kernel.propagate()

    def domains(self):
        return self.kernel.domain_mask()

    def support_counts(self):
        return self.kernel.support_counts()

    def entropy_values(self):
        return self.kernel.entropy_values()

    def remaining_counts(self):
        return self.kernel.remaining_counts()

    def recount_support(self):
        """From-scratch support recount over current domains; shaped like
        support_counts() restricted to eligible patterns.

        recount[c][p][d] = -1 when cell c has no d-neighbor, else the number
        of patterns q still possible at that neighbor with (p, d, q) in the
        whitelist.  The incremental counters must match this exactly at any
        pause point.
        """
        k = self.kernel
        domains = self.domains()
        weights = self.catalog.weights
        P = len(weights)
        allowed = [set() for _ in range(P * 4)]
        for a, d, b in self.valid.triples:
            if weights[a] > 0 and weights[b] > 0:
                allowed[a * 4 + d].add(b)
        out = []
        for c in range(k.num_cells):
            per_cell = {}
            for p in range(P):
                if weights[p] <= 0:
                    continue
                row = []
                for d in range(4):
                    nb = k.neighbor(c, d)
                    if nb < 0:
                        row.append(-1)
                    else:
                        row.append(
                            sum(1 for q in allowed[p * 4 + d] if domains[nb][q])
                        )
                per_cell[p] = row
            out.append(per_cell)
        return out


def initialize(catalog, valid, cfg, backend=None):
    """Build a Wave ready for stepping (the solve loop uses this too)."""
    return Wave(catalog, valid, cfg, backend=backend)


def solve(catalog, valid, cfg, backend=None):
    """Run up to max_restarts+1 seeded attempts; first solved grid wins.

    Deterministic: the attempt seeds are mix(cfg.seed, i), so the same
    inputs and seed reproduce the identical result on either kernel backend.
    Stats accumulate across attempts.
    """
    wave = Wave(catalog, valid, cfg, backend=backend)
    kernel = wave.kernel
    observations = 0
    propagations = 0
    start = time.perf_counter()
    attempts = 0
    for i in range(cfg.max_restarts + 1):
        status = kernel.run_attempt(mix(cfg.seed, i))
        attempts += 1
        observations += kernel.observations
        propagations += kernel.propagations
        if status == STATUS_SOLVED:
            stats = SolveStats(
                observations=observations,
                propagations=propagations,
                restarts=attempts - 1,
                attempts=attempts,
                wall_time=time.perf_counter() - start,
                backend=kernel.backend,
            )
            return SolveResult(
                status=SOLVED,
                width=cfg.out_width,
                height=cfg.out_height,
                wrap=cfg.wrap_output,
                seed=cfg.seed,
                pattern_ids=tuple(kernel.result_ids()),
                failing_cell=None,
                stats=stats,
            )
    stats = SolveStats(
        observations=observations,
        propagations=propagations,
        restarts=attempts - 1,
        attempts=attempts,
        wall_time=time.perf_counter() - start,
        backend=kernel.backend,
    )
    return SolveResult(
        status=CONTRADICTION,
        width=cfg.out_width,
        height=cfg.out_height,
        wrap=cfg.wrap_output,
        seed=cfg.seed,
        pattern_ids=None,
        failing_cell=kernel.contradiction_cell,
        stats=stats,
    )


def check_soundness(pattern_ids, width, height, wrap, valid):
    """Exhaustively scan a decided pattern grid for whitelist violations.

    Returns a list of (cell, direction, a, b) for every ordered adjacent
    pair not in the whitelist; empty list means the output is sound.
    """
    from .adjacency import DX, DY

    violations = []
    for c, a in enumerate(pattern_ids):
        x, y = c % width, c // width
        for d in range(4):
            nx, ny = x + DX[d], y + DY[d]
            if wrap:
                nx, ny = nx % width, ny % height
            elif not (0 <= nx < width and 0 <= ny < height):
                continue
            b = pattern_ids[ny * width + nx]
            if not valid.allows(a, d, b):
                violations.append((c, d, a, b))
    return violations


def render_result(result, catalog, palette):
    """Rendered TileGrid of a solved result (center tile per cell)."""
    from .catalog import render

    if not result.solved:
        raise ConfigError("cannot render an unsolved result")
    return render(result.rows(), catalog, palette)


def grid_document(result, catalog, palette):
    """JSON-ready document for a solved pattern grid.

    Ids are canonical catalog ranks (the id space of the catalog/validity
    exports), so a consumer can check the grid against an exported validity
    document without access to in-memory ids.
    """
    if not result.solved:
        raise ConfigError("cannot export an unsolved result")
    _, _, _, id_remap = canonical_form(catalog, palette)
    return {
        "version": 1,
        "kind": "pattern-grid",
        "width": result.width,
        "height": result.height,
        "wrap": result.wrap,
        "seed": result.seed,
        "cells": [id_remap[p] for p in result.pattern_ids],
        "catalog_digest": digest(export_catalog(catalog, palette)),
    }


def stats_text(result):
    """One-line key=value stats string for logs and benchmarks."""
    s = result.stats
    parts = [
        f"status={result.status}",
        f"seed={result.seed}",
        f"size={result.width}x{result.height}",
        f"observations={s.observations}",
        f"propagations={s.propagations}",
        f"restarts={s.restarts}",
        f"attempts={s.attempts}",
        f"wall_ms={s.wall_time * 1000.0:.3f}",
        f"backend={s.backend}",
    ]
    if result.failing_cell is not None:
        parts.append(f"failing_cell={result.failing_cell}")
    return " ".join(parts)
