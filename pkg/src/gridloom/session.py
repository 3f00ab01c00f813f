"""Teaching sessions: the generate / critique / retrain loop.

A session owns an ordered set of labeled examples over one shared palette,
the trained model (catalog + adjacency sets + whitelist), and an append-only
history of iterations.  Retraining is a pure function of the example set,
so every history entry's digests can be reproduced by replaying its example
snapshot.

Sessions can live purely in memory or be bound to a directory:

    manifest.json            example listing, config, counters
    examples/e0001.png       example images (or .txt for symbol palettes)
    history.jsonl            one JSON event per retrain / portfolio
    trained/catalog.json     latest canonical catalog export
    trained/validity.json    latest canonical validity export
    trained/validity-0001.json   per-iteration exports (kept for diffs)
    samples/s0001.png|.json  generated work samples + their grid documents

Files are written deterministically; two sessions walked through identical
operations produce byte-identical directories.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path

from .adjacency import (
    LearningStrategy,
    ValiditySet,
    compute_legal,
    compute_negative,
    compute_observed,
    diff_validity,
    export_validity,
    learn,
)
from .catalog import PatternCatalog, PatternConfig, digest, export_catalog, extract
from .errors import (
    ConfigError,
    ExampleSizeError,
    StaleModelError,
    TrainingError,
    UnknownTileError,
)
from .grid import Palette, TileGrid, crop, emit_image, emit_text, ingest_image, ingest_text
from .rng import mix
from .solver import SolverConfig, grid_document, render_result, solve

log = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"
ORIGIN_KINDS = ("authored", "cropped", "imported")


def grid_sha(grid: TileGrid) -> str:
    """Digest of a grid's palette-resolved content (id-space independent)."""
    w, h, entries = grid.content_key()
    payload = [w, h, [list(e) if isinstance(e, tuple) else e for e in entries]]
    return hashlib.sha256(json.dumps(payload, separators=(",", ":")).encode()).hexdigest()


@dataclass(frozen=True)
class Example:
    id: str
    grid: TileGrid
    label: str
    origin: dict
    wrap: bool


@dataclass(frozen=True)
class TrainedModel:
    catalog: PatternCatalog
    sets: object
    valid: ValiditySet
    starved: tuple


class IterationRecord:
    """One retrain: the example snapshot it saw, the resulting digests, and
    the ids of samples generated while it was current."""

    def __init__(self, iteration, snapshot, validity_digest, catalog_digest, validity_doc):
        self.iteration = iteration
        self.snapshot = snapshot
        self.validity_digest = validity_digest
        self.catalog_digest = catalog_digest
        self.validity_doc = validity_doc
        self.sample_ids: list = []


@dataclass(frozen=True)
class PortfolioSample:
    sid: str
    seed: int
    result: object


@dataclass(frozen=True)
class Portfolio:
    iteration: int
    base_seed: int
    samples: tuple


class TeachingSession:
    """Example set + trained model + iteration history, optionally persisted."""

    def __init__(self, pattern_cfg=None, strategy=LearningStrategy.MGG_MINUS_NEGATIVES, root=None):
        self.pattern_cfg = pattern_cfg if pattern_cfg is not None else PatternConfig()
        self.strategy = LearningStrategy(strategy)
        self.palette = Palette()
        self.examples: list = []
        self.history: list = []
        self.model = None
        self.stale = False
        self.iteration = 0
        self.revision = 0
        self.latest_portfolio = None
        self._training = False
        self._next_example = 1
        self._next_sample = 1
        self._sample_grids: dict = {}
        self._sample_docs: dict = {}
        self.root = Path(root) if root is not None else None
        self._persist = self.root is not None
        if self._persist:
            self.root.mkdir(parents=True, exist_ok=True)
            self._write_manifest()

    # -- status ---------------------------------------------------------------

    @property
    def status(self) -> str:
        if self._training:
            return "training"
        if self.model is not None and not self.stale:
            return "fresh"
        return "stale"

    def describe(self) -> dict:
        latest = self.history[-1] if self.history else None
        return {
            "examples": [
                {
                    "id": e.id,
                    "label": e.label,
                    "origin": e.origin,
                    "wrap": e.wrap,
                    "width": e.grid.width,
                    "height": e.grid.height,
                }
                for e in self.examples
            ],
            "training_status": self.status,
            "iteration": self.iteration,
            "revision": self.revision,
            "strategy": self.strategy.value,
            "pattern": {
                "n": self.pattern_cfg.n,
                "wrap_input": self.pattern_cfg.wrap_input,
                "symmetry": sorted(self.pattern_cfg.symmetry),
            },
            "palette_kind": self.palette.kind,
            "validity_digest": latest.validity_digest if latest else None,
            "latest_portfolio": self.latest_portfolio,
        }

    # -- examples ---------------------------------------------------------------

    def _adopt(self, grid: TileGrid) -> TileGrid:
        """Re-express a grid in the session palette (appending new entries)."""
        if grid.palette is self.palette:
            return grid
        if self.palette.kind != "empty" and grid.palette.kind != self.palette.kind:
            raise UnknownTileError(
                f"example palette holds {grid.palette.kind} tiles but the session "
                f"uses {self.palette.kind} tiles"
            )
        entries = grid.palette.entries
        cells = tuple(self.palette.add(entries[c]) for c in grid.cells)
        return TileGrid(grid.width, grid.height, cells, self.palette)

    def _check_size(self, grid: TileGrid, label: str):
        n = self.pattern_cfg.n
        if label == NEGATIVE:
            lo, hi = sorted((grid.width, grid.height))
            if lo < n or hi < n + 1:
                raise ExampleSizeError(
                    f"negative example is {grid.width}x{grid.height}; it must be at "
                    f"least {n}x{n + 1} (or {n + 1}x{n}) tiles to demonstrate an adjacency"
                )
        else:
            if grid.width < n or grid.height < n:
                raise ExampleSizeError(
                    f"positive example is {grid.width}x{grid.height}; it must be at "
                    f"least {n}x{n} tiles to contain a pattern"
                )

    def add_example(self, grid, label, origin=None, wrap=None) -> Example:
        if label not in (POSITIVE, NEGATIVE):
            raise ConfigError(f"label must be 'positive' or 'negative', got {label!r}")
        origin = dict(origin) if origin else {"kind": "authored"}
        if origin.get("kind") not in ORIGIN_KINDS:
            raise ConfigError(f"unknown example origin: {origin.get('kind')!r}")
        grid = self._adopt(grid)
        self._check_size(grid, label)
        if wrap is None:
            # crops and negatives are fragments: wrapping them would fabricate
            # seam adjacencies the author never demonstrated
            wrap = (
                self.pattern_cfg.wrap_input
                if label == POSITIVE and origin["kind"] != "cropped"
                else False
            )
        eid = f"e{self._next_example:04d}"
        self._next_example += 1
        example = Example(id=eid, grid=grid, label=label, origin=origin, wrap=wrap)
        self.examples.append(example)
        self.stale = True
        self.revision += 1
        if self._persist:
            self._write_example_file(example)
            self._write_manifest()
        return example

    def get_example(self, eid: str) -> Example:
        for e in self.examples:
            if e.id == eid:
                return e
        raise KeyError(f"no example with id {eid!r}")

    def remove_example(self, eid: str):
        example = self.get_example(eid)
        self.examples.remove(example)
        self.stale = True
        self.revision += 1
        if self._persist:
            # the image file stays on disk so old history snapshots remain
            # replayable; the manifest simply stops listing it
            self._write_manifest()
        return example

    # -- samples ------------------------------------------------------------------

    def sample_grid(self, sid: str) -> TileGrid:
        grid = self._sample_grids.get(sid)
        if grid is not None:
            return grid
        if self._persist:
            path = self.root / "samples" / f"{sid}.png"
            if path.exists():
                grid = ingest_image(path.read_bytes(), shared=self.palette, allow_new=False)
                self._sample_grids[sid] = grid
                return grid
            path = self.root / "samples" / f"{sid}.txt"
            if path.exists():
                grid = ingest_text(path.read_text(), shared=self.palette, allow_new=False)
                self._sample_grids[sid] = grid
                return grid
        raise KeyError(f"no work sample with id {sid!r}")

    def sample_document(self, sid: str) -> dict:
        doc = self._sample_docs.get(sid)
        if doc is not None:
            return doc
        if self._persist:
            path = self.root / "samples" / f"{sid}.json"
            if path.exists():
                doc = json.loads(path.read_text())
                self._sample_docs[sid] = doc
                return doc
        raise KeyError(f"no work sample with id {sid!r}")

    def sample_image(self, sid: str) -> bytes:
        return emit_image(self.sample_grid(sid))

    def crop_sample(self, sid: str, rect) -> TileGrid:
        x, y, w, h = rect
        return crop(self.sample_grid(sid), x, y, w, h)

    def add_cropped_example(self, sid: str, rect, label: str) -> Example:
        grid = self.crop_sample(sid, rect)
        origin = {"kind": "cropped", "sample": sid, "rect": [int(v) for v in rect]}
        return self.add_example(grid, label, origin=origin)

    # -- training ---------------------------------------------------------------

    def _unique_examples(self):
        """Insertion-ordered examples deduplicated by (label, wrap, content):
        retraining treats the example multiset as a set."""
        seen = set()
        unique = []
        for e in self.examples:
            key = (e.label, e.wrap, grid_sha(e.grid))
            if key not in seen:
                seen.add(key)
                unique.append(e)
        return unique

    def _train(self):
        """Rebuild catalog and adjacency sets from the current examples."""
        unique = self._unique_examples()
        positives = [e for e in unique if e.label == POSITIVE]
        negatives = [e for e in unique if e.label == NEGATIVE]
        if not positives:
            raise TrainingError("cannot train without at least one positive example")
        n = self.pattern_cfg.n
        catalog = PatternCatalog(n)
        for e in positives:
            extract(e.grid, replace(self.pattern_cfg, wrap_input=e.wrap), into=catalog)
        for e in negatives:
            extract(
                e.grid,
                replace(self.pattern_cfg, wrap_input=e.wrap),
                into=catalog,
                count_weights=False,
            )
        legal = compute_legal(catalog)
        observed = compute_observed([(e.grid, e.wrap) for e in positives], catalog, n)
        negative = compute_negative(
            [(e.grid, e.wrap) for e in negatives], observed, catalog, n
        )
        sets, starved = learn(legal, observed, negative, self.strategy, catalog)
        valid = ValiditySet(self.strategy, sets.valid)
        return TrainedModel(catalog=catalog, sets=sets, valid=valid, starved=tuple(starved))

    def _snapshot(self):
        return tuple(
            {"id": e.id, "label": e.label, "wrap": e.wrap, "grid_sha": grid_sha(e.grid)}
            for e in self.examples
        )

    def retrain(self) -> IterationRecord:
        self._training = True
        try:
            model = self._train()
        finally:
            self._training = False
        self.model = model
        self.stale = False
        self.iteration += 1
        self.revision += 1
        validity_doc = export_validity(model.valid, model.catalog, self.palette)
        catalog_doc = export_catalog(model.catalog, self.palette)
        record = IterationRecord(
            iteration=self.iteration,
            snapshot=self._snapshot(),
            validity_digest=digest(validity_doc),
            catalog_digest=digest(catalog_doc),
            validity_doc=validity_doc,
        )
        self.history.append(record)
        if self._persist:
            trained = self.root / "trained"
            trained.mkdir(exist_ok=True)
            _write_json(trained / "catalog.json", catalog_doc)
            _write_json(trained / "validity.json", validity_doc)
            _write_json(trained / f"validity-{record.iteration:04d}.json", validity_doc)
            self._append_history(
                {
                    "event": "retrain",
                    "iteration": record.iteration,
                    "revision": self.revision,
                    "snapshot": list(record.snapshot),
                    "validity_digest": record.validity_digest,
                    "catalog_digest": record.catalog_digest,
                    "starved": len(model.starved),
                }
            )
            self._write_manifest()
        return record

    # -- generation ----------------------------------------------------------------

    def generate_portfolio(
        self,
        count,
        base_seed,
        out_width=32,
        out_height=32,
        wrap_output=True,
        max_restarts=9,
        backend=None,
    ) -> Portfolio:
        """Run ``count`` independent solves with seeds mix(base_seed, k).

        Contradiction outcomes stay in the portfolio with their stats; they
        are signal for the teacher, never silently resampled.
        """
        if count < 1:
            raise ConfigError("portfolio count must be at least 1")
        if self.model is None:
            raise TrainingError("no trained model; retrain the session first")
        if self.stale:
            raise StaleModelError(
                "examples changed since the last retrain; retrain before generating"
            )
        record = self.history[-1]
        samples = []
        for k in range(count):
            seed = mix(base_seed, k)
            cfg = SolverConfig(
                out_width=out_width,
                out_height=out_height,
                wrap_output=wrap_output,
                seed=seed,
                max_restarts=max_restarts,
            )
            result = solve(self.model.catalog, self.model.valid, cfg, backend=backend)
            sid = f"s{self._next_sample:04d}"
            self._next_sample += 1
            samples.append(PortfolioSample(sid=sid, seed=seed, result=result))
            record.sample_ids.append(sid)
            if result.solved:
                rendered = render_result(result, self.model.catalog, self.palette)
                doc = grid_document(result, self.model.catalog, self.palette)
                self._sample_grids[sid] = rendered
                self._sample_docs[sid] = doc
                if self._persist:
                    self._write_sample_files(sid, rendered, doc)
            else:
                doc = {
                    "version": 1,
                    "kind": "solve-failure",
                    "seed": result.seed,
                    "status": result.status,
                    "attempts": result.stats.attempts,
                    "restarts": result.stats.restarts,
                    "failing_cell": result.failing_cell,
                }
                self._sample_docs[sid] = doc
                if self._persist:
                    samples_dir = self.root / "samples"
                    samples_dir.mkdir(exist_ok=True)
                    _write_json(samples_dir / f"{sid}.json", doc)
        self.revision += 1
        portfolio = Portfolio(
            iteration=self.iteration, base_seed=base_seed, samples=tuple(samples)
        )
        self.latest_portfolio = {
            "iteration": self.iteration,
            "base_seed": base_seed,
            "samples": [
                {
                    "sid": s.sid,
                    "seed": s.seed,
                    "status": s.result.status,
                    "restarts": s.result.stats.restarts,
                    "failing_cell": s.result.failing_cell,
                }
                for s in samples
            ],
        }
        if self._persist:
            self._append_history(
                {
                    "event": "portfolio",
                    "iteration": self.iteration,
                    "revision": self.revision,
                    "base_seed": base_seed,
                    "count": count,
                    "out_width": out_width,
                    "out_height": out_height,
                    "wrap_output": wrap_output,
                    "max_restarts": max_restarts,
                    "samples": self.latest_portfolio["samples"],
                }
            )
            self._write_manifest()
        return portfolio

    # -- inspection ---------------------------------------------------------------

    def record_for(self, iteration: int) -> IterationRecord:
        for record in self.history:
            if record.iteration == iteration:
                return record
        raise KeyError(f"no iteration {iteration} in session history")

    def diff(self, a: int, b: int) -> dict:
        doc_a = self.record_for(a).validity_doc
        doc_b = self.record_for(b).validity_doc
        out = diff_validity(doc_a, doc_b)
        out["a"] = a
        out["b"] = b
        return out

    def validity_document(self) -> dict:
        if not self.history:
            raise TrainingError("no trained model; retrain the session first")
        return self.history[-1].validity_doc

    def validity_digest(self) -> str:
        if not self.history:
            raise TrainingError("no trained model; retrain the session first")
        return self.history[-1].validity_digest

    # -- persistence ---------------------------------------------------------------

    def _example_filename(self, example: Example) -> str:
        ext = "png" if example.grid.palette.kind == "color" else "txt"
        return f"examples/{example.id}.{ext}"

    def _write_example_file(self, example: Example):
        path = self.root / self._example_filename(example)
        path.parent.mkdir(exist_ok=True)
        if example.grid.palette.kind == "color":
            path.write_bytes(emit_image(example.grid))
        else:
            path.write_text(emit_text(example.grid))

    def _write_sample_files(self, sid, rendered, doc):
        samples_dir = self.root / "samples"
        samples_dir.mkdir(exist_ok=True)
        if rendered.palette.kind == "color":
            (samples_dir / f"{sid}.png").write_bytes(emit_image(rendered))
        else:
            (samples_dir / f"{sid}.txt").write_text(emit_text(rendered))
        _write_json(samples_dir / f"{sid}.json", doc)

    def _write_manifest(self):
        manifest = {
            "version": 1,
            "pattern": {
                "n": self.pattern_cfg.n,
                "wrap_input": self.pattern_cfg.wrap_input,
                "symmetry": sorted(self.pattern_cfg.symmetry),
            },
            "strategy": self.strategy.value,
            "iteration": self.iteration,
            "revision": self.revision,
            "stale": self.stale,
            "next_example": self._next_example,
            "next_sample": self._next_sample,
            "examples": [
                {
                    "id": e.id,
                    "label": e.label,
                    "origin": e.origin,
                    "wrap": e.wrap,
                    "file": self._example_filename(e),
                }
                for e in self.examples
            ],
        }
        _write_json(self.root / "manifest.json", manifest)

    def _append_history(self, event: dict):
        line = json.dumps(event, separators=(",", ":"), sort_keys=True)
        with open(self.root / "history.jsonl", "a") as fh:
            fh.write(line + "\n")

    @classmethod
    def load(cls, root) -> "TeachingSession":
        root = Path(root)
        manifest = json.loads((root / "manifest.json").read_text())
        if manifest.get("version") != 1:
            raise ConfigError(f"unsupported session version: {manifest.get('version')}")
        cfg = PatternConfig(
            n=manifest["pattern"]["n"],
            wrap_input=manifest["pattern"]["wrap_input"],
            symmetry=frozenset(manifest["pattern"]["symmetry"]),
        )
        session = cls.__new__(cls)
        session.pattern_cfg = cfg
        session.strategy = LearningStrategy(manifest["strategy"])
        session.palette = Palette()
        session.examples = []
        session.history = []
        session.model = None
        session.stale = manifest["stale"]
        session.iteration = manifest["iteration"]
        session.revision = manifest["revision"]
        session.latest_portfolio = None
        session._training = False
        session._next_example = manifest["next_example"]
        session._next_sample = manifest["next_sample"]
        session._sample_grids = {}
        session._sample_docs = {}
        session.root = root
        session._persist = True

        for entry in manifest["examples"]:
            path = root / entry["file"]
            if entry["file"].endswith(".png"):
                grid = ingest_image(path.read_bytes(), shared=session.palette)
            else:
                grid = ingest_text(path.read_text(), shared=session.palette)
            session.examples.append(
                Example(
                    id=entry["id"],
                    grid=grid,
                    label=entry["label"],
                    origin=entry["origin"],
                    wrap=entry["wrap"],
                )
            )

        history_path = root / "history.jsonl"
        if history_path.exists():
            for line in history_path.read_text().splitlines():
                event = json.loads(line)
                if event["event"] == "retrain":
                    doc_path = root / "trained" / f"validity-{event['iteration']:04d}.json"
                    record = IterationRecord(
                        iteration=event["iteration"],
                        snapshot=tuple(event["snapshot"]),
                        validity_digest=event["validity_digest"],
                        catalog_digest=event["catalog_digest"],
                        validity_doc=json.loads(doc_path.read_text()),
                    )
                    session.history.append(record)
                elif event["event"] == "portfolio":
                    if session.history:
                        session.history[-1].sample_ids.extend(
                            s["sid"] for s in event["samples"]
                        )
                    session.latest_portfolio = {
                        "iteration": event["iteration"],
                        "base_seed": event["base_seed"],
                        "samples": event["samples"],
                    }

        if session.iteration > 0 and not session.stale:
            model = session._train()
            session.model = model
            rebuilt = digest(export_validity(model.valid, model.catalog, session.palette))
            expected = session.history[-1].validity_digest if session.history else None
            if expected is not None and rebuilt != expected:
                raise TrainingError(
                    "stored session is inconsistent: retraining its examples does "
                    "not reproduce the recorded validity digest"
                )
        return session


def _write_json(path: Path, doc: dict):
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
