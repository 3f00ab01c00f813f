"""Benchmark the compiled propagation kernel against the pure Python one.

Builds the flowers model from the bundled corpus, runs the same seeded
solves on both backends, checks the outputs are bit-identical, and prints
wall-time statistics. Exits nonzero if the backends disagree on any cell.
"""

import argparse
import statistics
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gridloom.adjacency import (
    LearningStrategy,
    ValiditySet,
    compute_legal,
    compute_observed,
    learn,
)
from gridloom.catalog import PatternCatalog, PatternConfig, extract
from gridloom.grid import Palette, ingest_image
from gridloom.kernel import kernel_backend
from gridloom.solver import SolverConfig, solve

CORPUS = Path(__file__).resolve().parent.parent / "corpus" / "flowers"


def flowers_model(n=3):
    palette = Palette()
    catalog = PatternCatalog(n)
    grids = []
    for path in sorted(CORPUS.glob("*.png")):
        grid = ingest_image(path.read_bytes(), shared=palette)
        grids.append(grid)
        extract(grid, PatternConfig(n=n, wrap_input=False), into=catalog)
    legal = compute_legal(catalog)
    observed = compute_observed([(g, False) for g in grids], catalog, n)
    sets, _ = learn(legal, observed, frozenset(), LearningStrategy.MGG, catalog)
    return catalog, ValiditySet(LearningStrategy.MGG, sets.valid)


def run_backend(catalog, valid, backend, size, seeds):
    times = []
    outputs = []
    for seed in range(seeds):
        cfg = SolverConfig(
            out_width=size, out_height=size, wrap_output=True, seed=seed
        )
        result = solve(catalog, valid, cfg, backend=backend)
        if not result.solved:
            raise SystemExit(f"{backend}: seed {seed} failed to solve")
        times.append(result.stats.wall_time)
        outputs.append(result.pattern_ids)
    return times, outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=48, help="output side length")
    parser.add_argument("--seeds", type=int, default=20, help="solves per backend")
    args = parser.parse_args()

    if kernel_backend() != "compiled":
        print("compiled kernel unavailable; nothing to compare against")
        return 1

    catalog, valid = flowers_model()
    print(
        f"model: {len(catalog)} patterns, {len(valid.triples)} valid triples, "
        f"{args.size}x{args.size} toroidal output, {args.seeds} seeds"
    )

    results = {}
    for backend in ("pure", "compiled"):
        times, outputs = run_backend(catalog, valid, backend, args.size, args.seeds)
        results[backend] = (times, outputs)
        print(
            f"{backend:>9}: median {statistics.median(times) * 1000:8.2f} ms   "
            f"mean {statistics.mean(times) * 1000:8.2f} ms   "
            f"max {max(times) * 1000:8.2f} ms"
        )

    mismatches = sum(
        a != b for a, b in zip(results["pure"][1], results["compiled"][1])
    )
    if mismatches:
        print(f"PARITY FAILURE: {mismatches}/{args.seeds} outputs differ")
        return 1
    speedup = statistics.median(results["pure"][0]) / statistics.median(
        results["compiled"][0]
    )
    print(f"outputs bit-identical across backends; compiled is {speedup:.1f}x faster")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
