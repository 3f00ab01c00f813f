"""Seven-iteration teaching walkthrough on the flowers corpus.

Drives everything the way a user would, through the command line interface:
add examples, retrain, generate work samples, crop flaws out of samples as
negative examples, retrain again.  The script only uses the library directly
for read-only inspection (finding a flawed placement to crop and checking
that the follow-up training removed exactly the demonstrated adjacencies).

Iteration schedule:
  1. yellow flowers positive            -> train
  2. red flowers positive               -> train (catalog must grow)
  3. tall flowers with leaves positive  -> train, sample, find a floating
     petal-bar placement, crop it as a negative
  4. train with the negative            -> flaw adjacencies removed
  5. hills positive                     -> train, sample, crop another flaw
  6. train with the second negative
  7. crop and train once more (falls back to a harmless already-endorsed
     crop when the samples show no further unendorsed placements)

Writes a JSON report next to the session directory and exits nonzero if any
iteration deviates from the expected mechanics.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from pathlib import Path

from gridloom import DIR_NAMES, DOWN, OPPOSITE, RIGHT, TeachingSession
from gridloom.catalog import canonical_form

CLI = [sys.executable, "-m", "gridloom"]


def run_cli(*args: str) -> str:
    proc = subprocess.run(
        CLI + [str(a) for a in args], capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise RuntimeError(
            f"cli {' '.join(str(a) for a in args)} exited "
            f"{proc.returncode}\n{proc.stdout}{proc.stderr}"
        )
    return proc.stdout


def pattern_grid(session: TeachingSession, sid: str):
    """Width, height, and internal pattern ids of a stored work sample."""
    doc = session.sample_document(sid)
    _, _, _, id_remap = canonical_form(session.model.catalog, session.palette)
    internal_of = {new: pid for pid, new in id_remap.items()}
    cells = [internal_of[c] for c in doc["cells"]]
    return doc["width"], doc["height"], cells


def is_bar(catalog, pid: int) -> bool:
    """Sky/petal/sky shaped pattern: uniform rows, middle row distinct."""
    t = catalog.tiles_of(pid)
    n = catalog.n
    rows = [t[r * n : (r + 1) * n] for r in range(n)]
    return (
        len(set(rows[0])) == 1
        and rows[0] == rows[2]
        and len(set(rows[1])) == 1
        and rows[1][0] != rows[0][0]
    )


def find_crop(session: TeachingSession, endorsed_ok: bool = False):
    """First croppable placement in the latest samples whose adjacency is
    allowed by the current model but never endorsed by a positive example.

    Prefers petal-bar pairs (the visually obvious floating-bar flaw).  With
    endorsed_ok the search degrades to any croppable placement at all, used
    by the final iteration when no unendorsed placement remains.
    """
    model = session.model
    valid = model.valid.triples
    observed = model.sets.observed
    n = model.catalog.n
    half = n // 2
    candidates = []
    for entry in session.latest_portfolio["samples"]:
        if entry["status"] != "solved":
            continue
        sid = entry["sid"]
        width, height, cells = pattern_grid(session, sid)
        for y in range(height):
            for x in range(width):
                a = cells[y * width + x]
                for d, nx, ny in ((RIGHT, x + 1, y), (DOWN, x, y + 1)):
                    if nx >= width or ny >= height:
                        continue
                    b = cells[ny * width + nx]
                    triple = (a, d, b)
                    if triple not in valid:
                        continue
                    novel = triple not in observed
                    if not novel and not endorsed_ok:
                        continue
                    if d == RIGHT:
                        rect = (x - half, y - half, n + 1, n)
                    else:
                        rect = (x - half, y - half, n, n + 1)
                    rx, ry, rw, rh = rect
                    if rx < 0 or ry < 0 or rx + rw > width or ry + rh > height:
                        continue
                    bar = is_bar(model.catalog, a) and is_bar(model.catalog, b)
                    rank = (0 if novel else 1, 0 if bar else 1, sid, y, x, d)
                    candidates.append((rank, sid, rect, triple, novel))
    if not candidates:
        return None
    _, sid, rect, triple, novel = min(candidates)
    return {"sample": sid, "rect": rect, "triple": triple, "novel": novel}


def content_of(session: TeachingSession, pid: int):
    entries = session.palette.entries
    return tuple(entries[t] for t in session.model.catalog.tiles_of(pid))


def expected_removed(session: TeachingSession, triple) -> set:
    """Content-level triples a crop of this placement demonstrates."""
    a, d, b = triple
    ca, cb = content_of(session, a), content_of(session, b)
    return {(ca, DIR_NAMES[d], cb), (cb, DIR_NAMES[OPPOSITE[d]], ca)}


def diff_removed_content(diff: dict) -> set:
    out = set()
    for item in diff["removed"]:
        fix = lambda tiles: tuple(
            tuple(t) if isinstance(t, list) else t for t in tiles
        )
        out.add((fix(item["a"]), item["direction"], fix(item["b"])))
    return out


def snapshot(session_dir: Path, action: str) -> dict:
    session = TeachingSession.load(session_dir)
    record = session.record_for(session.iteration)
    solved = failed = 0
    if session.latest_portfolio:
        for s in session.latest_portfolio["samples"]:
            solved += s["status"] == "solved"
            failed += s["status"] != "solved"
    return {
        "iteration": session.iteration,
        "action": action,
        "patterns": len(session.model.catalog.patterns),
        "valid_triples": len(session.model.valid.triples),
        "validity_digest": record.validity_digest,
        "catalog_digest": record.catalog_digest,
        "samples_solved": solved,
        "samples_failed": failed,
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", default="corpus/flowers", help="corpus directory")
    ap.add_argument("--workdir", default="walkthrough", help="output directory")
    ap.add_argument("--seed", type=int, default=7, help="base seed for sampling")
    ap.add_argument("--samples", type=int, default=6, help="samples per portfolio")
    ap.add_argument("--size", type=int, default=24, help="sample side length")
    args = ap.parse_args(argv)

    corpus = Path(args.corpus)
    needed = ["flowers-yellow.png", "flowers-red.png", "flowers-tall.png", "hills.png"]
    missing = [n for n in needed if not (corpus / n).exists()]
    if missing:
        ap.error(
            f"corpus images missing from {corpus}: {', '.join(missing)} "
            "(run scripts/author_corpus.py first)"
        )

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    sdir = workdir / "session"
    if sdir.exists():
        raise SystemExit(f"refusing to overwrite existing session at {sdir}")

    report = {"iterations": [], "crops": []}

    def train_and_sample(action: str) -> dict:
        run_cli("train", "--session", sdir)
        run_cli(
            "generate", "--session", sdir, "--count", args.samples,
            "--seed", args.seed, "--width", args.size, "--height", args.size,
        )
        snap = snapshot(sdir, action)
        report["iterations"].append(snap)
        print(
            f"iteration {snap['iteration']}: {action}; "
            f"{snap['patterns']} patterns, {snap['valid_triples']} valid triples, "
            f"{snap['samples_solved']}/{snap['samples_solved'] + snap['samples_failed']} samples solved"
        )
        return snap

    def crop_flaw(allow_endorsed: bool) -> dict | None:
        session = TeachingSession.load(sdir)
        found = find_crop(session, endorsed_ok=allow_endorsed)
        if found is None:
            return None
        rect = ",".join(str(v) for v in found["rect"])
        run_cli(
            "session", "crop-negative", "--session", sdir,
            "--from", found["sample"], "--rect", rect,
        )
        crop_info = {
            "sample": found["sample"],
            "rect": list(found["rect"]),
            "novel": found["novel"],
            "expected_removed": sorted(
                [list(a), d, list(b)]
                for a, d, b in expected_removed(session, found["triple"])
            ),
        }
        report["crops"].append(crop_info)
        print(
            f"  cropped {found['sample']} rect {rect} "
            f"({'unendorsed placement' if found['novel'] else 'endorsed fallback'})"
        )
        return crop_info

    # iterations 1-3: positives
    run_cli("session", "init", "--session", sdir, "--no-wrap-input")
    run_cli("session", "add-positive", "--session", sdir, corpus / "flowers-yellow.png")
    one = train_and_sample("add yellow flowers positive")
    run_cli("session", "add-positive", "--session", sdir, corpus / "flowers-red.png")
    two = train_and_sample("add red flowers positive")
    if two["patterns"] <= one["patterns"]:
        raise SystemExit("iteration 2 did not grow the pattern catalog")
    run_cli("session", "add-positive", "--session", sdir, corpus / "flowers-tall.png")
    three = train_and_sample("add tall flowers positive")

    # iteration 4: teach away the floating petal bar
    crop = crop_flaw(allow_endorsed=False)
    if crop is None or not crop["novel"]:
        raise SystemExit("iteration 3 samples show no unendorsed placement to crop")
    four = train_and_sample("crop floating petal bar as negative")
    diff = json.loads(
        run_cli("inspect", "diff", "--session", sdir, "--a", "3", "--b", "4", "--json")
    )
    removed = diff_removed_content(diff)
    expected = {
        (tuple(map(tuple, a)), d, tuple(map(tuple, b)))
        for a, d, b in (tuple(t) for t in crop["expected_removed"])
    }
    if diff["added"]:
        raise SystemExit("iteration 4 added triples; a negative must never add")
    if removed != expected:
        raise SystemExit(
            f"iteration 4 removed {len(removed)} triples, expected exactly "
            f"the {len(expected)} demonstrated by the crop"
        )
    report["diff_3_4_removed"] = sorted(
        [list(map(list, a)), d, list(map(list, b))] for a, d, b in removed
    )
    print(f"  diff 3->4: removed exactly the {len(expected)} cropped adjacencies")

    # iteration 5: hills positive
    run_cli("session", "add-positive", "--session", sdir, corpus / "hills.png")
    five = train_and_sample("add hills positive")
    if five["patterns"] <= four["patterns"]:
        raise SystemExit("iteration 5 did not grow the pattern catalog")

    # iterations 6-7: keep critiquing
    if crop_flaw(allow_endorsed=False) is None:
        raise SystemExit("iteration 5 samples show no unendorsed placement to crop")
    six = train_and_sample("crop second flaw as negative")
    if crop_flaw(allow_endorsed=True) is None:
        raise SystemExit("iteration 6 samples yielded nothing croppable")
    seven = train_and_sample("crop third flaw as negative")

    # negatives must never widen the design space
    for before, after in ((three, four), (five, six), (six, seven)):
        if after["valid_triples"] > before["valid_triples"]:
            raise SystemExit(
                f"iteration {after['iteration']} grew the valid set after "
                "adding only negatives"
            )

    report_path = workdir / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"walkthrough complete; report at {report_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
