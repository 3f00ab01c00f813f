"""Regenerate docs/openapi.json from the live FastAPI app.

Run this after changing service endpoints; a test compares the committed
document against the app so the two cannot drift silently.
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gridloom.service import create_app


def openapi_document() -> dict:
    with tempfile.TemporaryDirectory() as tmp:
        return create_app(tmp).openapi()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "docs" / "openapi.json",
    )
    parser.add_argument(
        "--check",
        action="store_true",
        help="exit 1 if the file on disk is out of date instead of rewriting it",
    )
    args = parser.parse_args()

    doc = openapi_document()
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.check:
        if not args.out.exists() or args.out.read_text() != text:
            print(f"{args.out} is out of date; rerun scripts/export_openapi.py")
            return 1
        print(f"{args.out} is current")
        return 0
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(text)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
