"""Author the flowers teaching corpus as deterministic pixel art.

Each image is drawn tile by tile from constants below, so regenerating the
corpus always produces byte-identical PNGs (a test holds us to that).

The art is constructed so that the untrained (most-general) design space
contains a visible flaw to teach away: petal rows are 7 tiles wide over a
1-tile stem, which puts a pure petal-bar window (sky / petals / sky) into
the catalog whose side-by-side self-adjacency never occurs in any source
image (petal-only runs are exactly 3 tiles).  Overlap legality still allows
the pair, so generated samples grow long detached petal bars floating in
the sky until a cropped negative example forbids the pair.
"""

from __future__ import annotations

import sys
from pathlib import Path

from PIL import Image

SKY = (170, 215, 245, 255)
GROUND = (120, 85, 50, 255)
STEM = (60, 145, 70, 255)
YELLOW = (245, 210, 60, 255)
RED = (225, 85, 85, 255)
CROWN = (250, 245, 235, 255)

WIDTH = 22
HEIGHT = 14
GROUND_TOP = 12  # ground fills rows GROUND_TOP .. HEIGHT-1


def _blank(ground_top=GROUND_TOP):
    img = Image.new("RGBA", (WIDTH, HEIGHT), SKY)
    for y in range(ground_top, HEIGHT):
        for x in range(WIDTH):
            img.putpixel((x, y), GROUND)
    return img


def _flower(img, x, head_y, petal, ground_top=GROUND_TOP):
    """Stem at column x from head_y+1 down to the ground, a 7-wide petal row
    at head_y, and a crown tile above the stem."""
    for px in range(x - 3, x + 4):
        img.putpixel((px, head_y), petal)
    img.putpixel((x, head_y - 1), CROWN)
    for y in range(head_y + 1, ground_top):
        img.putpixel((x, y), STEM)


def flowers_yellow():
    img = _blank()
    _flower(img, 5, 4, YELLOW)
    _flower(img, 16, 7, YELLOW)
    return img


def flowers_red():
    img = _blank()
    _flower(img, 6, 6, RED)
    _flower(img, 15, 3, RED)
    return img


def flowers_tall():
    img = _blank()
    _flower(img, 4, 2, YELLOW)
    _flower(img, 14, 4, RED)
    # leaves partway up the tall stems
    img.putpixel((3, 7), STEM)
    img.putpixel((15, 8), STEM)
    return img


def hills():
    # raised ground on the left half, a step down on the right, one flower
    # planted on the hilltop
    img = Image.new("RGBA", (WIDTH, HEIGHT), SKY)
    for x in range(WIDTH):
        top = 10 if x <= 10 else GROUND_TOP
        for y in range(top, HEIGHT):
            img.putpixel((x, y), GROUND)
    _flower(img, 5, 3, YELLOW, ground_top=10)
    return img


IMAGES = {
    "flowers-yellow.png": flowers_yellow,
    "flowers-red.png": flowers_red,
    "flowers-tall.png": flowers_tall,
    "hills.png": hills,
}


def write_corpus(out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, build in sorted(IMAGES.items()):
        path = out_dir / name
        build().save(path, format="PNG")
        print(f"wrote {path}")


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "corpus/flowers"
    write_corpus(target)
