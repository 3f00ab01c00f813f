import hashlib
import string
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridloom import (
    BoundsError,
    CatalogError,
    ConfigError,
    PatternCatalog,
    PatternConfig,
    classify,
    digest,
    emit_text,
    export_catalog,
    extract,
    import_catalog,
    ingest_image,
    render,
    window,
)
from gridloom.catalog import (
    REFLECTIONS,
    ROTATIONS,
    canonical_bytes,
    canonical_form,
    symmetry_variants,
    window_positions,
)
from gridloom.grid import Palette

import oracles
from conftest import text_grid

CORPUS = Path(__file__).resolve().parent.parent / "corpus" / "flowers"


def test_window_position_counts():
    g = text_grid("ABCDE\nFGHIJ\nKLMNO\nPQRST\n")
    assert len(window_positions(g, 3, wrap=True)) == 5 * 4
    assert len(window_positions(g, 3, wrap=False)) == (5 - 2) * (4 - 2)
    assert len(window_positions(g, 1, wrap=False)) == 5 * 4


@pytest.mark.parametrize("wrap", [True, False])
def test_extraction_matches_window_oracle(wrap):
    g = text_grid("ABCA\nBCAB\nAACC\n")
    cfg = PatternConfig(n=2, wrap_input=wrap)
    catalog = extract(g, cfg)
    expected = {}
    for tiles in oracles.windows(list(g.cells), g.width, g.height, 2, wrap).values():
        expected[tiles] = expected.get(tiles, 0) + 1
    got = {catalog.patterns[i]: catalog.weights[i] for i in range(len(catalog))}
    assert got == expected


def test_extract_into_keeps_existing_ids():
    g1 = text_grid("AB\nBA\n")
    catalog = extract(g1, PatternConfig(n=2), into=PatternCatalog(2))
    before = dict(catalog.index)
    g2 = text_grid("AA\nAB\n", palette=g1.palette)
    extract(g2, PatternConfig(n=2), into=catalog)
    for tiles, pid in before.items():
        assert catalog.index[tiles] == pid


def test_zero_weight_registration():
    g = text_grid("AB\nBA\n")
    catalog = extract(g, PatternConfig(n=2), count_weights=False)
    assert len(catalog) > 0
    assert all(w == 0 for w in catalog.weights)
    extract(g, PatternConfig(n=2), into=catalog, count_weights=True)
    assert all(w > 0 for w in catalog.weights)


def test_classify_is_exact_lookup():
    g = text_grid("AB\nBA\n")
    cfg = PatternConfig(n=2)
    catalog = extract(g, cfg)
    pid = classify(g, (0, 0), cfg, catalog)
    assert catalog.tiles_of(pid) == window(g, 0, 0, 2, True)
    novel = text_grid("AA\nAA\n", palette=g.palette)
    assert classify(novel, (0, 0), cfg, catalog) is None


def test_center_tile_rule():
    g = text_grid("ABC\nDEF\nGHI\n")
    catalog = extract(g, PatternConfig(n=3, wrap_input=False))
    assert g.palette.entries[catalog.center_tile(0)] == "E"
    g2 = text_grid("AB\nCD\n")
    cat2 = extract(g2, PatternConfig(n=2, wrap_input=False))
    # even n: center is the bottom-right of the upper-left quadrant boundary
    assert g2.palette.entries[cat2.center_tile(0)] == "D"


def test_render_reads_center_tiles():
    g = text_grid("ABC\nDEF\nGHI\n")
    cfg = PatternConfig(n=3, wrap_input=True)
    catalog = extract(g, cfg)
    ids = [[classify(g, (x, y), cfg, catalog) for x in range(3)] for y in range(3)]
    out = render(ids, catalog, g.palette)
    # every window is centered one tile down-right of its top-left corner
    assert emit_text(out) == "EFD\nHIG\nBCA\n"


def test_pattern_too_large_rejected():
    g = text_grid("AB\nBA\n")
    with pytest.raises(ConfigError):
        extract(g, PatternConfig(n=3))


def test_window_bounds_checked_without_wrap():
    g = text_grid("ABC\nDEF\n")
    with pytest.raises(BoundsError):
        window(g, 1, 0, 3, wrap=False)
    assert window(g, 1, 0, 3, wrap=True) == window(g, 1, 0, 3, wrap=True)


def test_bad_pattern_id_rejected():
    g = text_grid("AB\nBA\n")
    catalog = extract(g, PatternConfig(n=2))
    for pid in (-1, len(catalog)):
        with pytest.raises(CatalogError):
            catalog.tiles_of(pid)


def test_rotation_and_reflection_variants():
    tiles = (0, 1, 2, 3)  # [[0,1],[2,3]]
    rot = symmetry_variants(tiles, 2, frozenset([ROTATIONS]))
    assert rot == [(0, 1, 2, 3), (2, 0, 3, 1), (3, 2, 1, 0), (1, 3, 0, 2)]
    ref = symmetry_variants(tiles, 2, frozenset([REFLECTIONS]))
    assert ref == [(0, 1, 2, 3), (1, 0, 3, 2)]
    both = symmetry_variants(tiles, 2, frozenset([ROTATIONS, REFLECTIONS]))
    assert len(both) == 8 and len(set(both)) == 8


def test_symmetry_weights_count_every_image():
    g = text_grid("AB\nBB\n")
    catalog = extract(g, PatternConfig(n=2, symmetry=frozenset([ROTATIONS])))
    assert sum(catalog.weights) == 4 * 4  # windows x rotations


def test_unknown_symmetry_rejected():
    with pytest.raises(ConfigError):
        PatternConfig(symmetry=frozenset(["diagonal"]))


def _corpus_catalog(order):
    palette = Palette()
    catalog = PatternCatalog(3)
    cfg = PatternConfig(n=3, wrap_input=False)
    for name in order:
        g = ingest_image((CORPUS / name).read_bytes(), shared=palette, allow_new=True)
        extract(g, cfg, into=catalog)
    return catalog, palette


def test_canonical_export_is_order_invariant():
    # swapped ingestion order permutes the palette (petal colors trade
    # indices) yet the canonical export is byte-identical
    a = _corpus_catalog(["flowers-yellow.png", "flowers-red.png"])
    b = _corpus_catalog(["flowers-red.png", "flowers-yellow.png"])
    assert a[1].entries != b[1].entries
    assert canonical_bytes(export_catalog(*a)) == canonical_bytes(export_catalog(*b))

    # a structurally different pair permutes runtime pattern ids as well
    c = _corpus_catalog(["flowers-yellow.png", "hills.png"])
    d = _corpus_catalog(["hills.png", "flowers-yellow.png"])
    assert c[0].patterns != d[0].patterns
    doc_c, doc_d = export_catalog(*c), export_catalog(*d)
    assert canonical_bytes(doc_c) == canonical_bytes(doc_d)
    assert digest(doc_c) == digest(doc_d)


def test_canonical_form_sorts_palette_and_patterns():
    g = text_grid("BA\nAB\n")
    catalog = extract(g, PatternConfig(n=2))
    entries, patterns, weights, id_remap = canonical_form(catalog, g.palette)
    assert entries == sorted(entries)
    assert patterns == sorted(patterns)
    assert len(weights) == len(patterns) == len(id_remap)
    # the remap is a bijection onto canonical ids
    assert sorted(id_remap.values()) == list(range(len(patterns)))
    # remapped tiles of each pattern land at their canonical slot
    entry_remap = {g.palette.entries.index(e): i for i, e in enumerate(entries)}
    for pid, new in id_remap.items():
        remapped = tuple(entry_remap[t] for t in catalog.patterns[pid])
        assert patterns[new] == remapped


def test_digest_is_sha256_of_canonical_bytes():
    g = text_grid("AB\nBA\n")
    doc = export_catalog(extract(g, PatternConfig(n=2)), g.palette)
    assert digest(doc) == hashlib.sha256(canonical_bytes(doc)).hexdigest()


def test_import_round_trip():
    catalog, palette = _corpus_catalog(["flowers-yellow.png"])
    doc = export_catalog(catalog, palette)
    cat2, pal2 = import_catalog(doc)
    assert canonical_bytes(export_catalog(cat2, pal2)) == canonical_bytes(doc)
    assert cat2.n == catalog.n
    assert sum(cat2.weights) == sum(catalog.weights)


def test_import_rejects_unknown_version():
    with pytest.raises(ConfigError):
        import_catalog({"version": 99})


@given(st.integers(2, 4), st.integers(2, 4), st.booleans(), st.data())
def test_extraction_weight_conservation(width, height, wrap, data):
    n = 2
    if not wrap and (width < n or height < n):
        return
    alphabet = string.ascii_uppercase[:3]
    text = "\n".join(
        "".join(data.draw(st.sampled_from(alphabet)) for _ in range(width))
        for _ in range(height)
    ) + "\n"
    g = text_grid(text)
    catalog = extract(g, PatternConfig(n=n, wrap_input=wrap))
    expected = width * height if wrap else (width - n + 1) * (height - n + 1)
    assert sum(catalog.weights) == expected
    oracle = oracles.windows(list(g.cells), width, height, n, wrap)
    assert set(catalog.patterns) == set(oracle.values())
