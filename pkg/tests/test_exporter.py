import json
import random

import pytest

from nbbook.annotations import AnnotationStore, add_annotation, new_annotation
from nbbook.errors import InvalidViewState, MalformedSnapshot, UnknownFormat, VersionMismatch
from nbbook.exporter import (
    FORMATS,
    ViewState,
    export,
    full_view_state,
    import_snapshot,
    included_cells,
    validate_view_state,
)
from nbbook.overlay import build_overlay

from conftest import make_notebook


@pytest.fixture(scope="module")
def scene(catalog, patterns):
    """Notebook with sentinel markers per cell, plus overlay and store."""
    nb = make_notebook([
        ("markdown", "# Load\nWe fetch the data."),
        ("code", "import pandas as pd  # MARKER_C2\n"),
        ("code", "df = pd.read_csv('x.csv')  # MARKER_C3\n"),
        ("markdown", "# Explore\nWe look around."),
        ("code", "df.describe()  # MARKER_C5\n"),
        ("code", "plt.hist(df['a'])  # MARKER_C6\n"),
    ], "scene")
    doc, _ = build_overlay(nb, catalog, patterns)
    store = AnnotationStore(notebook_id="scene")
    store = add_annotation(
        store, new_annotation(3, 0, 2, "Yellow", "is this right?", author="ana"), nb
    )
    store = add_annotation(
        store, new_annotation(5, 0, 2, "Blue", "check the tail", author="bo"), nb
    )
    return nb, doc, store


def all_section_keys(doc):
    return [
        (ch.number, i + 1) for ch in doc.chapters for i in range(len(ch.sections))
    ]


def test_full_view_state_includes_all_code_cells(scene):
    nb, doc, _ = scene
    cells = included_cells(doc, full_view_state(doc))
    for ch in doc.chapters:
        for sec in ch.sections:
            for n in range(sec.cell_range[0], sec.cell_range[1] + 1):
                assert n in cells


def test_validate_rejects_unknown_targets(scene):
    _, doc, _ = scene
    with pytest.raises(InvalidViewState):
        validate_view_state(ViewState(expanded_chapters=frozenset({99})), doc)
    with pytest.raises(InvalidViewState):
        validate_view_state(ViewState(expanded_sections=frozenset({(1, 99)})), doc)


def test_unknown_format_rejected(scene):
    nb, doc, store = scene
    with pytest.raises(UnknownFormat):
        export(doc, nb, store, ViewState(), "pdf")


CODE_CELLS = (2, 3, 5, 6)


def _cells_in_output(text):
    return {n for n in CODE_CELLS if f"MARKER_C{n}" in text}


def _random_view_state(doc, rng):
    keys = all_section_keys(doc)
    chosen = frozenset(k for k in keys if rng.random() < 0.5)
    return ViewState(
        expanded_sections=chosen,
        expanded_chapters=frozenset(ch.number for ch in doc.chapters if rng.random() < 0.5),
    )


@pytest.mark.parametrize("fmt", ["markdown", "html"])
def test_inclusion_law_cells(scene, fmt):
    nb, doc, store = scene
    rng = random.Random(11)
    for _ in range(25):
        vs = _random_view_state(doc, rng)
        out = export(doc, nb, store, vs, fmt).decode("utf-8")
        expected = included_cells(doc, vs)
        got = _cells_in_output(out)
        assert got == {n for n in expected if n in CODE_CELLS}


def test_inclusion_law_annotations(scene):
    nb, doc, store = scene
    rng = random.Random(12)
    for _ in range(25):
        vs = _random_view_state(doc, rng)
        out = export(doc, nb, store, vs, "markdown").decode("utf-8")
        cells = included_cells(doc, vs)
        assert ("is this right?" in out) == (3 in cells)
        assert ("check the tail" in out) == (5 in cells)


def test_markdown_keeps_chapter_titles_when_collapsed(scene):
    nb, doc, store = scene
    out = export(doc, nb, store, ViewState(), "markdown").decode("utf-8")
    assert "Load" in out
    assert "Explore" in out
    assert _cells_in_output(out) == set()


def test_html_is_self_contained(scene):
    nb, doc, store = scene
    out = export(doc, nb, store, full_view_state(doc), "html").decode("utf-8")
    assert out.lstrip().lower().startswith("<!doctype html")
    assert "<style" in out
    assert "http://" not in out and "https://" not in out


def test_snapshot_round_trip_byte_stable(scene):
    nb, doc, store = scene
    vs = ViewState(expanded_sections=frozenset({all_section_keys(doc)[0]}))
    snap = export(doc, nb, store, vs, "snapshot-json")
    vs2, store2 = import_snapshot(snap)
    assert vs2 == vs
    snap2 = export(doc, nb, store2, vs2, "snapshot-json")
    assert snap2 == snap


def test_snapshot_restores_annotations(scene):
    nb, doc, store = scene
    snap = export(doc, nb, store, full_view_state(doc), "snapshot-json")
    _, store2 = import_snapshot(snap)
    comments = {a.comment for a in store2.annotations}
    assert comments == {"is this right?", "check the tail"}


def test_import_rejects_garbage():
    with pytest.raises(MalformedSnapshot):
        import_snapshot(b"not json")
    with pytest.raises(MalformedSnapshot):
        import_snapshot(b"{}")


def test_import_rejects_newer_generator(scene):
    nb, doc, store = scene
    snap = json.loads(export(doc, nb, store, ViewState(), "snapshot-json"))
    snap["generator_version"] = "nbbook-99.0.0"
    with pytest.raises(VersionMismatch):
        import_snapshot(json.dumps(snap).encode())


def test_exports_are_deterministic(scene):
    nb, doc, store = scene
    vs = full_view_state(doc)
    for fmt in FORMATS:
        assert export(doc, nb, store, vs, fmt) == export(doc, nb, store, vs, fmt)
