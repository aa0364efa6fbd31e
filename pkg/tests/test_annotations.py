import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nbbook.annotations import (
    COLORS,
    AnnotationStore,
    add_annotation,
    load_store,
    new_annotation,
    query,
    save_store,
    sidecar_path,
)
from nbbook.errors import AnchorOutOfBounds, MalformedStoreFile, UnknownCell

from conftest import make_notebook


@pytest.fixture
def nb():
    return make_notebook([("code", "abcdefghij\n"), ("code", "0123456789\n")], "anno")


def ann(cell=1, start=0, end=3, color="Yellow", comment="note", **kw):
    return new_annotation(cell, start, end, color, comment, **kw)


def test_new_annotation_has_unique_ids():
    assert ann().id != ann().id


def test_unknown_color_rejected():
    with pytest.raises(ValueError):
        ann(color="Mauve")


def test_add_valid_annotation(nb):
    store = add_annotation(AnnotationStore(notebook_id="anno"), ann(), nb)
    assert len(store.annotations) == 1


def test_anchor_must_fit_cell_text(nb):
    store = AnnotationStore(notebook_id="anno")
    with pytest.raises(AnchorOutOfBounds):
        add_annotation(store, ann(start=0, end=100), nb)
    with pytest.raises(AnchorOutOfBounds):
        add_annotation(store, ann(start=5, end=5), nb)
    with pytest.raises(AnchorOutOfBounds):
        add_annotation(store, ann(start=-1, end=3), nb)


def test_unknown_cell_rejected(nb):
    with pytest.raises(UnknownCell):
        add_annotation(AnnotationStore(), ann(cell=99), nb)


def test_query_filters_and_sorts(nb):
    store = AnnotationStore(notebook_id="anno")
    a1 = ann(cell=2, start=4, end=8, color="Blue", created_at=10)
    a2 = ann(cell=1, start=2, end=6, color="Yellow", created_at=20)
    a3 = ann(cell=1, start=0, end=3, color="Blue", created_at=30)
    for a in (a1, a2, a3):
        store = add_annotation(store, a, nb)
    assert [a.id for a in query(store)] == [a3.id, a2.id, a1.id]
    assert [a.id for a in query(store, cell_display=1)] == [a3.id, a2.id]
    assert [a.id for a in query(store, color="Blue")] == [a3.id, a1.id]
    assert query(store, cell_display=1, color="Blue") == [a3]


def test_save_load_round_trip(nb):
    store = AnnotationStore(notebook_id="anno")
    store = add_annotation(store, ann(created_at=1700000000, author="sam"), nb)
    loaded = load_store(save_store(store), nb)
    assert loaded == store


def test_saved_timestamps_are_iso_utc(nb):
    store = add_annotation(AnnotationStore(notebook_id="anno"), ann(created_at=0), nb)
    doc = json.loads(save_store(store))
    stamp = doc["annotations"][0]["created_at"]
    assert stamp == "1970-01-01T00:00:00Z"


def test_load_marks_stale_anchor_orphaned(nb):
    store = add_annotation(AnnotationStore(notebook_id="anno"), ann(end=9), nb)
    raw = save_store(store)
    shrunk = make_notebook([("code", "ab\n"), ("code", "0123456789\n")], "anno")
    loaded = load_store(raw, shrunk, validate=False)
    assert loaded.annotations[0].orphaned
    with pytest.raises(AnchorOutOfBounds):
        load_store(raw, shrunk)


def test_malformed_store_rejected(nb):
    with pytest.raises(MalformedStoreFile):
        load_store(b"{not json", nb)
    with pytest.raises(MalformedStoreFile):
        load_store(b"42", nb)
    # a bare array is accepted as a store without metadata
    assert load_store(b"[]", nb).annotations == ()


def test_sidecar_path():
    assert sidecar_path("dir/analysis.ipynb") == "dir/analysis.annotations.json"


anns_st = st.lists(
    st.builds(
        ann,
        cell=st.sampled_from([1, 2]),
        start=st.integers(0, 8),
        end=st.just(10),
        color=st.sampled_from(COLORS),
        comment=st.text(max_size=20),
        created_at=st.integers(0, 2_000_000_000),
    ),
    max_size=5,
)


@given(anns_st)
def test_store_round_trip_property(anns):
    nb = make_notebook([("code", "abcdefghij\n"), ("code", "0123456789\n")], "anno")
    store = AnnotationStore(notebook_id="anno")
    for a in anns:
        store = add_annotation(store, a, nb)
    assert load_store(save_store(store), nb) == store
    assert save_store(load_store(save_store(store), nb)) == save_store(store)
