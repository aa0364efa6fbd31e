"""Sidecar store for color-highlighted annotations with hover comments.

Annotations anchor to character offsets in a cell's source text and live
in a `<notebook>.annotations.json` file next to the notebook; the
notebook itself is never modified.
"""

import json
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import List, Optional

from .errors import AnchorOutOfBounds, MalformedStoreFile, UnknownCell
from .notebook_model import Notebook

COLORS = ("Yellow", "Blue", "Green", "Pink", "Orange")


@dataclass(frozen=True)
class Annotation:
    id: str
    cell_display: int  # 1-based
    start_char: int
    end_char: int
    color: str
    comment: str
    author: str = ""
    created_at: int = 0  # UTC seconds
    orphaned: bool = False


@dataclass(frozen=True)
class AnnotationStore:
    notebook_id: str = ""
    annotations: tuple = ()


def new_annotation(
    cell_display: int,
    start_char: int,
    end_char: int,
    color: str,
    comment: str,
    author: str = "",
    created_at: Optional[int] = None,
    ann_id: Optional[str] = None,
) -> Annotation:
    if color not in COLORS:
        raise ValueError(f"unknown color {color!r}; choose one of {COLORS}")
    if created_at is None:
        created_at = int(datetime.now(timezone.utc).timestamp())
    return Annotation(
        id=ann_id or uuid.uuid4().hex,
        cell_display=cell_display,
        start_char=start_char,
        end_char=end_char,
        color=color,
        comment=comment,
        author=author,
        created_at=created_at,
    )


def _check_anchor(notebook: Notebook, ann: Annotation) -> None:
    idx = ann.cell_display - 1
    if idx < 0 or idx >= len(notebook.cells):
        raise UnknownCell(f"annotation {ann.id} targets cell {ann.cell_display}")
    text = notebook.cells[idx].source
    if not (0 <= ann.start_char < ann.end_char <= len(text)):
        raise AnchorOutOfBounds(
            f"annotation {ann.id}: anchor ({ann.start_char},{ann.end_char}) "
            f"outside cell {ann.cell_display} text of length {len(text)}"
        )


def add_annotation(
    store: AnnotationStore, ann: Annotation, notebook: Notebook
) -> AnnotationStore:
    """Return a new store containing ann; the anchor must fit its cell."""
    _check_anchor(notebook, ann)
    return AnnotationStore(
        notebook_id=store.notebook_id, annotations=store.annotations + (ann,)
    )


def query(
    store: AnnotationStore,
    cell_display: Optional[int] = None,
    color: Optional[str] = None,
) -> List[Annotation]:
    """Filtered annotations, sorted by (cell, anchor start, creation time)."""
    result = [
        a
        for a in store.annotations
        if (cell_display is None or a.cell_display == cell_display)
        and (color is None or a.color == color)
    ]
    result.sort(key=lambda a: (a.cell_display, a.start_char, a.created_at))
    return result


def _ann_to_dict(a: Annotation) -> dict:
    return {
        "id": a.id,
        "cell_display": a.cell_display,
        "start_char": a.start_char,
        "end_char": a.end_char,
        "color": a.color,
        "comment": a.comment,
        "author": a.author,
        "created_at": datetime.fromtimestamp(a.created_at, timezone.utc).strftime(
            "%Y-%m-%dT%H:%M:%SZ"
        ),
        "orphaned": a.orphaned,
    }


def _ann_from_dict(d: dict) -> Annotation:
    created = d.get("created_at", 0)
    if isinstance(created, str):
        created = int(
            datetime.strptime(created, "%Y-%m-%dT%H:%M:%SZ")
            .replace(tzinfo=timezone.utc)
            .timestamp()
        )
    return Annotation(
        id=str(d["id"]),
        cell_display=int(d["cell_display"]),
        start_char=int(d["start_char"]),
        end_char=int(d["end_char"]),
        color=str(d["color"]),
        comment=str(d.get("comment", "")),
        author=str(d.get("author", "")),
        created_at=created,
        orphaned=bool(d.get("orphaned", False)),
    )


def save_store(store: AnnotationStore) -> bytes:
    doc = {
        "notebook_id": store.notebook_id,
        "annotations": [_ann_to_dict(a) for a in store.annotations],
    }
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8")


def load_store(
    raw: bytes, notebook: Optional[Notebook] = None, validate: bool = True
) -> AnnotationStore:
    """Load a sidecar file.

    With validation on, a bad anchor raises; with validation off the
    offending annotation is kept but marked orphaned.
    """
    try:
        doc = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedStoreFile(f"annotation file is not JSON: {e}") from e
    if isinstance(doc, list):  # bare array form
        doc = {"notebook_id": "", "annotations": doc}
    if not isinstance(doc, dict) or not isinstance(doc.get("annotations"), list):
        raise MalformedStoreFile("annotation file needs an `annotations` array")
    anns = []
    for entry in doc["annotations"]:
        try:
            ann = _ann_from_dict(entry)
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedStoreFile(f"bad annotation entry: {e}") from e
        if notebook is not None:
            try:
                _check_anchor(notebook, ann)
            except (UnknownCell, AnchorOutOfBounds):
                if validate:
                    raise
                ann = replace(ann, orphaned=True)
        anns.append(ann)
    return AnnotationStore(
        notebook_id=str(doc.get("notebook_id", "")), annotations=tuple(anns)
    )


def sidecar_path(notebook_path: str) -> str:
    base = notebook_path[:-6] if notebook_path.endswith(".ipynb") else notebook_path
    return base + ".annotations.json"
