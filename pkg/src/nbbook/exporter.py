"""Export the expanded parts of an overlay, with annotations, and re-import.

The export inclusion law: a cell appears in the document exactly when it
lies inside an expanded section; an annotation appears exactly when its
cell appears. Collapsed sections render as title-only stubs; chapter
titles and descriptions always appear. Output is deterministic bytes.
"""

import html as html_mod
import json
import re
from dataclasses import dataclass, field
from typing import List, Set, Tuple

from .annotations import Annotation, AnnotationStore
from .errors import InvalidViewState, MalformedSnapshot, UnknownFormat, VersionMismatch
from .notebook_model import CellKind, Notebook, OutputKind
from .overlay import GENERATOR_VERSION, OverlayDocument, overlay_to_dict

FORMATS = ("markdown", "html", "snapshot-json")


@dataclass(frozen=True)
class ViewState:
    expanded_sections: frozenset = frozenset()  # of (chapter_number, section_index 1-based)
    expanded_chapters: frozenset = frozenset()  # of chapter_number


def validate_view_state(view_state: ViewState, overlay: OverlayDocument) -> None:
    by_number = {ch.number: ch for ch in overlay.chapters}
    for num in view_state.expanded_chapters:
        if num not in by_number:
            raise InvalidViewState(f"no chapter {num} in overlay")
    for num, sec in view_state.expanded_sections:
        ch = by_number.get(num)
        if ch is None or not (1 <= sec <= len(ch.sections)):
            raise InvalidViewState(f"no section {num}.{sec} in overlay")


def full_view_state(overlay: OverlayDocument) -> ViewState:
    return ViewState(
        expanded_sections=frozenset(
            (ch.number, i + 1)
            for ch in overlay.chapters
            for i in range(len(ch.sections))
        ),
        expanded_chapters=frozenset(ch.number for ch in overlay.chapters),
    )


def included_cells(overlay: OverlayDocument, view_state: ViewState) -> Set[int]:
    """Display numbers of cells inside expanded sections."""
    cells: Set[int] = set()
    for ch in overlay.chapters:
        for i, sec in enumerate(ch.sections):
            if (ch.number, i + 1) in view_state.expanded_sections:
                cells.update(range(sec.cell_range[0], sec.cell_range[1] + 1))
    return cells


def _included_annotations(store: AnnotationStore, cells: Set[int]) -> List[Annotation]:
    anns = [a for a in store.annotations if a.cell_display in cells]
    anns.sort(key=lambda a: (a.cell_display, a.start_char, a.created_at, a.id))
    return anns


def _cell_annotations(anns: List[Annotation], display: int) -> List[Annotation]:
    return [a for a in anns if a.cell_display == display]


def _export_markdown(
    overlay: OverlayDocument, nb: Notebook, anns: List[Annotation], view_state: ViewState
) -> str:
    lines: List[str] = [f"# {overlay.notebook_id or 'Notebook'}", ""]
    for ch in overlay.chapters:
        lines.append(f"## Chapter {ch.number}: {ch.title}")
        if ch.description:
            lines.append("")
            lines.append(ch.description)
        lines.append("")
        for i, sec in enumerate(ch.sections):
            a, b = sec.cell_range
            expanded = (ch.number, i + 1) in view_state.expanded_sections
            lines.append(f"### {sec.title} (cells {a}-{b})")
            if not expanded:
                lines.append("*(collapsed)*")
                lines.append("")
                continue
            lines.append("")
            for display in range(a, b + 1):
                cell = nb.cells[display - 1]
                if cell.kind is CellKind.Code:
                    lines.append(f"**Cell {display}**")
                    lines.append("```python")
                    lines.append(cell.source)
                    lines.append("```")
                    for out in cell.outputs:
                        if out.kind is OutputKind.Image:
                            lines.append(f"![output image](cell-{display}-output.{out.mime_hint.split('/')[-1]})")
                        elif out.text:
                            lines.append("```text")
                            lines.append(out.text.rstrip("\n"))
                            lines.append("```")
                elif cell.kind is CellKind.Markdown:
                    lines.append(cell.source)
                for ann in _cell_annotations(anns, display):
                    who = f" — {ann.author}" if ann.author else ""
                    lines.append(f"> **[{ann.color}]** {ann.comment}{who}")
                lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


_HTML_STYLE = (
    "body{font-family:sans-serif;max-width:60em;margin:2em auto;padding:0 1em}"
    "pre{background:#f4f4f4;padding:.7em;overflow-x:auto}"
    ".stub{color:#777;font-style:italic}"
    ".callout{border-left:4px solid #ccc;padding:.3em .7em;margin:.4em 0}"
    ".Yellow{border-color:#e6c200}.Blue{border-color:#4a90d9}.Green{border-color:#3cab57}"
    ".Pink{border-color:#d95ca8}.Orange{border-color:#e08030}"
    ".desc{color:#444}"
)


def _export_html(
    overlay: OverlayDocument, nb: Notebook, anns: List[Annotation], view_state: ViewState
) -> str:
    esc = html_mod.escape
    parts: List[str] = [
        "<!DOCTYPE html>",
        "<html><head><meta charset=\"utf-8\">",
        f"<title>{esc(overlay.notebook_id or 'Notebook')}</title>",
        f"<style>{_HTML_STYLE}</style></head><body>",
        f"<h1>{esc(overlay.notebook_id or 'Notebook')}</h1>",
    ]
    for ch in overlay.chapters:
        parts.append(f"<h2>Chapter {ch.number}: {esc(ch.title)}</h2>")
        if ch.description:
            parts.append(f"<p class=\"desc\">{esc(ch.description)}</p>")
        for i, sec in enumerate(ch.sections):
            a, b = sec.cell_range
            expanded = (ch.number, i + 1) in view_state.expanded_sections
            parts.append(f"<h3>{esc(sec.title)} <small>(cells {a}-{b})</small></h3>")
            if not expanded:
                parts.append("<p class=\"stub\">(collapsed)</p>")
                continue
            for display in range(a, b + 1):
                cell = nb.cells[display - 1]
                if cell.kind is CellKind.Code:
                    parts.append(f"<h4>Cell {display}</h4>")
                    parts.append(f"<pre><code>{esc(cell.source)}</code></pre>")
                    for out in cell.outputs:
                        if out.kind is OutputKind.Image and out.data:
                            payload = out.data.replace("\n", "")
                            parts.append(
                                f"<img src=\"data:{out.mime_hint};base64,{payload}\" alt=\"output\">"
                            )
                        elif out.text:
                            parts.append(f"<pre>{esc(out.text.rstrip())}</pre>")
                elif cell.kind is CellKind.Markdown:
                    parts.append(f"<p>{esc(cell.source)}</p>")
                for ann in _cell_annotations(anns, display):
                    who = f" — {esc(ann.author)}" if ann.author else ""
                    parts.append(
                        f"<div class=\"callout {ann.color}\"><b>[{ann.color}]</b> "
                        f"{esc(ann.comment)}{who}</div>"
                    )
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def _snapshot_dict(
    overlay: OverlayDocument, nb: Notebook, anns: List[Annotation], view_state: ViewState
) -> dict:
    cells = included_cells(overlay, view_state)
    subset = overlay_to_dict(overlay)
    for ch in subset["chapters"]:
        kept = []
        for i, sec in enumerate(ch["sections"]):
            if (ch["number"], i + 1) in view_state.expanded_sections:
                sec = dict(sec)
                sec["section_index"] = i + 1
                sec["cells"] = [
                    {
                        "display": d,
                        "kind": nb.cells[d - 1].kind.value,
                        "source": nb.cells[d - 1].source,
                        "outputs": [
                            {
                                "kind": o.kind.value,
                                "text": o.text or "",
                                "data": o.data or "",
                            }
                            for o in nb.cells[d - 1].outputs
                        ],
                    }
                    for d in range(sec["cell_range"][0], sec["cell_range"][1] + 1)
                ]
                kept.append(sec)
        ch["sections"] = kept
    return {
        "generator_version": overlay.generator_version,
        "view_state": {
            "expanded_chapters": sorted(view_state.expanded_chapters),
            "expanded_sections": [list(t) for t in sorted(view_state.expanded_sections)],
        },
        "annotations": [
            {
                "id": a.id,
                "cell_display": a.cell_display,
                "start_char": a.start_char,
                "end_char": a.end_char,
                "color": a.color,
                "comment": a.comment,
                "author": a.author,
                "created_at": a.created_at,
            }
            for a in anns
        ],
        "overlay_subset": subset,
    }


def export(
    overlay: OverlayDocument,
    notebook: Notebook,
    store: AnnotationStore,
    view_state: ViewState,
    fmt: str,
) -> bytes:
    """Render the expanded view to the requested format."""
    if fmt not in FORMATS:
        raise UnknownFormat(f"format {fmt!r}; expected one of {FORMATS}")
    validate_view_state(view_state, overlay)
    anns = _included_annotations(store, included_cells(overlay, view_state))
    if fmt == "markdown":
        return _export_markdown(overlay, notebook, anns, view_state).encode("utf-8")
    if fmt == "html":
        return _export_html(overlay, notebook, anns, view_state).encode("utf-8")
    doc = _snapshot_dict(overlay, notebook, anns, view_state)
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8")


def _version_tuple(version: str) -> Tuple[int, ...]:
    nums = re.findall(r"\d+", version)
    return tuple(int(x) for x in nums) or (0,)


def import_snapshot(raw: bytes) -> Tuple[ViewState, AnnotationStore]:
    """Restore view state and annotations from a snapshot-json export."""
    try:
        doc = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedSnapshot(f"snapshot is not JSON: {e}") from e
    if not isinstance(doc, dict) or "view_state" not in doc:
        raise MalformedSnapshot("snapshot lacks a view_state")
    if _version_tuple(doc.get("generator_version", "")) > _version_tuple(GENERATOR_VERSION):
        raise VersionMismatch(
            f"snapshot from {doc.get('generator_version')}, reader is {GENERATOR_VERSION}"
        )
    vs = doc["view_state"]
    try:
        view_state = ViewState(
            expanded_sections=frozenset(tuple(t) for t in vs.get("expanded_sections", [])),
            expanded_chapters=frozenset(vs.get("expanded_chapters", [])),
        )
        anns = tuple(
            Annotation(
                id=str(a["id"]),
                cell_display=int(a["cell_display"]),
                start_char=int(a["start_char"]),
                end_char=int(a["end_char"]),
                color=str(a["color"]),
                comment=str(a.get("comment", "")),
                author=str(a.get("author", "")),
                created_at=int(a.get("created_at", 0)),
            )
            for a in doc.get("annotations", [])
        )
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise MalformedSnapshot(f"snapshot fields invalid: {e}") from e
    subset = doc.get("overlay_subset", {})
    return view_state, AnnotationStore(
        notebook_id=str(subset.get("notebook_id", "")), annotations=anns
    )
