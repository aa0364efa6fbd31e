"""Parse .ipynb files into an ordered, immutable cell model.

Only nbformat major version 4 is accepted. Outputs are summarized into
coarse kinds (image/table/text/error/other) so later stages can compute
flags without touching raw mime bundles.
"""

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Set

from .errors import MalformedJson, UnsupportedFormat


class CellKind(Enum):
    Code = "code"
    Markdown = "markdown"
    Raw = "raw"


class OutputKind(Enum):
    Image = "image"
    Table = "table"
    Text = "text"
    Error = "error"
    Other = "other"


@dataclass(frozen=True)
class OutputRecord:
    kind: OutputKind
    mime_hint: str = ""
    text: str = ""  # plain-text rendering, when available
    data: str = ""  # base64 payload for images


@dataclass(frozen=True)
class Cell:
    index: int
    kind: CellKind
    source: str
    outputs: tuple = ()

    @property
    def display_number(self) -> int:
        # UI numbering counts from 1
        return self.index + 1


@dataclass(frozen=True)
class Notebook:
    id: str
    cells: tuple
    format_version: tuple = (4, 0)


_KIND_MAP = {"code": CellKind.Code, "markdown": CellKind.Markdown, "raw": CellKind.Raw}

# A pandas-style text table: an indented header row of column names followed
# by at least one row starting with an index token.
_DF_HEADER = re.compile(r"^\s+\S+(\s+\S+)*\s*$")
_DF_ROW = re.compile(r"^\S+\s+\S+")


def _join_source(source) -> str:
    if isinstance(source, list):
        return "".join(source)
    return source if isinstance(source, str) else ""


def looks_like_dataframe_text(text: str) -> bool:
    """Heuristic: header line of column names plus aligned data rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        return False
    if not _DF_HEADER.match(lines[0]):
        return False
    return any(_DF_ROW.match(ln) for ln in lines[1:])


def _classify_output_entry(entry: dict) -> OutputRecord:
    otype = entry.get("output_type", "")
    if otype == "error":
        text = "\n".join(entry.get("traceback", [])) or entry.get("evalue", "")
        return OutputRecord(OutputKind.Error, "error", text=text)
    if otype == "stream":
        text = _join_source(entry.get("text", ""))
        kind = OutputKind.Table if looks_like_dataframe_text(text) else OutputKind.Text
        return OutputRecord(kind, "text/plain", text=text)
    data = entry.get("data", {})
    if isinstance(data, dict):
        plain = _join_source(data.get("text/plain", ""))
        for mime in data:
            if mime.startswith("image/"):
                return OutputRecord(
                    OutputKind.Image, mime, text=plain, data=_join_source(data[mime])
                )
        html = _join_source(data.get("text/html", ""))
        if "<table" in html:
            return OutputRecord(OutputKind.Table, "text/html", text=plain)
        if "text/plain" in data:
            kind = OutputKind.Table if looks_like_dataframe_text(plain) else OutputKind.Text
            return OutputRecord(kind, "text/plain", text=plain)
        if data:
            return OutputRecord(OutputKind.Other, sorted(data)[0])
    return OutputRecord(OutputKind.Other, "")


def parse_notebook(raw: bytes, notebook_id: str = "") -> Notebook:
    """Parse nbformat-4 JSON bytes into a Notebook.

    Raises MalformedJson for unparseable input and UnsupportedFormat when
    the major version differs from 4. Zero cells is a valid document.
    """
    try:
        doc = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedJson(f"not a JSON document: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedJson("top level is not an object")
    major = doc.get("nbformat")
    if major != 4:
        raise UnsupportedFormat(f"nbformat major version {major!r}, expected 4")
    minor = doc.get("nbformat_minor", 0)

    cells = []
    for i, raw_cell in enumerate(doc.get("cells", [])):
        if not isinstance(raw_cell, dict):
            continue
        kind = _KIND_MAP.get(raw_cell.get("cell_type"), CellKind.Raw)
        source = _join_source(raw_cell.get("source", ""))
        outputs = ()
        if kind is CellKind.Code:
            raw_outputs = raw_cell.get("outputs", [])
            if isinstance(raw_outputs, list):
                outputs = tuple(
                    _classify_output_entry(o) for o in raw_outputs if isinstance(o, dict)
                )
        cells.append(Cell(index=len(cells), kind=kind, source=source, outputs=outputs))

    return Notebook(id=notebook_id, cells=tuple(cells), format_version=(major, minor))


def classify_outputs(cell: Cell) -> Set[OutputKind]:
    """Distinct output kinds of a code cell; empty set for non-code cells."""
    if cell.kind is not CellKind.Code:
        return set()
    return {rec.kind for rec in cell.outputs}
