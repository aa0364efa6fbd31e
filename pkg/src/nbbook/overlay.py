"""Assemble chapters, purpose-titled sections, flags, and descriptions.

Chapters come from markdown header cells; sections come from pattern
matches, with fallback sections guaranteeing every code cell is covered
even when nothing matches. The emitted overlay document is the sole
contract with the viewer.
"""

import json
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .catalog import GROUP_NAMES, Catalog
from .encoding import EncodedNotebook, EncodedUnit, collapse_runs, encode_notebook
from .errors import InvalidTiling
from .notebook_model import Cell, CellKind, Notebook, OutputKind
from .patterns import PatternMatch, PurposePattern, match_patterns

GENERATOR_VERSION = "nbbook-0.1.0"

DESCRIPTION_PREFIX = "In this chapter, the data scientist"

_HEADER = re.compile(r"^(#{1,6})(?!#)\s*(.*)$")
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")

# Icon for fallback sections, by category-group title
_GROUP_ICONS = {
    "Load": "Database",
    "Pre-Processing": "Exchange",
    "Statistics": "Puzzle",
    "Visualization": "Camera",
    "Domain Specific Functions": "Cogs",
    "Machine Learning": "Magic",
    "Code": "Archive",
}


@dataclass(frozen=True)
class FlagSet:
    data: bool = False
    library: bool = False
    graph: bool = False
    table: bool = False
    model: bool = False
    notes: bool = False

    def as_dict(self) -> Dict[str, bool]:
        return {
            "data": self.data,
            "library": self.library,
            "graph": self.graph,
            "table": self.table,
            "model": self.model,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class Section:
    title: str
    cell_range: Tuple[int, int]  # 1-based display numbers, inclusive
    flags: FlagSet
    icon: str
    collapsed_default: bool = True


@dataclass
class Chapter:
    number: int
    title: str
    description: str = ""
    cell_ranges: List[Tuple[int, int]] = field(default_factory=list)
    flags: FlagSet = field(default_factory=FlagSet)
    sections: List[Section] = field(default_factory=list)

    @property
    def cell_count(self) -> int:
        return sum(last - first + 1 for first, last in self.cell_ranges)


@dataclass(frozen=True)
class OverlayDocument:
    notebook_id: str
    chapters: Tuple[Chapter, ...]
    encoding_summary: Tuple[int, ...]  # unit count per chapter
    generator_version: str = GENERATOR_VERSION


def header_title(cell: Cell) -> Optional[str]:
    """Title text if the markdown cell's first non-blank line is a header."""
    if cell.kind is not CellKind.Markdown:
        return None
    for line in cell.source.splitlines():
        if not line.strip():
            continue
        m = _HEADER.match(line.strip())
        if m:
            return m.group(2).strip()
        return None
    return None


def build_chapters(nb: Notebook) -> List[Chapter]:
    """Partition cells into chapters at markdown header cells."""
    chapters: List[Chapter] = []
    starts: List[Tuple[int, str]] = []  # (cell index, title)
    for cell in nb.cells:
        title = header_title(cell)
        if title is not None:
            starts.append((cell.index, title))

    n = len(nb.cells)
    if n == 0:
        return []
    if not starts or starts[0][0] > 0:
        first_end = starts[0][0] if starts else n
        chapters.append(Chapter(number=1, title="Introduction", cell_ranges=[(1, first_end)]))
    for i, (start, title) in enumerate(starts):
        end = starts[i + 1][0] if i + 1 < len(starts) else n
        chapters.append(
            Chapter(number=len(chapters) + 1, title=title, cell_ranges=[(start + 1, end)])
        )
    return chapters


def _conjugate(word: str) -> str:
    if word.endswith("y") and len(word) > 1 and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    if word.endswith(("s", "sh", "ch", "x", "z", "o")):
        return word + "es"
    return word + "s"


def compose_description(chapter_markdown: List[str]) -> str:
    """Chapter intro paragraph built from the author's markdown prose.

    Truncated to the first five sentences with a trailing ellipsis.
    """
    sentences: List[str] = []
    for text in chapter_markdown:
        for line in text.splitlines():
            line = line.strip()
            if not line or _HEADER.match(line):
                continue
            sentences.extend(s for s in _SENTENCE_SPLIT.split(line) if s)
    if not sentences:
        return f"{DESCRIPTION_PREFIX} proceeds as follows."
    truncated = len(sentences) > 5
    sentences = sentences[:5]

    first = sentences[0]
    m = re.match(r"^(We|we|I)\s+(\w+)(.*)$", first, flags=re.DOTALL)
    if m:
        body = f"{DESCRIPTION_PREFIX} {_conjugate(m.group(2))}{m.group(3)}"
    else:
        body = f"{DESCRIPTION_PREFIX} proceeds as follows. {first}"
    rest = " ".join(sentences[1:])
    if rest:
        body = f"{body} {rest}"
    if truncated:
        body += "…"
    return body


def compute_flags(cells: List[Cell], enc_units: List[EncodedUnit]) -> FlagSet:
    """Boolean component flags for a span of cells and its encoded units."""
    codes = [str(u.code) for u in enc_units]
    from .encoding import UnitSource

    data = any(c in ("L2", "L3") for c in codes)
    library = any(
        c == "L1" or u.source is UnitSource.ImportStatement
        for c, u in zip(codes, enc_units)
    )
    graph = any(c.startswith("V") or c == "ST3" for c in codes)
    table = any(c == "PP4" for c in codes)
    model = any(c in ("ML2", "ML4", "ML8", "ST5") for c in codes)
    notes = any(cell.kind is CellKind.Markdown for cell in cells)
    for cell in cells:
        kinds = {rec.kind for rec in cell.outputs}
        if OutputKind.Image in kinds:
            graph = True
        if OutputKind.Table in kinds:
            table = True
    return FlagSet(data=data, library=library, graph=graph, table=table, model=model, notes=notes)


def _units_for_cells(enc: EncodedNotebook, first: int, last: int) -> List[EncodedUnit]:
    """Units whose span intersects cell indices [first, last]."""
    return [u for u in enc.units if u.span[0] <= last and u.span[2] >= first]


def _dominant_group(units: List[EncodedUnit]) -> str:
    if not units:
        return "Code"
    counts: Dict[str, int] = {}
    for u in units:
        counts[u.code.group] = counts.get(u.code.group, 0) + 1
    best = max(counts.values())
    for u in units:  # first group reaching the max wins, deterministically
        if counts[u.code.group] == best:
            return GROUP_NAMES[u.code.group]
    return "Code"


def build_sections(
    chapter: Chapter,
    matches: List[PatternMatch],
    enc: EncodedNotebook,
    cells: List[Cell],
    pattern_icons: Dict[str, str] = None,
) -> List[Section]:
    """Sections for one chapter: one per pattern match plus fallbacks.

    Match ranges expand to whole cells; colliding ranges are resolved in
    favor of the earlier match. Code cells not covered by any match are
    grouped into maximal runs titled by their dominant category group.
    """
    pattern_icons = pattern_icons or {}
    first_display, last_display = chapter.cell_ranges[0][0], chapter.cell_ranges[-1][1]
    chapter_cells = {c.index: c for c in cells if first_display <= c.display_number <= last_display}
    code_displays = sorted(
        c.display_number for c in chapter_cells.values() if c.kind is CellKind.Code
    )
    if not code_displays:
        return []

    raw_sections: List[Tuple[int, int, str, str]] = []  # first, last, title, icon
    occupied_until = 0
    for m in sorted(matches, key=lambda m: m.unit_range):
        first = max(m.cell_span[0] + 1, first_display)
        last = min(m.cell_span[1] + 1, last_display)
        if first <= occupied_until:
            first = occupied_until + 1
        if first > last:
            continue
        occupied_until = last
        raw_sections.append(
            (first, last, m.purpose, pattern_icons.get(m.purpose, "Magic"))
        )

    covered = set()
    for first, last, _, _ in raw_sections:
        covered.update(range(first, last + 1))

    # Maximal runs of uncovered code cells become fallback sections; a run
    # breaks where a match section sits in between.
    fallback_runs: List[Tuple[int, int]] = []
    in_run = False
    for d in code_displays:
        if d in covered:
            in_run = False
            continue
        if in_run:
            fallback_runs[-1] = (fallback_runs[-1][0], d)
        else:
            fallback_runs.append((d, d))
            in_run = True

    sections: List[Section] = []
    for first, last, title, icon in raw_sections:
        span_cells = [chapter_cells[i] for i in range(first - 1, last) if i in chapter_cells]
        units = _units_for_cells(enc, first - 1, last - 1)
        sections.append(
            Section(
                title=title,
                cell_range=(first, last),
                flags=compute_flags(span_cells, units),
                icon=icon,
            )
        )
    for first, last in fallback_runs:
        span_cells = [chapter_cells[i] for i in range(first - 1, last) if i in chapter_cells]
        units = _units_for_cells(enc, first - 1, last - 1)
        title = _dominant_group(units)
        sections.append(
            Section(
                title=title,
                cell_range=(first, last),
                flags=compute_flags(span_cells, units),
                icon=_GROUP_ICONS.get(title, "Archive"),
            )
        )
    sections.sort(key=lambda s: s.cell_range)
    return sections


def emit_overlay(
    nb: Notebook, chapters: List[Chapter], version: str = GENERATOR_VERSION
) -> OverlayDocument:
    """Finalize the overlay; chapter ranges must tile display cells 1..n."""
    expected = 1
    for ch in chapters:
        for first, last in ch.cell_ranges:
            if first != expected or last < first:
                raise InvalidTiling(
                    f"chapter {ch.number} range ({first},{last}) breaks tiling at {expected}"
                )
            expected = last + 1
    if expected != len(nb.cells) + 1:
        raise InvalidTiling(f"chapter ranges cover 1..{expected - 1}, notebook has {len(nb.cells)} cells")
    summary = tuple(getattr(ch, "_unit_count", 0) for ch in chapters)
    return OverlayDocument(
        notebook_id=nb.id,
        chapters=tuple(chapters),
        encoding_summary=summary,
        generator_version=version,
    )


def build_overlay(
    nb: Notebook,
    catalog: Catalog,
    patterns: List[PurposePattern],
    version: str = GENERATOR_VERSION,
) -> Tuple[OverlayDocument, EncodedNotebook]:
    """Full pipeline: encode, collapse, match, chapter/section assembly."""
    enc = collapse_runs(encode_notebook(nb, catalog))
    matches = match_patterns(enc, patterns)
    pattern_icons = {p.purpose: p.icon for p in patterns}
    chapters = build_chapters(nb)
    cells = list(nb.cells)

    for ch in chapters:
        first_display, last_display = ch.cell_ranges[0][0], ch.cell_ranges[-1][1]
        ch_cells = [c for c in cells if first_display <= c.display_number <= last_display]
        md_texts = [
            c.source for c in ch_cells
            if c.kind is CellKind.Markdown and header_title(c) is None
        ]
        # header cell prose after the header line also counts
        for c in ch_cells:
            if c.kind is CellKind.Markdown and header_title(c) is not None:
                lines = c.source.splitlines()
                body = [ln for ln in lines[1:]]
                if any(ln.strip() for ln in body):
                    md_texts.insert(0, "\n".join(body))
        ch.description = compose_description(md_texts)
        ch_matches = [
            m for m in matches
            if first_display <= m.cell_span[0] + 1 <= last_display
        ]
        ch.sections = build_sections(ch, ch_matches, enc, cells, pattern_icons)
        units = _units_for_cells(enc, first_display - 1, last_display - 1)
        ch.flags = compute_flags(ch_cells, units)
        ch._unit_count = len(units)

    return emit_overlay(nb, chapters, version), enc


def overlay_to_dict(doc: OverlayDocument) -> dict:
    return {
        "notebook_id": doc.notebook_id,
        "generator_version": doc.generator_version,
        "encoding_summary": list(doc.encoding_summary),
        "chapters": [
            {
                "number": ch.number,
                "title": ch.title,
                "description": ch.description,
                "cell_ranges": [list(r) for r in ch.cell_ranges],
                "cell_count": ch.cell_count,
                "flags": ch.flags.as_dict(),
                "sections": [
                    {
                        "title": s.title,
                        "cell_range": list(s.cell_range),
                        "flags": s.flags.as_dict(),
                        "icon": s.icon,
                        "collapsed_default": s.collapsed_default,
                    }
                    for s in ch.sections
                ],
            }
            for ch in doc.chapters
        ],
    }


def serialize_overlay(doc: OverlayDocument) -> bytes:
    """Deterministic JSON bytes; serializing twice is byte-identical."""
    return json.dumps(overlay_to_dict(doc), indent=2, sort_keys=True).encode("utf-8")


def overlay_from_dict(data: dict) -> OverlayDocument:
    chapters = []
    for ch in data.get("chapters", []):
        chapters.append(
            Chapter(
                number=ch["number"],
                title=ch["title"],
                description=ch.get("description", ""),
                cell_ranges=[tuple(r) for r in ch.get("cell_ranges", [])],
                flags=FlagSet(**ch.get("flags", {})),
                sections=[
                    Section(
                        title=s["title"],
                        cell_range=tuple(s["cell_range"]),
                        flags=FlagSet(**s.get("flags", {})),
                        icon=s.get("icon", "Archive"),
                        collapsed_default=s.get("collapsed_default", True),
                    )
                    for s in ch.get("sections", [])
                ],
            )
        )
    return OverlayDocument(
        notebook_id=data.get("notebook_id", ""),
        chapters=tuple(chapters),
        encoding_summary=tuple(data.get("encoding_summary", [])),
        generator_version=data.get("generator_version", GENERATOR_VERSION),
    )
