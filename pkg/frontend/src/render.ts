// HTML string rendering. Kept free of DOM APIs so the full page can be
// rebuilt from (overlay, annotations, view state) and unit tested.

import { annotationsForCell, isExpanded, type ViewState } from "./state.js";
import { FLAG_NAMES, type Annotation, type AnnotationStore, type Chapter, type Flags, type Overlay, type Section } from "./types.js";

const FLAG_GLYPHS: Record<keyof Flags, string> = {
  data: "D",
  library: "L",
  graph: "G",
  table: "T",
  model: "M",
  notes: "N",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function flagIcons(flags: Flags): string {
  return FLAG_NAMES.filter((name) => flags[name])
    .map((name) => `<span class="flag flag-${name}" title="${name}">${FLAG_GLYPHS[name]}</span>`)
    .join("");
}

function chapterRange(chapter: Chapter): [number, number] {
  const first = chapter.cell_ranges[0][0];
  const last = chapter.cell_ranges[chapter.cell_ranges.length - 1][1];
  return [first, last];
}

export function renderPanel(overlay: Overlay, state: ViewState): string {
  if (overlay.chapters.length === 0) {
    return `<p class="empty">No chapters found in this notebook.</p>`;
  }
  const rows = overlay.chapters.map((ch) => {
    const [first, last] = chapterRange(ch);
    const open = state.openChapter === ch.number ? " open" : "";
    return (
      `<li class="panel-row${open}" data-chapter="${ch.number}">` +
      `<span class="panel-title">${escapeHtml(ch.title)}</span>` +
      `<span class="panel-range">cells ${first}–${last} (${ch.cell_count})</span>` +
      flagIcons(ch.flags) +
      `</li>`
    );
  });
  return `<ul class="panel">${rows.join("")}</ul>`;
}

// Wrap annotated character ranges of one cell's source in <mark>
// elements; the comment rides on the title attribute so it appears on
// hover only and never occludes the code.
export function renderCellSource(source: string, annotations: Annotation[]): string {
  const sorted = [...annotations].sort((a, b) => a.start_char - b.start_char);
  let html = "";
  let pos = 0;
  for (const ann of sorted) {
    if (ann.start_char < pos) continue; // overlapping ranges keep the first
    html += escapeHtml(source.slice(pos, ann.start_char));
    const text = escapeHtml(source.slice(ann.start_char, ann.end_char));
    const tip = escapeHtml(ann.author ? `${ann.comment} — ${ann.author}` : ann.comment);
    html += `<mark class="hl hl-${ann.color.toLowerCase()}" data-annotation="${ann.id}" title="${tip}">${text}</mark>`;
    pos = ann.end_char;
  }
  html += escapeHtml(source.slice(pos));
  return html;
}

export interface CellContent {
  display: number;
  source: string;
  outputsHtml: string; // pre-rendered output, already safe
}

function renderSection(
  chapter: Chapter,
  section: Section,
  index: number,
  state: ViewState,
  store: AnnotationStore,
  cells: Map<number, CellContent>,
): string {
  const expanded = isExpanded(state, chapter.number, index + 1);
  const [a, b] = section.cell_range;
  const head =
    `<div class="section-head" data-chapter="${chapter.number}" data-section="${index + 1}">` +
    `<span class="icon icon-${section.icon.toLowerCase()}"></span>` +
    `<span class="section-title">${escapeHtml(section.title)}</span>` +
    `<span class="section-range">cells ${a}–${b}</span>` +
    flagIcons(section.flags) +
    `</div>`;
  if (!expanded) {
    return `<div class="section collapsed">${head}</div>`;
  }
  const body: string[] = [];
  for (let n = a; n <= b; n++) {
    const cell = cells.get(n);
    if (!cell) continue;
    const anns = annotationsForCell(store, n);
    body.push(
      `<div class="cell" data-cell="${n}">` +
        `<div class="cell-number">[${n}]</div>` +
        `<pre class="cell-source">${renderCellSource(cell.source, anns)}</pre>` +
        cell.outputsHtml +
        `</div>`,
    );
  }
  return `<div class="section expanded">${head}<div class="section-body">${body.join("")}</div></div>`;
}

export function renderCanvas(
  overlay: Overlay,
  state: ViewState,
  store: AnnotationStore,
  cells: Map<number, CellContent>,
): string {
  const chapter = overlay.chapters.find((ch) => ch.number === state.openChapter);
  if (!chapter) {
    return `<p class="empty">Pick a chapter from the side panel.</p>`;
  }
  const sections = chapter.sections
    .map((sec, i) => renderSection(chapter, sec, i, state, store, cells))
    .join("");
  return (
    `<h2>${escapeHtml(chapter.title)}</h2>` +
    `<p class="description">${escapeHtml(chapter.description)}</p>` +
    sections
  );
}
