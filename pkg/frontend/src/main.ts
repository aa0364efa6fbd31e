// Viewer bootstrap: fetch overlay and annotations, render the side
// panel and reading canvas, and wire up section toggling, the
// select-to-annotate palette, and export/import.

import { fetchAnnotations, fetchOverlay, postAnnotation } from "./api.js";
import { renderCanvas, renderPanel, type CellContent } from "./render.js";
import { cellsFromSnapshot, type Snapshot } from "./snapshot.js";
import {
  exportUrl,
  initialState,
  openChapter,
  optimisticAdd,
  reconcile,
  rollback,
  stateFromSnapshot,
  toggleSection,
  type ViewState,
} from "./state.js";
import { COLORS, type AnnotationStore, type Overlay } from "./types.js";

let overlay: Overlay;
let store: AnnotationStore;
let state: ViewState = initialState();
let cells: Map<number, CellContent> = new Map();
let tempCounter = 0;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

async function refreshCells(): Promise<void> {
  if (state.expandedSections.length === 0) {
    cells = new Map();
    return;
  }
  const resp = await fetch(exportUrl(state, "snapshot-json"));
  if (!resp.ok) return;
  cells = cellsFromSnapshot((await resp.json()) as Snapshot);
}

function render(): void {
  $("panel").innerHTML = renderPanel(overlay, state);
  $("canvas").innerHTML = renderCanvas(overlay, state, store, cells);
  ($("export-md") as HTMLAnchorElement).href = exportUrl(state, "markdown");
  ($("export-html") as HTMLAnchorElement).href = exportUrl(state, "html");
  ($("export-json") as HTMLAnchorElement).href = exportUrl(state, "snapshot-json");
}

async function setState(next: ViewState): Promise<void> {
  state = next;
  await refreshCells();
  render();
}

function showBanner(message: string): void {
  const banner = $("banner");
  banner.textContent = message;
  banner.classList.add("visible");
  setTimeout(() => banner.classList.remove("visible"), 4000);
}

// Selection palette: appears over a text selection inside one cell.
function selectionAnchor(): { cell: number; start: number; end: number; text: string } | null {
  const sel = window.getSelection();
  if (!sel || sel.isCollapsed || sel.rangeCount === 0) return null;
  const range = sel.getRangeAt(0);
  const pre = (range.commonAncestorContainer.parentElement ?? null)?.closest("pre.cell-source");
  if (!pre) return null;
  const cellDiv = pre.closest(".cell") as HTMLElement | null;
  if (!cellDiv) return null;
  const cell = Number(cellDiv.dataset.cell);
  // offset of the selection within the cell's full text
  const before = document.createRange();
  before.selectNodeContents(pre);
  before.setEnd(range.startContainer, range.startOffset);
  const start = before.toString().length;
  const text = sel.toString();
  if (text.length === 0) return null;
  return { cell, start, end: start + text.length, text };
}

function hidePalette(): void {
  $("palette").classList.remove("visible");
}

function showPalette(x: number, y: number): void {
  const palette = $("palette");
  palette.style.left = `${x}px`;
  palette.style.top = `${y}px`;
  palette.classList.add("visible");
}

async function annotate(color: string): Promise<void> {
  const anchor = selectionAnchor();
  hidePalette();
  if (!anchor) return;
  const comment = window.prompt("Comment for this highlight:") ?? "";
  const tempId = `temp-${++tempCounter}`;
  const optimistic = {
    id: tempId,
    cell_display: anchor.cell,
    start_char: anchor.start,
    end_char: anchor.end,
    color,
    comment,
    author: "",
    created_at: new Date().toISOString(),
    orphaned: false,
  };
  store = optimisticAdd(store, optimistic);
  render();
  const result = await postAnnotation({
    cell_display: anchor.cell,
    start_char: anchor.start,
    end_char: anchor.end,
    color,
    comment,
  });
  if (result.ok && result.id) {
    store = reconcile(store, tempId, result.id);
  } else {
    store = rollback(store, tempId);
    showBanner(`Annotation rejected: ${result.error}`);
  }
  render();
}

function wireEvents(): void {
  $("panel").addEventListener("click", (ev) => {
    const row = (ev.target as HTMLElement).closest("[data-chapter]") as HTMLElement | null;
    if (row) void setState(openChapter(state, Number(row.dataset.chapter)));
  });

  $("canvas").addEventListener("click", (ev) => {
    const head = (ev.target as HTMLElement).closest(".section-head") as HTMLElement | null;
    if (head) {
      void setState(toggleSection(state, Number(head.dataset.chapter), Number(head.dataset.section)));
    }
  });

  document.addEventListener("mouseup", (ev) => {
    if (($(`palette`)).contains(ev.target as Node)) return;
    if (selectionAnchor()) {
      showPalette(ev.pageX + 4, ev.pageY + 4);
    } else {
      hidePalette();
    }
  });

  const palette = $("palette");
  for (const color of COLORS) {
    const btn = document.createElement("button");
    btn.className = `swatch swatch-${color.toLowerCase()}`;
    btn.title = color;
    btn.addEventListener("click", () => void annotate(color));
    palette.appendChild(btn);
  }

  ($("import-snapshot") as HTMLInputElement).addEventListener("change", async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const snapshot = JSON.parse(await file.text()) as Snapshot;
      await setState({ ...stateFromSnapshot(snapshot), openChapter: state.openChapter });
    } catch {
      showBanner("Could not read that snapshot file.");
    }
    input.value = "";
  });
}

async function init(): Promise<void> {
  try {
    [overlay, store] = await Promise.all([fetchOverlay(), fetchAnnotations()]);
  } catch (err) {
    const banner = $("banner");
    banner.innerHTML = `Failed to load the overlay. <button id="retry">Retry</button>`;
    banner.classList.add("visible");
    $("retry").addEventListener("click", () => void init());
    return;
  }
  $("banner").classList.remove("visible");
  if (overlay.chapters.length > 0) {
    state = openChapter(state, overlay.chapters[0].number);
  }
  wireEvents();
  render();
}

if (typeof document !== "undefined") {
  void init();
}
