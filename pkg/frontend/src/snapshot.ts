// Pull renderable cell content out of a snapshot-json export. The
// snapshot is the only API surface that carries cell sources and
// outputs, so the viewer refreshes it whenever the expansion changes.

import { escapeHtml, type CellContent } from "./render.js";

interface SnapshotOutput {
  kind: string;
  text: string;
  data: string;
}

interface SnapshotCell {
  display: number;
  kind: string;
  source: string;
  outputs?: SnapshotOutput[];
}

interface SnapshotSection {
  cells?: SnapshotCell[];
}

interface SnapshotChapter {
  sections: SnapshotSection[];
}

export interface Snapshot {
  generator_version: string;
  overlay_subset?: { chapters?: SnapshotChapter[] };
}

export function renderOutputs(outputs: SnapshotOutput[]): string {
  const parts: string[] = [];
  for (const out of outputs) {
    if (out.kind === "Image" && out.data) {
      parts.push(`<img class="output output-image" src="data:image/png;base64,${out.data}" alt="cell output">`);
    } else if (out.text) {
      const cls = out.kind === "Error" ? "output output-error" : "output output-text";
      parts.push(`<pre class="${cls}">${escapeHtml(out.text)}</pre>`);
    }
  }
  return parts.join("");
}

export function cellsFromSnapshot(snapshot: Snapshot): Map<number, CellContent> {
  const cells = new Map<number, CellContent>();
  for (const ch of snapshot.overlay_subset?.chapters ?? []) {
    for (const sec of ch.sections) {
      for (const cell of sec.cells ?? []) {
        cells.set(cell.display, {
          display: cell.display,
          source: cell.source,
          outputsHtml: renderOutputs(cell.outputs ?? []),
        });
      }
    }
  }
  return cells;
}
