// Pure view-state and annotation-store transitions. The DOM layer in
// main.ts only ever replaces state through these functions, so the
// rendered page is a function of (overlay, annotations, view state).

import type { Annotation, AnnotationStore, Overlay } from "./types.js";

export interface ViewState {
  openChapter: number | null; // chapter shown on the reading canvas
  expandedSections: string[]; // "chapter.sectionIndex", 1-based, sorted
}

export function initialState(): ViewState {
  return { openChapter: null, expandedSections: [] };
}

export function sectionKey(chapter: number, section: number): string {
  return `${chapter}.${section}`;
}

export function isExpanded(state: ViewState, chapter: number, section: number): boolean {
  return state.expandedSections.includes(sectionKey(chapter, section));
}

export function openChapter(state: ViewState, chapter: number): ViewState {
  return { ...state, openChapter: chapter };
}

// One click expands, a second click collapses.
export function toggleSection(state: ViewState, chapter: number, section: number): ViewState {
  const key = sectionKey(chapter, section);
  const expanded = state.expandedSections.includes(key)
    ? state.expandedSections.filter((k) => k !== key)
    : [...state.expandedSections, key].sort();
  return { ...state, expandedSections: expanded };
}

// Tokens for GET /export?expand=...; the engine accepts a space
// separated list of chapter.section pairs.
export function expandTokens(state: ViewState): string {
  if (state.expandedSections.length === 0) return "none";
  return state.expandedSections.join(" ");
}

export function exportUrl(state: ViewState, format: string): string {
  const expand = encodeURIComponent(expandTokens(state));
  return `/export?format=${encodeURIComponent(format)}&expand=${expand}`;
}

// Restore expansion from a snapshot-json export's view_state block.
export function stateFromSnapshot(snapshot: unknown): ViewState {
  const doc = snapshot as { view_state?: { expanded_sections?: [number, number][] } };
  const pairs = doc?.view_state?.expanded_sections ?? [];
  const expanded = pairs.map(([ch, sec]) => sectionKey(ch, sec)).sort();
  return { openChapter: null, expandedSections: expanded };
}

export function sortAnnotations(annotations: Annotation[]): Annotation[] {
  return [...annotations].sort(
    (a, b) =>
      a.cell_display - b.cell_display ||
      a.start_char - b.start_char ||
      a.created_at.localeCompare(b.created_at),
  );
}

// Optimistic add: show the highlight immediately under a placeholder
// id; reconcile() swaps in the server id, rollback() removes it.
export function optimisticAdd(store: AnnotationStore, ann: Annotation): AnnotationStore {
  return { ...store, annotations: sortAnnotations([...store.annotations, ann]) };
}

export function reconcile(store: AnnotationStore, tempId: string, serverId: string): AnnotationStore {
  return {
    ...store,
    annotations: store.annotations.map((a) => (a.id === tempId ? { ...a, id: serverId } : a)),
  };
}

export function rollback(store: AnnotationStore, tempId: string): AnnotationStore {
  return { ...store, annotations: store.annotations.filter((a) => a.id !== tempId) };
}

export function annotationsForCell(store: AnnotationStore, cellDisplay: number): Annotation[] {
  return sortAnnotations(store.annotations.filter((a) => a.cell_display === cellDisplay));
}

export function chapterByNumber(overlay: Overlay, num: number) {
  return overlay.chapters.find((ch) => ch.number === num) ?? null;
}
