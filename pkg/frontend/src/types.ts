// Shapes consumed from the engine's HTTP API. Mirrors docs/overlay.schema.json.

export interface Flags {
  data: boolean;
  library: boolean;
  graph: boolean;
  table: boolean;
  model: boolean;
  notes: boolean;
}

export interface Section {
  title: string;
  cell_range: [number, number]; // 1-based, inclusive
  flags: Flags;
  icon: string;
  collapsed_default: boolean;
}

export interface Chapter {
  number: number;
  title: string;
  description: string;
  cell_ranges: [number, number][];
  cell_count: number;
  flags: Flags;
  sections: Section[];
}

export interface Overlay {
  notebook_id: string;
  generator_version: string;
  encoding_summary: number[];
  chapters: Chapter[];
}

export interface Annotation {
  id: string;
  cell_display: number;
  start_char: number;
  end_char: number;
  color: string;
  comment: string;
  author: string;
  created_at: string;
  orphaned: boolean;
}

export interface AnnotationStore {
  notebook_id: string;
  annotations: Annotation[];
}

export interface NewAnnotation {
  cell_display: number;
  start_char: number;
  end_char: number;
  color: string;
  comment: string;
  author?: string;
}

export const COLORS = ["Yellow", "Blue", "Green", "Pink", "Orange"] as const;

export const FLAG_NAMES: (keyof Flags)[] = [
  "data",
  "library",
  "graph",
  "table",
  "model",
  "notes",
];
