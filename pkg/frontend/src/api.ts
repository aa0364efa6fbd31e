// Thin wrappers over the engine's HTTP API. The viewer issues no other
// requests; annotation POST is the only write.

import type { AnnotationStore, NewAnnotation, Overlay } from "./types.js";

export async function fetchOverlay(): Promise<Overlay> {
  const resp = await fetch("/overlay");
  if (!resp.ok) throw new Error(`overlay fetch failed: ${resp.status}`);
  return (await resp.json()) as Overlay;
}

export async function fetchAnnotations(): Promise<AnnotationStore> {
  const resp = await fetch("/annotations");
  if (!resp.ok) throw new Error(`annotations fetch failed: ${resp.status}`);
  return (await resp.json()) as AnnotationStore;
}

export interface PostResult {
  ok: boolean;
  id?: string;
  error?: string;
}

export async function postAnnotation(entry: NewAnnotation): Promise<PostResult> {
  const resp = await fetch("/annotations", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(entry),
  });
  const body = (await resp.json()) as { id?: string; error?: string; message?: string };
  if (resp.status === 201 && body.id) {
    return { ok: true, id: body.id };
  }
  return { ok: false, error: body.message ?? body.error ?? `status ${resp.status}` };
}
