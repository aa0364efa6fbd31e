"""End-to-end demo: analyze a fixture notebook, print its book outline,
and write a fully expanded markdown export next to it.

Usage: python3 scripts/demo.py [notebook.ipynb]
"""

import sys
from pathlib import Path

from nbbook.annotations import AnnotationStore
from nbbook.catalog import load_seed_catalog
from nbbook.exporter import export, full_view_state
from nbbook.notebook_model import parse_notebook
from nbbook.overlay import build_overlay, serialize_overlay
from nbbook.patterns import load_seed_patterns

FLAG_ORDER = ("data", "library", "graph", "table", "model", "notes")


def main() -> int:
    default = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "study_m.ipynb"
    path = Path(sys.argv[1]) if len(sys.argv) > 1 else default
    nb = parse_notebook(path.read_bytes(), notebook_id=path.name)
    doc, enc = build_overlay(nb, load_seed_catalog(), load_seed_patterns())

    print(f"{path.name}: {len(nb.cells)} cells, {len(enc.units)} encoded units")
    for ch in doc.chapters:
        flags = "".join(f[0].upper() for f in FLAG_ORDER if ch.flags.as_dict()[f])
        first, last = ch.cell_ranges[0][0], ch.cell_ranges[-1][1]
        print(f"  {ch.number}. {ch.title}  [cells {first}-{last}] {flags}")
        print(f"     {ch.description}")
        for sec in ch.sections:
            a, b = sec.cell_range
            print(f"     - {sec.title} ({sec.icon}, cells {a}-{b})")

    out_dir = Path.cwd()
    (out_dir / f"{path.stem}.overlay.json").write_bytes(serialize_overlay(doc))
    book = export(doc, nb, AnnotationStore(notebook_id=nb.id), full_view_state(doc), "markdown")
    (out_dir / f"{path.stem}.book.md").write_bytes(book)
    print(f"wrote {path.stem}.overlay.json and {path.stem}.book.md")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
