"""Command-line entry point: analyze, corpus, export, serve.

Exit codes: 0 success, 1 partial success (corpus with skipped
notebooks), 2 fatal (bad inputs or configs).
"""

import argparse
import json
import sys
from pathlib import Path

from . import annotations as ann_mod
from . import exporter
from .catalog import load_catalog, load_seed_catalog, merge_extension
from .encoding import dump_encoding, flag_repeats
from .errors import NbBookError
from .notebook_model import parse_notebook
from .overlay import build_overlay, overlay_from_dict, serialize_overlay
from .patterns import (
    count_frequencies,
    frequency_csv,
    frequency_json,
    load_pattern_catalog,
    load_seed_patterns,
)


def _load_catalogs(args):
    catalog = load_seed_catalog()
    if args.catalog:
        user = load_catalog(Path(args.catalog).read_bytes())
        catalog = merge_extension(catalog, user)
    if args.patterns:
        patterns = load_pattern_catalog(Path(args.patterns).read_bytes())
    else:
        patterns = load_seed_patterns()
    return catalog, patterns


def _parse_expand(spec: str, overlay) -> exporter.ViewState:
    if spec == "all":
        return exporter.full_view_state(overlay)
    if spec == "none":
        return exporter.ViewState()
    sections = set()
    chapters = set()
    for token in spec.replace(",", " ").split():
        if "." in token:
            ch, sec = token.split(".", 1)
            sections.add((int(ch), int(sec)))
            chapters.add(int(ch))
        else:
            num = int(token)
            chapters.add(num)
            for c in overlay.chapters:
                if c.number == num:
                    sections.update((num, i + 1) for i in range(len(c.sections)))
    return exporter.ViewState(
        expanded_sections=frozenset(sections), expanded_chapters=frozenset(chapters)
    )


def cmd_analyze(args) -> int:
    catalog, patterns = _load_catalogs(args)
    nb_path = Path(args.notebook)
    nb = parse_notebook(nb_path.read_bytes(), notebook_id=nb_path.name)
    overlay, enc = build_overlay(nb, catalog, patterns)
    out = Path(args.out) if args.out else nb_path.with_suffix("").with_name(
        nb_path.with_suffix("").name + ".overlay.json"
    )
    out.write_bytes(serialize_overlay(overlay))
    if enc.unknown_calls:
        names = ", ".join(sorted({n for n, _ in enc.unknown_calls}))
        print(
            f"warning: {len(enc.unknown_calls)} call(s) missed the catalog: {names}",
            file=sys.stderr,
        )
    if args.dump_encoding:
        sys.stdout.write(dump_encoding(enc))
    reports = flag_repeats(enc, args.min_repeat_len, args.min_repeat_count)
    for r in reports:
        print(
            f"repeat: {'-'.join(r.subsequence)} x{r.count} (review for purpose)",
            file=sys.stderr,
        )
    print(f"wrote {out}")
    return 0


def cmd_corpus(args) -> int:
    catalog, patterns = _load_catalogs(args)
    from .encoding import collapse_runs, encode_notebook

    corpus = []
    ids = []
    skipped = 0
    for nb_path in sorted(Path(args.directory).glob("*.ipynb")):
        try:
            nb = parse_notebook(nb_path.read_bytes(), notebook_id=nb_path.name)
        except NbBookError as e:
            print(f"warning: skipping {nb_path.name}: {e}", file=sys.stderr)
            skipped += 1
            continue
        corpus.append(collapse_runs(encode_notebook(nb, catalog)))
        ids.append(nb_path.name)
    table = count_frequencies(corpus, patterns)
    out = Path(args.out) if args.out else Path("frequencies.csv")
    out.write_text(frequency_csv(table, ids), encoding="utf-8")
    if args.json:
        out.with_suffix(".json").write_text(frequency_json(table, ids), encoding="utf-8")
    print(f"wrote {out} ({len(ids)} notebooks, {skipped} skipped)")
    return 1 if skipped else 0


def _load_export_inputs(args):
    overlay_raw = Path(args.overlay).read_bytes()
    overlay = overlay_from_dict(json.loads(overlay_raw))
    nb_path = Path(args.notebook) if args.notebook else Path(overlay.notebook_id)
    nb = parse_notebook(nb_path.read_bytes(), notebook_id=nb_path.name)
    if args.annotations and Path(args.annotations).exists():
        store = ann_mod.load_store(Path(args.annotations).read_bytes(), nb, validate=False)
    else:
        store = ann_mod.AnnotationStore(notebook_id=nb.id)
    return overlay, nb, store


def cmd_export(args) -> int:
    overlay, nb, store = _load_export_inputs(args)
    view_state = _parse_expand(args.expand, overlay)
    doc = exporter.export(overlay, nb, store, view_state, args.format)
    out = Path(args.out) if args.out else Path("export." + {
        "markdown": "md", "html": "html", "snapshot-json": "json"
    }[args.format])
    out.write_bytes(doc)
    print(f"wrote {out}")
    return 0


def cmd_serve(args) -> int:
    from .server import run_server

    overlay, nb, store = _load_export_inputs(args)
    overlay_bytes = Path(args.overlay).read_bytes()
    sidecar = args.annotations or ann_mod.sidecar_path(
        args.notebook or overlay.notebook_id
    )
    return run_server(
        overlay=overlay,
        overlay_bytes=overlay_bytes,
        notebook=nb,
        store=store,
        sidecar=sidecar,
        port=args.port,
        assets=args.assets,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbbook",
        description="Infer the purpose of notebook cell groups and render the notebook as a book",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--catalog", help="extra function catalog JSON, merged over the seed")
        p.add_argument("--patterns", help="purpose pattern catalog JSON (default: seed)")
        p.add_argument("--out", help="output path")

    p = sub.add_parser("analyze", help="build an overlay for one notebook")
    p.add_argument("notebook", help="path to .ipynb file")
    common(p)
    p.add_argument("--dump-encoding", action="store_true", help="print encoded units as JSON lines")
    p.add_argument("--min-repeat-len", type=int, default=2)
    p.add_argument("--min-repeat-count", type=int, default=2)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("corpus", help="count purpose-pattern frequencies over a directory")
    p.add_argument("directory", help="directory of .ipynb files")
    common(p)
    p.add_argument("--json", action="store_true", help="also write a JSON twin of the CSV")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("export", help="export the expanded view of an overlay")
    p.add_argument("overlay", help="overlay JSON produced by analyze")
    p.add_argument("--notebook", help="source .ipynb (default: overlay's notebook id)")
    p.add_argument("--annotations", help="annotation sidecar file")
    p.add_argument("--expand", default="all", help="all | none | chapter[.section] list")
    p.add_argument(
        "--format", default="markdown", choices=["markdown", "html", "snapshot-json"]
    )
    p.add_argument("--out", help="output path")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="serve the overlay and viewer over local HTTP")
    p.add_argument("overlay", help="overlay JSON produced by analyze")
    p.add_argument("--notebook", help="source .ipynb (default: overlay's notebook id)")
    p.add_argument("--annotations", help="annotation sidecar file")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--assets", help="directory of static viewer assets")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: {e.filename or e}", file=sys.stderr)
        return 2
    except (NbBookError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
