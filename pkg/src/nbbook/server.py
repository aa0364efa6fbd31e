"""Tiny local HTTP server hosting the viewer and the overlay API.

Endpoints: GET /overlay, GET/POST /annotations, GET /export. Static
viewer assets are served from an assets directory when given. Annotation
writes are serialized and persisted to the sidecar file.
"""

import json
import socket
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import annotations as ann_mod
from . import exporter
from .errors import AnchorOutOfBounds, NbBookError, UnknownCell

_FALLBACK_PAGE = b"""<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>nbbook</title></head>
<body><h1>nbbook engine</h1>
<p>No viewer bundle configured. API: <a href="/overlay">/overlay</a>,
<a href="/annotations">/annotations</a>, /export?format=markdown&amp;expand=all</p>
</body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript",
    ".css": "text/css",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
}


class _State:
    def __init__(self, overlay, overlay_bytes, notebook, store, sidecar):
        self.overlay = overlay
        self.overlay_bytes = overlay_bytes
        self.notebook = notebook
        self.store = store
        self.sidecar = sidecar
        self.lock = threading.Lock()


def _make_handler(state: _State, assets: Path = None):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            pass

        def _send(self, status, body: bytes, content_type="application/json"):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error_json(self, status, name, message):
            self._send(status, json.dumps({"error": name, "message": message}).encode())

        def do_GET(self):
            url = urlparse(self.path)
            if url.path == "/overlay":
                self._send(200, state.overlay_bytes)
            elif url.path == "/annotations":
                with state.lock:
                    body = ann_mod.save_store(state.store)
                self._send(200, body)
            elif url.path == "/export":
                params = parse_qs(url.query)
                fmt = params.get("format", ["markdown"])[0]
                expand = params.get("expand", ["all"])[0]
                from .cli import _parse_expand

                try:
                    view_state = _parse_expand(expand, state.overlay)
                    with state.lock:
                        doc = exporter.export(
                            state.overlay, state.notebook, state.store, view_state, fmt
                        )
                except NbBookError as e:
                    self._send_error_json(400, type(e).__name__, str(e))
                    return
                ctype = {
                    "markdown": "text/markdown; charset=utf-8",
                    "html": "text/html; charset=utf-8",
                    "snapshot-json": "application/json",
                }.get(fmt, "application/octet-stream")
                self._send(200, doc, ctype)
            else:
                self._serve_static(url.path)

        def _serve_static(self, path):
            if assets is None:
                if path in ("/", "/index.html"):
                    self._send(200, _FALLBACK_PAGE, "text/html; charset=utf-8")
                else:
                    self._send_error_json(404, "NotFound", path)
                return
            rel = path.lstrip("/") or "index.html"
            target = (assets / rel).resolve()
            if not str(target).startswith(str(assets.resolve())) or not target.is_file():
                self._send_error_json(404, "NotFound", path)
                return
            ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            self._send(200, target.read_bytes(), ctype)

        def do_POST(self):
            url = urlparse(self.path)
            if url.path != "/annotations":
                self._send_error_json(404, "NotFound", url.path)
                return
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length)
            try:
                entry = json.loads(raw)
                ann = ann_mod.new_annotation(
                    cell_display=int(entry["cell_display"]),
                    start_char=int(entry["start_char"]),
                    end_char=int(entry["end_char"]),
                    color=str(entry["color"]),
                    comment=str(entry.get("comment", "")),
                    author=str(entry.get("author", "")),
                )
            except (ValueError, KeyError, TypeError) as e:
                self._send_error_json(422, "MalformedAnnotation", str(e))
                return
            try:
                with state.lock:
                    state.store = ann_mod.add_annotation(state.store, ann, state.notebook)
                    if state.sidecar:
                        Path(state.sidecar).write_bytes(ann_mod.save_store(state.store))
            except (AnchorOutOfBounds, UnknownCell) as e:
                self._send_error_json(422, type(e).__name__, str(e))
                return
            self._send(201, json.dumps({"id": ann.id}).encode())

    return Handler


def make_server(overlay, overlay_bytes, notebook, store, sidecar, port, assets=None):
    state = _State(overlay, overlay_bytes, notebook, store, sidecar)
    handler = _make_handler(state, Path(assets) if assets else None)
    try:
        return ThreadingHTTPServer(("127.0.0.1", port), handler), state
    except OSError as e:
        raise OSError(f"port {port} unavailable: {e}") from e


def run_server(overlay, overlay_bytes, notebook, store, sidecar, port, assets=None) -> int:
    try:
        server, _ = make_server(
            overlay, overlay_bytes, notebook, store, sidecar, port, assets
        )
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"serving on http://127.0.0.1:{port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0
