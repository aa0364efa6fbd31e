"""Extract the ordered stream of function calls from code cells.

The scanner is tokenizer-level, not a full parser: string literals and
comments are masked out, then balanced-parenthesis scanning emits one
event per call. A call is emitted when its closing parenthesis is seen,
which gives innermost-first order for nested calls. Calls to functions
defined in the notebook are spliced with the definition's own events
(one level deep, no cycles).
"""

import keyword
import re
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .notebook_model import Cell, CellKind, Notebook


@dataclass(frozen=True)
class CallEvent:
    qualified_name: str
    cell_index: int
    line_index: int
    nesting_depth: int
    seq: int


AliasMap = Dict[str, str]
DefinitionTable = Dict[str, Tuple[CallEvent, ...]]


_IMPORT_AS = re.compile(r"^\s*import\s+([\w.]+)(?:\s+as\s+(\w+))?\s*$")
_FROM_IMPORT = re.compile(r"^\s*from\s+([\w.]+)\s+import\s+(.+?)\s*$")
_IMPORT_LINE = re.compile(r"^\s*(import|from)\s+\w")
_DEF_LINE = re.compile(r"^def\s+(\w+)\s*\(")
_NAME = re.compile(r"[A-Za-z_][\w]*(?:\.[A-Za-z_][\w]*)*")


def mask_strings_and_comments(source: str) -> str:
    """Replace string literal contents and comments with spaces.

    Newlines are preserved so offsets and line numbers stay valid.
    Handles single, double, and triple quotes; best-effort on malformed
    input (an unterminated string masks to end of cell).
    """
    out = list(source)
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c == "#":
            j = i
            while j < n and source[j] != "\n":
                out[j] = " "
                j += 1
            i = j
        elif c in "\"'":
            quote = source[i : i + 3] if source[i : i + 3] in ('"""', "'''") else c
            j = i + len(quote)
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source.startswith(quote, j):
                    j += len(quote)
                    break
                j += 1
            else:
                j = n
            for k in range(i, min(j, n)):
                if source[k] != "\n":
                    out[k] = " "
            i = j
        else:
            i += 1
    return "".join(out)


def resolve_aliases(notebook: Notebook) -> AliasMap:
    """Scan import statements across all code cells into an alias map.

    Later imports shadow earlier ones; unparseable lines are skipped.
    """
    aliases: AliasMap = {}
    for cell in notebook.cells:
        if cell.kind is not CellKind.Code:
            continue
        for line in mask_strings_and_comments(cell.source).splitlines():
            line = line.split(";")[0]
            m = _IMPORT_AS.match(line)
            if m:
                module, alias = m.group(1), m.group(2)
                if alias:
                    aliases[alias] = module
                else:
                    head = module.split(".")[0]
                    aliases[head] = head
                continue
            m = _FROM_IMPORT.match(line)
            if m:
                module, names = m.group(1), m.group(2)
                for part in names.strip("()").split(","):
                    part = part.strip()
                    if not part or part == "*":
                        continue
                    pieces = part.split()
                    if len(pieces) == 3 and pieces[1] == "as":
                        aliases[pieces[2]] = f"{module}.{pieces[0]}"
                    elif len(pieces) == 1 and pieces[0].isidentifier():
                        aliases[pieces[0]] = f"{module}.{pieces[0]}"
    return aliases


def resolve_name(name: str, aliases: AliasMap) -> str:
    if name in aliases:
        return aliases[name]
    head, dot, rest = name.partition(".")
    if dot and head in aliases:
        return f"{aliases[head]}.{rest}"
    return name


def find_import_lines(cell: Cell) -> List[int]:
    """0-based line indices of import statements in a code cell."""
    lines = []
    for idx, line in enumerate(mask_strings_and_comments(cell.source).splitlines()):
        if _IMPORT_LINE.match(line):
            lines.append(idx)
    return lines


def _scan_calls(masked: str, cell_index: int, aliases: AliasMap) -> List[CallEvent]:
    """Emit raw call events from masked source, innermost-first."""
    events: List[CallEvent] = []
    # Each stack entry: (name or None, line_index, call_depth)
    stack: List[Tuple[str, int, int]] = []
    line = 0
    pending = None  # (name, line) of a dotted name awaiting '('
    prev_word = ""
    pos = 0
    n = len(masked)
    while pos < n:
        c = masked[pos]
        if c == "\n":
            line += 1
            pending = None
            prev_word = ""
            pos += 1
            continue
        if c.isspace():
            pos += 1
            continue
        m = _NAME.match(masked, pos)
        if m:
            word = m.group(0)
            if prev_word in ("def", "class") or keyword.iskeyword(word.split(".")[0]):
                pending = None
            else:
                pending = (word, line)
            prev_word = word
            pos = m.end()
            continue
        if c == "(":
            depth = sum(1 for f in stack if f[0] is not None)
            if pending is not None:
                stack.append((pending[0], pending[1], depth))
            else:
                stack.append((None, line, depth))
            pending = None
            prev_word = ""
        elif c == ")":
            if stack:
                name, call_line, depth = stack.pop()
                if name is not None:
                    events.append(
                        CallEvent(
                            qualified_name=resolve_name(name, aliases),
                            cell_index=cell_index,
                            line_index=call_line,
                            nesting_depth=depth,
                            seq=len(events),
                        )
                    )
            pending = None
            prev_word = ""
        else:
            pending = None
            if c not in ".,[]{}:=+-*/%<>!&|~^@":
                prev_word = ""
        pos += 1
    return events


def _def_body_lines(masked_lines: List[str]) -> set:
    """Line indices belonging to top-level function definitions."""
    lines = set()
    i = 0
    while i < len(masked_lines):
        if _DEF_LINE.match(masked_lines[i]):
            lines.add(i)
            j = i + 1
            while j < len(masked_lines):
                ln = masked_lines[j]
                if ln.strip() and not ln[0].isspace():
                    break
                lines.add(j)
                j += 1
            i = j
        else:
            i += 1
    return lines


def extract_calls(
    cell: Cell, aliases: AliasMap, defs: DefinitionTable = None
) -> List[CallEvent]:
    """Ordered call events of one code cell.

    Calls inside top-level `def` bodies are not emitted in place; a call
    whose resolved name is a locally defined function is replaced by the
    definition's body events, re-anchored at the call site. Expansion is
    one level deep; a definition calling itself stays as a plain event.
    """
    if cell.kind is not CellKind.Code:
        return []
    defs = defs or {}
    masked = mask_strings_and_comments(cell.source)
    skip_lines = _def_body_lines(masked.splitlines())
    raw = [
        ev
        for ev in _scan_calls(masked, cell.index, aliases)
        if ev.line_index not in skip_lines
    ]
    events: List[CallEvent] = []
    for ev in raw:
        body = defs.get(ev.qualified_name)
        if body:
            for b in body:
                events.append(
                    CallEvent(
                        qualified_name=b.qualified_name,
                        cell_index=cell.index,
                        line_index=ev.line_index,
                        nesting_depth=ev.nesting_depth,
                        seq=len(events),
                    )
                )
        else:
            events.append(
                CallEvent(
                    qualified_name=ev.qualified_name,
                    cell_index=ev.cell_index,
                    line_index=ev.line_index,
                    nesting_depth=ev.nesting_depth,
                    seq=len(events),
                )
            )
    return events


def collect_definitions(notebook: Notebook, aliases: AliasMap) -> DefinitionTable:
    """Map each top-level `def` to the call events of its body.

    Bodies are extracted without expansion, so splicing at call sites is
    depth-1 by construction and self-references never recurse. Later
    definitions shadow earlier same-name ones.
    """
    defs: DefinitionTable = {}
    for cell in notebook.cells:
        if cell.kind is not CellKind.Code:
            continue
        masked_lines = mask_strings_and_comments(cell.source).splitlines()
        raw_lines = cell.source.splitlines()
        i = 0
        while i < len(masked_lines):
            m = _DEF_LINE.match(masked_lines[i])
            if not m:
                i += 1
                continue
            name = m.group(1)
            j = i + 1
            body_lines = []
            while j < len(masked_lines):
                ln = masked_lines[j]
                if ln.strip() and not ln[0].isspace():
                    break
                body_lines.append(raw_lines[j] if j < len(raw_lines) else ln)
                j += 1
            body_cell = Cell(index=cell.index, kind=CellKind.Code, source="\n".join(body_lines))
            defs[name] = tuple(extract_calls(body_cell, aliases))
            i = j
    return defs
