"""Transform a notebook's call stream into the encoded category sequence.

The encoding rules, in order: calls are emitted in document order with
nested calls innermost-first; calls to notebook-defined functions are
spliced at the call site; import statements emit an Import/Generate (L1)
unit; adjacent units with the same code collapse into one unit carrying a
multiplicity; a Load-group unit opens a purpose segment and a
Visualization-group or ML4 unit closes it; repeated subsequences are
reported for human review but never alter the encoding.
"""

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

from .call_extraction import (
    collect_definitions,
    extract_calls,
    find_import_lines,
    resolve_aliases,
)
from .catalog import IMPORT_CODE, Catalog, CategoryCode, lookup
from .notebook_model import CellKind, Notebook


class UnitSource(Enum):
    Call = "call"
    ImportStatement = "import"
    SplicedDefinition = "spliced"


@dataclass(frozen=True)
class EncodedUnit:
    code: CategoryCode
    span: Tuple[int, int, int, int]  # first_cell, first_line, last_cell, last_line
    multiplicity: int = 1
    source: UnitSource = UnitSource.Call


@dataclass(frozen=True)
class EncodedNotebook:
    units: Tuple[EncodedUnit, ...]
    unknown_calls: Tuple[Tuple[str, int], ...] = ()

    @property
    def codes(self) -> List[str]:
        return [str(u.code) for u in self.units]


@dataclass(frozen=True)
class Segment:
    unit_range: Tuple[int, int]  # half-open into units
    opener: Optional[int] = None
    closer: Optional[int] = None


@dataclass(frozen=True)
class RepeatReport:
    subsequence: Tuple[str, ...]
    occurrences: Tuple[Tuple[int, int], ...]  # half-open unit ranges

    @property
    def count(self) -> int:
        return len(self.occurrences)


def encode_notebook(nb: Notebook, catalog: Catalog) -> EncodedNotebook:
    """Raw (not yet run-collapsed) category sequence of a notebook."""
    aliases = resolve_aliases(nb)
    defs = collect_definitions(nb, aliases)
    units: List[EncodedUnit] = []
    unknown: List[Tuple[str, int]] = []
    for cell in nb.cells:
        if cell.kind is not CellKind.Code:
            continue
        import_lines = find_import_lines(cell)
        events = extract_calls(cell, aliases, defs)
        imp_i = 0
        for ev in events:
            while imp_i < len(import_lines) and import_lines[imp_i] <= ev.line_index:
                line = import_lines[imp_i]
                units.append(
                    EncodedUnit(
                        code=IMPORT_CODE,
                        span=(cell.index, line, cell.index, line),
                        source=UnitSource.ImportStatement,
                    )
                )
                imp_i += 1
            code = lookup(catalog, ev.qualified_name)
            if code is None:
                unknown.append((ev.qualified_name, ev.cell_index))
            else:
                units.append(
                    EncodedUnit(
                        code=code,
                        span=(ev.cell_index, ev.line_index, ev.cell_index, ev.line_index),
                    )
                )
        for line in import_lines[imp_i:]:
            units.append(
                EncodedUnit(
                    code=IMPORT_CODE,
                    span=(cell.index, line, cell.index, line),
                    source=UnitSource.ImportStatement,
                )
            )
    return EncodedNotebook(units=tuple(units), unknown_calls=tuple(unknown))


def collapse_runs(enc: EncodedNotebook) -> EncodedNotebook:
    """Merge maximal runs of equal-code units into single units.

    The merged unit spans the whole run and carries the run length as
    multiplicity. Idempotent.
    """
    out: List[EncodedUnit] = []
    for unit in enc.units:
        if out and out[-1].code == unit.code:
            prev = out[-1]
            out[-1] = EncodedUnit(
                code=prev.code,
                span=(prev.span[0], prev.span[1], unit.span[2], unit.span[3]),
                multiplicity=prev.multiplicity + unit.multiplicity,
                source=prev.source,
            )
        else:
            out.append(unit)
    return EncodedNotebook(units=tuple(out), unknown_calls=enc.unknown_calls)


def segment(enc: EncodedNotebook) -> List[Segment]:
    """Greedy single-pass purpose segmentation (L opens, V/ML4 closes)."""
    segments: List[Segment] = []
    units = enc.units
    residual_start: Optional[int] = None
    open_start: Optional[int] = None
    opener: Optional[int] = None

    def flush_residual(end: int):
        nonlocal residual_start
        if residual_start is not None:
            segments.append(Segment(unit_range=(residual_start, end)))
            residual_start = None

    for i, unit in enumerate(units):
        code = unit.code
        if open_start is None:
            if code.group == "L":
                flush_residual(i)
                open_start, opener = i, i
            elif residual_start is None:
                residual_start = i
        else:
            if code.group == "V" or str(code) == "ML4":
                segments.append(Segment(unit_range=(open_start, i + 1), opener=opener, closer=i))
                open_start, opener = None, None

    if open_start is not None:
        segments.append(Segment(unit_range=(open_start, len(units)), opener=opener, closer=None))
    flush_residual(len(units))
    return segments


def _find_occurrences(codes: List[str], sub: Tuple[str, ...]) -> List[Tuple[int, int]]:
    """Greedy left-to-right non-overlapping occurrences of sub in codes."""
    occ = []
    i = 0
    k = len(sub)
    while i + k <= len(codes):
        if tuple(codes[i : i + k]) == sub:
            occ.append((i, i + k))
            i += k
        else:
            i += 1
    return occ


def flag_repeats(
    enc: EncodedNotebook, min_len: int = 2, min_count: int = 2
) -> List[RepeatReport]:
    """Maximal repeated code subsequences, for human review only.

    A subsequence is reported when it occurs at least min_count times
    (non-overlapping) and no one-element extension occurs as often.
    """
    codes = [str(u.code) for u in enc.units]
    n = len(codes)
    candidates = {}
    max_len = max(min_len, n // max(min_count, 1))
    for length in range(min_len, max_len + 1):
        for start in range(0, n - length + 1):
            sub = tuple(codes[start : start + length])
            if sub in candidates:
                continue
            occ = _find_occurrences(codes, sub)
            if len(occ) >= min_count:
                candidates[sub] = occ

    reports = []
    for sub, occ in candidates.items():
        extensions = set()
        for length in (len(sub) + 1,):
            for start in range(0, n - length + 1):
                window = tuple(codes[start : start + length])
                if window[:-1] == sub or window[1:] == sub:
                    extensions.add(window)
        maximal = all(
            len(_find_occurrences(codes, ext)) < len(occ) for ext in extensions
        )
        if maximal:
            reports.append(RepeatReport(subsequence=sub, occurrences=tuple(occ)))
    reports.sort(key=lambda r: (r.occurrences[0][0], -len(r.subsequence)))
    return reports


def dump_encoding(enc: EncodedNotebook) -> str:
    """JSON-lines dump of the unit list, one object per unit."""
    lines = []
    for u in enc.units:
        lines.append(
            json.dumps(
                {"code": str(u.code), "mult": u.multiplicity, "cells": [u.span[0], u.span[2]]},
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")
