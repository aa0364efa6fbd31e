"""Match encoded category sequences against the code-purpose catalog.

Matching walks the collapsed code sequence left to right; at each
position the longest matching sequence across all patterns wins, with
ties broken by priority then catalog order. Matched units are consumed,
so matches never overlap. Multiplicity is ignored: a collapsed PP3 run
satisfies a single PP3 slot.
"""

import json
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .encoding import EncodedNotebook
from .catalog import CODE_PATTERN
from .errors import DuplicatePurpose, InvalidCategoryCode, MalformedConfig

ICONS = (
    "Archive", "Building", "Database", "Eject", "Save", "Camera",
    "Exchange", "Eye", "Cogs", "Flask", "Magic", "Puzzle",
)


@dataclass(frozen=True)
class PurposePattern:
    purpose: str
    icon: str
    sequences: Tuple[Tuple[str, ...], ...]
    priority: int = 50
    provenance: str = ""


@dataclass(frozen=True)
class PatternMatch:
    purpose: str
    unit_range: Tuple[int, int]  # half-open into units
    cell_span: Tuple[int, int]
    matched_sequence: Tuple[str, ...]


@dataclass(frozen=True)
class FrequencyTable:
    # purpose -> (total, tuple of per-notebook counts)
    rows: Dict[str, Tuple[int, Tuple[int, ...]]]


def load_pattern_catalog(config: bytes) -> List[PurposePattern]:
    """Validated pattern list, sorted by priority then declaration order."""
    try:
        doc = json.loads(config)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedConfig(f"pattern config is not JSON: {e}") from e
    if not isinstance(doc, dict) or not isinstance(doc.get("patterns"), list):
        raise MalformedConfig("pattern config needs a top-level `patterns` array")

    patterns = []
    seen = set()
    for i, entry in enumerate(doc["patterns"]):
        if not isinstance(entry, dict):
            raise MalformedConfig(f"patterns[{i}] is not an object")
        purpose = entry.get("purpose")
        if not purpose or not isinstance(purpose, str):
            raise MalformedConfig(f"patterns[{i}] has no purpose name")
        if purpose in seen:
            raise DuplicatePurpose(f"duplicate purpose {purpose!r}")
        seen.add(purpose)
        icon = entry.get("icon", "")
        if icon not in ICONS:
            raise MalformedConfig(f"patterns[{i}] ({purpose}): unknown icon {icon!r}")
        sequences = entry.get("sequences")
        if not isinstance(sequences, list) or not sequences:
            raise MalformedConfig(f"patterns[{i}] ({purpose}): sequences must be non-empty")
        parsed = []
        for seq in sequences:
            if not isinstance(seq, list) or not seq:
                raise MalformedConfig(f"patterns[{i}] ({purpose}): empty sequence")
            for code in seq:
                if not isinstance(code, str) or not CODE_PATTERN.match(code):
                    raise InvalidCategoryCode(f"patterns[{i}] ({purpose}): bad code {code!r}")
            parsed.append(tuple(seq))
        patterns.append(
            PurposePattern(
                purpose=purpose,
                icon=icon,
                sequences=tuple(parsed),
                priority=int(entry.get("priority", 50)),
                provenance=str(entry.get("provenance", "")),
            )
        )
    patterns.sort(key=lambda p: p.priority)
    return patterns


def load_seed_patterns() -> List[PurposePattern]:
    data = resources.files("nbbook.data").joinpath("purpose_patterns.json").read_bytes()
    return load_pattern_catalog(data)


def _best_match_at(
    codes: List[str], pos: int, patterns: List[PurposePattern], order: Dict[str, int]
) -> Optional[Tuple[PurposePattern, Tuple[str, ...]]]:
    best = None
    best_key = None
    for pat in patterns:
        for seq in pat.sequences:
            k = len(seq)
            if pos + k > len(codes) or tuple(codes[pos : pos + k]) != seq:
                continue
            key = (-k, pat.priority, order[pat.purpose])
            if best_key is None or key < best_key:
                best, best_key = (pat, seq), key
    return best


def match_patterns(
    enc: EncodedNotebook, patterns: List[PurposePattern]
) -> List[PatternMatch]:
    """Non-overlapping pattern matches over a run-collapsed encoding."""
    codes = [str(u.code) for u in enc.units]
    order = {p.purpose: i for i, p in enumerate(patterns)}
    matches: List[PatternMatch] = []
    pos = 0
    while pos < len(codes):
        hit = _best_match_at(codes, pos, patterns, order)
        if hit is None:
            pos += 1
            continue
        pat, seq = hit
        end = pos + len(seq)
        first_cell = min(enc.units[i].span[0] for i in range(pos, end))
        last_cell = max(enc.units[i].span[2] for i in range(pos, end))
        matches.append(
            PatternMatch(
                purpose=pat.purpose,
                unit_range=(pos, end),
                cell_span=(first_cell, last_cell),
                matched_sequence=seq,
            )
        )
        pos = end
    return matches


def count_frequencies(
    corpus: List[EncodedNotebook], patterns: List[PurposePattern]
) -> FrequencyTable:
    """Per-purpose match counts across a corpus of collapsed encodings."""
    per_notebook: List[Dict[str, int]] = []
    for enc in corpus:
        counts: Dict[str, int] = {}
        for m in match_patterns(enc, patterns):
            counts[m.purpose] = counts.get(m.purpose, 0) + 1
        per_notebook.append(counts)

    rows: Dict[str, Tuple[int, Tuple[int, ...]]] = {}
    for pat in patterns:
        counts = tuple(c.get(pat.purpose, 0) for c in per_notebook)
        rows[pat.purpose] = (sum(counts), counts)
    return FrequencyTable(rows=rows)


def frequency_csv(table: FrequencyTable, notebook_ids: List[str]) -> str:
    """CSV with header purpose,total,notebook,count, one row per pair."""
    lines = ["purpose,total,notebook,count"]
    for purpose in sorted(table.rows):
        total, counts = table.rows[purpose]
        for nb_id, count in zip(notebook_ids, counts):
            safe_purpose = f'"{purpose}"' if "," in purpose else purpose
            safe_id = f'"{nb_id}"' if "," in nb_id else nb_id
            lines.append(f"{safe_purpose},{total},{safe_id},{count}")
    return "\n".join(lines) + "\n"


def frequency_json(table: FrequencyTable, notebook_ids: List[str]) -> str:
    doc = {
        purpose: {
            "total": total,
            "per_notebook": {nb: c for nb, c in zip(notebook_ids, counts)},
        }
        for purpose, (total, counts) in sorted(table.rows.items())
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
