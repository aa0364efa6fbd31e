"""Category codes and the function-name -> category catalog.

Valid codes: L1-L4, PP0-PP5, ST1-ST5, V1-V5, S1-S5, ML1-ML8. There is
deliberately no "Other" group. The shipped seed catalog is a versioned,
user-extensible reconstruction covering common data-science libraries.
"""

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, Optional

from .errors import InvalidCategoryCode, MalformedConfig

CODE_PATTERN = re.compile(r"^(L[1-4]|PP[0-5]|ST[1-5]|V[1-5]|S[1-5]|ML[1-8])$")

GROUP_NAMES = {
    "L": "Load",
    "PP": "Pre-Processing",
    "ST": "Statistics",
    "V": "Visualization",
    "S": "Domain Specific Functions",
    "ML": "Machine Learning",
}

CODE_MEANINGS = {
    "L1": "Import/Generate", "L2": "Fetch/Load", "L3": "Parsing", "L4": "Export",
    "PP0": "String Operations", "PP1": "Tidying Data", "PP2": "Transforming Data",
    "PP3": "Formatting Data", "PP4": "Summary", "PP5": "Data Inspection",
    "ST1": "Summary", "ST2": "Measure", "ST3": "Plot", "ST4": "Statistical Test",
    "ST5": "Model",
    "V1": "Distribution", "V2": "Relational", "V3": "Comparative",
    "V4": "Modify Visualization", "V5": "ML Visualization",
    "S1": "NLP Operations", "S2": "Querying", "S3": "Math/Science",
    "S4": "Domain Specific Functions", "S5": "Image Processing",
    "ML1": "Prep", "ML2": "Train", "ML3": "Test", "ML4": "Verify",
    "ML5": "Clustering", "ML6": "Featuring", "ML7": "Tuning", "ML8": "Special",
}


@dataclass(frozen=True, order=True)
class CategoryCode:
    group: str
    index: int

    def __post_init__(self):
        if not CODE_PATTERN.match(str(self)):
            raise InvalidCategoryCode(f"invalid category code {self.group}{self.index}")

    def __str__(self) -> str:
        return f"{self.group}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "CategoryCode":
        m = CODE_PATTERN.match(text or "")
        if not m:
            raise InvalidCategoryCode(f"invalid category code {text!r}")
        group = text.rstrip("0123456789")
        return cls(group=group, index=int(text[len(group):]))


# L1 unit emitted for import statements by the encoder
IMPORT_CODE = CategoryCode("L", 1)


@dataclass(frozen=True)
class Catalog:
    functions: Dict[str, CategoryCode] = field(default_factory=dict)
    fallback_names: Dict[str, CategoryCode] = field(default_factory=dict)
    version: str = ""


def _parse_mapping(obj, where: str) -> Dict[str, CategoryCode]:
    if not isinstance(obj, dict):
        raise MalformedConfig(f"{where} must be an object")
    out = {}
    for name, code in obj.items():
        if not isinstance(code, str) or not CODE_PATTERN.match(code):
            raise InvalidCategoryCode(f"{where}[{name!r}]: invalid code {code!r}")
        out[name] = CategoryCode.parse(code)
    return out


def load_catalog(config: bytes) -> Catalog:
    """Load and validate a catalog config (JSON bytes)."""
    try:
        doc = json.loads(config)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedConfig(f"catalog config is not JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedConfig("catalog config top level must be an object")
    return Catalog(
        functions=_parse_mapping(doc.get("functions", {}), "functions"),
        fallback_names=_parse_mapping(doc.get("fallback_names", {}), "fallback_names"),
        version=str(doc.get("version", "")),
    )


def serialize_catalog(catalog: Catalog) -> bytes:
    doc = {
        "version": catalog.version,
        "functions": {k: str(v) for k, v in sorted(catalog.functions.items())},
        "fallback_names": {k: str(v) for k, v in sorted(catalog.fallback_names.items())},
    }
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8")


def lookup(catalog: Catalog, qualified_name: str) -> Optional[CategoryCode]:
    """Exact match first, then trailing-segment fallback, else None."""
    hit = catalog.functions.get(qualified_name)
    if hit is not None:
        return hit
    trailing = qualified_name.rsplit(".", 1)[-1]
    return catalog.fallback_names.get(trailing)


def merge_extension(base: Catalog, user: Catalog) -> Catalog:
    """User entries shadow base entries."""
    return Catalog(
        functions={**base.functions, **user.functions},
        fallback_names={**base.fallback_names, **user.fallback_names},
        version=user.version or base.version,
    )


def load_seed_catalog() -> Catalog:
    """The catalog shipped with the package."""
    data = resources.files("nbbook.data").joinpath("seed_catalog.json").read_bytes()
    return load_catalog(data)
