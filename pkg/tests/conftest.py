import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
FIXTURES = TESTS_DIR / "fixtures"
GOLDENS = TESTS_DIR / "goldens"
SCRIPTS = TESTS_DIR.parent / "scripts"

sys.path.insert(0, str(TESTS_DIR))
sys.path.insert(0, str(SCRIPTS))

from nbbook.catalog import load_seed_catalog
from nbbook.notebook_model import parse_notebook
from nbbook.patterns import load_seed_patterns


@pytest.fixture(scope="session")
def catalog():
    return load_seed_catalog()


@pytest.fixture(scope="session")
def patterns():
    return load_seed_patterns()


def make_notebook(cell_specs, notebook_id="test"):
    """cell_specs: list of ('code'|'markdown', source) or ('code', source, outputs)."""
    cells = []
    for spec in cell_specs:
        kind, source = spec[0], spec[1]
        if kind == "code":
            cells.append({
                "cell_type": "code",
                "execution_count": None,
                "metadata": {},
                "source": source,
                "outputs": list(spec[2]) if len(spec) > 2 else [],
            })
        else:
            cells.append({"cell_type": kind, "metadata": {}, "source": source})
    raw = json.dumps({
        "nbformat": 4,
        "nbformat_minor": 5,
        "metadata": {},
        "cells": cells,
    })
    return parse_notebook(raw, notebook_id)


@pytest.fixture(scope="session")
def study_m():
    return parse_notebook((FIXTURES / "study_m.ipynb").read_text(), "study_m")


@pytest.fixture(scope="session")
def study_h():
    return parse_notebook((FIXTURES / "study_h.ipynb").read_text(), "study_h")


@pytest.fixture(scope="session")
def tiny_nb():
    return parse_notebook((FIXTURES / "tiny.ipynb").read_text(), "tiny")
