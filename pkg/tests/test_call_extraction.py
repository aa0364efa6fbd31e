from hypothesis import given
from hypothesis import strategies as st

from nbbook.call_extraction import (
    collect_definitions,
    extract_calls,
    mask_strings_and_comments,
    resolve_aliases,
    resolve_name,
)

from conftest import make_notebook


def _events(source, extra_cells=()):
    nb = make_notebook([("code", source)] + [("code", s) for s in extra_cells])
    aliases = resolve_aliases(nb)
    defs = collect_definitions(nb, aliases)
    out = []
    for cell in nb.cells:
        out.extend(extract_calls(cell, aliases, defs))
    return out


def names(source, extra_cells=()):
    return [e.qualified_name for e in _events(source, extra_cells)]


def test_mask_hides_string_and_comment_bodies():
    masked = mask_strings_and_comments("x = 'foo(bar)'  # baz(qux)\n")
    assert "foo" not in masked
    assert "baz" not in masked
    assert masked.count("\n") == 1


def test_mask_triple_quoted():
    src = 'x = """a(\nb()\n)"""\ny = f()\n'
    masked = mask_strings_and_comments(src)
    assert "b()" not in masked
    assert "f(" in masked


@given(st.text(alphabet="abc'\"#()\n ", max_size=60))
def test_mask_preserves_length_and_newlines(src):
    masked = mask_strings_and_comments(src)
    assert len(masked) == len(src)
    assert masked.count("\n") == src.count("\n")


def test_linear_order_per_line():
    assert names("first(1)\nsecond(2)\n") == ["first", "second"]
    assert names("a(1); b(2)\n") == ["a", "b"]


def test_nested_calls_innermost_first():
    assert names("f(g(h()))\n") == ["h", "g", "f"]


def test_mixed_nesting_order():
    assert names("outer(a(), b(c()))\n") == ["a", "c", "b", "outer"]


def test_method_chain_uses_trailing_names():
    assert names("df.fillna(0).sort_values('a')\n") == ["df.fillna", "sort_values"]


def test_keywords_and_defs_not_calls():
    src = "if (x):\n    pass\nwhile (y):\n    break\nfor i in (1, 2):\n    pass\n"
    assert names(src) == []
    assert names("class Foo(Base):\n    pass\n") == []


def test_alias_resolution():
    nb = make_notebook([("code", "import pandas as pd\nfrom numpy import array as arr\n")])
    aliases = resolve_aliases(nb)
    assert aliases["pd"] == "pandas"
    assert aliases["arr"] == "numpy.array"
    assert resolve_name("pd.read_csv", aliases) == "pandas.read_csv"
    assert resolve_name("arr", aliases) == "numpy.array"
    assert resolve_name("other.call", aliases) == "other.call"


def test_later_import_shadows_earlier():
    nb = make_notebook([("code", "import numpy as x\n"), ("code", "import pandas as x\n")])
    aliases = resolve_aliases(nb)
    assert aliases["x"] == "pandas"


def test_string_parens_produce_no_calls():
    assert names("x = 'call(me)'\n") == []


def test_def_body_spliced_at_call_site_only():
    src = "def load():\n    return pd.read_csv('x.csv')\n"
    nb = make_notebook([
        ("code", "import pandas as pd\n"),
        ("code", src),
        ("code", "load()\n"),
    ])
    aliases = resolve_aliases(nb)
    defs = collect_definitions(nb, aliases)
    assert "load" in defs
    # definition cell itself emits nothing
    assert extract_calls(nb.cells[1], aliases, defs) == []
    spliced = extract_calls(nb.cells[2], aliases, defs)
    assert [e.qualified_name for e in spliced] == ["pandas.read_csv"]
    # spliced events anchor at the call site
    assert spliced[0].cell_index == 2


def test_uncalled_def_contributes_nothing():
    src = "def helper():\n    return pd.read_csv('x')\nother()\n"
    assert names(src) == ["other"]


def test_splice_depth_one():
    src = (
        "def inner():\n    return a()\n"
        "def outer():\n    return inner()\n"
        "outer()\n"
    )
    # outer's body calls inner; the splice does not recurse into inner
    assert names(src) == ["inner"]


def test_recursive_def_terminates():
    src = "def rec(n):\n    return rec(n - 1)\nrec(3)\n"
    assert names(src) == ["rec"]


def test_nesting_depth_recorded():
    events = _events("f(g())\n")
    depth = {e.qualified_name: e.nesting_depth for e in events}
    assert depth["f"] == 0
    assert depth["g"] == 1
