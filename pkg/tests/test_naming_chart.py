import pytest

from steenext.chart import read_tsv, tau_summands, to_svg, to_text, to_tsv
from steenext.hopf import preset
from steenext.naming import NamingError, Workspace, format_monomial, parse_expression
from steenext.resolution import Resolution


@pytest.fixture(scope="module")
def a2():
    return Resolution(preset("A2")).extend(30, 8)


def test_parse_expression():
    assert parse_expression("h1^3 v3 + tau P g") == [[("h1", 3), ("v3", 1)], [("tau", 1), ("P", 1), ("g", 1)]]
    assert parse_expression("0") == []
    with pytest.raises(ValueError):
        parse_expression("h1 ^^ 2")
    assert format_monomial([("h1", 3), ("v3", 1)]) == "h1^3 v3"


def test_named_classes_and_describe():
    ws = Workspace.in_memory()
    h1 = ws.named("A2", "h1")
    assert h1.tridegree == (1, 1, 1)
    x = ws.evaluate("A2", "h0 h2")
    assert ws.describe(x, "A2") == "h0 h2"
    with pytest.raises(NamingError):
        ws.named("A2", "h9")
    with pytest.raises(ValueError):
        ws.evaluate("A2", "h0 + h1")


def test_B_classes_come_from_the_splitting():
    ws = Workspace.in_memory()
    v3 = ws.named("B", "v3")
    h1 = ws.named("B", "h1")
    assert v3.tridegree == (14, 1, 7)
    assert not ws.product("B", h1, v3).is_zero()


def test_tsv_round_trip(a2):
    tab = a2.ext_table()
    text = to_tsv(tab, "A2")
    back = read_tsv(text)
    for (s, f, w, d, tr) in tab.rows():
        assert back[(s, f, w)][:2] == (d, tr)
    assert {k[:2] for k in back} == {(s, f) for s, f in tab.region() if tab.weights(s, f)}


def test_tau_summands_account_for_dimensions(a2):
    tab = a2.ext_table()
    for s, f in tab.region():
        summ = tau_summands(tab, s, f)
        ws = tab.weights(s, f)
        if not ws:
            assert summ == []
            continue
        for w in range(tab.floor(s, f) - 1, ws[0] + 1):
            cover = sum(1 for w0, j in summ if w <= w0 and (j is None or w > w0 - j))
            assert cover == tab.dim(s, f, w), (s, f, w)


def test_svg_is_deterministic(a2):
    one = to_svg(a2.ext_table(), "A2", 20, 6)
    two = to_svg(Resolution(preset("A2")).extend(30, 8).ext_table(), "A2", 20, 6)
    assert one == two
    assert one.startswith("<svg") and one.rstrip().endswith("</svg>")
    assert "<circle" in one and one.count("<rect") > 1  # background plus torsion squares


def test_text_chart_mentions_floor(a2):
    text = to_text(a2.ext_table(), 10, 4)
    assert "w<=" in text
