import pytest

from powsat.errors import SourceError
from powsat.sexpr import SAtom, SList, parse_sexprs, show


def test_atoms_and_nesting():
    forms = parse_sexprs("(a (b c) 12)")
    assert len(forms) == 1
    f = forms[0]
    assert isinstance(f, SList) and len(f) == 3
    assert f[0].text == "a" and f[2].text == "12"
    assert isinstance(f[1], SList)


def test_positions():
    forms = parse_sexprs("(a\n  (b))")
    inner = forms[0][1]
    assert (inner.line, inner.col) == (2, 3)


def test_comments_skipped():
    forms = parse_sexprs("; leading\n(a b) ; trailing\n(c)")
    assert [show(f) for f in forms] == ["(a b)", "(c)"]


def test_unbalanced_errors():
    with pytest.raises(SourceError) as e:
        parse_sexprs("(a (b)")
    assert e.value.line == 1 and e.value.column == 1
    with pytest.raises(SourceError) as e:
        parse_sexprs("a))")
    assert e.value.column == 2


def test_show_round_trip():
    text = "(solve (x 0) (vec 1 2 3) (default 0 (at 2 1)))"
    forms = parse_sexprs(text)
    assert show(forms[0]) == text
    assert show(parse_sexprs(show(forms[0]))[0]) == text


def test_show_plain_python():
    assert show(["a", 1, ["b", 2]]) == "(a 1 (b 2))"
