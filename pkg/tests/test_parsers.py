import pytest

from pointed_coalgebras.core import BIPOINTED, Dyadic, TRIPOINTED
from pointed_coalgebras.experiments import APEX, INTERVAL_E, TRIANGLE_E, TrianglePoint
from pointed_coalgebras.parsing import (
    ParseError,
    parse_carrier_point,
    parse_point,
    parse_stream,
    parse_triangle_point,
    parse_word,
    parse_word_pair,
)


def test_parse_word_picks_alphabet_from_letters():
    w = parse_word("llr.T")
    assert w.alphabet == BIPOINTED
    assert w.letters == ("l", "l", "r")
    assert w.base == "T"
    v = parse_word(" ab.L ")
    assert v.alphabet == TRIPOINTED
    assert str(v) == "ab.L"


def test_parse_word_bare_base():
    assert parse_word(".B").alphabet == BIPOINTED
    assert parse_word(".R").alphabet == TRIPOINTED
    assert parse_word(".T").alphabet == BIPOINTED
    assert parse_word(".T", TRIPOINTED).alphabet == TRIPOINTED


@pytest.mark.parametrize("text", ["x.B", "l.L", "ab.B", "la.T", "lr", "lr.", "LR.T", ""])
def test_parse_word_rejects(text):
    with pytest.raises(ParseError):
        parse_word(text)


def test_parse_word_requested_alphabet_must_match():
    with pytest.raises(ParseError):
        parse_word("l.T", TRIPOINTED)


def test_parse_error_names_token():
    with pytest.raises(ParseError, match="x.B"):
        parse_word("x.B")


def test_parse_word_pair_resolves_ambiguous_top():
    w, v = parse_word_pair(".T", "aa.L")
    assert w.alphabet == TRIPOINTED == v.alphabet
    w, v = parse_word_pair("l.B", ".T")
    assert w.alphabet == BIPOINTED == v.alphabet
    w, v = parse_word_pair(".T", ".T")
    assert w.alphabet == BIPOINTED == v.alphabet


def test_parse_stream():
    s = parse_stream("ll(r)*")
    assert s.alphabet == BIPOINTED
    assert s.literal() == "ll(r)*"
    t = parse_stream("(ab)*")
    assert t.alphabet == TRIPOINTED
    assert t.provenance == "explicit-list-with-tail"
    for bad in ("ll", "ll()*", "l(r)", "l(a)*", "(q)*"):
        with pytest.raises(ParseError):
            parse_stream(bad)


def test_parse_points():
    assert parse_point("3/8") == Dyadic(3, 3)
    assert parse_point("1") == Dyadic(1, 0)
    with pytest.raises(ParseError):
        parse_point("1/3")
    assert parse_triangle_point("apex") == APEX
    assert parse_triangle_point("1/4, 0") == TrianglePoint(Dyadic(1, 2))
    for bad in ("1/4", "1/4,1", "top"):
        with pytest.raises(ParseError):
            parse_triangle_point(bad)


def test_parse_carrier_point_follows_coalgebra():
    assert parse_carrier_point(INTERVAL_E, "1/2") == Dyadic(1, 1)
    assert parse_carrier_point(TRIANGLE_E, "apex") == APEX
