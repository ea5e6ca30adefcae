import pytest

from lkkripke import calculus as C, corpus as K, nbe
from lkkripke.calculus import Rule, check
from lkkripke.syntax import Atom, Const, Var
from lkkripke.proofio import (
    ProofFormatError, format_derivation, parse_derivation, read_derivation, write_derivation,
)

CONTR = """\
; contraction cut
(rule Cut (seq plain "X" "X")
  (rule AxR pos 0 (seq rfocus "X" "X" "X"))
  (rule AxL pos 0 (seq lfocus "X" "X" "X")))
"""


def test_parse_small_file():
    d, consts = parse_derivation(CONTR)
    assert consts == ()
    assert [n.rule for n in C.nodes(d)] == [Rule.Cut, Rule.AxR, Rule.AxL]
    check(d)


def test_format_is_the_canonical_text():
    d, _ = parse_derivation(CONTR)
    assert format_derivation(d, "contraction cut") == CONTR


def test_missing_positions_are_inferred():
    d, _ = parse_derivation(CONTR.replace(" pos 0", ""))
    assert [n.pos for n in C.nodes(d)] == [None, 0, 0]
    check(d)


def test_terms_eigenvariables_and_constants():
    text = """\
consts: c
(rule ExR term "c" (seq rfocus "P(c)" "exists x. P(x)" "")
  (rule AxR pos 0 (seq rfocus "P(c)" "P(c)" "")))
"""
    d, consts = parse_derivation(text)
    assert consts == ("c",)
    check(d)
    assert format_derivation(d, consts=consts).splitlines()[0] == "consts: c"


@pytest.mark.parametrize("entry", K.corpus(), ids=lambda e: e.name)
def test_roundtrip_corpus(entry):
    text = format_derivation(entry.derivation, entry.name, ("c", "d"))
    back, consts = parse_derivation(text)
    assert C.alpha_equal(back, entry.derivation)
    assert format_derivation(back, entry.name, consts) == text


@pytest.mark.parametrize("entry", K.cut_corpus(), ids=lambda e: e.name)
def test_roundtrip_normal_forms(entry):
    out = nbe.normalize(entry.derivation)
    back, _ = parse_derivation(format_derivation(out))
    assert C.alpha_equal(back, out)


def test_file_roundtrip(tmp_path):
    d = K.by_name("peirce")
    path = tmp_path / "peirce.lkp"
    write_derivation(str(path), d, "Peirce")
    back, _ = read_derivation(str(path))
    assert C.alpha_equal(back, d)


@pytest.mark.parametrize("text, line", [
    ("", None),
    ("(rule Foo (seq plain \"\" \"\"))", 1),
    ("(rule Cut (seq sideways \"\" \"\"))", 1),
    ("(rule Cut\n  (seq plain \"X &\" \"\"))", 2),
    ("(rule Mu pos -1 (seq rfocus \"\" \"X\" \"\"))", 1),
    ("(rule TopR (seq rfocus \"\" \"T\" \"\")) junk", 1),
    ("(rule TopR (seq rfocus \"\" \"T\" \"\")", 1),
    ("consts: #0\n(rule TopR (seq rfocus \"\" \"T\" \"\"))", 1),
])
def test_format_errors(text, line):
    with pytest.raises(ProofFormatError) as e:
        parse_derivation(text)
    if line is not None:
        assert e.value.line == line


def test_writer_rejects_reserved_and_clashing_names():
    p_gensym = Atom("P", (Const("#0"),))
    with pytest.raises(ProofFormatError):
        format_derivation(C.ax_r([p_gensym], p_gensym, []))
    mixed = [Atom("P", (Const("c"),)), Atom("P", (Var("c"),))]
    with pytest.raises(ProofFormatError):
        format_derivation(C.ax_r(mixed, mixed[0], []))
